#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nlch/error.hpp"
#include "nlch/mesh.hpp"

using namespace nlch;

TEST_CASE("1D mesh without layer") {
  const Mesh m = build_mesh(1, 4, 0.0);
  REQUIRE(m.num_nodes() == 5);
  CHECK(m.h == 0.25);
  CHECK(m.interaction_nodes.empty());
  const double expected[] = {0.125, 0.25, 0.25, 0.25, 0.125};
  for (std::size_t j = 0; j < 5; ++j) {
    CHECK(m.coords[j][0] == doctest::Approx(0.25 * static_cast<double>(j)).epsilon(1e-15));
    CHECK(m.lumped_weight_omega[j] == doctest::Approx(expected[j]).epsilon(1e-15));
    CHECK(m.lumped_weight_full[j] == m.lumped_weight_omega[j]);
  }
}

TEST_CASE("1D mesh with a one-cell layer") {
  const Mesh m = build_mesh(1, 4, 0.25);
  REQUIRE(m.num_nodes() == 7);
  REQUIRE(m.interaction_nodes.size() == 2);
  CHECK(m.coords[m.interaction_nodes[0]][0] == doctest::Approx(-0.25));
  CHECK(m.coords[m.interaction_nodes[1]][0] == doctest::Approx(1.25));
  CHECK(classify_node(m, m.interaction_nodes[1]) == NodeSet::interaction);
  CHECK(classify_node(m, 3) == NodeSet::omega);  // x = 0.5
  CHECK(classify_node(m, 5) == NodeSet::omega);  // x = 1.0
  CHECK(m.coords[5][0] == doctest::Approx(1.0));
  // Omega boundary node keeps the Omega half weight but a full padded weight.
  CHECK(m.lumped_weight_omega[1] == doctest::Approx(0.125));
  CHECK(m.lumped_weight_full[1] == doctest::Approx(0.25));
  CHECK(m.lumped_weight_omega[0] == 0.0);
}

TEST_CASE("layer width rounds up to whole cells") {
  CHECK(build_mesh(1, 4, 0.26).layer_cells == 2);
  CHECK(build_mesh(1, 10, 0.3).layer_cells == 3);  // 0.3 * 10 is 3.0000000000000004
  CHECK(build_mesh(1, 256, 0.25).layer_cells == 64);
  CHECK(build_mesh(2, 8, 0.1).layer_cells == 1);
}

TEST_CASE("weights sum to the measures") {
  for (int dim : {1, 2}) {
    for (std::size_t n : {2u, 7u, 32u}) {
      for (double layer : {0.0, 0.1, 0.37}) {
        const Mesh m = build_mesh(dim, n, layer);
        const double sum_o = std::accumulate(m.lumped_weight_omega.begin(), m.lumped_weight_omega.end(), 0.0);
        const double sum_f = std::accumulate(m.lumped_weight_full.begin(), m.lumped_weight_full.end(), 0.0);
        CHECK(sum_o == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(sum_f == doctest::Approx(m.padded_measure()).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("node sets partition the nodes") {
  const Mesh m = build_mesh(2, 6, 0.34);
  CHECK(m.omega_nodes.size() == 49);
  CHECK(m.omega_nodes.size() + m.interaction_nodes.size() == m.num_nodes());
  std::vector<std::size_t> all = m.omega_nodes;
  all.insert(all.end(), m.interaction_nodes.begin(), m.interaction_nodes.end());
  std::sort(all.begin(), all.end());
  for (std::size_t j = 0; j < all.size(); ++j) CHECK(all[j] == j);
  for (std::size_t j : m.omega_nodes) {
    CHECK(m.coords[j][0] >= -1e-15);
    CHECK(m.coords[j][1] <= 1.0 + 1e-15);
  }
}

TEST_CASE("2D weights match direct integration of the hat functions") {
  const Mesh m = build_mesh(2, 2, 0.0);
  REQUIRE(m.num_nodes() == 9);
  REQUIRE(m.elements.size() == 8);
  // Hat of the (lower-left to upper-right) split: 1 - max(|a|, |b|, |a - b|).
  const int q = 600;
  for (std::size_t j = 0; j < 9; ++j) {
    double acc = 0.0;
    for (int iy = 0; iy < q; ++iy) {
      for (int ix = 0; ix < q; ++ix) {
        const double x = (ix + 0.5) / q, y = (iy + 0.5) / q;
        const double a = (x - m.coords[j][0]) / m.h, b = (y - m.coords[j][1]) / m.h;
        acc += std::max(0.0, 1.0 - std::max({std::abs(a), std::abs(b), std::abs(a - b)}));
      }
    }
    acc /= static_cast<double>(q) * q;
    CHECK(m.lumped_weight_omega[j] == doctest::Approx(acc).epsilon(1e-5));
  }
  CHECK(m.lumped_weight_omega[4] == doctest::Approx(0.25));  // interior node: h^2
}

TEST_CASE("interior weights are translation invariant") {
  const Mesh m = build_mesh(2, 9, 0.0);
  for (std::size_t j : m.omega_nodes) {
    const auto [ix, iy] = m.lattice(j);
    if (ix > 0 && iy > 0 && ix < 9 && iy < 9) CHECK(m.lumped_weight_omega[j] == doctest::Approx(m.h * m.h));
  }
}

TEST_CASE("a layer of width delta contains every delta-ball of Omega") {
  const double delta = 0.23;
  const Mesh m = build_mesh(2, 10, delta);
  const auto reach = static_cast<std::ptrdiff_t>(std::ceil(delta / m.h));
  const auto side = static_cast<std::ptrdiff_t>(m.nodes_per_side);
  for (std::size_t j : m.omega_nodes) {
    const auto [ix, iy] = m.lattice(j);
    CHECK(ix - reach >= 0);
    CHECK(iy - reach >= 0);
    CHECK(ix + reach < side);
    CHECK(iy + reach < side);
  }
}

TEST_CASE("lattice and node_at are inverse") {
  const Mesh m = build_mesh(2, 5, 0.2);
  for (std::size_t j = 0; j < m.num_nodes(); ++j) {
    const auto [ix, iy] = m.lattice(j);
    CHECK(m.node_at(ix, iy) == j);
  }
}

TEST_CASE("mesh errors") {
  CHECK_THROWS_AS(build_mesh(1, 1, 0.0), ConfigError);
  CHECK_THROWS_AS(build_mesh(3, 4, 0.0), ConfigError);
  CHECK_THROWS_AS(build_mesh(1, 4, -0.1), ConfigError);
  CHECK_THROWS_AS(build_mesh(1, 4, std::nan("")), ConfigError);
  const Mesh m = build_mesh(1, 4, 0.0);
  CHECK_THROWS_AS(classify_node(m, 5), std::out_of_range);
}
