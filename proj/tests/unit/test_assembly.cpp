#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "../support/oracles.hpp"
#include "nlch/assembly.hpp"
#include "nlch/error.hpp"

using namespace nlch;

namespace {

DiscreteOperators ex1a(std::size_t n, double layer_extra = 0.0) {
  const Mesh mesh = build_mesh(1, n, 0.25 + layer_extra);
  return assemble(mesh, make_kernel(1, 0.00175, 0.25), PotentialCoefficient::constant(1.0),
                  NonlocalCase::neumann);
}

}  // namespace

TEST_CASE("c_gamma^h is constant on Omega for the small Case 1 mesh") {
  const auto ops = ex1a(4, 0.25);
  const double c0 = ops.c_gamma_h[ops.mesh.omega_nodes[0]];
  for (std::size_t j : ops.mesh.omega_nodes) CHECK(ops.c_gamma_h[j] == doctest::Approx(c0).epsilon(1e-12));
  // Direct summation.
  const std::size_t mid = ops.mesh.omega_nodes[2];
  double direct = 0.0;
  for (std::size_t j = 0; j < ops.num_nodes(); ++j)
    direct += ops.mesh.lumped_weight_full[j] *
              eval(ops.kernel, std::abs(ops.mesh.coords[mid][0] - ops.mesh.coords[j][0]));
  CHECK(ops.c_gamma_h[mid] == doctest::Approx(direct).epsilon(1e-14));
}

TEST_CASE("Case 1 xi^h is constant with the padded layer") {
  const auto ops = ex1a(64, 1.0 / 64);
  const double x0 = ops.xi_h[ops.mesh.omega_nodes[0]];
  for (std::size_t j : ops.mesh.omega_nodes) CHECK(std::abs(ops.xi_h[j] - x0) < 1e-10);
  const auto ops2 = assemble(build_mesh(2, 16, 0.3 + 1.0 / 16), make_kernel(2, 0.004, 0.3),
                             PotentialCoefficient::constant(1.0), NonlocalCase::neumann);
  const double y0 = ops2.xi_h[ops2.mesh.omega_nodes[0]];
  for (std::size_t j : ops2.mesh.omega_nodes) CHECK(std::abs(ops2.xi_h[j] - y0) < 1e-10);
}

TEST_CASE("row sums: W 1 = c_gamma^h and N_h(1) = 0") {
  const auto ops = ex1a(16);
  const std::vector<double> one(ops.num_nodes(), 1.0);
  const auto w1 = apply_convolution(ops, one);
  for (std::size_t i = 0; i < w1.size(); ++i) CHECK(w1[i] == doctest::Approx(ops.c_gamma_h[i]).epsilon(1e-15));
  for (double r : neumann_residual(ops, one)) CHECK(std::abs(r) < 1e-15);
  const std::vector<double> zero(ops.num_nodes(), 0.0);
  for (double v : apply_convolution(ops, zero)) CHECK(v == 0.0);
}

TEST_CASE("convolution of a node indicator is the weighted kernel column") {
  const auto ops = ex1a(8);
  const std::size_t j = 5;
  std::vector<double> e(ops.num_nodes(), 0.0);
  e[j] = 1.0;
  const auto col = apply_convolution(ops, e);
  for (std::size_t i = 0; i < col.size(); ++i) {
    const double r = std::abs(ops.mesh.coords[i][0] - ops.mesh.coords[j][0]);
    CHECK(col[i] == doctest::Approx(ops.mesh.lumped_weight_full[j] * eval(ops.kernel, r)).epsilon(1e-15));
  }
}

TEST_CASE("neumann_residual is nonzero for generic data") {
  const auto ops = ex1a(8);
  const auto u = test::uniform_values(ops.num_nodes(), 3);
  double worst = 0.0;
  for (double r : neumann_residual(ops, u)) worst = std::max(worst, std::abs(r));
  CHECK(worst > 1e-3);
}

TEST_CASE("b_h against the double sum") {
  for (auto which : {NonlocalCase::neumann, NonlocalCase::regional}) {
    const double layer = which == NonlocalCase::neumann ? 0.3 : 0.0;
    const auto ops = assemble(build_mesh(1, 12, layer), make_kernel(1, 0.003, 0.3),
                              PotentialCoefficient::constant(0.5), which);
    std::vector<double> x(ops.num_nodes());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = ops.mesh.coords[i][0];
    CHECK(bilinear_b(ops, x, x) == doctest::Approx(test::double_sum_b(ops, x, x)).epsilon(1e-13));
    for (std::uint64_t s = 0; s < 20; ++s) {
      const auto u = test::uniform_values(ops.num_nodes(), 2 * s);
      const auto v = test::uniform_values(ops.num_nodes(), 2 * s + 1);
      const double b = bilinear_b(ops, u, v);
      CHECK(b == doctest::Approx(test::double_sum_b(ops, u, v)).epsilon(1e-13));
      CHECK(b == doctest::Approx(bilinear_b(ops, v, u)).epsilon(1e-13));
      CHECK(bilinear_b(ops, u, u) >= 0.0);
      const std::vector<double> one(ops.num_nodes(), 1.0);
      CHECK(std::abs(bilinear_b(ops, one, v)) < 1e-14);
    }
  }
}

TEST_CASE("stiffness is symmetric PSD with constants in its kernel") {
  for (int dim : {1, 2}) {
    const auto A = assemble_stiffness(build_mesh(dim, 6, 0.2));
    const Eigen::MatrixXd D(A);
    CHECK((D - D.transpose()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((D * Eigen::VectorXd::Ones(D.rows())).cwiseAbs().maxCoeff() < 1e-13);
    const auto ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(D).eigenvalues();
    CHECK(ev.minCoeff() > -1e-12);
    CHECK(ev[1] > 1e-6);  // connected: only one zero eigenvalue
  }
  // 1D interior row (-1, 2, -1)/h.
  const Eigen::MatrixXd A(assemble_stiffness(build_mesh(1, 4, 0.0)));
  CHECK(A(2, 2) == doctest::Approx(8.0));
  CHECK(A(2, 1) == doctest::Approx(-4.0));
  CHECK(A(0, 0) == doctest::Approx(4.0));
}

TEST_CASE("Case 2 xi^h is smallest on the boundary") {
  const auto ops = assemble(build_mesh(1, 64, 0.0), make_kernel(1, 0.00175, 0.25),
                            PotentialCoefficient::constant(0.496), NonlocalCase::regional);
  const auto& o = ops.mesh.omega_nodes;
  double lo = 1e9;
  std::size_t arg = 0;
  for (std::size_t j : o)
    if (ops.xi_h[j] < lo) lo = ops.xi_h[j], arg = j;
  CHECK((arg == o.front() || arg == o.back()));
  CHECK(lo > 0.0);
  CHECK(ops.xi_h[o[32]] > 0.5);
}

TEST_CASE("stencil row length bound") {
  const auto ops = assemble(build_mesh(2, 10, 0.3), make_kernel(2, 0.004, 0.25),
                            PotentialCoefficient::constant(0.1), NonlocalCase::neumann);
  const std::size_t bound = (2 * 3 + 1) * (2 * 3 + 1);
  for (std::size_t i = 0; i < ops.conv.rows; ++i) CHECK(ops.conv.row_nnz(i) <= bound);
  // Columns ascending within each row.
  for (std::size_t i = 0; i < ops.conv.rows; ++i)
    for (auto p = ops.conv.row_ptr[i] + 1; p < ops.conv.row_ptr[i + 1]; ++p)
      CHECK(ops.conv.col[p] > ops.conv.col[p - 1]);
}

TEST_CASE("c_F rules") {
  const Mesh mesh = build_mesh(1, 16, 0.0);
  const auto k = make_kernel(1, 0.00175, 0.25);
  const auto ops = assemble(mesh, k, PotentialCoefficient::fraction_of_cgamma(0.9), NonlocalCase::regional);
  for (std::size_t j : mesh.omega_nodes) CHECK(ops.xi_h[j] == doctest::Approx(0.1 * ops.c_gamma_h[j]).epsilon(1e-13));
  const auto sharp = assemble(mesh, k, PotentialCoefficient::fraction_of_cgamma(1.0), NonlocalCase::regional);
  for (std::size_t j : mesh.omega_nodes) CHECK(sharp.xi_h[j] == 0.0);
  std::vector<double> field(mesh.num_nodes(), 0.25);
  const auto nodal = assemble(mesh, k, PotentialCoefficient::nodal(field), NonlocalCase::regional);
  CHECK(nodal.c_F[3] == 0.25);
  CHECK_THROWS_AS(assemble(mesh, k, PotentialCoefficient::nodal({1.0}), NonlocalCase::regional), ConfigError);
  CHECK_THROWS_AS(assemble(mesh, k, PotentialCoefficient::constant(-1.0), NonlocalCase::regional), ConfigError);
}

TEST_CASE("assembly errors") {
  const auto k = make_kernel(1, 0.00175, 0.25);
  // c_F = 1 exceeds c_gamma^h near the boundary in Case 2.
  try {
    assemble(build_mesh(1, 16, 0.0), k, PotentialCoefficient::constant(1.0), NonlocalCase::regional);
    FAIL("expected WellPosednessError");
  } catch (const WellPosednessError& e) {
    CHECK(e.value() < 0.0);
    CHECK(e.node() == 0);
  }
  CHECK_THROWS_AS(assemble(build_mesh(1, 16, 0.1), k, PotentialCoefficient::constant(0.1), NonlocalCase::neumann),
                  ConfigError);
  CHECK_THROWS_AS(assemble(build_mesh(1, 16, 0.25), k, PotentialCoefficient::constant(0.1), NonlocalCase::regional),
                  ConfigError);
  CHECK_THROWS_AS(assemble(build_mesh(2, 16, 0.25), k, PotentialCoefficient::constant(0.1), NonlocalCase::neumann),
                  ConfigError);
  const auto reg = assemble(build_mesh(1, 16, 0.0), k, PotentialCoefficient::constant(0.1), NonlocalCase::regional);
  CHECK_THROWS_AS(neumann_residual(reg, std::vector<double>(17, 0.0)), ConfigError);
  CHECK_THROWS_AS(apply_convolution(reg, std::vector<double>(3, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(bilinear_b(reg, std::vector<double>(17, 0.0), std::vector<double>(3, 0.0)), std::invalid_argument);
}

TEST_CASE("exterior extension solves N_h u = 0 and keeps the box") {
  const auto ops = ex1a(32, 1.0 / 32);
  std::vector<double> u(ops.num_nodes(), 0.0);
  const auto vals = test::uniform_values(ops.num_omega(), 11);
  for (std::size_t k = 0; k < vals.size(); ++k) u[ops.mesh.omega_nodes[k]] = vals[k];
  const auto ext = extend_to_interaction_layer(ops, u);
  for (double r : neumann_residual(ops, ext)) CHECK(std::abs(r) < 1e-12);
  for (double v : ext) CHECK(std::abs(v) <= 1.0);
  for (std::size_t j : ops.mesh.omega_nodes) CHECK(ext[j] == u[j]);
}
