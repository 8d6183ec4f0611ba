#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "../support/oracles.hpp"
#include "nlch/config.hpp"
#include "nlch/diagnostics.hpp"
#include "nlch/experiment.hpp"
#include "nlch/error.hpp"
#include "nlch/stepper.hpp"

using namespace nlch;

namespace {

DiscreteOperators case1(std::size_t n, double c_F) {
  return assemble(build_mesh(1, n, 0.25 + 1.0 / n), make_kernel(1, 0.00175, 0.25),
                  PotentialCoefficient::constant(c_F), NonlocalCase::neumann);
}

SchemeConfig cfg_of(double tau, Scheme s = Scheme::implicit) {
  SchemeConfig c;
  c.tau = tau;
  c.scheme = s;
  return c;
}

}  // namespace

TEST_CASE("constant data is stationary") {
  const auto ops = case1(32, 0.8);
  for (auto sch : {Scheme::implicit, Scheme::imex}) {
    std::vector<double> u0(ops.num_nodes(), -0.4);
    const auto s = run(ops, u0, cfg_of(1e-3, sch), 5e-3);
    CHECK(s.k == 5);
    for (std::size_t j : ops.mesh.omega_nodes) {
      CHECK(s.u[j] == doctest::Approx(-0.4).epsilon(1e-12));
      CHECK(s.w[j] == doctest::Approx(0.8 * 0.4).epsilon(1e-10));
    }
  }
}

TEST_CASE("mass is conserved and J_k decreases") {
  const auto ops = case1(64, 1.0);
  const auto u0 = test::uniform_values(ops.num_nodes(), 21);
  const auto s0 = initial_state(ops, u0);
  std::vector<DiagnosticsRecord> recs;
  run(ops, u0, cfg_of(2e-4), 2e-3, [&](const StepState&, const DiagnosticsRecord& r) { recs.push_back(r); });
  REQUIRE(recs.size() == 10);
  for (const auto& r : recs) {
    CHECK(std::abs(r.mass - s0.mass) < 1e-12);
    CHECK(r.jk_value <= r.jk_previous + 1e-12);
    CHECK(r.energy <= r.jk_previous + 1e-12);
    CHECK(r.projection_residual < 1e-9);
  }
  CHECK(recs.back().t == doctest::Approx(2e-3));
}

TEST_CASE("T = 0 returns the initial state") {
  const auto ops = case1(16, 1.0);
  const auto u0 = test::uniform_values(ops.num_nodes(), 2);
  const auto s = run(ops, u0, cfg_of(1e-3), 0.0);
  CHECK(s.k == 0);
  CHECK(s.u == u0);
}

TEST_CASE("step_count") {
  CHECK(step_count(2.0, 2e-4) == 10000);
  CHECK(step_count(0.06, 2e-4) == 300);
  CHECK(step_count(0.0, 1e-3) == 0);
  CHECK_THROWS_AS(step_count(1e-3, 3e-4), ConfigError);
  CHECK_THROWS_AS(step_count(-1.0, 1e-3), ConfigError);
}

TEST_CASE("initial data outside the box") {
  const auto ops = case1(16, 1.0);
  std::vector<double> u0(ops.num_nodes(), 0.0);
  const auto& om = ops.mesh.omega_nodes;
  u0[om[4]] = 1.0 + 1e-13;
  u0[om[5]] = -1.0 - 5e-13;
  const auto s = initial_state(ops, u0);
  CHECK(s.u[om[4]] == 1.0);
  CHECK(s.u[om[5]] == -1.0);
  u0[om[6]] = 1.0 + 1e-6;
  CHECK_THROWS_AS(initial_state(ops, u0), InfeasibleStateError);
}

TEST_CASE("imex is rejected at xi = 0") {
  const auto ops = assemble(build_mesh(1, 32, 0.0), make_kernel(1, 0.00175, 0.25),
                            PotentialCoefficient::fraction_of_cgamma(1.0), NonlocalCase::regional);
  const std::vector<double> u0(ops.num_nodes(), 0.0);
  CHECK_THROWS_AS(run(ops, u0, cfg_of(1e-4, Scheme::imex), 1e-4), ConfigError);
}

TEST_CASE("bad scheme settings") {
  CHECK_THROWS_AS(cfg_of(0.0).validate(), ConfigError);
  auto c = cfg_of(1e-3);
  c.c_pdas = -1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK(parse_scheme("imex") == Scheme::imex);
  CHECK_THROWS_AS(parse_scheme("explicit"), ConfigError);
}

TEST_CASE("ex1a desk run") {
  RunConfig c = preset("ex1a", "desk");
  c.output_dir = std::filesystem::temp_directory_path() / "nlch_unit_ex1a";
  std::filesystem::remove_all(c.output_dir);
  const auto out = run_experiment(c);
  const auto& recs = out.nonlocal_records;
  REQUIRE(recs.size() == 300);
  std::vector<double> frac;
  for (const auto& r : recs) {
    frac.push_back(r.interface_fraction);
    CHECK(r.complementarity_residual <= 1e-10);
  }
  // Warm-started steps mid-run; a few steps during the fast coarsening near
  // step 170 need up to 7.
  CHECK(recs[149].pdas_iters <= 5);
  std::size_t slow = 0;
  for (std::size_t k = 150; k < recs.size(); ++k) {
    slow += recs[k].pdas_iters > 5;
    CHECK(recs[k].pdas_iters <= 10);
  }
  CHECK(slow <= 5);

  CHECK(frac.back() >= 0.95);
  // Late steps: nondecreasing up to a single interface node moving out of the pure set.
  const double one_node = 1.0 / static_cast<double>(c.n_cells + 1);
  for (std::size_t k = 200; k < frac.size(); ++k) CHECK(frac[k] >= frac[k - 1] - one_node - 1e-12);
  CHECK(frac.back() >= frac[199]);

  // Energy column of diagnostics.csv.
  std::ifstream in(c.output_dir / "diagnostics.csv");
  std::string line;
  std::getline(in, line);
  std::vector<double> e;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    for (int col = 0; col < 4; ++col) std::getline(ss, cell, ',');
    e.push_back(std::stod(cell));
  }
  REQUIRE(e.size() == 300);
  for (std::size_t k = 1; k < e.size(); ++k) CHECK(e[k] <= e[k - 1] + 1e-12);
  std::filesystem::remove_all(c.output_dir);
}

TEST_CASE("one step from ex1a data on 64 cells") {
  RunConfig c = preset("ex1a", "desk");
  c.n_cells = 64;
  const auto ops = nonlocal_operators(c);
  const auto s0 = initial_state(ops, nonlocal_initial(ops, initial_omega_values(c, ops.mesh)));
  const auto s1 = step(ops, s0, c.scheme_config());
  CHECK(std::abs(s1.mass - s0.mass) <= 1e-12);
  CHECK(std::abs(mass(ops.mass_omega, s1.u) - s0.mass) <= 1e-12);
  double worst = 0.0;
  for (double r : neumann_residual(ops, s1.u)) worst = std::max(worst, std::abs(r));
  CHECK(worst <= c.lin_tol);
}

TEST_CASE("identical runs give identical diagnostics") {
  const auto ops = case1(32, 1.0);
  const auto u0 = test::uniform_values(ops.num_nodes(), 12);
  std::vector<DiagnosticsRecord> a, b;
  const auto sa = run(ops, u0, cfg_of(1e-3), 5e-3, [&](const StepState&, const DiagnosticsRecord& r) { a.push_back(r); });
  const auto sb = run(ops, u0, cfg_of(1e-3), 5e-3, [&](const StepState&, const DiagnosticsRecord& r) { b.push_back(r); });
  CHECK(sa.u == sb.u);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].energy == b[k].energy);
    CHECK(a[k].mass == b[k].mass);
  }
}
