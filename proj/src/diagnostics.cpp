#include "nlch/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "nlch/error.hpp"

namespace nlch {

double mass(std::span<const double> m, std::span<const double> u) {
  if (m.size() != u.size()) throw std::invalid_argument("mass: size mismatch");
  double acc = 0.0;
  for (std::size_t j = 0; j < m.size(); ++j) acc += m[j] * u[j];
  return acc;
}

double energy(const DiscreteOperators& ops, std::span<const double> u) {
  if (u.size() != ops.num_nodes()) throw std::invalid_argument("energy: size mismatch");
  double bulk = 0.0;
  for (std::size_t j : ops.mesh.omega_nodes) {
    if (!(std::abs(u[j]) <= 1.0 + 1e-12))
      throw InfeasibleStateError("energy: |u| > 1 at node " + std::to_string(j) + " (u = " +
                                 std::to_string(u[j]) + ")");
    bulk += ops.mass_omega[j] * 0.5 * ops.c_F[j] * (1.0 - u[j] * u[j]);
  }
  return 0.5 * bilinear_b(ops, u, u) + bulk;
}

DualNormSolver::DualNormSolver(const Eigen::SparseMatrix<double>& stiffness,
                               std::vector<double> mass_omega)
    : mass_(std::move(mass_omega)) {
  const auto n = stiffness.rows();
  if (static_cast<std::size_t>(n) != mass_.size())
    throw std::invalid_argument("DualNormSolver: stiffness and mass sizes differ");
  std::vector<Eigen::Triplet<double>> trip;
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(stiffness, c); it; ++it)
      trip.emplace_back(it.row(), it.col(), it.value());
  for (Eigen::Index j = 0; j < n; ++j) {
    trip.emplace_back(j, n, mass_[static_cast<std::size_t>(j)]);
    trip.emplace_back(n, j, mass_[static_cast<std::size_t>(j)]);
  }
  Eigen::SparseMatrix<double> B(n + 1, n + 1);
  B.setFromTriplets(trip.begin(), trip.end());
  lu_.compute(B);
  if (lu_.info() != Eigen::Success) throw SolverError("bordered Neumann matrix is singular");
}

double DualNormSolver::norm(std::span<const double> du) const {
  const std::size_t n = mass_.size();
  if (du.size() != n) throw std::invalid_argument("dual norm: expected Omega-sized increment");
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(n + 1));
  double total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    rhs[static_cast<Eigen::Index>(j)] = mass_[j] * du[j];
    total += mass_[j] * du[j];
  }
  if (std::abs(total) > 1e-10)
    throw std::domain_error("dual norm: increment is not mean-free (sum m du = " +
                            std::to_string(total) + ")");
  rhs[static_cast<Eigen::Index>(n)] = 0.0;
  const Eigen::VectorXd z = lu_.solve(rhs);
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) acc += rhs[static_cast<Eigen::Index>(j)] * z[static_cast<Eigen::Index>(j)];
  return std::sqrt(std::max(acc, 0.0));
}

std::vector<double> omega_values(const Mesh& mesh, std::span<const double> v) {
  if (v.size() != mesh.num_nodes()) throw std::invalid_argument("omega_values: size mismatch");
  std::vector<double> out;
  out.reserve(mesh.omega_nodes.size());
  for (std::size_t j : mesh.omega_nodes) out.push_back(v[j]);
  return out;
}

double dual_norm_increment(const DiscreteOperators& ops, std::span<const double> du) {
  std::vector<double> m;
  for (std::size_t j : ops.mesh.omega_nodes) m.push_back(ops.mass_omega[j]);
  const DualNormSolver solver(ops.stiffness, std::move(m));
  return solver.norm(omega_values(ops.mesh, du));
}

double jk_value(const DiscreteOperators& ops, const DualNormSolver& dual, std::span<const double> v,
                std::span<const double> prev, double tau) {
  if (v.size() != prev.size()) throw std::invalid_argument("jk_value: size mismatch");
  std::vector<double> du;
  du.reserve(ops.num_omega());
  for (std::size_t j : ops.mesh.omega_nodes) du.push_back(v[j] - prev[j]);
  const double d = dual.norm(du);
  return energy(ops, v) + d * d / (2.0 * tau);
}

std::vector<double> g_field(const DiscreteOperators& ops, const StepState& s) {
  std::vector<double> g(ops.num_nodes(), 0.0);
  for (std::size_t j : ops.mesh.omega_nodes) g[j] = s.w[j] + ops.row_scale[j] * s.conv[j];
  return g;
}

ProjectionCheck projection_residual(const DiscreteOperators& ops, const StepState& s) {
  const auto g = g_field(ops, s);
  ProjectionCheck out;
  for (std::size_t j : ops.mesh.omega_nodes) {
    const double xi = ops.xi_eff[j];
    if (!(xi > kXiZero)) continue;
    ++out.nodes;
    out.residual = std::max(out.residual, std::abs(s.u[j] - std::clamp(g[j] / xi, -1.0, 1.0)));
  }
  return out;
}

SignCheck sign_condition_check(const DiscreteOperators& ops, const StepState& s, double g_tol) {
  const auto g = g_field(ops, s);
  SignCheck out;
  for (std::size_t j : ops.mesh.omega_nodes) {
    if (ops.xi_eff[j] > kXiZero) continue;
    ++out.nodes;
    if (std::abs(g[j]) <= g_tol) {
      ++out.level_set;
      continue;
    }
    const double target = g[j] > 0.0 ? 1.0 : -1.0;
    if (std::abs(s.u[j] - target) > 1e-9) ++out.violations;
  }
  return out;
}

double interface_fraction(const Mesh& mesh, std::span<const double> u, double tol) {
  if (mesh.omega_nodes.empty()) return 0.0;
  std::size_t pure = 0;
  for (std::size_t j : mesh.omega_nodes)
    if (std::abs(u[j]) >= 1.0 - tol) ++pure;
  return static_cast<double>(pure) / static_cast<double>(mesh.omega_nodes.size());
}

double complementarity_residual(const Mesh& mesh, std::span<const double> u,
                                std::span<const double> lambda) {
  double r = 0.0;
  for (std::size_t j : mesh.omega_nodes) {
    const double gap = std::min(std::abs(u[j] - 1.0), std::abs(u[j] + 1.0));
    r = std::max(r, std::abs(lambda[j]) * gap);
    r = std::max(r, std::abs(u[j]) - 1.0);
    const bool upper = u[j] >= 0.0;
    r = std::max(r, upper ? -lambda[j] : lambda[j]);
  }
  return r;
}

double mean_w(const DiscreteOperators& ops, std::span<const double> w) {
  double acc = 0.0;
  for (std::size_t j : ops.mesh.omega_nodes) acc += ops.mass_omega[j] * w[j];
  return acc;
}

DiagnosticsRecord nonlocal_record(const DiscreteOperators& ops, const DualNormSolver& dual,
                                  const StepState& prev, const StepState& s, double tau) {
  DiagnosticsRecord r;
  r.step = s.k;
  r.t = s.t;
  r.mass = s.mass;
  r.energy = energy(ops, s.u);
  r.jk_previous = energy(ops, prev.u);
  r.jk_value = jk_value(ops, dual, s.u, prev.u, tau);
  r.mean_w = mean_w(ops, s.w);
  r.pdas_iters = s.pdas_iters;
  const auto proj = projection_residual(ops, s);
  r.projection_residual = proj.residual;
  r.projection_nodes = proj.nodes;
  r.complementarity_residual = complementarity_residual(ops.mesh, s.u, s.lambda);
  r.interface_fraction = interface_fraction(ops.mesh, s.u);
  const auto sign = sign_condition_check(ops, s);
  r.sign_violations = sign.violations;
  r.sign_level_set = sign.level_set;
  r.imex = s.scheme == Scheme::imex;
  return r;
}

}  // namespace nlch
