#include "nlch/local_ref.hpp"

#include <cmath>
#include <string>

#include "nlch/assembly.hpp"
#include "nlch/error.hpp"

namespace nlch {

LocalOperators make_local_operators(const Mesh& mesh, double epsilon2, double c_F) {
  if (mesh.layer_cells != 0) throw ConfigError("the local model runs on a mesh without interaction layer");
  if (!(epsilon2 > 0.0)) throw ConfigError("local model needs epsilon2 > 0");
  if (!(c_F >= 0.0)) throw ConfigError("c_F must be >= 0");
  LocalOperators lop;
  lop.mesh = mesh;
  lop.stiffness = assemble_stiffness(mesh);
  lop.mass_omega = mesh.lumped_weight_omega;
  lop.omega_position = omega_positions(mesh);
  lop.epsilon2 = epsilon2;
  lop.c_F = c_F;

  // Without a layer, Omega positions and node numbers coincide.
  const auto& A = lop.stiffness;
  CsrMatrix& C = lop.stiffness_nodal;
  C.rows = C.cols = mesh.num_nodes();
  C.row_ptr.assign(C.rows + 1, 0);
  for (Eigen::Index c = 0; c < A.cols(); ++c) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, c); it; ++it) {
      C.col.push_back(it.row());  // symmetric: column c read as row c
      C.val.push_back(it.value());
    }
    C.row_ptr[static_cast<std::size_t>(c) + 1] = static_cast<std::int64_t>(C.val.size());
  }
  return lop;
}

namespace {

struct LocalProblem {
  std::vector<double> diagonal, scale;
  ComplementarityProblem prob;
};

LocalProblem local_problem(const LocalOperators& lop, std::span<const double> prev_u, double tau) {
  const std::size_t n = lop.mesh.num_nodes();
  LocalProblem lp;
  lp.diagonal.assign(n, -lop.c_F);
  lp.scale.resize(n);
  for (std::size_t j = 0; j < n; ++j) lp.scale[j] = -lop.epsilon2 / lop.mass_omega[j];
  auto& p = lp.prob;
  p.mesh = &lop.mesh;
  p.mass = lop.mass_omega;
  p.stiffness = &lop.stiffness;
  p.omega_position = lop.omega_position;
  p.coupling = &lop.stiffness_nodal;
  p.prev_u = prev_u;
  p.tau = tau;
  return lp;
}

}  // namespace

StepState local_initial_state(const LocalOperators& lop, std::span<const double> u0) {
  if (u0.size() != lop.mesh.num_nodes()) throw std::invalid_argument("initial data has the wrong size");
  StepState s;
  s.u.assign(u0.begin(), u0.end());
  for (double& v : s.u) {
    if (!(std::abs(v) <= 1.0 + 1e-12))
      throw InfeasibleStateError("initial data outside [-1, 1] (u = " + std::to_string(v) + ")");
    if (std::abs(v) > 1.0) v = std::copysign(1.0, v);
  }
  s.w.assign(s.u.size(), 0.0);
  s.lambda.assign(s.u.size(), 0.0);
  s.partition = ActiveSetPartition::all_inactive(lop.mesh);
  s.mass = mass(lop.mass_omega, s.u);
  return s;
}

StepState local_step(const LocalOperators& lop, const StepState& prev, const SchemeConfig& cfg) {
  auto lp = local_problem(lop, prev.u, cfg.tau);
  lp.prob.diagonal = lp.diagonal;
  lp.prob.coupling_scale = lp.scale;
  auto res = pdas_solve(lp.prob, prev.partition, cfg);
  StepState s;
  s.k = prev.k + 1;
  s.t = static_cast<double>(s.k) * cfg.tau;
  s.u = std::move(res.u);
  s.w = std::move(res.w);
  s.lambda = std::move(res.lambda);
  s.partition = std::move(res.partition);
  s.pdas_iters = res.iterations;
  s.mass = mass(lop.mass_omega, s.u);
  return s;
}

double local_energy(const LocalOperators& lop, std::span<const double> u) {
  const auto Au = lop.stiffness_nodal.multiply(u);
  double acc = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (!(std::abs(u[j]) <= 1.0 + 1e-12))
      throw InfeasibleStateError("local energy: |u| > 1 at node " + std::to_string(j));
    acc += 0.5 * lop.epsilon2 * u[j] * Au[j] + lop.mass_omega[j] * 0.5 * lop.c_F * (1.0 - u[j] * u[j]);
  }
  return acc;
}

StepState local_run(const LocalOperators& lop, std::span<const double> u0, const SchemeConfig& cfg,
                    double T, const StepSink& sink) {
  cfg.validate();
  const std::size_t K = step_count(T, cfg.tau);
  StepState s = local_initial_state(lop, u0);
  const DualNormSolver dual(lop.stiffness, lop.mass_omega);
  for (std::size_t k = 1; k <= K; ++k) {
    StepState next;
    try {
      next = local_step(lop, s, cfg);
    } catch (const SolverError& e) {
      throw SolverError("local step " + std::to_string(k) + ": " + e.what());
    }
    if (sink) {
      DiagnosticsRecord r;
      r.step = next.k;
      r.t = next.t;
      r.mass = next.mass;
      r.energy = local_energy(lop, next.u);
      r.jk_previous = local_energy(lop, s.u);
      std::vector<double> du(next.u.size());
      for (std::size_t j = 0; j < du.size(); ++j) du[j] = next.u[j] - s.u[j];
      const double d = dual.norm(du);
      r.jk_value = r.energy + d * d / (2.0 * cfg.tau);
      for (std::size_t j = 0; j < du.size(); ++j) r.mean_w += lop.mass_omega[j] * next.w[j];
      r.pdas_iters = next.pdas_iters;
      r.complementarity_residual = complementarity_residual(lop.mesh, next.u, next.lambda);
      r.interface_fraction = interface_fraction(lop.mesh, next.u);
      sink(next, r);
    }
    s = std::move(next);
  }
  return s;
}

}  // namespace nlch
