#include "nlch/vi_solver.hpp"

#include <Eigen/UmfPackSupport>
#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>
#include <string>

#include "nlch/error.hpp"

namespace nlch {

namespace {

using Triplet = Eigen::Triplet<double>;

// +1 / -1 on active nodes, 0 elsewhere.
std::vector<signed char> labels(const ComplementarityProblem& prob, const ActiveSetPartition& part) {
  std::vector<signed char> lab(prob.mesh->num_nodes(), 0);
  for (std::size_t j : part.plus) lab[j] = 1;
  for (std::size_t j : part.minus) lab[j] = -1;
  return lab;
}

void check_problem(const ComplementarityProblem& prob) {
  if (prob.mesh == nullptr || prob.stiffness == nullptr)
    throw std::invalid_argument("complementarity problem without mesh or stiffness");
  const std::size_t n = prob.mesh->num_nodes();
  if (prob.mass.size() != n || prob.omega_position.size() != n || prob.diagonal.size() != n ||
      prob.coupling_scale.size() != n || prob.prev_u.size() != n ||
      (!prob.explicit_term.empty() && prob.explicit_term.size() != n))
    throw std::invalid_argument("complementarity problem: nodal vectors must have one entry per node");
  if (!(prob.tau > 0.0)) throw ConfigError("time step must be positive");
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

double max_abs(const Eigen::VectorXd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace

ActiveSetPartition ActiveSetPartition::all_inactive(const Mesh& mesh) {
  ActiveSetPartition p;
  p.inactive = mesh.omega_nodes;
  return p;
}

std::vector<double> ComplementarityProblem::potential(std::span<const double> u) const {
  const std::size_t n = mesh->num_nodes();
  std::vector<double> out(n);
  std::vector<double> cu;
  if (coupling != nullptr) cu = coupling->multiply(u);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = diagonal[i] * u[i];
    if (coupling != nullptr) out[i] -= coupling_scale[i] * cu[i];
    if (!explicit_term.empty()) out[i] += explicit_term[i];
  }
  return out;
}

LinearSubproblem build_subproblem(const ComplementarityProblem& prob,
                                  const ActiveSetPartition& part) {
  check_problem(prob);
  const Mesh& mesh = *prob.mesh;
  const std::size_t n = mesh.num_nodes();
  const std::size_t n_omega = mesh.omega_nodes.size();
  const auto lab = labels(prob, part);

  LinearSubproblem sys;
  sys.num_w = n_omega;
  std::vector<std::ptrdiff_t> upos(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (lab[i] != 0) continue;
    upos[i] = static_cast<std::ptrdiff_t>(n_omega + sys.u_nodes.size());
    sys.u_nodes.push_back(i);
  }
  const std::size_t size = n_omega + sys.u_nodes.size();
  sys.rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(size));

  // With every Omega node active, w enters only through A, which is blind to
  // constants; one mass-balance row is traded for the gauge sum m_j w_j = 0.
  if (part.inactive.empty() && n_omega > 0) sys.gauge_row = static_cast<std::ptrdiff_t>(n_omega - 1);

  std::vector<Triplet> trip;
  trip.reserve(size * 8);
  const auto& A = *prob.stiffness;
  for (std::size_t a = 0; a < n_omega; ++a) {
    const auto row = static_cast<Eigen::Index>(a);
    const std::size_t j = mesh.omega_nodes[a];
    if (static_cast<std::ptrdiff_t>(a) == sys.gauge_row) {
      for (std::size_t b = 0; b < n_omega; ++b)
        trip.emplace_back(row, static_cast<Eigen::Index>(b), prob.mass[mesh.omega_nodes[b]]);
      continue;
    }
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, row); it; ++it)
      trip.emplace_back(row, it.row(), it.value());  // A is symmetric
    const double mt = prob.mass[j] / prob.tau;
    sys.rhs[row] = mt * prob.prev_u[j];
    if (lab[j] == 0)
      trip.emplace_back(row, upos[j], mt);
    else
      sys.rhs[row] -= mt * lab[j];
  }

  for (std::size_t i : sys.u_nodes) {
    const auto row = static_cast<Eigen::Index>(upos[i]);
    if (prob.omega_position[i] >= 0) trip.emplace_back(row, prob.omega_position[i], 1.0);
    trip.emplace_back(row, row, -prob.diagonal[i]);
    if (!prob.explicit_term.empty()) sys.rhs[row] += prob.explicit_term[i];
    if (prob.coupling == nullptr) continue;
    const CsrMatrix& C = *prob.coupling;
    const double s = prob.coupling_scale[i];
    for (auto p = C.row_ptr[i]; p < C.row_ptr[i + 1]; ++p) {
      const auto k = static_cast<std::size_t>(C.col[p]);
      const double coef = s * C.val[p];
      if (lab[k] == 0)
        trip.emplace_back(row, upos[k], coef);
      else
        sys.rhs[row] -= coef * lab[k];
    }
  }

  sys.matrix.resize(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(size));
  sys.matrix.setFromTriplets(trip.begin(), trip.end());
  return sys;
}

Eigen::VectorXd solve_linear(const LinearSubproblem& sys, double tol) {
  const auto& M = sys.matrix;
  if (M.rows() != M.cols() || M.rows() != sys.rhs.size())
    throw std::invalid_argument("solve_linear: system is not square or rhs has the wrong size");
  if (M.rows() == 0) return Eigen::VectorXd();

  Eigen::UmfPackLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(M);
  if (lu.info() != Eigen::Success)
    throw SolverError("singular linear subproblem (" + std::to_string(M.rows()) + " unknowns)");

  Eigen::VectorXd x = lu.solve(sys.rhs);
  Eigen::VectorXd r = sys.rhs - M * x;
  double res = max_abs(r);
  for (int k = 0; k < 4 && res > tol; ++k) {
    x += lu.solve(r);
    r = sys.rhs - M * x;
    res = max_abs(r);
  }
  if (!std::isfinite(res) || res > tol) {
    // Crude conditioning hint: spread of the diagonal magnitudes.
    double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
      const double d = std::abs(M.coeff(i, i));
      dmax = std::max(dmax, d);
      dmin = std::min(dmin, d);
    }
    throw SolverError("linear subproblem residual " + sci(res) + " exceeds tolerance " + sci(tol) +
                      " (" + std::to_string(M.rows()) + " unknowns, diagonal magnitude range [" +
                      sci(dmin) + ", " + sci(dmax) + "])");
  }
  return x;
}

PdasResult pdas_solve(const ComplementarityProblem& prob, const ActiveSetPartition& warm,
                      const SchemeConfig& cfg) {
  cfg.validate();
  check_problem(prob);
  const Mesh& mesh = *prob.mesh;
  const std::size_t n = mesh.num_nodes();

  ActiveSetPartition part = warm;
  std::size_t last_change = 0;
  for (int it = 1; it <= cfg.max_pdas_iters; ++it) {
    const auto lab = labels(prob, part);
    const auto sys = build_subproblem(prob, part);
    const Eigen::VectorXd x = solve_linear(sys, cfg.lin_tol);

    PdasResult res;
    res.iterations = it;
    res.u.resize(n);
    for (std::size_t i = 0; i < n; ++i) res.u[i] = lab[i];
    for (std::size_t k = 0; k < sys.u_nodes.size(); ++k)
      res.u[sys.u_nodes[k]] = x[static_cast<Eigen::Index>(sys.num_w + k)];
    res.w.assign(n, 0.0);
    for (std::size_t a = 0; a < sys.num_w; ++a)
      res.w[mesh.omega_nodes[a]] = x[static_cast<Eigen::Index>(a)];

    const auto pot = prob.potential(res.u);
    res.lambda.assign(n, 0.0);
    for (std::size_t j : mesh.omega_nodes)
      if (lab[j] != 0) res.lambda[j] = res.w[j] - pot[j];

    bool consistent = true;
    std::size_t weakest = 0;
    if (sys.gauge_row >= 0) {
      // Pick the constant shift of w in the middle of the range that keeps
      // the multiplier signs admissible.
      double lo = -std::numeric_limits<double>::infinity();
      double hi = std::numeric_limits<double>::infinity();
      for (std::size_t j : part.plus) lo = std::max(lo, -res.lambda[j]);
      for (std::size_t j : part.minus) hi = std::min(hi, -res.lambda[j]);
      double kappa;
      if (std::isfinite(lo) && std::isfinite(hi))
        kappa = 0.5 * (lo + hi);
      else if (std::isfinite(lo))
        kappa = lo + 1.0;
      else
        kappa = hi - 1.0;
      for (std::size_t j : mesh.omega_nodes) {
        res.w[j] += kappa;
        res.lambda[j] += kappa;
      }
      const std::size_t a = static_cast<std::size_t>(sys.gauge_row);
      const std::size_t j = mesh.omega_nodes[a];
      double dropped = prob.mass[j] / prob.tau * (res.u[j] - prob.prev_u[j]);
      for (Eigen::SparseMatrix<double>::InnerIterator e(*prob.stiffness, static_cast<Eigen::Index>(a)); e; ++e)
        dropped += e.value() * res.w[mesh.omega_nodes[static_cast<std::size_t>(e.row())]];
      consistent = std::abs(dropped) <= 10.0 * cfg.lin_tol;
      double smallest = std::numeric_limits<double>::infinity();
      for (std::size_t k : mesh.omega_nodes)
        if (std::abs(res.lambda[k]) < smallest) smallest = std::abs(res.lambda[k]), weakest = k;
    }

    ActiveSetPartition next;
    for (std::size_t j : mesh.omega_nodes) {
      const double l = res.lambda[j], u = res.u[j];
      if (l + cfg.c_pdas * (u - 1.0) > 0.0)
        next.plus.push_back(j);
      else if (l + cfg.c_pdas * (u + 1.0) < 0.0)
        next.minus.push_back(j);
      else
        next.inactive.push_back(j);
    }

    if (next == part) {
      if (consistent) {
        res.partition = std::move(part);
        return res;
      }
      // All-active fixed point that violates mass balance: free the node
      // with the weakest multiplier.
      std::erase(next.plus, weakest);
      std::erase(next.minus, weakest);
      next.inactive.push_back(weakest);
      std::ranges::sort(next.inactive);
    }
    last_change = 0;
    for (std::size_t j : mesh.omega_nodes) {
      const signed char now = std::ranges::binary_search(next.plus, j) ? 1
                              : std::ranges::binary_search(next.minus, j) ? -1 : 0;
      if (now != lab[j]) ++last_change;
    }
    part = std::move(next);
  }
  throw SolverError("PDAS did not converge in " + std::to_string(cfg.max_pdas_iters) +
                    " iterations (last partition change: " + std::to_string(last_change) +
                    " nodes, |plus| = " + std::to_string(part.plus.size()) +
                    ", |minus| = " + std::to_string(part.minus.size()) + ")");
}

ComplementarityProblem nonlocal_problem(const DiscreteOperators& ops, std::span<const double> prev_u,
                                        std::span<const double> conv_prev, const SchemeConfig& cfg,
                                        NonlocalProblemStorage& storage) {
  const std::size_t n = ops.num_nodes();
  if (prev_u.size() != n) throw std::invalid_argument("previous state has the wrong size");
  storage.diagonal.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    storage.diagonal[i] = ops.omega_position[i] >= 0 ? ops.xi_eff[i] : ops.c_gamma_h[i];

  ComplementarityProblem prob;
  prob.mesh = &ops.mesh;
  prob.mass = ops.mass_omega;
  prob.stiffness = &ops.stiffness;
  prob.omega_position = ops.omega_position;
  prob.diagonal = storage.diagonal;
  prob.coupling_scale = ops.row_scale;
  prob.prev_u = prev_u;
  prob.tau = cfg.tau;

  if (cfg.scheme == Scheme::implicit) {
    prob.coupling = &ops.conv;
    storage.explicit_term.clear();
    return prob;
  }
  double xi_min = std::numeric_limits<double>::infinity();
  for (std::size_t j : ops.mesh.omega_nodes) xi_min = std::min(xi_min, ops.xi_h[j]);
  if (xi_min < 1e-12)
    throw ConfigError("imex scheme needs xi^h > 0 on Omega (min xi^h = " + std::to_string(xi_min) +
                      "); use the implicit scheme");
  if (conv_prev.size() != n) throw std::invalid_argument("imex needs W u_prev on every node");
  storage.explicit_term.resize(n);
  for (std::size_t i = 0; i < n; ++i) storage.explicit_term[i] = -ops.row_scale[i] * conv_prev[i];
  prob.explicit_term = storage.explicit_term;
  return prob;
}

PdasResult pdas_solve(const DiscreteOperators& ops, std::span<const double> prev_u,
                      const ActiveSetPartition& warm, const SchemeConfig& cfg) {
  NonlocalProblemStorage storage;
  std::vector<double> conv_prev;
  if (cfg.scheme == Scheme::imex) conv_prev = ops.conv.multiply(prev_u);
  const auto prob = nonlocal_problem(ops, prev_u, conv_prev, cfg, storage);
  return pdas_solve(prob, warm, cfg);
}

}  // namespace nlch
