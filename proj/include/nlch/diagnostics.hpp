#pragma once

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <cstddef>
#include <span>
#include <vector>

#include "nlch/assembly.hpp"
#include "nlch/state.hpp"

namespace nlch {

struct DiagnosticsRecord {
  std::size_t step = 0;
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double jk_value = 0.0;     // J_k(u^k)
  double jk_previous = 0.0;  // J_k(u^{k-1}) = E(u^{k-1})
  double mean_w = 0.0;
  int pdas_iters = 0;
  double projection_residual = 0.0;
  std::size_t projection_nodes = 0;  // 0: not applicable
  double complementarity_residual = 0.0;
  double interface_fraction = 0.0;
  std::size_t sign_violations = 0;
  std::size_t sign_level_set = 0;  // nodes with |g| <= g_tol
  bool imex = false;
};

inline constexpr double kXiZero = 1e-12;
inline constexpr double kDefaultGTol = 1e-7;
inline constexpr double kDefaultInterfaceTol = 1e-8;

double mass(std::span<const double> m, std::span<const double> u);

/// 1/2 b_h(u,u) + sum_Omega m_j c_F/2 (1 - u_j^2); throws InfeasibleStateError off K.
double energy(const DiscreteOperators& ops, std::span<const double> u);

/// Solver for the discrete dual norm ||du||_{A'} on mean-free increments.
/// Factorizes the bordered Neumann matrix once.
class DualNormSolver {
 public:
  DualNormSolver(const Eigen::SparseMatrix<double>& stiffness, std::vector<double> mass_omega);
  /// du is given on Omega positions.
  double norm(std::span<const double> du) const;

 private:
  std::vector<double> mass_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
};

/// Convenience wrapper taking a nodal increment; builds a solver per call.
double dual_norm_increment(const DiscreteOperators& ops, std::span<const double> du);

/// Omega values of a nodal vector in Omega-position order.
std::vector<double> omega_values(const Mesh& mesh, std::span<const double> v);

double jk_value(const DiscreteOperators& ops, const DualNormSolver& dual, std::span<const double> v,
                std::span<const double> prev, double tau);

/// g_j = w_j + rho_j (W u^bullet)_j with the scheme-consistent convolution.
std::vector<double> g_field(const DiscreteOperators& ops, const StepState& s);

struct ProjectionCheck {
  double residual = 0.0;
  std::size_t nodes = 0;  // nodes with xi > kXiZero; 0 means not applicable
};
ProjectionCheck projection_residual(const DiscreteOperators& ops, const StepState& s);

struct SignCheck {
  std::size_t violations = 0;
  std::size_t level_set = 0;  // |g| <= g_tol, where g does not fix the sign of u
  std::size_t nodes = 0;      // nodes with xi <= kXiZero
};
SignCheck sign_condition_check(const DiscreteOperators& ops, const StepState& s,
                               double g_tol = kDefaultGTol);

/// Fraction of Omega nodes with |u_j| >= 1 - tol.
double interface_fraction(const Mesh& mesh, std::span<const double> u, double tol = kDefaultInterfaceTol);

/// max over Omega of |lambda_j| min(|u_j - 1|, |u_j + 1|), box violation and
/// multiplier sign violation.
double complementarity_residual(const Mesh& mesh, std::span<const double> u,
                                std::span<const double> lambda);

/// mu^k = sum_Omega m_j w_j.
double mean_w(const DiscreteOperators& ops, std::span<const double> w);

/// Per-step record for the nonlocal model.
DiagnosticsRecord nonlocal_record(const DiscreteOperators& ops, const DualNormSolver& dual,
                                  const StepState& prev, const StepState& s, double tau);

}  // namespace nlch
