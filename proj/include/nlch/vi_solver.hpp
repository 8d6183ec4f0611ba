#pragma once

#include <Eigen/SparseCore>
#include <cstddef>
#include <span>
#include <vector>

#include "nlch/assembly.hpp"
#include "nlch/scheme.hpp"
#include "nlch/sparse.hpp"

namespace nlch {

struct ActiveSetPartition {
  std::vector<std::size_t> plus;      // u = +1 enforced
  std::vector<std::size_t> minus;     // u = -1 enforced
  std::vector<std::size_t> inactive;  // rest of J_Omega

  static ActiveSetPartition all_inactive(const Mesh& mesh);
  bool operator==(const ActiveSetPartition&) const = default;
};

/// One time step of a gradient flow of the form
///   (m_j / tau)(u_j - prev_j) + (A w)_j = 0          on J_Omega
///   w_j = (P u)_j + f_j + lambda_j                     on J_Omega
///   0   = (P u)_i + f_i                                on the constraint rows J_I
///   lambda in the subdifferential of the indicator of [-1, 1]
/// with (P u)_i = diagonal_i u_i - coupling_scale_i (C u)_i.
struct ComplementarityProblem {
  const Mesh* mesh = nullptr;
  std::span<const double> mass;                        // m_j per node
  const Eigen::SparseMatrix<double>* stiffness = nullptr;  // Omega positions
  std::span<const std::ptrdiff_t> omega_position;
  std::span<const double> diagonal;
  std::span<const double> coupling_scale;
  const CsrMatrix* coupling = nullptr;                 // may be null
  std::span<const double> explicit_term;               // f; empty means 0
  std::span<const double> prev_u;
  double tau = 0.0;

  /// (P u)_i + f_i for every node.
  std::vector<double> potential(std::span<const double> u) const;
};

struct LinearSubproblem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  std::size_t num_w = 0;             // unknowns [0, num_w) are w on J_Omega
  std::vector<std::size_t> u_nodes;  // then u on these nodes
  std::ptrdiff_t gauge_row = -1;     // mass-balance row replaced by sum m_j w_j = 0
};

LinearSubproblem build_subproblem(const ComplementarityProblem& prob,
                                  const ActiveSetPartition& part);

/// Sparse LU (UMFPACK) with iterative refinement; throws SolverError on breakdown or
/// when the max-norm residual stays above tol.
Eigen::VectorXd solve_linear(const LinearSubproblem& sys, double tol);

struct PdasResult {
  std::vector<double> u, w, lambda;  // nodal; w and lambda are 0 on J_I
  ActiveSetPartition partition;
  int iterations = 0;
};

PdasResult pdas_solve(const ComplementarityProblem& prob, const ActiveSetPartition& warm,
                      const SchemeConfig& cfg);

/// Nonlocal step problem for the given operators; conv_prev = W prev_u is
/// needed by the imex scheme. The returned problem references `storage`.
struct NonlocalProblemStorage {
  std::vector<double> diagonal, explicit_term;
};
ComplementarityProblem nonlocal_problem(const DiscreteOperators& ops, std::span<const double> prev_u,
                                        std::span<const double> conv_prev, const SchemeConfig& cfg,
                                        NonlocalProblemStorage& storage);

PdasResult pdas_solve(const DiscreteOperators& ops, std::span<const double> prev_u,
                      const ActiveSetPartition& warm, const SchemeConfig& cfg);

}  // namespace nlch
