#pragma once

#include <Eigen/SparseCore>
#include <span>
#include <vector>

#include "nlch/diagnostics.hpp"
#include "nlch/mesh.hpp"
#include "nlch/scheme.hpp"
#include "nlch/sparse.hpp"
#include "nlch/state.hpp"
#include "nlch/stepper.hpp"

namespace nlch {

/// Local Cahn-Hilliard model with obstacle potential on the same lumped P1
/// discretization: m_j w_j = eps^2 (A u)_j - c_F m_j u_j + m_j lambda_j.
struct LocalOperators {
  Mesh mesh;  // no interaction layer
  Eigen::SparseMatrix<double> stiffness;
  CsrMatrix stiffness_nodal;  // A in node numbering
  std::vector<double> mass_omega;
  std::vector<std::ptrdiff_t> omega_position;
  double epsilon2 = 0.0;
  double c_F = 0.0;
};

/// mesh must not carry an interaction layer.
LocalOperators make_local_operators(const Mesh& mesh, double epsilon2, double c_F);

StepState local_initial_state(const LocalOperators& lop, std::span<const double> u0);

/// The local model has no convolution to split, so cfg.scheme is ignored.
StepState local_step(const LocalOperators& lop, const StepState& prev, const SchemeConfig& cfg);

/// 1/2 eps^2 u^T A u + sum m_j c_F/2 (1 - u_j^2).
double local_energy(const LocalOperators& lop, std::span<const double> u);

StepState local_run(const LocalOperators& lop, std::span<const double> u0, const SchemeConfig& cfg,
                    double T, const StepSink& sink = {});

}  // namespace nlch
