#pragma once

#include <Eigen/SparseCore>
#include <cstddef>
#include <span>
#include <vector>

#include "nlch/kernel.hpp"
#include "nlch/mesh.hpp"
#include "nlch/sparse.hpp"

namespace nlch {

/// Coefficient c_F of the concave part F_0(u) = c_F/2 (1 - u^2).
struct PotentialCoefficient {
  enum class Kind { constant, cgamma_fraction, nodal };
  Kind kind = Kind::constant;
  double value = 0.0;          // constant value or fraction of c_gamma^h
  std::vector<double> field;   // per node, used when kind == nodal

  static PotentialCoefficient constant(double c) { return {Kind::constant, c, {}}; }
  static PotentialCoefficient fraction_of_cgamma(double f) { return {Kind::cgamma_fraction, f, {}}; }
  static PotentialCoefficient nodal(std::vector<double> f) { return {Kind::nodal, 0.0, std::move(f)}; }
};

/// All discrete operators of one run. Nodal vectors have one entry per mesh
/// node; entries of Omega-only quantities are zero on J_I.
struct DiscreteOperators {
  Mesh mesh;
  KernelSpec kernel;
  NonlocalCase which = NonlocalCase::neumann;

  std::vector<double> mass_omega;  // m_j
  std::vector<double> mass_full;   // m~_j
  std::vector<std::ptrdiff_t> omega_position;  // node -> index into mesh.omega_nodes, -1 on J_I

  Eigen::SparseMatrix<double> stiffness;  // int_Omega grad phi_i . grad phi_j over Omega positions
  CsrMatrix conv;                         // W_ij = m~_j gamma(|p_i - p_j|)

  std::vector<double> c_gamma_h;  // row sums of W
  std::vector<double> c_F;
  std::vector<double> xi_h;       // c_gamma_h - c_F on Omega

  // Omega rows of the chemical-potential equation are tested with the
  // Omega-lumped weight m_j while the nonlocal form carries m~_j, so the
  // nonlocal part of row j is scaled by m~_j / m_j (1 except on the boundary
  // of Omega in Case 1).
  std::vector<double> row_scale;
  std::vector<double> xi_eff;     // row_scale * c_gamma_h - c_F on Omega

  std::size_t num_nodes() const { return mesh.num_nodes(); }
  std::size_t num_omega() const { return mesh.omega_nodes.size(); }
};

/// P1 stiffness matrix on the Omega elements, indexed by Omega position.
Eigen::SparseMatrix<double> assemble_stiffness(const Mesh& mesh);

std::vector<std::ptrdiff_t> omega_positions(const Mesh& mesh);

DiscreteOperators assemble(const Mesh& mesh, const KernelSpec& spec,
                           const PotentialCoefficient& c_F, NonlocalCase which);

/// (gamma (*) u) = W u.
std::vector<double> apply_convolution(const DiscreteOperators& ops, std::span<const double> u);

/// c_gamma_h u - W u on J_I, ordered as mesh.interaction_nodes.
std::vector<double> neumann_residual(const DiscreteOperators& ops, std::span<const double> u);

/// b_h(u, v) = sum_i m~_i v_i (c_gamma_h_i u_i - (W u)_i) over all nodes.
double bilinear_b(const DiscreteOperators& ops, std::span<const double> u,
                  std::span<const double> v);

/// Returns u with its J_I values replaced by the solution of the exterior
/// problem N_h u = 0 for the given Omega values. Identity in Case 2.
std::vector<double> extend_to_interaction_layer(const DiscreteOperators& ops,
                                                std::span<const double> u);

}  // namespace nlch
