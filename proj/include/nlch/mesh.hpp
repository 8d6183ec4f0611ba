#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace nlch {

enum class NodeSet { omega, interaction };

/// Uniform structured mesh of (0,1)^dim padded by an interaction layer.
///
/// Nodes live on the lattice h*Z^dim and are numbered lexicographically with
/// x running fastest. In 2D every square cell is split into two right
/// triangles along its (lower-left, upper-right) diagonal.
struct Mesh {
  int dim = 1;
  std::size_t n_cells = 0;      // cells per unit length inside Omega
  std::size_t layer_cells = 0;  // cells added beyond each face of Omega
  double h = 0.0;
  std::size_t nodes_per_side = 0;

  std::vector<std::array<double, 2>> coords;  // y = 0 in 1D
  std::vector<std::array<std::size_t, 3>> elements;  // 1D uses the first two
  std::vector<bool> element_in_omega;

  std::vector<std::size_t> omega_nodes;        // J_Omega, ascending
  std::vector<std::size_t> interaction_nodes;  // J_I, ascending
  std::vector<bool> in_omega;                  // per node

  std::vector<double> lumped_weight_omega;  // m_j = int_Omega phi_j (0 on J_I)
  std::vector<double> lumped_weight_full;   // int over Omega u Omega_I of phi_j

  std::size_t num_nodes() const { return coords.size(); }
  std::size_t nodes_per_element() const { return static_cast<std::size_t>(dim) + 1; }

  /// Lattice coordinates (ix, iy) of node j; iy = 0 in 1D.
  std::array<std::ptrdiff_t, 2> lattice(std::size_t j) const;
  std::size_t node_at(std::ptrdiff_t ix, std::ptrdiff_t iy) const;

  /// Measure of the padded box Omega u Omega_I.
  double padded_measure() const;
};

/// Builds the mesh; the layer is ceil(layer_width / h) cells thick.
Mesh build_mesh(int dim, std::size_t n_cells, double layer_width);

NodeSet classify_node(const Mesh& mesh, std::size_t j);

}  // namespace nlch
