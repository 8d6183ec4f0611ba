#include "nlch/assembly.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <stdexcept>
#include <string>

#include "nlch/error.hpp"

namespace nlch {

namespace {

void require_size(std::span<const double> v, std::size_t n, const char* what) {
  if (v.size() != n)
    throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(n) +
                                " nodal values, got " + std::to_string(v.size()));
}

struct StencilEntry {
  std::ptrdiff_t dx, dy;
  double value;  // gamma(r)
};

// Lattice offsets within distance delta, ordered so that columns come out ascending.
std::vector<StencilEntry> kernel_stencil(const Mesh& mesh, const KernelSpec& spec) {
  const auto reach = static_cast<std::ptrdiff_t>(std::ceil(spec.delta / mesh.h));
  const std::ptrdiff_t ylo = mesh.dim == 1 ? 0 : -reach;
  const std::ptrdiff_t yhi = mesh.dim == 1 ? 0 : reach;
  std::vector<StencilEntry> out;
  for (std::ptrdiff_t dy = ylo; dy <= yhi; ++dy) {
    for (std::ptrdiff_t dx = -reach; dx <= reach; ++dx) {
      const double r = mesh.h * std::sqrt(static_cast<double>(dx * dx + dy * dy));
      if (r <= spec.delta) out.push_back({dx, dy, eval(spec, r)});
    }
  }
  return out;
}

}  // namespace

std::vector<std::ptrdiff_t> omega_positions(const Mesh& mesh) {
  std::vector<std::ptrdiff_t> pos(mesh.num_nodes(), -1);
  for (std::size_t k = 0; k < mesh.omega_nodes.size(); ++k)
    pos[mesh.omega_nodes[k]] = static_cast<std::ptrdiff_t>(k);
  return pos;
}

Eigen::SparseMatrix<double> assemble_stiffness(const Mesh& mesh) {
  const auto pos = omega_positions(mesh);
  const auto n = static_cast<Eigen::Index>(mesh.omega_nodes.size());
  std::vector<Eigen::Triplet<double>> trip;
  const std::size_t nv = mesh.nodes_per_element();
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    if (!mesh.element_in_omega[e]) continue;
    const auto& el = mesh.elements[e];
    double local[3][3] = {};
    if (mesh.dim == 1) {
      const double hk = std::abs(mesh.coords[el[1]][0] - mesh.coords[el[0]][0]);
      local[0][0] = local[1][1] = 1.0 / hk;
      local[0][1] = local[1][0] = -1.0 / hk;
    } else {
      const auto& p0 = mesh.coords[el[0]];
      const auto& p1 = mesh.coords[el[1]];
      const auto& p2 = mesh.coords[el[2]];
      const double det = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
      const double area = 0.5 * std::abs(det);
      // grad phi_i = rot90(opposite edge) / det
      const double g[3][2] = {{(p1[1] - p2[1]) / det, (p2[0] - p1[0]) / det},
                              {(p2[1] - p0[1]) / det, (p0[0] - p2[0]) / det},
                              {(p0[1] - p1[1]) / det, (p1[0] - p0[0]) / det}};
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) local[a][b] = area * (g[a][0] * g[b][0] + g[a][1] * g[b][1]);
    }
    for (std::size_t a = 0; a < nv; ++a)
      for (std::size_t b = 0; b < nv; ++b)
        trip.emplace_back(pos[el[a]], pos[el[b]], local[a][b]);
  }
  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(trip.begin(), trip.end());
  A.prune(0.0);
  return A;
}

DiscreteOperators assemble(const Mesh& mesh, const KernelSpec& spec,
                           const PotentialCoefficient& c_F, NonlocalCase which) {
  if (spec.dim != mesh.dim) throw ConfigError("kernel and mesh dimensions differ");
  const double layer = static_cast<double>(mesh.layer_cells) * mesh.h;
  if (which == NonlocalCase::neumann && layer < spec.delta * (1.0 - 1e-12))
    throw ConfigError("Case 1 needs an interaction layer of width >= delta = " +
                      std::to_string(spec.delta) + ", mesh has " + std::to_string(layer));
  if (which == NonlocalCase::neumann && spec.delta < mesh.h * (1.0 - 1e-12))
    throw ConfigError("Case 1 needs delta >= h to couple the layer to Omega");
  if (which == NonlocalCase::regional && mesh.layer_cells != 0)
    throw ConfigError("Case 2 (regional) forbids an interaction layer");

  DiscreteOperators ops;
  ops.mesh = mesh;
  ops.kernel = spec;
  ops.which = which;
  ops.mass_omega = mesh.lumped_weight_omega;
  ops.mass_full = mesh.lumped_weight_full;
  ops.omega_position = omega_positions(mesh);
  ops.stiffness = assemble_stiffness(mesh);

  const std::size_t n = mesh.num_nodes();
  const auto stencil = kernel_stencil(mesh, spec);
  const auto side = static_cast<std::ptrdiff_t>(mesh.nodes_per_side);
  const std::ptrdiff_t yside = mesh.dim == 1 ? 1 : side;

  // Each row only writes its own slots, so the row loop may be split freely.
  std::vector<std::vector<std::int64_t>> cols(n);
  std::vector<std::vector<double>> vals(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [ix, iy] = mesh.lattice(i);
    for (const auto& s : stencil) {
      const std::ptrdiff_t jx = ix + s.dx, jy = iy + s.dy;
      if (jx < 0 || jx >= side || jy < 0 || jy >= yside) continue;
      const std::size_t j = mesh.node_at(jx, jy);
      const double v = ops.mass_full[j] * s.value;
      if (v == 0.0) continue;
      cols[i].push_back(static_cast<std::int64_t>(j));
      vals[i].push_back(v);
    }
  }
  CsrMatrix& W = ops.conv;
  W.rows = W.cols = n;
  W.row_ptr.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i)
    W.row_ptr[i + 1] = W.row_ptr[i] + static_cast<std::int64_t>(cols[i].size());
  W.col.reserve(static_cast<std::size_t>(W.row_ptr[n]));
  W.val.reserve(static_cast<std::size_t>(W.row_ptr[n]));
  for (std::size_t i = 0; i < n; ++i) {
    W.col.insert(W.col.end(), cols[i].begin(), cols[i].end());
    W.val.insert(W.val.end(), vals[i].begin(), vals[i].end());
  }

  ops.c_gamma_h.resize(n);
  for (std::size_t i = 0; i < n; ++i) ops.c_gamma_h[i] = W.row_sum(i);

  ops.c_F.assign(n, 0.0);
  if (c_F.kind == PotentialCoefficient::Kind::nodal && c_F.field.size() != n)
    throw ConfigError("nodal c_F has " + std::to_string(c_F.field.size()) + " values, mesh has " +
                      std::to_string(n) + " nodes");
  for (std::size_t j : mesh.omega_nodes) {
    double v = 0.0;
    switch (c_F.kind) {
      case PotentialCoefficient::Kind::constant: v = c_F.value; break;
      case PotentialCoefficient::Kind::cgamma_fraction: v = c_F.value * ops.c_gamma_h[j]; break;
      case PotentialCoefficient::Kind::nodal: v = c_F.field[j]; break;
    }
    if (!(v >= 0.0)) throw ConfigError("c_F must be >= 0 (node " + std::to_string(j) + ")");
    ops.c_F[j] = v;
  }

  ops.xi_h.assign(n, 0.0);
  ops.xi_eff.assign(n, 0.0);
  ops.row_scale.assign(n, 1.0);
  for (std::size_t j : mesh.omega_nodes) {
    ops.xi_h[j] = ops.c_gamma_h[j] - ops.c_F[j];
    if (ops.xi_h[j] < 0.0) throw WellPosednessError(j, ops.xi_h[j]);
    ops.row_scale[j] = ops.mass_full[j] / ops.mass_omega[j];
    ops.xi_eff[j] = ops.row_scale[j] * ops.c_gamma_h[j] - ops.c_F[j];
  }
  return ops;
}

std::vector<double> apply_convolution(const DiscreteOperators& ops, std::span<const double> u) {
  return ops.conv.multiply(u);
}

std::vector<double> neumann_residual(const DiscreteOperators& ops, std::span<const double> u) {
  if (ops.which != NonlocalCase::neumann)
    throw ConfigError("neumann_residual is only defined for Case 1 operators");
  require_size(u, ops.num_nodes(), "neumann_residual");
  const auto Wu = ops.conv.multiply(u);
  std::vector<double> r;
  r.reserve(ops.mesh.interaction_nodes.size());
  for (std::size_t i : ops.mesh.interaction_nodes) r.push_back(ops.c_gamma_h[i] * u[i] - Wu[i]);
  return r;
}

double bilinear_b(const DiscreteOperators& ops, std::span<const double> u,
                  std::span<const double> v) {
  require_size(v, ops.num_nodes(), "bilinear_b");
  const auto Wu = ops.conv.multiply(u);
  double acc = 0.0;
  for (std::size_t i = 0; i < Wu.size(); ++i)
    acc += ops.mass_full[i] * v[i] * (ops.c_gamma_h[i] * u[i] - Wu[i]);
  return acc;
}

std::vector<double> extend_to_interaction_layer(const DiscreteOperators& ops,
                                                std::span<const double> u) {
  require_size(u, ops.num_nodes(), "extend_to_interaction_layer");
  std::vector<double> out(u.begin(), u.end());
  const auto& ext = ops.mesh.interaction_nodes;
  if (ext.empty()) return out;

  std::vector<std::ptrdiff_t> ext_pos(ops.num_nodes(), -1);
  for (std::size_t k = 0; k < ext.size(); ++k) ext_pos[ext[k]] = static_cast<std::ptrdiff_t>(k);

  const auto ne = static_cast<Eigen::Index>(ext.size());
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ne);
  for (std::size_t k = 0; k < ext.size(); ++k) {
    const std::size_t i = ext[k];
    const auto row = static_cast<Eigen::Index>(k);
    trip.emplace_back(row, row, ops.c_gamma_h[i]);
    for (auto p = ops.conv.row_ptr[i]; p < ops.conv.row_ptr[i + 1]; ++p) {
      const auto j = static_cast<std::size_t>(ops.conv.col[p]);
      if (ext_pos[j] >= 0)
        trip.emplace_back(row, ext_pos[j], -ops.conv.val[p]);
      else
        rhs[row] += ops.conv.val[p] * u[j];
    }
  }
  Eigen::SparseMatrix<double> B(ne, ne);
  B.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(B);
  if (lu.info() != Eigen::Success) throw SolverError("exterior problem matrix is singular");
  const Eigen::VectorXd x = lu.solve(rhs);
  for (std::size_t k = 0; k < ext.size(); ++k) out[ext[k]] = x[static_cast<Eigen::Index>(k)];
  return out;
}

}  // namespace nlch
