#include "nlch/mesh.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "nlch/error.hpp"

namespace nlch {

WellPosednessError::WellPosednessError(std::size_t node, double value)
    : Error("well-posedness violated: xi^h = " + std::to_string(value) + " < 0 at node " +
            std::to_string(node)),
      node_(node),
      value_(value) {}

std::array<std::ptrdiff_t, 2> Mesh::lattice(std::size_t j) const {
  const auto n = static_cast<std::ptrdiff_t>(nodes_per_side);
  const auto jj = static_cast<std::ptrdiff_t>(j);
  if (dim == 1) return {jj, 0};
  return {jj % n, jj / n};
}

std::size_t Mesh::node_at(std::ptrdiff_t ix, std::ptrdiff_t iy) const {
  return dim == 1 ? static_cast<std::size_t>(ix)
                  : static_cast<std::size_t>(iy) * nodes_per_side + static_cast<std::size_t>(ix);
}

double Mesh::padded_measure() const {
  const double side = 1.0 + 2.0 * static_cast<double>(layer_cells) * h;
  return dim == 1 ? side : side * side;
}

Mesh build_mesh(int dim, std::size_t n_cells, double layer_width) {
  if (dim != 1 && dim != 2) throw ConfigError("mesh dimension must be 1 or 2");
  if (n_cells < 2) throw ConfigError("mesh needs at least 2 cells, got " + std::to_string(n_cells));
  if (!(layer_width >= 0.0) || !std::isfinite(layer_width))
    throw ConfigError("interaction layer width must be finite and >= 0");

  Mesh mesh;
  mesh.dim = dim;
  mesh.n_cells = n_cells;
  mesh.h = 1.0 / static_cast<double>(n_cells);

  // Round up to whole cells; the slack absorbs representation error in layer_width.
  const double cells = layer_width * static_cast<double>(n_cells);
  mesh.layer_cells = static_cast<std::size_t>(std::ceil(cells - 1e-9 * std::max(1.0, cells)));

  const std::size_t L = mesh.layer_cells;
  const std::size_t nps = n_cells + 1 + 2 * L;
  mesh.nodes_per_side = nps;
  const std::size_t n_nodes = dim == 1 ? nps : nps * nps;

  mesh.coords.resize(n_nodes);
  mesh.in_omega.assign(n_nodes, false);
  auto inside = [&](std::size_t i) { return i >= L && i <= L + n_cells; };
  for (std::size_t j = 0; j < n_nodes; ++j) {
    const std::size_t ix = dim == 1 ? j : j % nps;
    const std::size_t iy = dim == 1 ? 0 : j / nps;
    const double x = (static_cast<double>(ix) - static_cast<double>(L)) * mesh.h;
    const double y = dim == 1 ? 0.0 : (static_cast<double>(iy) - static_cast<double>(L)) * mesh.h;
    mesh.coords[j] = {x, y};
    const bool omega = inside(ix) && (dim == 1 || inside(iy));
    mesh.in_omega[j] = omega;
    (omega ? mesh.omega_nodes : mesh.interaction_nodes).push_back(j);
  }

  auto cell_in_omega = [&](std::size_t i) { return i >= L && i < L + n_cells; };
  if (dim == 1) {
    for (std::size_t ix = 0; ix + 1 < nps; ++ix) {
      mesh.elements.push_back({ix, ix + 1, 0});
      mesh.element_in_omega.push_back(cell_in_omega(ix));
    }
  } else {
    for (std::size_t iy = 0; iy + 1 < nps; ++iy) {
      for (std::size_t ix = 0; ix + 1 < nps; ++ix) {
        const std::size_t a = iy * nps + ix, b = a + 1, c = a + nps + 1, d = a + nps;
        const bool omega = cell_in_omega(ix) && cell_in_omega(iy);
        mesh.elements.push_back({a, b, c});
        mesh.elements.push_back({a, c, d});
        mesh.element_in_omega.push_back(omega);
        mesh.element_in_omega.push_back(omega);
      }
    }
  }

  // A P1 hat integrates to |K|/(dim+1) over every simplex K containing its node.
  const double share = dim == 1 ? mesh.h / 2.0 : mesh.h * mesh.h / 6.0;
  mesh.lumped_weight_omega.assign(n_nodes, 0.0);
  mesh.lumped_weight_full.assign(n_nodes, 0.0);
  for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
    for (std::size_t v = 0; v < mesh.nodes_per_element(); ++v) {
      const std::size_t node = mesh.elements[e][v];
      mesh.lumped_weight_full[node] += share;
      if (mesh.element_in_omega[e]) mesh.lumped_weight_omega[node] += share;
    }
  }
  return mesh;
}

NodeSet classify_node(const Mesh& mesh, std::size_t j) {
  if (j >= mesh.num_nodes())
    throw std::out_of_range("node index " + std::to_string(j) + " out of range (" +
                            std::to_string(mesh.num_nodes()) + " nodes)");
  return mesh.in_omega[j] ? NodeSet::omega : NodeSet::interaction;
}

}  // namespace nlch
