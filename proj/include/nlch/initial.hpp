#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "nlch/mesh.hpp"

namespace nlch {

// Initial data is produced on Omega only, in omega_nodes order, so that the
// local and nonlocal runs (which use different meshes) see the same values.

/// 0.1 (sin 2 pi x + sin 3 pi x) in 1D; 0.1 (sin 2 pi x + sin 3 pi y) in 2D.
std::vector<double> sinusoid_initial(const Mesh& mesh);

/// Uniform values in [-1, 1], one independent draw per (seed, Omega index).
std::vector<double> random_initial(std::uint64_t seed, const Mesh& mesh);

/// Whitespace separated values, one per Omega node in lexicographic order;
/// '#' starts a comment.
std::vector<double> file_initial(const std::filesystem::path& path, const Mesh& mesh);

/// Nodal vector with the given Omega values and zeros on J_I.
std::vector<double> scatter_omega(const Mesh& mesh, const std::vector<double>& omega_values);

}  // namespace nlch
