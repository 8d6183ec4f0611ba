#include "nlch/initial.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "nlch/error.hpp"

namespace nlch {

std::vector<double> sinusoid_initial(const Mesh& mesh) {
  constexpr double pi = std::numbers::pi;
  std::vector<double> u;
  u.reserve(mesh.omega_nodes.size());
  for (std::size_t j : mesh.omega_nodes) {
    const auto& p = mesh.coords[j];
    const double second = mesh.dim == 1 ? p[0] : p[1];
    u.push_back(0.1 * (std::sin(2.0 * pi * p[0]) + std::sin(3.0 * pi * second)));
  }
  return u;
}

std::vector<double> random_initial(std::uint64_t seed, const Mesh& mesh) {
  std::vector<double> u(mesh.omega_nodes.size());
  for (std::size_t k = 0; k < u.size(); ++k) {
    // A fresh engine per node keyed by (seed, k): values do not depend on
    // evaluation order. The raw 64-bit output is mapped by hand because
    // uniform_real_distribution is not specified bit-exactly.
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(std::uint64_t{k} >> 32)};
    std::mt19937_64 eng(seq);
    const double unit = static_cast<double>(eng() >> 11) * 0x1.0p-53;  // [0, 1)
    u[k] = 2.0 * unit - 1.0;
  }
  return u;
}

std::vector<double> file_initial(const std::filesystem::path& path, const Mesh& mesh) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open initial data file " + path.string());
  std::vector<double> u;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) {
      try {
        std::size_t used = 0;
        u.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw IoError(path.string() + ": not a number: '" + tok + "'");
      }
    }
  }
  if (u.size() != mesh.omega_nodes.size())
    throw IoError(path.string() + ": expected " + std::to_string(mesh.omega_nodes.size()) +
                  " values, found " + std::to_string(u.size()));
  return u;
}

std::vector<double> scatter_omega(const Mesh& mesh, const std::vector<double>& omega_values) {
  if (omega_values.size() != mesh.omega_nodes.size())
    throw std::invalid_argument("scatter_omega: expected one value per Omega node");
  std::vector<double> u(mesh.num_nodes(), 0.0);
  for (std::size_t k = 0; k < omega_values.size(); ++k) u[mesh.omega_nodes[k]] = omega_values[k];
  return u;
}

}  // namespace nlch
