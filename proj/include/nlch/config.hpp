#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "nlch/kernel.hpp"
#include "nlch/scheme.hpp"

namespace nlch {

enum class Model { nonlocal, local, both };
enum class InitialKind { sinusoid, random, file };

/// Resolved settings for one experiment. The text form is a flat
/// key = value file with exactly these keys; see format_config.
struct RunConfig {
  int dim = 1;
  std::size_t n_cells = 256;
  NonlocalCase which = NonlocalCase::neumann;
  double delta = 0.25;
  double epsilon2 = 0.00175;
  double c_F = 1.0;
  bool c_F_cgamma = false;  // c_F = value * c_gamma^h nodewise
  double tau = 2e-4;
  double T = 0.06;
  Scheme scheme = Scheme::implicit;
  InitialKind initial = InitialKind::sinusoid;
  std::uint64_t seed = 1;
  std::filesystem::path initial_file;
  std::size_t snapshot_every = 0;  // 0: first and last step only
  std::filesystem::path output_dir = "out";
  bool write_csv = true;
  bool write_vtk = false;
  Model model = Model::nonlocal;
  double c_pdas = 1.0;
  double lin_tol = 1e-12;
  int max_pdas_iters = 50;

  void validate() const;
  SchemeConfig scheme_config() const;
};

/// Examples ex1a, ex1b, ex2, ex3 at scale "full" or "desk".
RunConfig preset(const std::string& name, const std::string& scale);

/// Applies one key = value setting; throws ConfigError on unknown keys or bad values.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

/// Reads key = value lines ('#' starts a comment) on top of `base`.
RunConfig parse_config(std::istream& in, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

/// Text form accepted by parse_config; doubles keep all 17 digits.
std::string format_config(const RunConfig& cfg);

std::string to_string(NonlocalCase c);
std::string to_string(Model m);
std::string format_double(double v);

}  // namespace nlch
