#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nlch/assembly.hpp"
#include "nlch/config.hpp"
#include "nlch/diagnostics.hpp"
#include "nlch/local_ref.hpp"
#include "nlch/state.hpp"

namespace nlch {

/// Interaction layer requested for a configuration: delta + h in Case 1
/// (keeps every Omega stencil clear of the half-weight outer lattice nodes),
/// none in Case 2.
double layer_width(const RunConfig& cfg);

KernelSpec kernel_of(const RunConfig& cfg);
PotentialCoefficient potential_of(const RunConfig& cfg);

DiscreteOperators nonlocal_operators(const RunConfig& cfg);
LocalOperators local_operators(const RunConfig& cfg);

/// Initial data on Omega (omega_nodes order of any mesh with cfg.n_cells).
std::vector<double> initial_omega_values(const RunConfig& cfg, const Mesh& mesh);

/// Nodal nonlocal initial vector; in Case 1 the J_I values solve N_h u = 0.
std::vector<double> nonlocal_initial(const DiscreteOperators& ops, const std::vector<double>& omega_values);

struct KernelConstants {
  double c_gamma = 0.0;            // 36 eps^2 / delta^2
  double c_gamma_quadrature = 0.0; // truncated kernel mass
  double grad_l1 = 0.0;            // C-hat_gamma
  double second_moment = 0.0;
  double xi_analytic = 0.0;        // c_gamma - c_F for a constant c_F, else NaN
  double c_gamma_h_min = 0.0, c_gamma_h_max = 0.0;
  double xi_h_min = 0.0, xi_h_max = 0.0;
  double tau_bound_case2 = 0.0;    // 4 xi_min / C-hat^2
};

KernelConstants kernel_constants(const RunConfig& cfg, const DiscreteOperators& ops);

/// Lines "key = value" describing the constants, each prefixed by prefix.
std::string format_constants(const KernelConstants& k, const std::string& prefix);

struct RunOutcome {
  bool has_nonlocal = false, has_local = false;
  StepState nonlocal_final, local_final;
  std::vector<DiagnosticsRecord> nonlocal_records, local_records;
};

/// Runs the configured model(s) and writes diagnostics.csv, snapshots and
/// run_manifest.cfg under cfg.output_dir ("both" uses nonlocal/ and local/).
/// Progress lines go to `log` when non-null.
RunOutcome run_experiment(const RunConfig& cfg, std::ostream* log = nullptr);

}  // namespace nlch
