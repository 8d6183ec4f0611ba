#include "nlch/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "nlch/initial.hpp"
#include "nlch/output.hpp"
#include "nlch/stepper.hpp"

namespace nlch {

double layer_width(const RunConfig& cfg) {
  if (cfg.which == NonlocalCase::regional) return 0.0;
  return cfg.delta + 1.0 / static_cast<double>(cfg.n_cells);
}

KernelSpec kernel_of(const RunConfig& cfg) { return make_kernel(cfg.dim, cfg.epsilon2, cfg.delta); }

PotentialCoefficient potential_of(const RunConfig& cfg) {
  return cfg.c_F_cgamma ? PotentialCoefficient::fraction_of_cgamma(cfg.c_F)
                        : PotentialCoefficient::constant(cfg.c_F);
}

DiscreteOperators nonlocal_operators(const RunConfig& cfg) {
  const Mesh mesh = build_mesh(cfg.dim, cfg.n_cells, layer_width(cfg));
  return assemble(mesh, kernel_of(cfg), potential_of(cfg), cfg.which);
}

LocalOperators local_operators(const RunConfig& cfg) {
  const Mesh mesh = build_mesh(cfg.dim, cfg.n_cells, 0.0);
  // A c_gamma-proportional c_F has no local counterpart beyond its interior value.
  const double c_F = cfg.c_F_cgamma ? cfg.c_F * c_gamma_analytic(kernel_of(cfg)) : cfg.c_F;
  return make_local_operators(mesh, cfg.epsilon2, c_F);
}

std::vector<double> initial_omega_values(const RunConfig& cfg, const Mesh& mesh) {
  switch (cfg.initial) {
    case InitialKind::sinusoid: return sinusoid_initial(mesh);
    case InitialKind::random: return random_initial(cfg.seed, mesh);
    case InitialKind::file: return file_initial(cfg.initial_file, mesh);
  }
  return {};
}

std::vector<double> nonlocal_initial(const DiscreteOperators& ops, const std::vector<double>& omega_values) {
  return extend_to_interaction_layer(ops, scatter_omega(ops.mesh, omega_values));
}

KernelConstants kernel_constants(const RunConfig& cfg, const DiscreteOperators& ops) {
  const KernelSpec spec = kernel_of(cfg);
  KernelConstants k;
  k.c_gamma = c_gamma_analytic(spec);
  k.c_gamma_quadrature = c_gamma_quadrature(spec);
  k.grad_l1 = grad_l1_norm(spec);
  k.second_moment = second_moment(spec);
  k.xi_analytic = cfg.c_F_cgamma ? std::numeric_limits<double>::quiet_NaN() : k.c_gamma - cfg.c_F;
  k.c_gamma_h_min = k.xi_h_min = std::numeric_limits<double>::infinity();
  k.c_gamma_h_max = k.xi_h_max = -std::numeric_limits<double>::infinity();
  for (std::size_t j : ops.mesh.omega_nodes) {
    k.c_gamma_h_min = std::min(k.c_gamma_h_min, ops.c_gamma_h[j]);
    k.c_gamma_h_max = std::max(k.c_gamma_h_max, ops.c_gamma_h[j]);
    k.xi_h_min = std::min(k.xi_h_min, ops.xi_h[j]);
    k.xi_h_max = std::max(k.xi_h_max, ops.xi_h[j]);
  }
  k.tau_bound_case2 = recommended_tau(spec, std::max(k.xi_h_min, 0.0), NonlocalCase::regional);
  return k;
}

std::string format_constants(const KernelConstants& k, const std::string& prefix) {
  std::ostringstream o;
  auto line = [&](const char* key, double v) { o << prefix << key << " = " << format_double(v) << '\n'; };
  line("c_gamma", k.c_gamma);
  line("c_gamma_quadrature", k.c_gamma_quadrature);
  line("grad_l1_norm", k.grad_l1);
  line("second_moment", k.second_moment);
  line("xi", k.xi_analytic);
  line("c_gamma_h_min", k.c_gamma_h_min);
  line("c_gamma_h_max", k.c_gamma_h_max);
  line("xi_h_min", k.xi_h_min);
  line("xi_h_max", k.xi_h_max);
  line("tau_bound_regional", k.tau_bound_case2);
  return o.str();
}

namespace {

std::string snapshot_name(std::size_t k, const char* ext) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "snapshot_%06zu.%s", k, ext);
  return buf;
}

struct Sink {
  const RunConfig& cfg;
  const Mesh& mesh;
  std::filesystem::path dir;
  std::size_t total;
  DiagnosticsWriter csv;
  std::vector<DiagnosticsRecord>* records;
  std::ostream* log;
  const char* label;

  Sink(const RunConfig& c, const Mesh& m, std::filesystem::path d, std::size_t K,
       std::vector<DiagnosticsRecord>* rec, std::ostream* lg, const char* lb)
      : cfg(c), mesh(m), dir(std::move(d)), total(K), csv(dir / "diagnostics.csv"), records(rec),
        log(lg), label(lb) {}

  void snapshot(const StepState& s) {
    if (cfg.write_csv) write_snapshot_csv(dir / snapshot_name(s.k, "csv"), mesh, s);
    if (cfg.write_vtk) write_snapshot_vtk(dir / snapshot_name(s.k, "vtk"), mesh, s);
  }

  void operator()(const StepState& s, const DiagnosticsRecord& r) {
    csv.write(r);
    records->push_back(r);
    const bool periodic = cfg.snapshot_every > 0 && s.k % cfg.snapshot_every == 0;
    if (periodic || s.k == total) snapshot(s);
    if (log != nullptr && (periodic || s.k == total))
      *log << label << " step " << s.k << '/' << total << " t=" << s.t << " pdas_iters=" << r.pdas_iters
           << " interface_fraction=" << r.interface_fraction << '\n';
  }
};

}  // namespace

RunOutcome run_experiment(const RunConfig& cfg, std::ostream* log) {
  cfg.validate();
  const std::size_t K = step_count(cfg.T, cfg.tau);
  const SchemeConfig scheme = cfg.scheme_config();
  ensure_directory(cfg.output_dir);
  const bool both = cfg.model == Model::both;

  RunOutcome out;
  std::string manifest = "# nlch run manifest; rerun with: nlch run --config <this file>\n" + format_config(cfg);

  if (cfg.model != Model::local) {
    const DiscreteOperators ops = nonlocal_operators(cfg);
    const auto constants = kernel_constants(cfg, ops);
    manifest += "# derived (informational)\n# nodes = " + std::to_string(ops.num_nodes()) +
                "\n# layer_cells = " + std::to_string(ops.mesh.layer_cells) + '\n' +
                format_constants(constants, "# ");
    const auto dir = both ? cfg.output_dir / "nonlocal" : cfg.output_dir;
    ensure_directory(dir);
    const auto u0 = nonlocal_initial(ops, initial_omega_values(cfg, ops.mesh));
    Sink sink(cfg, ops.mesh, dir, K, &out.nonlocal_records, log, "nonlocal");
    sink.snapshot(initial_state(ops, u0));
    out.nonlocal_final = run(ops, u0, scheme, cfg.T, std::ref(sink));
    sink.csv.close();
    out.has_nonlocal = true;
  }
  if (cfg.model != Model::nonlocal) {
    const LocalOperators lop = local_operators(cfg);
    manifest += "# local c_F = " + format_double(lop.c_F) + '\n';
    const auto dir = both ? cfg.output_dir / "local" : cfg.output_dir;
    ensure_directory(dir);
    const auto u0 = initial_omega_values(cfg, lop.mesh);
    Sink sink(cfg, lop.mesh, dir, K, &out.local_records, log, "local");
    sink.snapshot(local_initial_state(lop, u0));
    out.local_final = local_run(lop, u0, scheme, cfg.T, std::ref(sink));
    sink.csv.close();
    out.has_local = true;
  }
  write_text(cfg.output_dir / "run_manifest.cfg", manifest);
  return out;
}

}  // namespace nlch
