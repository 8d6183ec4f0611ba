#include "nlch/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nlch/error.hpp"

namespace nlch {

void SchemeConfig::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ConfigError("tau must be positive");
  if (!(lin_tol > 0.0)) throw ConfigError("lin_tol must be positive");
  if (!(c_pdas > 0.0)) throw ConfigError("c_pdas must be positive");
  if (max_pdas_iters < 1) throw ConfigError("max_pdas_iters must be >= 1");
}

Scheme parse_scheme(const std::string& s) {
  if (s == "implicit") return Scheme::implicit;
  if (s == "imex") return Scheme::imex;
  throw ConfigError("unknown scheme '" + s + "' (expected implicit or imex)");
}

std::string to_string(Scheme s) { return s == Scheme::implicit ? "implicit" : "imex"; }

StepState initial_state(const DiscreteOperators& ops, std::span<const double> u0) {
  if (u0.size() != ops.num_nodes())
    throw std::invalid_argument("initial data has " + std::to_string(u0.size()) + " values, mesh has " +
                                std::to_string(ops.num_nodes()) + " nodes");
  StepState s;
  s.u.assign(u0.begin(), u0.end());
  for (std::size_t j : ops.mesh.omega_nodes) {
    const double a = std::abs(s.u[j]);
    if (!(a <= 1.0 + 1e-12))
      throw InfeasibleStateError("initial data outside [-1, 1] at node " + std::to_string(j) +
                                 " (u = " + std::to_string(s.u[j]) + ")");
    if (a > 1.0) s.u[j] = std::copysign(1.0, s.u[j]);
  }
  s.w.assign(s.u.size(), 0.0);
  s.lambda.assign(s.u.size(), 0.0);
  s.partition = ActiveSetPartition::all_inactive(ops.mesh);
  s.mass = mass(ops.mass_omega, s.u);
  s.conv = ops.conv.multiply(s.u);
  return s;
}

StepState step(const DiscreteOperators& ops, const StepState& prev, const SchemeConfig& cfg) {
  auto res = pdas_solve(ops, prev.u, prev.partition, cfg);
  StepState s;
  s.k = prev.k + 1;
  s.t = static_cast<double>(s.k) * cfg.tau;
  s.u = std::move(res.u);
  s.w = std::move(res.w);
  s.lambda = std::move(res.lambda);
  s.partition = std::move(res.partition);
  s.pdas_iters = res.iterations;
  s.scheme = cfg.scheme;
  s.mass = mass(ops.mass_omega, s.u);
  s.conv = ops.conv.multiply(cfg.scheme == Scheme::implicit ? s.u : prev.u);
  return s;
}

std::size_t step_count(double T, double tau) {
  if (!(T >= 0.0) || !std::isfinite(T)) throw ConfigError("final time must be >= 0");
  if (!(tau > 0.0)) throw ConfigError("tau must be positive");
  const double k = std::round(T / tau);
  if (std::abs(k * tau - T) > 1e-9 * std::max(1.0, T))
    throw ConfigError("T = " + std::to_string(T) + " is not an integer multiple of tau = " +
                      std::to_string(tau));
  return static_cast<std::size_t>(k);
}

namespace {

template <class E>
[[noreturn]] void rethrow_at(std::size_t k, const E& e) {
  throw E("step " + std::to_string(k) + ": " + e.what());
}

}  // namespace

StepState run(const DiscreteOperators& ops, std::span<const double> u0, const SchemeConfig& cfg,
              double T, const StepSink& sink) {
  cfg.validate();
  const std::size_t K = step_count(T, cfg.tau);
  StepState s = initial_state(ops, u0);
  if (K == 0) return s;
  if (cfg.scheme == Scheme::imex) s.scheme = Scheme::imex;

  std::vector<double> m;
  for (std::size_t j : ops.mesh.omega_nodes) m.push_back(ops.mass_omega[j]);
  const DualNormSolver dual(ops.stiffness, std::move(m));

  for (std::size_t k = 1; k <= K; ++k) {
    try {
      StepState next = step(ops, s, cfg);
      if (sink) sink(next, nonlocal_record(ops, dual, s, next, cfg.tau));
      s = std::move(next);
    } catch (const WellPosednessError&) {
      throw;
    } catch (const SolverError& e) {
      rethrow_at(k, e);
    } catch (const InfeasibleStateError& e) {
      rethrow_at(k, e);
    } catch (const ConfigError& e) {
      rethrow_at(k, e);
    }
  }
  return s;
}

}  // namespace nlch
