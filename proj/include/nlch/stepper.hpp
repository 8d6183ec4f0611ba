#pragma once

#include <functional>
#include <span>
#include <vector>

#include "nlch/assembly.hpp"
#include "nlch/diagnostics.hpp"
#include "nlch/scheme.hpp"
#include "nlch/state.hpp"

namespace nlch {

/// State k = 0 from nodal data u0 (including J_I values). Values within
/// 1e-12 of the box are clamped; larger violations throw InfeasibleStateError.
StepState initial_state(const DiscreteOperators& ops, std::span<const double> u0);

StepState step(const DiscreteOperators& ops, const StepState& prev, const SchemeConfig& cfg);

using StepSink = std::function<void(const StepState&, const DiagnosticsRecord&)>;

/// Number of steps K with K tau = T; throws ConfigError otherwise.
std::size_t step_count(double T, double tau);

/// Runs K = T / tau steps, calling sink after each one. Errors carry the step index.
StepState run(const DiscreteOperators& ops, std::span<const double> u0, const SchemeConfig& cfg,
              double T, const StepSink& sink = {});

}  // namespace nlch
