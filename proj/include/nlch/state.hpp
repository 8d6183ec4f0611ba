#pragma once

#include <cstddef>
#include <vector>

#include "nlch/scheme.hpp"
#include "nlch/vi_solver.hpp"

namespace nlch {

/// Snapshot after step k. All vectors are nodal; w and lambda vanish on J_I.
struct StepState {
  std::size_t k = 0;
  double t = 0.0;
  std::vector<double> u, w, lambda;
  ActiveSetPartition partition;
  double mass = 0.0;
  int pdas_iters = 0;
  Scheme scheme = Scheme::implicit;
  std::vector<double> conv;  // W u^bullet as used by the step (W u for k = 0)
};

}  // namespace nlch
