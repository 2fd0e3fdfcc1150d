#pragma once

#include <vector>

namespace relaybc {

/// One line of a solver trace, in the format the harness emits.
struct TraceRecord {
  int phase = 0;
  int iteration = 0;
  double objective_bits = 0.0;
  double max_delta = 0.0;
};

struct SolverOptions {
  int max_iter_hop = 2000;       // phases 1 and 2
  int max_iter_power_control = 30;
  double tol = 1e-6;             // absolute objective change, bits
};

}  // namespace relaybc
