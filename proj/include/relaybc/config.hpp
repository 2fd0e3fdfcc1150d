#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relaybc/pipeline.hpp"

namespace relaybc {

/// Experiment description parsed from a flat key=value file. All fields
/// have defaults except `system`; power values are in dB and converted to
/// linear scale (p = 10^{dB/10}) when realizations run, with noise fixed
/// at 1.
struct ExperimentConfig {
  SystemSpec system;
  std::vector<double> power_db = {0, 5, 10, 15, 20, 25, 30};
  std::vector<double> t_values = {0.5};
  int realizations = 100;
  std::uint64_t seed = 0;
  std::vector<Variant> variants = {Variant::baseline, Variant::baseline_pc,
                                   Variant::after_phase2,
                                   Variant::final_output};
  std::vector<int> n_init = {1};
  int parallel = 1;
  std::string out_dir = "results";
  /// Relay power in dB relative to transmitter power (0 = equal powers).
  double relay_offset_db = 0.0;
  SolverOptions options;
  bool write_traces = false;
};

/// Throws ValidationError listing every violated invariant.
void validate(const ExperimentConfig& config);

/// Parses `key = value` lines; `#` starts a comment, blank lines are
/// skipped, strings may be double-quoted, lists are comma-separated.
/// Unknown keys and malformed lines raise ParseError with the line number.
ExperimentConfig parse_config_text(const std::string& text);

/// parse_config_text over the file contents; the path is included in error
/// messages.
ExperimentConfig load_config(const std::string& path);

/// dB to linear power.
double db_to_linear(double db);

}  // namespace relaybc
