#pragma once

#include <string>
#include <vector>

#include "relaybc/config.hpp"

namespace relaybc {

/// One aggregate cell of the sweep: sample mean and standard error of the
/// end-to-end sum-rate over the channel realizations.
struct AggregateRow {
  double power_db = 0.0;
  double t = 0.5;
  Variant variant = Variant::baseline;
  int n_init = 1;
  double mean_sum_rate_bits = 0.0;
  double stderr_bits = 0.0;
  int realizations = 0;
};

/// Per-realization solver flags, counted across all runs.
struct SolverFlagCounts {
  int phase1_unconverged = 0;
  int phase2_unconverged = 0;
  int pc_unmatched = 0;
};

struct TraceFile {
  std::string name;
  std::vector<TraceRecord> records;
};

struct MonteCarloResult {
  std::vector<AggregateRow> rows;
  std::vector<TraceFile> traces;  // populated only when config.write_traces
  SolverFlagCounts flags;
};

/// Runs `realizations` independent channel draws for every
/// (power, t, variant, n_init) cell. Realization r draws its channels from
/// derive_seed(seed, 2r) and its restart stream from derive_seed(seed,
/// 2r+1); restart i of that stream matches VariantRunner's opportunistic
/// rule, so results for smaller N are prefixes of larger N. The reduction
/// runs in realization-index order, so the output is identical for every
/// parallelism degree.
MonteCarloResult monte_carlo(const ExperimentConfig& config);

/// Best timesharing value per (power, variant, n_init) cell of a sweep.
struct SweepBest {
  double power_db = 0.0;
  Variant variant = Variant::baseline;
  int n_init = 1;
  double best_t = 0.5;
  double best_mean = 0.0;
};

struct SweepResult {
  MonteCarloResult mc;
  std::vector<SweepBest> best;
};

/// monte_carlo over the configured t grid plus the per-cell argmax-t report.
SweepResult timesharing_sweep(const ExperimentConfig& config);

/// CSV serialization with the fixed header
/// `power_db,t,variant,n_init,mean_sum_rate_bits,stderr_bits,realizations`.
/// Doubles are written in shortest round-trip form.
std::string format_csv(const std::vector<AggregateRow>& rows);

/// Writes results.csv, one .jsonl trace file per collected trace, and a
/// manifest (config hash, seed, version, timestamp) into outdir, creating
/// it if needed. I/O failures raise std::runtime_error with the path.
void emit_results(const MonteCarloResult& result,
                  const ExperimentConfig& config,
                  const std::string& config_text, const std::string& outdir);

}  // namespace relaybc
