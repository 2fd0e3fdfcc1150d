#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "relaybc/first_hop.hpp"
#include "relaybc/power_control.hpp"
#include "relaybc/second_hop.hpp"

namespace relaybc {

/// The four comparison algorithms. baseline designs the first hop for the
/// plain first-hop sum-rate (the second hop and the timesharing are
/// ignored); baseline_pc adds the power-control phase on top of it;
/// after_phase2 runs the matched smoothed-utility first-hop design;
/// final_output adds power control to after_phase2.
enum class Variant { baseline, baseline_pc, after_phase2, final_output };

const char* variant_name(Variant v);
std::optional<Variant> parse_variant(const std::string& name);

struct RunOutcome {
  Variant variant = Variant::baseline;
  std::uint64_t init_seed = 0;
  RateReport report;
  double sum_rate = 0.0;
  double upper_bound = 0.0;           // (1-t) * sum_k R2_sum,k at phase 1
  std::vector<TraceRecord> trace;     // phases concatenated in order
  bool phase1_converged = false;
  bool phase2_converged = false;
  bool pc_matched = true;             // A was empty at power-control exit
  int pc_iterations = 0;
  double wall_time_sec = 0.0;
};

/// Runs the pipeline variants over one channel realization. All variants
/// and all timesharing values share the phase-1 relay precoders and the
/// random first-hop initialization for a given init seed (both are cached),
/// so comparisons isolate the first-hop design and the power control.
class VariantRunner {
 public:
  VariantRunner(const ChannelSet& channels, const Topology& topo,
                SystemSpec spec, SolverOptions options = {});

  /// One variant at timesharing t from the initialization stream
  /// init_seed. Deterministic; caching never changes results. With explore
  /// set, the shared initialization randomizes its per-link power levels
  /// (used by opportunistic restarts beyond the first).
  RunOutcome run(Variant variant, std::uint64_t init_seed, double t,
                 bool explore = false);

  RunOutcome run(Variant variant, std::uint64_t init_seed) {
    return run(variant, init_seed, spec_.timeshare);
  }

  /// Best of N restarts by end-to-end sum-rate; restart i uses
  /// derive_seed(seed, i), so the N=5 stream is a prefix of the N=25 one.
  /// Restart 0 uses the deterministic equal-split power levels; later
  /// restarts explore random power levels.
  RunOutcome opportunistic_best(Variant variant, int num_inits,
                                std::uint64_t seed, double t);

  /// (1-t) times the phase-1 second-hop sum-rate: an upper bound on the
  /// end-to-end sum-rate of every variant sharing that phase-1 output.
  double upper_bound_rate(std::uint64_t init_seed, double t,
                          bool explore = false);

  /// Test hook: pretend every relay decoded at this second-hop SINR when
  /// forming the rate-matching targets. +infinity collapses the matched
  /// variants onto the baseline path.
  void set_xi2_override(std::optional<double> xi2) { xi2_override_ = xi2; }

 private:
  struct SharedInit {
    SecondHopResult phase1;
    std::vector<CMat> hop1_init;
  };
  const SharedInit& shared(std::uint64_t init_seed, bool explore);
  // Key: (init_seed, explore?, matched-eta?, t). Baseline and baseline_pc
  // share a first-hop solve, as do after_phase2 and final_output.
  const FirstHopResult& first_hop(std::uint64_t init_seed, bool explore,
                                  bool matched, double t);

  const ChannelSet& channels_;
  const Topology& topo_;
  SystemSpec spec_;
  SolverOptions options_;
  std::optional<double> xi2_override_;
  std::map<std::pair<std::uint64_t, bool>, SharedInit> shared_cache_;
  std::map<std::tuple<std::uint64_t, bool, bool, double>, FirstHopResult>
      first_hop_cache_;
};

}  // namespace relaybc
