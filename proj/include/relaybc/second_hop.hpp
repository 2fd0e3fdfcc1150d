#pragma once

#include <vector>

#include "relaybc/rate_metrics.hpp"
#include "relaybc/rng.hpp"
#include "relaybc/solver_common.hpp"

namespace relaybc {

/// Random complex Gaussian precoders, per relay scaled so its sum power
/// constraint holds with equality (equal split across served receivers).
/// With explore set, each precoder's power level is additionally drawn
/// uniformly from (0, share]; opportunistic restarts use this to stay
/// distinct even when every link is single-antenna.
std::vector<CMat> random_second_hop_init(const Topology& topo,
                                         const SystemSpec& spec, Rng& rng,
                                         bool explore = false);

/// Per-receiver MMSE receive filters for the current relay precoders.
std::vector<CMat> second_hop_filter_update(const ChannelSet& ch,
                                           const Topology& topo,
                                           const std::vector<CMat>& precoders,
                                           double noise_var);

/// U = E^{-1} per entry; the weight rule for the sum-log-det utility.
std::vector<CMat> mse_weight_update(const std::vector<CMat>& errors);

/// Joint relay precoder update given fixed filters and weights, one power
/// multiplier per relay found by complementary slackness and bisection.
std::vector<CMat> second_hop_precoder_update(const ChannelSet& ch,
                                             const Topology& topo,
                                             const std::vector<CMat>& filters,
                                             const std::vector<CMat>& weights,
                                             double relay_power);

struct SecondHopResult {
  std::vector<CMat> precoders;          // F_X at the best iterate
  std::vector<double> relay_sinr;       // xi2 per relay
  std::vector<double> relay_sum_rate;   // R2_sum per relay
  std::vector<double> rx_rate;          // R2 per receiver
  double sum_rate = 0.0;
  std::vector<TraceRecord> trace;
  bool converged = false;
};

/// Alternating filter -> weight -> precoder updates on the second-hop
/// sum-rate objective. Infeasible inits are projected by per-relay scaling.
/// Returns the best iterate seen; converged=false means max_iter was hit
/// before the sum-rate change dropped below tol.
SecondHopResult solve_second_hop(const ChannelSet& ch, const Topology& topo,
                                 const SystemSpec& spec,
                                 std::vector<CMat> init,
                                 const SolverOptions& options = {});

}  // namespace relaybc
