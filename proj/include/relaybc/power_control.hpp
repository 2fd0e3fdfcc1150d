#pragma once

#include <vector>

#include "relaybc/rate_metrics.hpp"
#include "relaybc/solver_common.hpp"

namespace relaybc {

/// First-hop precoders split into fixed unit-norm shapes and per-relay
/// transmit powers. power[k] is the squared Frobenius norm of the active
/// precoder, so the active precoder is sqrt(power[k]) * shape[k]; a relay's
/// first-hop SINR is linear in power[k] through the precomposed channels.
struct PowerState {
  std::vector<CMat> shapes;
  std::vector<double> power;        // theta per relay
  std::vector<bool> zero_flag;      // true where the source precoder was 0
  std::vector<double> eta;          // rate-matching SINR per relay
  int iteration = 0;
};

PowerState decompose_precoders(const std::vector<CMat>& hop1_precoders,
                               const std::vector<double>& eta);

/// sqrt(power) * shape per relay, the round-trip inverse of decompose.
std::vector<CMat> assemble_precoders(const PowerState& state);

/// Precomposed first-hop channels for fixed shapes:
/// eff[k][m] = H[k][mu(m)] * shape[m].
class PowerControlProblem {
 public:
  PowerControlProblem(const ChannelSet& ch, const Topology& topo,
                      const SystemSpec& spec,
                      const std::vector<CMat>& shapes);

  /// Effective first-hop SINR of relay k at the given power vector;
  /// strictly increasing in power[k], zero at power[k] = 0.
  double powered_sinr(const std::vector<double>& power, int k) const;

  std::vector<double> all_sinrs(const std::vector<double>& power) const;

  /// Unique power in (0, power[k]) matching relay k's first-hop SINR to
  /// eta[k], by bisection on the increasing det equation. Requires the
  /// relay to be first-hop dominant (root bracketed in (0, power[k])).
  /// The lower endpoint is returned so the achieved SINR never overshoots.
  double rate_matching_power(const std::vector<double>& power, int k,
                             double eta) const;

  double timeshare() const { return timeshare_; }

 private:
  // Interference-plus-noise covariance seen by relay k, and the power-free
  // signal quadratic M_k = eff[k][k]^* R^{-1} eff[k][k].
  CMat signal_quadratic(const std::vector<double>& power, int k) const;

  std::vector<std::vector<CMat>> eff_;
  double noise_var_;
  double timeshare_;
  int streams_;
};

/// Dominance classification with relative tolerance delta: first-hop
/// dominant when sinr > eta (1 + delta), second-hop dominant when
/// sinr < eta (1 - delta). The sets are disjoint; near-matched relays are
/// in neither.
struct LinkClassification {
  std::vector<int> first_hop_dominant;   // the set A
  std::vector<int> second_hop_dominant;  // the set B
};

constexpr double kClassifyTol = 1e-7;

LinkClassification classify_links(const PowerState& state,
                                  const std::vector<double>& sinrs,
                                  double delta = kClassifyTol);

/// One simultaneous update: every first-hop-dominant relay moves to its
/// rate-matching power computed from the current iteration's powers;
/// everyone else keeps its power. Componentwise non-increasing.
PowerState power_control_step(const PowerControlProblem& problem,
                              const PowerState& state);

struct PowerControlResult {
  PowerState state;
  std::vector<TraceRecord> trace;
  std::vector<std::vector<double>> power_history;   // per iteration
  std::vector<std::vector<double>> rate_history;    // per-relay end-to-end
  int iterations = 0;
  bool matched = false;  // no first-hop-dominant relay at exit
};

PowerControlResult run_power_control(const PowerControlProblem& problem,
                                     PowerState state, int max_iter = 30);

}  // namespace relaybc
