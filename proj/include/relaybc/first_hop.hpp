#pragma once

#include <vector>

#include "relaybc/rate_metrics.hpp"
#include "relaybc/rng.hpp"
#include "relaybc/solver_common.hpp"

namespace relaybc {

/// eta = (1 + xi2)^{(1-t)/t} - 1, the first-hop SINR at which the
/// normalized first-hop rate matches the relay's normalized second-hop
/// sum-rate. eta = xi2 when t = 0.5.
double rate_matching_sinr(double xi2_bar, double t);

/// Smoothed end-to-end utility in bits: equals t*log2(1+xi1) up to the
/// rate-matching point eta, then saturates smoothly toward
/// t*log2(1+eta) + (t/ln2)(e-1). eta may be +infinity, in which case the
/// utility is the plain normalized first-hop rate.
double utility_u(double xi1, double t, double eta);

/// Scaled negative utility expressed through det(E): ln(detE) above the
/// threshold (1+eta)^{-1}, a smooth exponential cap below it. Equals
/// -(ln2/t) * utility_u(1/detE - 1, t, eta).
double g_value(double det_e, double eta);

/// Determinant weight in (0,1]: 1 for x >= (1+eta)^{-1}, otherwise
/// (1+eta) x exp(1 - (1+eta) x). Continuous at the threshold.
double weight_alpha(double x, double eta);

/// Matrix weight V = alpha(det E0) * E0^{-1}, the gradient of g at the
/// MMSE error matrix. Hermitian PD for Hermitian PD input with det <= 1.
CMat gradient_weight(const CMat& mmse_error, double eta);

/// Random complex Gaussian precoders, per transmitter scaled so its sum
/// power constraint holds with equality (equal split across its relays).
/// With explore set, each precoder's power level is additionally drawn
/// uniformly from (0, share]; opportunistic restarts use this to stay
/// distinct even when every link is single-antenna.
std::vector<CMat> random_first_hop_init(const Topology& topo,
                                        const SystemSpec& spec, Rng& rng,
                                        bool explore = false);

/// Joint transmitter precoder update given fixed relay filters and matrix
/// weights; one multiplier per transmitter, shared by all of its relays'
/// precoders, found by complementary slackness and bisection.
std::vector<CMat> first_hop_precoder_update(const ChannelSet& ch,
                                            const Topology& topo,
                                            const std::vector<CMat>& filters,
                                            const std::vector<CMat>& weights,
                                            double tx_power);

struct FirstHopResult {
  std::vector<CMat> precoders;      // F_T at the best iterate
  double objective = 0.0;           // sum_k utility_u at the best iterate
  std::vector<TraceRecord> trace;
  bool converged = false;
};

/// Alternating minimization on the smoothed utility: MMSE filters, matrix
/// weights scaled by alpha, joint precoder update. eta[k] is the per-relay
/// rate-matching SINR (+infinity reduces the weights to the plain sum-rate
/// path). Returns the best iterate by objective value.
FirstHopResult solve_first_hop(const ChannelSet& ch, const Topology& topo,
                               const SystemSpec& spec,
                               const std::vector<double>& eta,
                               std::vector<CMat> init,
                               const SolverOptions& options = {});

}  // namespace relaybc
