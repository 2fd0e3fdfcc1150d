#pragma once

#include <vector>

#include "relaybc/channels.hpp"

namespace relaybc {

/// Transmit precoders for both hops. hop1[k] (N_T x d1) is used by
/// transmitter mu(k) toward relay k; hop2[q] (N_X x d2) by relay chi(q)
/// toward receiver q.
struct PrecoderSet {
  std::vector<CMat> hop1;
  std::vector<CMat> hop2;
};

/// Sum of squared Frobenius norms over the given precoder indices.
double group_power(const std::vector<CMat>& precoders,
                   const std::vector<int>& indices);

/// R = sum_j M_j M_j^* + noise_var * I, symmetrized. Hermitian PD since
/// noise_var > 0.
CMat interference_covariance(const std::vector<CMat>& interferers,
                             double noise_var, int dim);

/// W = (D D^* + R)^{-1} D, the linear MMSE receive filter for desired
/// effective channel D under interference-plus-noise covariance R.
CMat mmse_receive_filter(const CMat& desired, const CMat& cov);

/// log2 det(I + D^* R^{-1} D) in bits, via Cholesky factorizations.
double stream_rate(const CMat& desired, const CMat& cov);

/// xi = 2^rate - 1.
double effective_sinr(double rate_bits);

/// E = W^*(D D^* + R)W - W^* D - D^* W + I, symmetrized.
CMat mse_matrix(const CMat& desired, const CMat& cov, const CMat& filter);

/// MSE matrix at the MMSE filter: E0 = (I + D^* R^{-1} D)^{-1}.
CMat mmse_error_matrix(const CMat& desired, const CMat& cov);

/// Inverse of a Hermitian PD matrix via Cholesky; adds a 1e-12 ridge and
/// retries once if the factorization fails at working precision.
CMat invert_pd(const CMat& m);

struct FirstHopMetrics {
  std::vector<double> rate;               // R1 per relay, bits
  std::vector<double> sinr;               // xi1 per relay
  std::vector<CMat> mmse_error;           // E_{k,0} per relay
};

struct SecondHopMetrics {
  std::vector<double> rx_rate;            // R2 per receiver
  std::vector<double> relay_sum_rate;     // R2_sum per relay
  std::vector<double> relay_sinr;         // xi2 per relay
};

/// Hop-1 link decomposition: the desired link of relay k is
/// H[k][mu(k)] F1[k]; every other first-hop transmission interferes,
/// including streams from the same transmitter.
FirstHopMetrics first_hop_metrics(const ChannelSet& ch, const Topology& topo,
                                  const std::vector<CMat>& hop1_precoders,
                                  double noise_var);

/// Hop-2 link decomposition: the desired link of receiver q is
/// G[q][chi(q)] F2[q]; all other receivers' transmissions interfere,
/// same-relay siblings included.
SecondHopMetrics second_hop_metrics(const ChannelSet& ch, const Topology& topo,
                                    const std::vector<CMat>& hop2_precoders,
                                    double noise_var);

/// First-hop rate split over a relay's receivers, Sum beta <= t*R1 always:
/// if t*R1 >= (1-t)*sum(R2) each receiver gets its full (1-t)*R2_q, else
/// the budget t*R1 is split proportionally to R2_q. Empty input (relay
/// serving nobody) or sum(R2) = 0 gives all-zero allocations.
std::vector<double> allocate_first_hop_rates(
    double t, double first_hop_rate, const std::vector<double>& served_rates);

struct EndToEndRates {
  std::vector<double> per_relay;  // min(t*R1_k, (1-t)*R2_sum_k)
  double sum = 0.0;
};

EndToEndRates end_to_end(double t, const std::vector<double>& first_hop_rates,
                         const std::vector<double>& second_hop_sum_rates);

/// Full per-realization rate accounting for a precoder pair.
struct RateReport {
  std::vector<double> first_hop_rate;       // R1 per relay
  std::vector<double> first_hop_sinr;       // xi1 per relay
  std::vector<double> rx_rate;              // R2 per receiver
  std::vector<double> relay_sum_rate;       // R2_sum per relay
  std::vector<double> second_hop_sinr;      // xi2 per relay
  std::vector<double> beta;                 // allocated rate per receiver
  std::vector<double> end_to_end_rate;      // per relay
  double sum_rate = 0.0;
};

RateReport compute_rate_report(const ChannelSet& ch, const Topology& topo,
                               const SystemSpec& spec,
                               const PrecoderSet& precoders);

}  // namespace relaybc
