#include "relaybc/rate_metrics.hpp"

#include <cmath>

namespace relaybc {
namespace {

constexpr double kLog2 = 0.6931471805599453;

void symmetrize(CMat& m) { m = 0.5 * (m + m.adjoint()).eval(); }

Eigen::LLT<CMat> cholesky_pd(const CMat& m, const char* what) {
  Eigen::LLT<CMat> llt(m);
  if (llt.info() != Eigen::Success)
    throw NumericalError(std::string("Cholesky failed: ") + what +
                         " is not positive definite");
  return llt;
}

double log_det_from_llt(const Eigen::LLT<CMat>& llt) {
  double acc = 0.0;
  const auto& l = llt.matrixLLT();
  for (int i = 0; i < l.rows(); ++i) acc += std::log(std::real(l(i, i)));
  return 2.0 * acc;
}

}  // namespace

double group_power(const std::vector<CMat>& precoders,
                   const std::vector<int>& indices) {
  double acc = 0.0;
  for (int i : indices) acc += precoders[i].squaredNorm();
  return acc;
}

CMat interference_covariance(const std::vector<CMat>& interferers,
                             double noise_var, int dim) {
  if (noise_var <= 0.0) throw ValidationError("noise variance must be > 0");
  CMat r = noise_var * CMat::Identity(dim, dim);
  for (const CMat& m : interferers) {
    if (m.rows() != dim)
      throw ValidationError("interferer row count does not match covariance dim");
    r.noalias() += m * m.adjoint();
  }
  symmetrize(r);
  return r;
}

CMat mmse_receive_filter(const CMat& desired, const CMat& cov) {
  if (desired.rows() != cov.rows())
    throw ValidationError("desired/covariance dimension mismatch");
  CMat total = cov;
  total.noalias() += desired * desired.adjoint();
  symmetrize(total);
  return cholesky_pd(total, "signal-plus-interference covariance")
      .solve(desired);
}

double stream_rate(const CMat& desired, const CMat& cov) {
  const auto llt = cholesky_pd(cov, "interference covariance");
  const CMat whitened = llt.solve(desired);
  CMat s = CMat::Identity(desired.cols(), desired.cols());
  s.noalias() += desired.adjoint() * whitened;
  symmetrize(s);
  return log_det_from_llt(cholesky_pd(s, "I + D* R^-1 D")) / kLog2;
}

double effective_sinr(double rate_bits) { return std::exp2(rate_bits) - 1.0; }

CMat mse_matrix(const CMat& desired, const CMat& cov, const CMat& filter) {
  if (desired.rows() != cov.rows() || filter.rows() != desired.rows() ||
      filter.cols() != desired.cols())
    throw ValidationError("mse_matrix dimension mismatch");
  CMat total = cov;
  total.noalias() += desired * desired.adjoint();
  const CMat cross = filter.adjoint() * desired;
  CMat e = filter.adjoint() * total * filter;
  e -= cross;
  e -= cross.adjoint();
  e += CMat::Identity(desired.cols(), desired.cols());
  symmetrize(e);
  return e;
}

CMat mmse_error_matrix(const CMat& desired, const CMat& cov) {
  const auto llt = cholesky_pd(cov, "interference covariance");
  CMat s = CMat::Identity(desired.cols(), desired.cols());
  s.noalias() += desired.adjoint() * llt.solve(desired);
  symmetrize(s);
  return invert_pd(s);
}

CMat invert_pd(const CMat& m) {
  CMat sym = m;
  symmetrize(sym);
  Eigen::LLT<CMat> llt(sym);
  if (llt.info() != Eigen::Success) {
    sym += 1e-12 * CMat::Identity(m.rows(), m.cols());
    llt.compute(sym);
    if (llt.info() != Eigen::Success)
      throw NumericalError("invert_pd: matrix is singular");
  }
  CMat inv = llt.solve(CMat::Identity(m.rows(), m.cols()));
  symmetrize(inv);
  return inv;
}

FirstHopMetrics first_hop_metrics(const ChannelSet& ch, const Topology& topo,
                                  const std::vector<CMat>& hop1_precoders,
                                  double noise_var) {
  const int num_relays = topo.num_relays();
  FirstHopMetrics out;
  out.rate.resize(num_relays);
  out.sinr.resize(num_relays);
  out.mmse_error.resize(num_relays);
  std::vector<CMat> interferers;
  interferers.reserve(num_relays - 1);
  for (int k = 0; k < num_relays; ++k) {
    const CMat desired = ch.hop1[k][topo.tx_of_relay[k]] * hop1_precoders[k];
    interferers.clear();
    for (int m = 0; m < num_relays; ++m)
      if (m != k)
        interferers.push_back(ch.hop1[k][topo.tx_of_relay[m]] *
                              hop1_precoders[m]);
    const CMat cov = interference_covariance(
        interferers, noise_var, static_cast<int>(desired.rows()));
    out.rate[k] = stream_rate(desired, cov);
    out.sinr[k] = effective_sinr(out.rate[k]);
    out.mmse_error[k] = mmse_error_matrix(desired, cov);
  }
  return out;
}

SecondHopMetrics second_hop_metrics(const ChannelSet& ch, const Topology& topo,
                                    const std::vector<CMat>& hop2_precoders,
                                    double noise_var) {
  const int num_rx = topo.num_rx();
  SecondHopMetrics out;
  out.rx_rate.resize(num_rx);
  out.relay_sum_rate.assign(topo.num_relays(), 0.0);
  out.relay_sinr.resize(topo.num_relays());
  std::vector<CMat> interferers;
  interferers.reserve(num_rx - 1);
  for (int q = 0; q < num_rx; ++q) {
    const CMat desired = ch.hop2[q][topo.relay_of_rx[q]] * hop2_precoders[q];
    interferers.clear();
    for (int p = 0; p < num_rx; ++p)
      if (p != q)
        interferers.push_back(ch.hop2[q][topo.relay_of_rx[p]] *
                              hop2_precoders[p]);
    const CMat cov = interference_covariance(
        interferers, noise_var, static_cast<int>(desired.rows()));
    out.rx_rate[q] = stream_rate(desired, cov);
    out.relay_sum_rate[topo.relay_of_rx[q]] += out.rx_rate[q];
  }
  for (int k = 0; k < topo.num_relays(); ++k)
    out.relay_sinr[k] = effective_sinr(out.relay_sum_rate[k]);
  return out;
}

std::vector<double> allocate_first_hop_rates(
    double t, double first_hop_rate, const std::vector<double>& served_rates) {
  double total = 0.0;
  for (double r : served_rates) total += r;
  std::vector<double> beta(served_rates.size(), 0.0);
  if (total <= 0.0) return beta;  // limit of the proportional branch
  if (t * first_hop_rate >= (1.0 - t) * total) {
    for (std::size_t i = 0; i < beta.size(); ++i)
      beta[i] = (1.0 - t) * served_rates[i];
  } else {
    const double budget = t * first_hop_rate;
    for (std::size_t i = 0; i < beta.size(); ++i)
      beta[i] = budget * served_rates[i] / total;
  }
  return beta;
}

EndToEndRates end_to_end(double t, const std::vector<double>& first_hop_rates,
                         const std::vector<double>& second_hop_sum_rates) {
  EndToEndRates out;
  out.per_relay.resize(first_hop_rates.size());
  for (std::size_t k = 0; k < first_hop_rates.size(); ++k) {
    out.per_relay[k] = std::min(t * first_hop_rates[k],
                                (1.0 - t) * second_hop_sum_rates[k]);
    out.sum += out.per_relay[k];
  }
  return out;
}

RateReport compute_rate_report(const ChannelSet& ch, const Topology& topo,
                               const SystemSpec& spec,
                               const PrecoderSet& precoders) {
  RateReport report;
  const auto hop1 =
      first_hop_metrics(ch, topo, precoders.hop1, spec.noise_var_relay);
  const auto hop2 =
      second_hop_metrics(ch, topo, precoders.hop2, spec.noise_var_rx);
  report.first_hop_rate = hop1.rate;
  report.first_hop_sinr = hop1.sinr;
  report.rx_rate = hop2.rx_rate;
  report.relay_sum_rate = hop2.relay_sum_rate;
  report.second_hop_sinr = hop2.relay_sinr;
  report.beta.resize(topo.num_rx());
  for (int k = 0; k < topo.num_relays(); ++k) {
    std::vector<double> served;
    for (int q : topo.rx_of_relay[k]) served.push_back(hop2.rx_rate[q]);
    const auto beta =
        allocate_first_hop_rates(spec.timeshare, hop1.rate[k], served);
    for (std::size_t i = 0; i < beta.size(); ++i)
      report.beta[topo.rx_of_relay[k][i]] = beta[i];
  }
  const auto e2e =
      end_to_end(spec.timeshare, hop1.rate, hop2.relay_sum_rate);
  report.end_to_end_rate = e2e.per_relay;
  report.sum_rate = e2e.sum;
  return report;
}

}  // namespace relaybc
