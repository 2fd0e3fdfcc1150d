#include "relaybc/second_hop.hpp"

#include <cmath>

#include "group_precoder.hpp"

namespace relaybc {
namespace {

// Scales each relay's precoder group down to its power budget if violated.
void project_feasible(const Topology& topo, double budget,
                      std::vector<CMat>& precoders) {
  for (int m = 0; m < topo.num_relays(); ++m) {
    const double power = group_power(precoders, topo.rx_of_relay[m]);
    if (power > budget && power > 0.0) {
      const double scale = std::sqrt(budget / power);
      for (int q : topo.rx_of_relay[m]) precoders[q] *= scale;
    }
  }
}

}  // namespace

std::vector<CMat> random_second_hop_init(const Topology& topo,
                                         const SystemSpec& spec, Rng& rng,
                                         bool explore) {
  std::vector<CMat> precoders(topo.num_rx());
  for (int q = 0; q < topo.num_rx(); ++q)
    precoders[q] =
        rng.complex_gaussian_matrix(spec.relay_antennas, spec.streams_hop2);
  // Each precoder starts at an equal share of its relay's budget, so every
  // served receiver begins active at full relay power. Exploration restarts
  // additionally randomize each power level: on single-antenna links the
  // magnitude is the only degree of freedom that distinguishes restarts,
  // so without it every restart would land in the same basin.
  for (int m = 0; m < topo.num_relays(); ++m) {
    const auto& served = topo.rx_of_relay[m];
    if (served.empty()) continue;
    const double share = spec.relay_power / served.size();
    for (int q : served) {
      const double p = precoders[q].squaredNorm();
      if (p <= 0.0) continue;
      const double level = explore ? share * rng.uniform_pos() : share;
      precoders[q] *= std::sqrt(level / p);
    }
  }
  return precoders;
}

std::vector<CMat> second_hop_filter_update(const ChannelSet& ch,
                                           const Topology& topo,
                                           const std::vector<CMat>& precoders,
                                           double noise_var) {
  std::vector<CMat> filters(topo.num_rx());
  std::vector<CMat> interferers;
  for (int q = 0; q < topo.num_rx(); ++q) {
    const CMat desired = ch.hop2[q][topo.relay_of_rx[q]] * precoders[q];
    interferers.clear();
    for (int p = 0; p < topo.num_rx(); ++p)
      if (p != q)
        interferers.push_back(ch.hop2[q][topo.relay_of_rx[p]] * precoders[p]);
    const CMat cov = interference_covariance(
        interferers, noise_var, static_cast<int>(desired.rows()));
    filters[q] = mmse_receive_filter(desired, cov);
  }
  return filters;
}

std::vector<CMat> mse_weight_update(const std::vector<CMat>& errors) {
  std::vector<CMat> weights;
  weights.reserve(errors.size());
  for (const CMat& e : errors) weights.push_back(invert_pd(e));
  return weights;
}

std::vector<CMat> second_hop_precoder_update(const ChannelSet& ch,
                                             const Topology& topo,
                                             const std::vector<CMat>& filters,
                                             const std::vector<CMat>& weights,
                                             double relay_power) {
  std::vector<CMat> next(topo.num_rx());
  // Per-receiver weighted filter outer products, reused across relays.
  std::vector<CMat> wuw(topo.num_rx());
  for (int p = 0; p < topo.num_rx(); ++p)
    wuw[p] = filters[p] * weights[p] * filters[p].adjoint();

  for (int m = 0; m < topo.num_relays(); ++m) {
    const int dim = static_cast<int>(ch.hop2.empty() || ch.hop2[0].empty()
                                         ? 0
                                         : ch.hop2[0][m].cols());
    CMat quad = CMat::Zero(dim, dim);
    for (int p = 0; p < topo.num_rx(); ++p)
      quad.noalias() +=
          ch.hop2[p][m].adjoint() * wuw[p] * ch.hop2[p][m];
    std::vector<CMat> targets;
    targets.reserve(topo.rx_of_relay[m].size());
    for (int q : topo.rx_of_relay[m])
      targets.push_back(ch.hop2[q][m].adjoint() * filters[q] * weights[q]);
    auto solved = detail::solve_group_precoders(quad, targets, relay_power);
    for (std::size_t i = 0; i < targets.size(); ++i)
      next[topo.rx_of_relay[m][i]] = std::move(solved.precoders[i]);
  }
  return next;
}

SecondHopResult solve_second_hop(const ChannelSet& ch, const Topology& topo,
                                 const SystemSpec& spec,
                                 std::vector<CMat> init,
                                 const SolverOptions& options) {
  project_feasible(topo, spec.relay_power, init);

  SecondHopResult result;
  std::vector<CMat> precoders = std::move(init);
  std::vector<CMat> best = precoders;
  double best_rate = -1.0;
  double prev_rate = std::nan("");
  double max_delta = 0.0;

  const int num_rx = topo.num_rx();
  const int d2 = spec.streams_hop2;
  std::vector<CMat> filters(num_rx), weights(num_rx);
  constexpr double kLog2 = 0.6931471805599453;

  for (int it = 1; it <= options.max_iter_hop; ++it) {
    // One factorization per receiver serves the rate, the MMSE filter
    // W = R^{-1} D (I + D^* R^{-1} D)^{-1}, and the weight U = I + D^* R^{-1} D.
    double sum_rate = 0.0;
    for (int q = 0; q < num_rx; ++q) {
      const CMat desired = ch.hop2[q][topo.relay_of_rx[q]] * precoders[q];
      CMat cov = spec.noise_var_rx *
                 CMat::Identity(desired.rows(), desired.rows());
      for (int p = 0; p < num_rx; ++p) {
        if (p == q) continue;
        const CMat eff = ch.hop2[q][topo.relay_of_rx[p]] * precoders[p];
        cov.noalias() += eff * eff.adjoint();
      }
      cov = 0.5 * (cov + cov.adjoint()).eval();
      Eigen::LLT<CMat> llt(cov);
      if (llt.info() != Eigen::Success)
        throw NumericalError("second-hop covariance not PD");
      const CMat whitened = llt.solve(desired);
      CMat s = CMat::Identity(d2, d2);
      s.noalias() += desired.adjoint() * whitened;
      s = 0.5 * (s + s.adjoint()).eval();
      Eigen::LLT<CMat> llt_s(s);
      if (llt_s.info() != Eigen::Success)
        throw NumericalError("second-hop MSE matrix not PD");
      double logdet = 0.0;
      for (int i = 0; i < d2; ++i)
        logdet += std::log(std::real(llt_s.matrixLLT()(i, i)));
      sum_rate += 2.0 * logdet / kLog2;
      weights[q] = s;
      filters[q] = whitened * llt_s.solve(CMat::Identity(d2, d2));
    }

    result.trace.push_back({1, it, sum_rate, max_delta});
    if (sum_rate > best_rate) {
      best_rate = sum_rate;
      best = precoders;
    }
    if (std::abs(sum_rate - prev_rate) < options.tol) {
      result.converged = true;
      break;
    }
    prev_rate = sum_rate;

    auto next = second_hop_precoder_update(ch, topo, filters, weights,
                                           spec.relay_power);
    max_delta = 0.0;
    for (int q = 0; q < num_rx; ++q)
      max_delta = std::max(max_delta, (next[q] - precoders[q]).norm());
    precoders = std::move(next);
  }

  result.precoders = std::move(best);
  auto metrics =
      second_hop_metrics(ch, topo, result.precoders, spec.noise_var_rx);
  result.rx_rate = metrics.rx_rate;
  result.relay_sum_rate = metrics.relay_sum_rate;
  result.relay_sinr = metrics.relay_sinr;
  result.sum_rate = 0.0;
  for (double r : metrics.rx_rate) result.sum_rate += r;
  return result;
}

}  // namespace relaybc
