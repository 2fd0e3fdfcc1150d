#include "relaybc/first_hop.hpp"

#include <cmath>
#include <limits>

#include "group_precoder.hpp"

namespace relaybc {
namespace {

constexpr double kLog2 = 0.6931471805599453;

void project_feasible(const Topology& topo, double budget,
                      std::vector<CMat>& precoders) {
  for (int j = 0; j < topo.num_tx(); ++j) {
    const double power = group_power(precoders, topo.relays_of_tx[j]);
    if (power > budget && power > 0.0) {
      const double scale = std::sqrt(budget / power);
      for (int k : topo.relays_of_tx[j]) precoders[k] *= scale;
    }
  }
}

double real_det(const CMat& m) { return std::real(m.determinant()); }

}  // namespace

double rate_matching_sinr(double xi2_bar, double t) {
  return std::pow(1.0 + xi2_bar, (1.0 - t) / t) - 1.0;
}

double utility_u(double xi1, double t, double eta) {
  if (xi1 <= eta) return t * std::log2(1.0 + xi1);
  return t * std::log2(1.0 + eta) +
         (t / kLog2) * (std::exp(1.0 - (1.0 + eta) / (1.0 + xi1)) - 1.0);
}

double g_value(double det_e, double eta) {
  if (det_e <= 0.0) throw ValidationError("g_value: det(E) must be positive");
  if (std::isinf(eta) || det_e >= 1.0 / (1.0 + eta)) return std::log(det_e);
  return -std::log1p(eta) - std::exp(1.0 - (1.0 + eta) * det_e) + 1.0;
}

double weight_alpha(double x, double eta) {
  if (std::isinf(eta)) return 1.0;
  const double scaled = (1.0 + eta) * x;
  if (scaled >= 1.0) return 1.0;
  return scaled * std::exp(1.0 - scaled);
}

CMat gradient_weight(const CMat& mmse_error, double eta) {
  const double det = real_det(mmse_error);
  if (det <= 0.0)
    throw NumericalError("gradient_weight: MSE matrix is singular");
  return weight_alpha(det, eta) * invert_pd(mmse_error);
}

std::vector<CMat> random_first_hop_init(const Topology& topo,
                                        const SystemSpec& spec, Rng& rng,
                                        bool explore) {
  std::vector<CMat> precoders(topo.num_relays());
  for (int k = 0; k < topo.num_relays(); ++k)
    precoders[k] =
        rng.complex_gaussian_matrix(spec.tx_antennas, spec.streams_hop1);
  // Each precoder starts at an equal share of its transmitter's budget, so
  // every link begins alive at full transmit power. Exploration restarts
  // additionally randomize each power level: on single-antenna links the
  // magnitude is the only degree of freedom that distinguishes restarts,
  // so without it every restart would land in the same basin.
  for (int j = 0; j < topo.num_tx(); ++j) {
    const double share = spec.tx_power / topo.relays_of_tx[j].size();
    for (int k : topo.relays_of_tx[j]) {
      const double p = precoders[k].squaredNorm();
      if (p <= 0.0) continue;
      const double level = explore ? share * rng.uniform_pos() : share;
      precoders[k] *= std::sqrt(level / p);
    }
  }
  return precoders;
}

std::vector<CMat> first_hop_precoder_update(const ChannelSet& ch,
                                            const Topology& topo,
                                            const std::vector<CMat>& filters,
                                            const std::vector<CMat>& weights,
                                            double tx_power) {
  std::vector<CMat> next(topo.num_relays());
  std::vector<CMat> wvw(topo.num_relays());
  for (int m = 0; m < topo.num_relays(); ++m)
    wvw[m] = filters[m] * weights[m] * filters[m].adjoint();

  for (int j = 0; j < topo.num_tx(); ++j) {
    const int dim = static_cast<int>(ch.hop1[0][j].cols());
    CMat quad = CMat::Zero(dim, dim);
    for (int m = 0; m < topo.num_relays(); ++m)
      quad.noalias() += ch.hop1[m][j].adjoint() * wvw[m] * ch.hop1[m][j];
    std::vector<CMat> targets;
    targets.reserve(topo.relays_of_tx[j].size());
    for (int k : topo.relays_of_tx[j])
      targets.push_back(ch.hop1[k][j].adjoint() * filters[k] * weights[k]);
    auto solved = detail::solve_group_precoders(quad, targets, tx_power);
    for (std::size_t i = 0; i < targets.size(); ++i)
      next[topo.relays_of_tx[j][i]] = std::move(solved.precoders[i]);
  }
  return next;
}

FirstHopResult solve_first_hop(const ChannelSet& ch, const Topology& topo,
                               const SystemSpec& spec,
                               const std::vector<double>& eta,
                               std::vector<CMat> init,
                               const SolverOptions& options) {
  if (static_cast<int>(eta.size()) != topo.num_relays())
    throw ValidationError("eta size does not match relay count");
  project_feasible(topo, spec.tx_power, init);

  FirstHopResult result;
  std::vector<CMat> precoders = std::move(init);
  std::vector<CMat> best = precoders;
  double best_obj = -std::numeric_limits<double>::infinity();
  double prev_obj = std::nan("");
  double max_delta = 0.0;

  const int num_relays = topo.num_relays();
  const int d1 = spec.streams_hop1;
  std::vector<CMat> filters(num_relays), weights(num_relays);
  const double t = spec.timeshare;

  for (int it = 1; it <= options.max_iter_hop; ++it) {
    double objective = 0.0;
    for (int k = 0; k < num_relays; ++k) {
      const CMat desired = ch.hop1[k][topo.tx_of_relay[k]] * precoders[k];
      CMat cov = spec.noise_var_relay *
                 CMat::Identity(desired.rows(), desired.rows());
      for (int m = 0; m < num_relays; ++m) {
        if (m == k) continue;
        const CMat eff = ch.hop1[k][topo.tx_of_relay[m]] * precoders[m];
        cov.noalias() += eff * eff.adjoint();
      }
      cov = 0.5 * (cov + cov.adjoint()).eval();
      Eigen::LLT<CMat> llt(cov);
      if (llt.info() != Eigen::Success)
        throw NumericalError("first-hop covariance not PD");
      const CMat whitened = llt.solve(desired);
      CMat s = CMat::Identity(d1, d1);
      s.noalias() += desired.adjoint() * whitened;
      s = 0.5 * (s + s.adjoint()).eval();
      Eigen::LLT<CMat> llt_s(s);
      if (llt_s.info() != Eigen::Success)
        throw NumericalError("first-hop MSE matrix not PD");
      double logdet = 0.0;
      for (int i = 0; i < d1; ++i)
        logdet += std::log(std::real(llt_s.matrixLLT()(i, i)));
      logdet *= 2.0;  // log det(I + D* R^-1 D) = -log det(E0)
      const double xi1 = std::expm1(logdet);
      objective += utility_u(xi1, t, eta[k]);

      // V = alpha(det E0) (E0)^{-1}; with E0 = S^{-1} this is alpha * S.
      const double det_e0 = std::exp(-logdet);
      filters[k] = whitened * llt_s.solve(CMat::Identity(d1, d1));
      weights[k] = weight_alpha(det_e0, eta[k]) * s;
    }

    result.trace.push_back({2, it, objective, max_delta});
    if (objective > best_obj) {
      best_obj = objective;
      best = precoders;
    }
    if (std::abs(objective - prev_obj) < options.tol) {
      result.converged = true;
      break;
    }
    prev_obj = objective;

    auto next =
        first_hop_precoder_update(ch, topo, filters, weights, spec.tx_power);
    max_delta = 0.0;
    for (int k = 0; k < num_relays; ++k)
      max_delta = std::max(max_delta, (next[k] - precoders[k]).norm());
    precoders = std::move(next);
  }

  result.precoders = std::move(best);
  result.objective = best_obj;
  return result;
}

}  // namespace relaybc
