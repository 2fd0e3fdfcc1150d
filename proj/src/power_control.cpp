#include "relaybc/power_control.hpp"

#include <cmath>

namespace relaybc {
namespace {

constexpr int kMaxBisection = 200;

double real_det(const CMat& m) { return std::real(m.determinant()); }

}  // namespace

PowerState decompose_precoders(const std::vector<CMat>& hop1_precoders,
                               const std::vector<double>& eta) {
  PowerState state;
  state.eta = eta;
  for (const CMat& f : hop1_precoders) {
    const double norm = f.norm();
    if (norm > 0.0) {
      state.shapes.push_back(f / norm);
      state.power.push_back(norm * norm);
      state.zero_flag.push_back(false);
    } else {
      state.shapes.push_back(CMat::Zero(f.rows(), f.cols()));
      state.power.push_back(0.0);
      state.zero_flag.push_back(true);
    }
  }
  return state;
}

std::vector<CMat> assemble_precoders(const PowerState& state) {
  std::vector<CMat> precoders;
  precoders.reserve(state.shapes.size());
  for (std::size_t k = 0; k < state.shapes.size(); ++k)
    precoders.push_back(std::sqrt(state.power[k]) * state.shapes[k]);
  return precoders;
}

PowerControlProblem::PowerControlProblem(const ChannelSet& ch,
                                         const Topology& topo,
                                         const SystemSpec& spec,
                                         const std::vector<CMat>& shapes)
    : noise_var_(spec.noise_var_relay),
      timeshare_(spec.timeshare),
      streams_(spec.streams_hop1) {
  const int num_relays = topo.num_relays();
  eff_.resize(num_relays);
  for (int k = 0; k < num_relays; ++k) {
    eff_[k].reserve(num_relays);
    for (int m = 0; m < num_relays; ++m)
      eff_[k].push_back(ch.hop1[k][topo.tx_of_relay[m]] * shapes[m]);
  }
}

CMat PowerControlProblem::signal_quadratic(const std::vector<double>& power,
                                           int k) const {
  const int num_relays = static_cast<int>(eff_.size());
  const int dim = static_cast<int>(eff_[k][k].rows());
  CMat cov = noise_var_ * CMat::Identity(dim, dim);
  for (int m = 0; m < num_relays; ++m) {
    if (m == k) continue;
    cov.noalias() += power[m] * (eff_[k][m] * eff_[k][m].adjoint());
  }
  cov = 0.5 * (cov + cov.adjoint()).eval();
  Eigen::LLT<CMat> llt(cov);
  if (llt.info() != Eigen::Success)
    throw NumericalError("power control: covariance not PD");
  CMat quad = eff_[k][k].adjoint() * llt.solve(eff_[k][k]);
  quad = 0.5 * (quad + quad.adjoint()).eval();
  return quad;
}

double PowerControlProblem::powered_sinr(const std::vector<double>& power,
                                         int k) const {
  const CMat quad = signal_quadratic(power, k);
  const CMat inner =
      CMat::Identity(streams_, streams_) + power[k] * quad;
  return real_det(inner) - 1.0;
}

std::vector<double> PowerControlProblem::all_sinrs(
    const std::vector<double>& power) const {
  std::vector<double> sinrs(eff_.size());
  for (std::size_t k = 0; k < eff_.size(); ++k)
    sinrs[k] = powered_sinr(power, static_cast<int>(k));
  return sinrs;
}

double PowerControlProblem::rate_matching_power(
    const std::vector<double>& power, int k, double eta) const {
  const CMat quad = signal_quadratic(power, k);
  const auto sinr_at = [&](double phi) {
    const CMat inner = CMat::Identity(streams_, streams_) + phi * quad;
    return real_det(inner) - 1.0;
  };
  double lo = 0.0;
  double hi = power[k];
  if (sinr_at(hi) <= eta)
    throw NumericalError(
        "rate_matching_power: relay is not first-hop dominant");
  // Bisect down to machine precision so the matched rate loses nothing
  // measurable; the lower endpoint is returned, so the achieved SINR never
  // exceeds eta and a matched relay cannot re-enter the dominant set.
  for (int it = 0; it < kMaxBisection && hi - lo > 1e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (sinr_at(mid) <= eta ? lo : hi) = mid;
  }
  return lo;
}

LinkClassification classify_links(const PowerState& state,
                                  const std::vector<double>& sinrs,
                                  double delta) {
  LinkClassification cls;
  for (std::size_t k = 0; k < sinrs.size(); ++k) {
    if (sinrs[k] > state.eta[k] * (1.0 + delta))
      cls.first_hop_dominant.push_back(static_cast<int>(k));
    else if (sinrs[k] < state.eta[k] * (1.0 - delta))
      cls.second_hop_dominant.push_back(static_cast<int>(k));
  }
  return cls;
}

PowerState power_control_step(const PowerControlProblem& problem,
                              const PowerState& state) {
  const auto sinrs = problem.all_sinrs(state.power);
  const auto cls = classify_links(state, sinrs);
  PowerState next = state;
  // All members of A update simultaneously; each rate-matching power is
  // computed against the iteration-n powers of the others.
  for (int k : cls.first_hop_dominant)
    next.power[k] = problem.rate_matching_power(state.power, k, state.eta[k]);
  next.iteration = state.iteration + 1;
  return next;
}

PowerControlResult run_power_control(const PowerControlProblem& problem,
                                     PowerState state, int max_iter) {
  PowerControlResult result;
  const double t = problem.timeshare();
  const auto record = [&](const PowerState& s,
                          const std::vector<double>& sinrs, int iter,
                          double delta) {
    std::vector<double> rates(sinrs.size());
    double sum = 0.0;
    for (std::size_t k = 0; k < sinrs.size(); ++k) {
      rates[k] = std::min(t * std::log2(1.0 + sinrs[k]),
                          t * std::log2(1.0 + s.eta[k]));
      sum += rates[k];
    }
    result.trace.push_back({3, iter, sum, delta});
    result.power_history.push_back(s.power);
    result.rate_history.push_back(std::move(rates));
  };

  for (int n = 0; n <= max_iter; ++n) {
    const auto sinrs = problem.all_sinrs(state.power);
    const auto cls = classify_links(state, sinrs);
    double delta = 0.0;
    if (n > 0) {
      const auto& prev = result.power_history.back();
      for (std::size_t k = 0; k < prev.size(); ++k)
        delta = std::max(delta, prev[k] - state.power[k]);
    }
    record(state, sinrs, n, delta);
    if (cls.first_hop_dominant.empty()) {
      result.matched = true;
      break;
    }
    if (n == max_iter) break;
    state = power_control_step(problem, state);
    ++result.iterations;
  }
  result.state = std::move(state);
  return result;
}

}  // namespace relaybc
