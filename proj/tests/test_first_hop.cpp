#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "relaybc/first_hop.hpp"

using namespace relaybc;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

CMat scalar(Cplx v) {
  CMat m(1, 1);
  m(0, 0) = v;
  return m;
}

}  // namespace

TEST_CASE("rate matching sinr") {
  REQUIRE(std::abs(rate_matching_sinr(3.0, 0.5) - 3.0) < 1e-12);
  REQUIRE(std::abs(rate_matching_sinr(3.0, 1.0 / 3.0) - 15.0) < 1e-10);
  REQUIRE(std::abs(rate_matching_sinr(8.0, 2.0 / 3.0) - 2.0) < 1e-12);
}

TEST_CASE("utility examples and the saturation limit") {
  REQUIRE(std::abs(utility_u(1.0, 0.5, 3.0) - 0.5) < 1e-12);
  REQUIRE(std::abs(utility_u(3.0, 0.5, 3.0) - 1.0) < 1e-12);
  // Continuity at eta from both sides.
  REQUIRE(std::abs(utility_u(3.0 - 1e-9, 0.5, 3.0) -
                   utility_u(3.0 + 1e-9, 0.5, 3.0)) < 1e-8);
  const double limit = 1.0 + (0.5 / std::log(2.0)) * (std::exp(1.0) - 1.0);
  REQUIRE(std::abs(utility_u(1e12, 0.5, 3.0) - limit) < 1e-6);
  // Infinite eta collapses to the plain normalized rate.
  REQUIRE(std::abs(utility_u(7.0, 0.5, kInf) - 0.5 * 3.0) < 1e-12);
}

TEST_CASE("utility never falls below the exact min-rate and gap is bounded") {
  Rng rng(17);
  for (int i = 0; i < 200; ++i) {
    const double t = 0.05 + 0.9 * rng.uniform();
    const double eta = std::pow(10.0, -1.0 + 3.0 * rng.uniform());
    const double xi = std::pow(10.0, -2.0 + 5.0 * rng.uniform());
    const double u = utility_u(xi, t, eta);
    const double exact =
        std::min(t * std::log2(1 + xi), t * std::log2(1 + eta));
    REQUIRE(u >= exact - 1e-12);
    REQUIRE(u - exact <= (std::exp(1.0) - 1.0) * t / std::log(2.0) + 1e-12);
    if (xi <= eta) REQUIRE(std::abs(u - exact) < 1e-12);
  }
}

TEST_CASE("g value examples and relation to the utility") {
  REQUIRE(g_value(1.0, 3.0) == 0.0);
  const double eta = 3.0;
  const double threshold = 1.0 / (1.0 + eta);
  REQUIRE(std::abs(g_value(threshold, eta) - (-std::log(1.0 + eta))) < 1e-12);
  const double expected = -std::log(4.0) - std::exp(0.5) + 1.0;
  REQUIRE(std::abs(g_value(0.125, eta) - expected) < 1e-12);
  REQUIRE_THROWS_AS(g_value(0.0, 1.0), ValidationError);
  // g(detE) = -(ln 2 / t) * u(1/detE - 1, t, eta) on both branches.
  Rng rng(23);
  for (int i = 0; i < 100; ++i) {
    const double t = 0.05 + 0.9 * rng.uniform();
    const double e = std::pow(10.0, -3.0 * rng.uniform());
    const double g = g_value(e, eta);
    const double u = utility_u(1.0 / e - 1.0, t, eta);
    REQUIRE(std::abs(g - (-(std::log(2.0) / t) * u)) <
            1e-10 * std::max(1.0, std::abs(g)));
  }
}

TEST_CASE("alpha weight examples") {
  REQUIRE(weight_alpha(0.5, 1.0) == 1.0);
  REQUIRE(weight_alpha(0.9, 1.0) == 1.0);
  REQUIRE(std::abs(weight_alpha(0.25, 3.0) - 1.0) < 1e-12);  // threshold
  REQUIRE(std::abs(weight_alpha(0.125, 3.0) - 0.5 * std::exp(0.5)) < 1e-12);
  REQUIRE(weight_alpha(0.01, kInf) == 1.0);
  // Continuity just below the threshold.
  REQUIRE(std::abs(weight_alpha(0.25 - 1e-10, 3.0) - 1.0) < 1e-8);
}

TEST_CASE("gradient weight scalar examples") {
  REQUIRE(std::abs(gradient_weight(scalar(0.75), 1.0)(0, 0) -
                   Cplx(1.0 / 0.75)) < 1e-10);
  REQUIRE(std::abs(gradient_weight(scalar(0.125), 3.0)(0, 0) -
                   Cplx(0.5 * std::exp(0.5) / 0.125)) < 1e-9);
  REQUIRE(gradient_weight(CMat::Identity(2, 2), 3.0)
              .isApprox(CMat::Identity(2, 2), 1e-10));
}

TEST_CASE("gradient weight matches finite differences of g(det E)") {
  Rng rng(29);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 1 + static_cast<int>(rng.next_u64() % 3);
    // Hermitian PD with determinant below 1 (an MSE matrix regime).
    CMat a = rng.complex_gaussian_matrix(d, d);
    CMat e = a * a.adjoint() + 0.3 * CMat::Identity(d, d);
    e /= (1.5 * std::pow(std::real(e.determinant()), 1.0 / d));
    const double eta = std::pow(10.0, -0.5 + 2.0 * rng.uniform());
    const CMat v = gradient_weight(e, eta);
    REQUIRE((v - v.adjoint()).norm() < 1e-10);
    Eigen::SelfAdjointEigenSolver<CMat> eig(v);
    REQUIRE(eig.eigenvalues().minCoeff() >= -1e-10);

    CMat dir = rng.complex_gaussian_matrix(d, d);
    dir = (0.5 * (dir + dir.adjoint())).eval();
    const double h = 1e-6;
    const double gp = g_value(std::real((e + h * dir).determinant()), eta);
    const double gm = g_value(std::real((e - h * dir).determinant()), eta);
    const double fd = (gp - gm) / (2.0 * h);
    const double analytic = std::real((v * dir).trace());
    REQUIRE(std::abs(fd - analytic) <=
            1e-5 * std::max(1.0, std::abs(analytic)));
  }
}

TEST_CASE("first-hop precoder update scalar examples") {
  SystemSpec spec;
  spec.num_tx = spec.num_relays = spec.num_rx = 1;
  const Topology topo = build_topology(spec);
  ChannelSet ch;
  ch.hop1 = {{scalar(1.0)}};
  ch.hop2 = {{scalar(1.0)}};
  {
    const auto f =
        first_hop_precoder_update(ch, topo, {scalar(1.0)}, {scalar(1.0)}, 1.0);
    REQUIRE(std::abs(f[0](0, 0) - Cplx(1.0)) < 1e-7);
  }
  {
    const auto f = first_hop_precoder_update(ch, topo, {scalar(1.0)},
                                             {scalar(1.0)}, 0.25);
    REQUIRE(std::abs(f[0](0, 0) - Cplx(0.5)) < 1e-7);
  }
}

TEST_CASE("one transmitter owning two symmetric relays shares the budget") {
  SystemSpec spec;
  spec.num_tx = 1;
  spec.num_relays = 2;
  spec.num_rx = 2;
  spec.tx_power = 1.0;
  const Topology topo = build_topology(spec);
  ChannelSet ch;
  ch.hop1 = {{scalar(1.0)}, {scalar(1.0)}};
  ch.hop2 = {{scalar(1.0), scalar(0.0)}, {scalar(0.0), scalar(1.0)}};
  const auto f = first_hop_precoder_update(
      ch, topo, {scalar(1.0), scalar(1.0)}, {scalar(1.0), scalar(1.0)}, 1.0);
  REQUIRE(std::abs(std::abs(f[0](0, 0)) - std::abs(f[1](0, 0))) < 1e-9);
  REQUIRE(group_power(f, topo.relays_of_tx[0]) <= 1.0 + 1e-6);
}

TEST_CASE("reducing the budget never raises the output power") {
  SystemSpec spec;
  spec.num_tx = 1;
  spec.num_relays = 2;
  spec.num_rx = 2;
  spec.tx_antennas = 2;
  spec.relay_antennas = 2;
  const Topology topo = build_topology(spec);
  const ChannelSet ch = sample_channels(topo, spec, 51);
  Rng rng(52);
  std::vector<CMat> filters, weights;
  for (int k = 0; k < 2; ++k) {
    filters.push_back(rng.complex_gaussian_matrix(2, 1));
    weights.push_back(CMat::Identity(1, 1));
  }
  double prev = 1e300;
  for (double p : {4.0, 2.0, 1.0, 0.5}) {
    const auto f = first_hop_precoder_update(ch, topo, filters, weights, p);
    const double power = group_power(f, topo.relays_of_tx[0]);
    REQUIRE(power <= p * (1.0 + 1e-6));
    REQUIRE(power <= prev + 1e-9);
    prev = power;
  }
}

TEST_CASE("solver saturates exactly at the rate match on the scalar link") {
  SystemSpec spec;
  spec.num_tx = spec.num_relays = spec.num_rx = 1;
  const Topology topo = build_topology(spec);
  ChannelSet ch;
  ch.hop1 = {{scalar(1.0)}};
  ch.hop2 = {{scalar(1.0)}};
  const auto result = solve_first_hop(ch, topo, spec, {1.0}, {scalar(0.3)});
  const auto metrics = first_hop_metrics(ch, topo, result.precoders, 1.0);
  // Full power is optimal: xi1 = 1 = eta, and u saturates right there.
  REQUIRE(std::abs(metrics.sinr[0] - 1.0) < 1e-4);
  REQUIRE(std::abs(result.objective - 0.5) < 1e-5);
}

TEST_CASE("solver trace is monotone within tolerance") {
  SystemSpec spec;
  spec.num_tx = 2;
  spec.num_relays = 4;
  spec.num_rx = 4;
  spec.tx_antennas = 2;
  spec.relay_antennas = 2;
  spec.tx_power = 10.0;
  const Topology topo = build_topology(spec);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ChannelSet ch = sample_channels(topo, spec, seed);
    Rng rng(seed + 1);
    auto init = random_first_hop_init(topo, spec, rng);
    const std::vector<double> eta(4, 2.0);
    const auto result = solve_first_hop(ch, topo, spec, eta, init);
    for (std::size_t i = 1; i < result.trace.size(); ++i)
      REQUIRE(result.trace[i].objective_bits >=
              result.trace[i - 1].objective_bits - 1e-8);
    for (int j = 0; j < 2; ++j)
      REQUIRE(group_power(result.precoders, topo.relays_of_tx[j]) <=
              spec.tx_power * (1.0 + 1e-6));
  }
}

TEST_CASE("huge eta approaches the infinite-eta path") {
  SystemSpec spec;
  spec.num_tx = 1;
  spec.num_relays = 2;
  spec.num_rx = 2;
  spec.tx_antennas = 2;
  spec.relay_antennas = 2;
  spec.tx_power = 4.0;
  const Topology topo = build_topology(spec);
  const ChannelSet ch = sample_channels(topo, spec, 61);
  Rng rng(62);
  auto init = random_first_hop_init(topo, spec, rng);
  const auto huge =
      solve_first_hop(ch, topo, spec, std::vector<double>(2, 1e12), init);
  const auto inf =
      solve_first_hop(ch, topo, spec, std::vector<double>(2, kInf), init);
  REQUIRE(std::abs(huge.objective - inf.objective) < 1e-6);
  for (int k = 0; k < 2; ++k)
    REQUIRE((huge.precoders[k] - inf.precoders[k]).norm() < 1e-4);
}
