#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "relaybc/second_hop.hpp"

using namespace relaybc;

namespace {

CMat scalar(Cplx v) {
  CMat m(1, 1);
  m(0, 0) = v;
  return m;
}

SystemSpec single_link_spec() {
  SystemSpec s;
  s.num_tx = s.num_relays = s.num_rx = 1;
  return s;
}

ChannelSet unit_scalar_channels() {
  ChannelSet ch;
  ch.hop1 = {{scalar(1.0)}};
  ch.hop2 = {{scalar(1.0)}};
  return ch;
}

}  // namespace

TEST_CASE("filter update on the unit scalar link") {
  const SystemSpec spec = single_link_spec();
  const Topology topo = build_topology(spec);
  const ChannelSet ch = unit_scalar_channels();
  const auto w = second_hop_filter_update(ch, topo, {scalar(1.0)}, 1.0);
  REQUIRE(std::abs(w[0](0, 0) - Cplx(0.5)) < 1e-14);
  const auto wz = second_hop_filter_update(ch, topo, {scalar(0.0)}, 1.0);
  REQUIRE(wz[0].isZero(1e-14));
}

TEST_CASE("filter update agrees with the rate-metrics primitive") {
  SystemSpec spec;
  spec.num_tx = 1;
  spec.num_relays = 2;
  spec.num_rx = 4;
  spec.relay_antennas = 3;
  spec.rx_antennas = 2;
  const Topology topo = build_topology(spec);
  const ChannelSet ch = sample_channels(topo, spec, 5);
  Rng rng(6);
  std::vector<CMat> f;
  for (int q = 0; q < 4; ++q) f.push_back(rng.complex_gaussian_matrix(3, 1));
  const auto filters = second_hop_filter_update(ch, topo, f, 1.0);
  for (int q = 0; q < 4; ++q) {
    const CMat desired = ch.hop2[q][topo.relay_of_rx[q]] * f[q];
    std::vector<CMat> interferers;
    for (int p = 0; p < 4; ++p)
      if (p != q) interferers.push_back(ch.hop2[q][topo.relay_of_rx[p]] * f[p]);
    const CMat cov = interference_covariance(interferers, 1.0, 2);
    REQUIRE((filters[q] - mmse_receive_filter(desired, cov)).norm() < 1e-12);
  }
}

TEST_CASE("weight update inverts the error matrices") {
  const auto w1 = mse_weight_update({scalar(0.5)});
  REQUIRE(std::abs(w1[0](0, 0) - Cplx(2.0)) < 1e-12);
  const auto w2 = mse_weight_update({CMat::Identity(3, 3)});
  REQUIRE(w2[0].isApprox(CMat::Identity(3, 3), 1e-12));
  Rng rng(9);
  const CMat a = rng.complex_gaussian_matrix(3, 3);
  const CMat e = a * a.adjoint() + 0.1 * CMat::Identity(3, 3);
  const auto w3 = mse_weight_update({e});
  REQUIRE((w3[0] * e - CMat::Identity(3, 3)).norm() < 1e-10);
}

TEST_CASE("precoder update enforces the power constraint") {
  const SystemSpec spec = single_link_spec();
  const Topology topo = build_topology(spec);
  const ChannelSet ch = unit_scalar_channels();
  {
    const auto f = second_hop_precoder_update(ch, topo, {scalar(1.0)},
                                              {scalar(1.0)}, 1.0);
    REQUIRE(std::abs(f[0](0, 0) - Cplx(1.0)) < 1e-7);
  }
  {
    // power(lambda) = (1+lambda)^{-2} = 0.25 at lambda = 1, so F = 0.5.
    const auto f = second_hop_precoder_update(ch, topo, {scalar(1.0)},
                                              {scalar(1.0)}, 0.25);
    REQUIRE(std::abs(f[0](0, 0) - Cplx(0.5)) < 1e-7);
  }
}

TEST_CASE("precoder update feasible on random instances") {
  SystemSpec spec;
  spec.num_tx = 1;
  spec.num_relays = 2;
  spec.num_rx = 4;
  spec.relay_antennas = 2;
  spec.rx_antennas = 2;
  spec.relay_power = 1.7;
  const Topology topo = build_topology(spec);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ChannelSet ch = sample_channels(topo, spec, seed);
    Rng rng(seed + 100);
    std::vector<CMat> filters, weights;
    for (int q = 0; q < 4; ++q) {
      filters.push_back(rng.complex_gaussian_matrix(2, 1));
      const CMat a = rng.complex_gaussian_matrix(1, 1);
      weights.push_back(a * a.adjoint() + 0.2 * CMat::Identity(1, 1));
    }
    const auto next = second_hop_precoder_update(ch, topo, filters, weights,
                                                 spec.relay_power);
    for (int m = 0; m < 2; ++m) {
      REQUIRE(group_power(next, topo.rx_of_relay[m]) <=
              spec.relay_power * (1.0 + 1e-6));
    }
  }
}

TEST_CASE("solver on the unit scalar link") {
  const SystemSpec spec = single_link_spec();
  const Topology topo = build_topology(spec);
  const ChannelSet ch = unit_scalar_channels();
  Rng rng(2);
  auto init = random_second_hop_init(topo, spec, rng);
  const auto result = solve_second_hop(ch, topo, spec, init);
  REQUIRE(result.converged);
  REQUIRE(std::abs(result.sum_rate - 1.0) < 1e-5);
  REQUIRE(std::abs(result.relay_sinr[0] - 1.0) < 1e-4);
}

TEST_CASE("solver finds matched beamforming on a rank-one link") {
  SystemSpec spec;
  spec.num_tx = spec.num_relays = spec.num_rx = 1;
  spec.relay_antennas = 2;
  const Topology topo = build_topology(spec);
  const ChannelSet ch = sample_channels(topo, spec, 31);
  Rng rng(32);
  const auto result =
      solve_second_hop(ch, topo, spec, random_second_hop_init(topo, spec, rng));
  const double expected =
      std::log2(1.0 + spec.relay_power * ch.hop2[0][0].squaredNorm());
  REQUIRE(std::abs(result.sum_rate - expected) < 1e-4);
}

TEST_CASE("solver trace is monotone and init power holds") {
  SystemSpec spec;
  spec.num_tx = 2;
  spec.num_relays = 2;
  spec.num_rx = 4;
  spec.relay_antennas = 2;
  spec.rx_antennas = 2;
  spec.relay_power = 10.0;
  const Topology topo = build_topology(spec);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ChannelSet ch = sample_channels(topo, spec, seed);
    Rng rng(seed);
    auto init = random_second_hop_init(topo, spec, rng);
    for (int m = 0; m < 2; ++m) {
      const double p = group_power(init, topo.rx_of_relay[m]);
      REQUIRE(p > 0.0);
      REQUIRE(p <= spec.relay_power * (1.0 + 1e-9));
    }
    const auto result = solve_second_hop(ch, topo, spec, init);
    for (std::size_t i = 1; i < result.trace.size(); ++i)
      REQUIRE(result.trace[i].objective_bits >=
              result.trace[i - 1].objective_bits - 1e-8);
    REQUIRE(result.sum_rate >= result.trace.front().objective_bits - 1e-8);
    for (int m = 0; m < 2; ++m)
      REQUIRE(group_power(result.precoders, topo.rx_of_relay[m]) <=
              spec.relay_power * (1.0 + 1e-6));
  }
}
