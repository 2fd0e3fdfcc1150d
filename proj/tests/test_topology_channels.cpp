#include <catch2/catch_amalgamated.hpp>

#include "relaybc/channels.hpp"
#include "relaybc/rng.hpp"

using namespace relaybc;

namespace {

SystemSpec make_spec(int kt, int kx, int kr, int nt = 1, int nx = 1,
                     int nr = 1) {
  SystemSpec s;
  s.num_tx = kt;
  s.num_relays = kx;
  s.num_rx = kr;
  s.tx_antennas = nt;
  s.relay_antennas = nx;
  s.rx_antennas = nr;
  return s;
}

}  // namespace

TEST_CASE("block partition examples") {
  {
    const Topology t = build_topology(make_spec(1, 2, 4));
    REQUIRE(t.tx_of_relay == std::vector<int>{0, 0});
    REQUIRE(t.relay_of_rx == std::vector<int>{0, 0, 1, 1});
  }
  {
    const Topology t = build_topology(make_spec(3, 6, 12));
    REQUIRE(t.tx_of_relay == std::vector<int>{0, 0, 1, 1, 2, 2});
    REQUIRE(t.relay_of_rx ==
            std::vector<int>{0, 0, 1, 1, 2, 2, 3, 3, 4, 4, 5, 5});
  }
  {
    const Topology t = build_topology(make_spec(1, 1, 1));
    REQUIRE(t.tx_of_relay == std::vector<int>{0});
    REQUIRE(t.relay_of_rx == std::vector<int>{0});
  }
}

TEST_CASE("partition invariants over random valid counts") {
  Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const int kt = 1 + static_cast<int>(rng.next_u64() % 4);
    const int kx = kt * (1 + static_cast<int>(rng.next_u64() % 4));
    const int kr = kx * (1 + static_cast<int>(rng.next_u64() % 4));
    const Topology t = build_topology(make_spec(kt, kx, kr));

    // Inverse multimaps partition receivers by relay and relays by tx.
    std::vector<int> rx_seen(kr, 0), relay_seen(kx, 0);
    for (int m = 0; m < kx; ++m)
      for (int q : t.rx_of_relay[m]) {
        REQUIRE(t.relay_of_rx[q] == m);
        ++rx_seen[q];
      }
    for (int j = 0; j < kt; ++j)
      for (int k : t.relays_of_tx[j]) {
        REQUIRE(t.tx_of_relay[k] == j);
        ++relay_seen[k];
      }
    for (int c : rx_seen) REQUIRE(c == 1);
    for (int c : relay_seen) REQUIRE(c == 1);
  }
}

TEST_CASE("channel sampling is deterministic and well-shaped") {
  const SystemSpec spec = make_spec(2, 4, 8, 2, 3, 2);
  const Topology topo = build_topology(spec);
  const ChannelSet a = sample_channels(topo, spec, 1234);
  const ChannelSet b = sample_channels(topo, spec, 1234);
  const ChannelSet c = sample_channels(topo, spec, 1235);

  REQUIRE(a.hop1.size() == 4);
  REQUIRE(a.hop2.size() == 8);
  bool differs = false;
  for (int m = 0; m < 4; ++m)
    for (int j = 0; j < 2; ++j) {
      REQUIRE(a.hop1[m][j].rows() == 3);
      REQUIRE(a.hop1[m][j].cols() == 2);
      REQUIRE(a.hop1[m][j] == b.hop1[m][j]);
      if (a.hop1[m][j] != c.hop1[m][j]) differs = true;
    }
  for (int q = 0; q < 8; ++q)
    for (int m = 0; m < 4; ++m) {
      REQUIRE(a.hop2[q][m].rows() == 2);
      REQUIRE(a.hop2[q][m].cols() == 3);
      REQUIRE(a.hop2[q][m] == b.hop2[q][m]);
    }
  REQUIRE(differs);
}

TEST_CASE("channel entries have CN(0,1) sample moments") {
  const SystemSpec spec = make_spec(1, 1, 1, 50, 50, 1);
  const Topology topo = build_topology(spec);
  double mean_re = 0.0, mean_im = 0.0, var = 0.0;
  int n = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const ChannelSet ch = sample_channels(topo, spec, derive_seed(99, seed));
    const CMat& h = ch.hop1[0][0];
    for (int j = 0; j < h.cols(); ++j)
      for (int i = 0; i < h.rows(); ++i) {
        mean_re += h(i, j).real();
        mean_im += h(i, j).imag();
        var += std::norm(h(i, j));
        ++n;
      }
  }
  REQUIRE(n == 100000);
  REQUIRE(std::abs(mean_re / n) < 0.02);
  REQUIRE(std::abs(mean_im / n) < 0.02);
  REQUIRE(std::abs(var / n - 1.0) < 0.02);
}
