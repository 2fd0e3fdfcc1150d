#include "relaybc/channels.hpp"

#include "relaybc/rng.hpp"

namespace relaybc {

ChannelSet sample_channels(const Topology& topo, const SystemSpec& spec,
                           std::uint64_t seed) {
  Rng rng(seed);
  ChannelSet ch;
  ch.hop1.resize(topo.num_relays());
  for (int m = 0; m < topo.num_relays(); ++m) {
    ch.hop1[m].reserve(topo.num_tx());
    for (int j = 0; j < topo.num_tx(); ++j)
      ch.hop1[m].push_back(
          rng.complex_gaussian_matrix(spec.relay_antennas, spec.tx_antennas));
  }
  ch.hop2.resize(topo.num_rx());
  for (int q = 0; q < topo.num_rx(); ++q) {
    ch.hop2[q].reserve(topo.num_relays());
    for (int m = 0; m < topo.num_relays(); ++m)
      ch.hop2[q].push_back(
          rng.complex_gaussian_matrix(spec.rx_antennas, spec.relay_antennas));
  }
  return ch;
}

}  // namespace relaybc
