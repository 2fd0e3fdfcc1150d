#pragma once

#include <cstdint>
#include <vector>

#include "relaybc/topology.hpp"
#include "relaybc/types.hpp"

namespace relaybc {

/// One fading realization. hop1[m][j] is the N_X x N_T channel from
/// transmitter j into relay m; hop2[q][m] is the N_R x N_X channel from
/// relay m into receiver q. Entries are i.i.d. CN(0,1).
struct ChannelSet {
  std::vector<std::vector<CMat>> hop1;
  std::vector<std::vector<CMat>> hop2;
};

/// Deterministic given the seed: hop-1 matrices are drawn first in
/// (relay, transmitter) order, then hop-2 in (receiver, relay) order, each
/// matrix filled column-major.
ChannelSet sample_channels(const Topology& topo, const SystemSpec& spec,
                           std::uint64_t seed);

}  // namespace relaybc
