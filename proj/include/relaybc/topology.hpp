#pragma once

#include <vector>

#include "relaybc/system_spec.hpp"

namespace relaybc {

/// Node associations. relay_of_rx is the map receiver -> serving relay
/// (chi), tx_of_relay the map relay -> owning transmitter (mu). The inverse
/// multimaps partition receivers by relay and relays by transmitter.
/// Indexing is 0-based throughout.
struct Topology {
  std::vector<int> relay_of_rx;                // chi, size K_R
  std::vector<int> tx_of_relay;                // mu, size K_X
  std::vector<std::vector<int>> rx_of_relay;   // size K_X
  std::vector<std::vector<int>> relays_of_tx;  // size K_T

  int num_relays() const { return static_cast<int>(tx_of_relay.size()); }
  int num_rx() const { return static_cast<int>(relay_of_rx.size()); }
  int num_tx() const { return static_cast<int>(relays_of_tx.size()); }
};

/// Symmetric block assignment: relay k serves receivers
/// [k*(K_R/K_X), (k+1)*(K_R/K_X)), transmitter j owns relays
/// [j*(K_X/K_T), (j+1)*(K_X/K_T)). Deterministic.
Topology build_topology(const SystemSpec& spec);

}  // namespace relaybc
