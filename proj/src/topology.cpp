#include "relaybc/topology.hpp"

namespace relaybc {

Topology build_topology(const SystemSpec& spec) {
  validate(spec);
  Topology topo;
  topo.relay_of_rx.resize(spec.num_rx);
  topo.tx_of_relay.resize(spec.num_relays);
  topo.rx_of_relay.resize(spec.num_relays);
  topo.relays_of_tx.resize(spec.num_tx);

  const int rx_per_relay = spec.rx_per_relay();
  for (int q = 0; q < spec.num_rx; ++q) {
    const int relay = q / rx_per_relay;
    topo.relay_of_rx[q] = relay;
    topo.rx_of_relay[relay].push_back(q);
  }
  const int relays_per_tx = spec.relays_per_tx();
  for (int k = 0; k < spec.num_relays; ++k) {
    const int tx = k / relays_per_tx;
    topo.tx_of_relay[k] = tx;
    topo.relays_of_tx[tx].push_back(k);
  }
  return topo;
}

}  // namespace relaybc
