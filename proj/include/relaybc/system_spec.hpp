#pragma once

#include <string>

#include "relaybc/types.hpp"

namespace relaybc {

/// Symmetric system description. Counts follow the notation
/// (N_T^K_T x N_X^K_X x N_R^K_R, d1 x d2): K_T transmitters with N_T
/// antennas each, K_X relays, K_R receivers, d1 streams per first-hop link
/// and d2 per receiver. Powers are linear (not dB).
struct SystemSpec {
  int num_tx = 1;          // K_T
  int num_relays = 1;      // K_X
  int num_rx = 1;          // K_R
  int tx_antennas = 1;     // N_T
  int relay_antennas = 1;  // N_X
  int rx_antennas = 1;     // N_R
  int streams_hop1 = 1;    // d1
  int streams_hop2 = 1;    // d2

  double timeshare = 0.5;  // fraction of the frame used by hop 1
  double tx_power = 1.0;   // per-transmitter sum power budget
  double relay_power = 1.0;
  double noise_var_relay = 1.0;
  double noise_var_rx = 1.0;

  int relays_per_tx() const { return num_relays / num_tx; }
  int rx_per_relay() const { return num_rx / num_relays; }
};

/// Throws ValidationError listing every violated invariant.
void validate(const SystemSpec& spec);

/// Parses "(A^a x B^b x C^c, d1xd2)". Defaults: t = 0.5, unit noise and
/// power. Throws ParseError on syntax errors, ValidationError on
/// divisibility violations.
SystemSpec parse_system_spec(const std::string& text);

/// Canonical form, the identity round-trip partner of parse_system_spec.
std::string format_system_spec(const SystemSpec& spec);

}  // namespace relaybc
