#pragma once

#include <vector>

#include "relaybc/types.hpp"

namespace relaybc::detail {

// Solves min sum_i tr(V_i E_i) over the precoders of one power group:
// F_i(lambda) = (A + lambda I)^{-1} C_i with a single multiplier shared by
// the group, lambda chosen by complementary slackness on
// sum_i ||F_i(lambda)||_F^2 <= budget. A must be Hermitian PSD. Group
// power is strictly decreasing in lambda, so the bracket [0, hi] found by
// doubling always contains the root; bisection stops at relative power
// error 1e-8 or 200 iterations.
struct GroupPrecoderResult {
  std::vector<CMat> precoders;
  double lambda = 0.0;
};

GroupPrecoderResult solve_group_precoders(const CMat& quadratic,
                                          const std::vector<CMat>& targets,
                                          double budget);

}  // namespace relaybc::detail
