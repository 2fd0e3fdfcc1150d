#pragma once

#include <cmath>
#include <cstdint>

#include "relaybc/types.hpp"

namespace relaybc {

/// splitmix64 finalizer. Used both for seed expansion and stream derivation.
inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stream-derivation rule: stream `index` of `master` is seeded with
/// splitmix64(splitmix64(master) ^ splitmix64(index + 1)). Independent
/// streams give bit-reproducible parallel Monte Carlo.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 1));
}

/// xoshiro256++ with Box-Muller Gaussian sampling. The generator and the
/// sampling path are fixed here so identical seeds give bit-identical draws
/// on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) word = splitmix64(s++);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform on (0, 1].
  double uniform_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via one Box-Muller pair; the sine branch is discarded.
  double gaussian() {
    const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
    return r * std::cos(2.0 * M_PI * uniform());
  }

  /// CN(0,1): real and imaginary parts each N(0, 1/2), from one pair.
  Cplx complex_gaussian() {
    const double r = std::sqrt(-std::log(uniform_pos()));
    const double phi = 2.0 * M_PI * uniform();
    return {r * std::cos(phi), r * std::sin(phi)};
  }

  /// Column-major fill, matching Eigen storage order.
  CMat complex_gaussian_matrix(int rows, int cols) {
    CMat m(rows, cols);
    for (int j = 0; j < cols; ++j)
      for (int i = 0; i < rows; ++i) m(i, j) = complex_gaussian();
    return m;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t state_[4];
};

}  // namespace relaybc
