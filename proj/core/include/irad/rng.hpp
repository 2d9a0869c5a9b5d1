#pragma once

#include <cstdint>
#include <random>

#include "irad/matrix.hpp"

namespace irad {

// Mixes two 64-bit values into a stream seed (splitmix64 finalizer). Used to
// derive independent, reproducible RNG streams from (run seed, stream id).
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

// Seeded random source with platform-independent double generation. All
// uniform/normal draws are built from raw mt19937_64 output so that results
// do not depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

  // Uniform in [0, n).
  std::size_t uniform_index(std::size_t n) {
    return static_cast<std::size_t>(next_u64() % n);
  }

  // Standard normal via Box-Muller (two uniform draws per sample).
  double normal() {
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
  }

  Matrix normal_matrix(std::size_t rows, std::size_t cols) {
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = normal();
    return m;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[uniform_index(i)]);
    }
  }

 private:
  static constexpr double two_pi = 6.283185307179586476925286766559;
  std::mt19937_64 engine_;
};

}  // namespace irad
