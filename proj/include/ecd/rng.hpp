#pragma once

// Portable seeded random streams.
//
// Engine: std::mt19937_64, whose output sequence is fixed by the C++
// standard. The standard distributions are implementation-defined, so the
// transforms below are spelled out:
//   uniform01  = (engine() >> 11) * 2^-53, a value in [0, 1)
//   uniform    = a + (b - a) * uniform01
//   bernoulli  = uniform01 < p
//   normal     = Marsaglia polar method; both variates of a pair are used,
//                the second one cached for the next call
// Stream splitting: stream k of base seed s is seeded with
// splitmix64(s + splitmix64(k + 1)).

#include <cmath>
#include <cstdint>
#include <random>

namespace ecd {

/// One SplitMix64 step (Steele, Lea, Flood) applied to `x`.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_stream_seed(std::uint64_t base_seed, std::uint64_t stream) noexcept {
  return splitmix64(base_seed + splitmix64(stream + 1));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng stream(std::uint64_t base_seed, std::uint64_t index) {
    return Rng(derive_stream_seed(base_seed, index));
  }

  std::uint64_t next_u64() { return engine_(); }

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

  double standard_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * scale;
    has_spare_ = true;
    return u * scale;
  }

  double normal(double mean, double sigma) { return mean + sigma * standard_normal(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ecd
