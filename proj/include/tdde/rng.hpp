#pragma once

#include <cmath>
#include <cstdint>

namespace tdde {

// Deterministic counter-based generator (SplitMix64 core). Streams derived
// from the same seed but different stream ids are statistically independent,
// so each Markov chain / worker can own its own Rng without coordination.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    state_ = mix(mix(seed + 0x9e3779b97f4a7c15ULL) ^ mix(stream * 0xbf58476d1ce4e5b9ULL + 0x94d049bb133111ebULL));
    has_spare_ = false;
    spare_ = 0.0;
  }

  // Independent stream sharing this generator's seed material.
  Rng split(std::uint64_t stream) const {
    Rng r(0);
    r.state_ = mix(state_ ^ mix(stream + 0x9e3779b97f4a7c15ULL));
    r.has_spare_ = false;
    return r;
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  // Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) {
    return next_u64() % n;  // modulo bias negligible for n << 2^64
  }

  // Standard normal via Box-Muller; explicit implementation keeps the draw
  // sequence identical across platforms.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  bool has_spare_;
  double spare_;
};

}  // namespace tdde
