#pragma once

#include <cstdint>

namespace memmo {

/// Deterministic pseudo-random generator used everywhere a seed appears in
/// the public API. Wraps splitmix64 so that streams are reproducible across
/// platforms and standard-library implementations (std::uniform_*_distribution
/// is implementation-defined and would break bit-identical reruns).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi]; lo == hi collapses to the point.
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  /// Standard normal via Box-Muller (one value per call, cached pair dropped
  /// to keep the stream position simple).
  double normal();

  /// Derives an independent stream for a (seed, index) pair, so per-sample
  /// work can run in any order and still reproduce serial output.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t index);

 private:
  std::uint64_t state_;
};

}  // namespace memmo
