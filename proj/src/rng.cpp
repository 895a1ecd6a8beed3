#include "memmo/rng.hpp"

#include <cmath>

namespace memmo {

double Rng::normal() {
  // Box-Muller; u1 kept away from 0 so the log is finite.
  double u1 = 0.0;
  do {
    u1 = uniform01();
  } while (u1 <= 0.0);
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::uint64_t Rng::derive(std::uint64_t seed, std::uint64_t index) {
  Rng mixer(seed ^ (0x632be59bd9b4e019ULL * (index + 1)));
  return mixer.next_u64();
}

}  // namespace memmo
