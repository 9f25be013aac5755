#pragma once

#include <cstdint>
#include <random>

namespace qfern {

// std::uniform_*_distribution is implementation-defined, so seeded runs would
// not be reproducible across standard libraries. These two helpers are fully
// specified on top of the (portable) mt19937_64 stream.

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
}

inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  // unbiased via rejection
  std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

}  // namespace qfern
