#pragma once

#include <cstdint>
#include <random>

namespace mermin {

// Generator for restart `index` of a run seeded with `seed`. Independent of
// how restarts are scheduled, so parallel and serial runs agree.
inline std::mt19937_64 restart_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace mermin
