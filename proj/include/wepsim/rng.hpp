#ifndef WEPSIM_RNG_HPP
#define WEPSIM_RNG_HPP

#include <cmath>
#include <cstdint>

#include "wepsim/constants.hpp"

namespace wepsim {

// Splittable deterministic noise source. Every shot owns an independent
// stream keyed by (root seed, ellipse index, shot index), so campaign
// output is identical no matter how shots are scheduled across threads.
// splitmix64 is used both as the mixing function and as the stream
// generator; normals come from Box-Muller on the raw 53-bit uniforms.
// Nothing here depends on std::<random> distributions, keeping the byte
// stream stable across standard libraries.

inline uint64_t splitmix64_next(uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

class ShotRng {
public:
  ShotRng(uint64_t root_seed, uint64_t ellipse_index, uint64_t shot_index) {
    uint64_t s = root_seed;
    state_ = splitmix64_next(s) ^ (0x632be59bd9b4e019ull * (ellipse_index + 1));
    state_ = splitmix64_next(state_);
    state_ ^= 0x9e6c63d0876a9a47ull * (shot_index + 1);
    state_ = splitmix64_next(state_);
  }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(splitmix64_next(state_) >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; consumes exactly two uniforms.
  double normal() {
    const double u1 =
        (static_cast<double>(splitmix64_next(state_) >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(constants::two_pi * u2);
  }

private:
  uint64_t state_ = 0;
};

}  // namespace wepsim

#endif  // WEPSIM_RNG_HPP
