#pragma once

// Frame configurations shared by the unit tests and the acceptance binary.

#include <cstddef>
#include <vector>

#include "nsgf/frame.hpp"

namespace nsgf::testing {

// Two flat channels of width 1/2 at time step 2: an orthonormal basis with
// s == 1, so A = B = 1.
inline System flat_two_channel(std::size_t L) {
  return make_windows(L, {{0.0, 2.0}, {0.5, 2.0}}, 0.25, Prototype{0.0});
}

// Octave-like bands around the torus; bin ranges at L = 1024 are
// [-32,32) [16,144) [112,368) [336,848) [656,912) [880,1008).
inline std::vector<ChannelSpec> dyadic_channels() {
  return {{31.0 / 32.0, 16.0}, {1.0 / 64.0, 8.0}, {7.0 / 64.0, 4.0},
          {21.0 / 64.0, 2.0},  {41.0 / 64.0, 4.0}, {55.0 / 64.0, 8.0}};
}

inline System dyadic_six_channel(std::size_t L) {
  return make_windows(L, dyadic_channels(), 0.25, Prototype{0.125});
}

// Non-dyadic offsets and mixed widths. Neighbouring supports overlap by more
// than the sum of their ramps, which keeps A away from zero. Valid for L = 512
// and 1024.
inline std::vector<ChannelSpec> irregular_channels() {
  return {{990.0 / 1024.0, 16.0}, {1014.0 / 1024.0, 8.0}, {54.0 / 1024.0, 4.0},
          {246.0 / 1024.0, 8.0},  {278.0 / 1024.0, 2.0},  {694.0 / 1024.0, 8.0},
          {782.0 / 1024.0, 16.0}, {790.0 / 1024.0, 4.0}};
}

inline System irregular_eight_channel(std::size_t L) {
  return make_windows(L, irregular_channels(), 0.25, Prototype{0.125});
}

// Flat windows tiling the torus with unequal widths: another orthonormal basis.
inline System flat_irregular_basis(std::size_t L) {
  return make_windows(L, {{0.0, 4.0}, {0.25, 2.0}, {0.75, 8.0}, {0.875, 8.0}}, 0.25, Prototype{0.0});
}

// L = 32: overlapping smooth windows, redundancy 40/32.
inline System small_redundant(std::size_t L = 32) {
  return make_windows(L, {{0.9375, 4.0}, {0.125, 4.0}, {0.34375, 2.0}, {0.75, 4.0}}, 0.25,
                      Prototype{0.125});
}

// L = 16 toy system with 8 + 8 + 4 + 4 = 24 coefficients.
inline System toy_sixteen() {
  return make_windows(16, {{0.0, 2.0}, {0.375, 2.0}, {0.6875, 4.0}, {0.875, 4.0}}, 0.25,
                      Prototype{0.125});
}

}  // namespace nsgf::testing
