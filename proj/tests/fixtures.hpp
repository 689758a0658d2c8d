// Shared reference data for the test suite: two small real data sets with
// hand-checked pattern/type/statistic values, and the frozen 24-permutation
// type partition.
#ifndef SOPMON_TESTS_FIXTURES_HPP
#define SOPMON_TESTS_FIXTURES_HPP

#include <array>
#include <vector>

#include "sopmon/grid.hpp"
#include "sopmon/sop.hpp"

namespace fixtures {

// 5x5 grid of bottle-bottom wall thickness measurements.
inline sopmon::RealGrid bottle() {
  return sopmon::validate_grid({
      {0.0598, 0.0591, 0.0587, 0.0582, 0.0576},
      {0.0600, 0.0597, 0.0590, 0.0583, 0.0581},
      {0.0602, 0.0596, 0.0594, 0.0581, 0.0570},
      {0.0598, 0.0596, 0.0589, 0.0585, 0.0571},
      {0.0600, 0.0593, 0.0587, 0.0584, 0.0569},
  });
}

// Expected 4x4 pattern field for the bottle grid, each entry the rank vector
// of the 2x2 block read row by row.
inline std::array<std::array<sopmon::Sop, 4>, 4> bottle_sops() {
  using sopmon::Sop;
  const auto s = [](int a, int b, int c, int d) {
    return Sop{{static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b),
                static_cast<std::uint8_t>(c), static_cast<std::uint8_t>(d)}};
  };
  return {{
      {s(3, 1, 4, 2), s(3, 1, 4, 2), s(3, 1, 4, 2), s(3, 1, 4, 2)},
      {s(3, 2, 4, 1), s(4, 1, 3, 2), s(3, 2, 4, 1), s(4, 2, 3, 1)},
      {s(4, 1, 3, 2), s(3, 2, 4, 1), s(4, 1, 3, 2), s(3, 1, 4, 2)},
      {s(3, 2, 4, 1), s(4, 2, 3, 1), s(4, 2, 3, 1), s(4, 2, 3, 1)},
  }};
}

inline std::array<std::array<int, 4>, 4> bottle_types() {
  return {{{1, 1, 1, 1}, {2, 2, 2, 1}, {2, 2, 2, 1}, {2, 1, 1, 1}}};
}

// Six consecutive 2x2 frames of clay flatness measurements, row by row.
inline std::vector<sopmon::RealGrid> clay_frames() {
  return {
      sopmon::validate_grid({{3.30, 3.95}, {5.89, 3.20}}),
      sopmon::validate_grid({{0.27, 3.71}, {0.39, 4.33}}),
      sopmon::validate_grid({{3.06, 1.66}, {2.93, 2.12}}),
      sopmon::validate_grid({{2.74, 2.86}, {1.31, 2.10}}),
      sopmon::validate_grid({{1.36, 3.42}, {2.21, 1.80}}),
      sopmon::validate_grid({{2.00, 2.44}, {3.65, 1.64}}),
  };
}

inline std::array<sopmon::Sop, 6> clay_sops() {
  using sopmon::Sop;
  return {Sop{{2, 3, 4, 1}}, Sop{{1, 3, 2, 4}}, Sop{{4, 1, 3, 2}},
          Sop{{3, 4, 1, 2}}, Sop{{1, 4, 3, 2}}, Sop{{2, 3, 4, 1}}};
}

inline std::array<int, 6> clay_types() { return {3, 1, 2, 1, 3, 3}; }

// Smoothed type frequencies for the clay stream at lambda = 0.1 starting from
// the uniform vector, rounded to three decimals.
inline std::array<std::array<double, 3>, 6> clay_ewma() {
  return {{{0.300, 0.300, 0.400},
           {0.370, 0.270, 0.360},
           {0.333, 0.343, 0.324},
           {0.400, 0.309, 0.292},
           {0.360, 0.278, 0.362},
           {0.324, 0.250, 0.426}}};
}

// The full partition of the 24 rank vectors into the three pattern types:
// a pattern's type is decided by which rank shares a diagonal with rank 4.
inline std::array<std::array<std::array<int, 4>, 8>, 3> type_partition() {
  return {{
      {{{1, 2, 3, 4},
        {1, 3, 2, 4},
        {2, 1, 4, 3},
        {2, 4, 1, 3},
        {3, 1, 4, 2},
        {3, 4, 1, 2},
        {4, 2, 3, 1},
        {4, 3, 2, 1}}},
      {{{1, 2, 4, 3},
        {1, 4, 2, 3},
        {2, 1, 3, 4},
        {2, 3, 1, 4},
        {3, 2, 4, 1},
        {3, 4, 2, 1},
        {4, 1, 3, 2},
        {4, 3, 1, 2}}},
      {{{1, 3, 4, 2},
        {1, 4, 3, 2},
        {2, 3, 4, 1},
        {2, 4, 3, 1},
        {3, 1, 2, 4},
        {3, 2, 1, 4},
        {4, 1, 2, 3},
        {4, 2, 1, 3}}},
  }};
}

}  // namespace fixtures

#endif
