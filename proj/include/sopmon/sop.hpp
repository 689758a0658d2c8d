#ifndef SOPMON_SOP_HPP
#define SOPMON_SOP_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "sopmon/errors.hpp"
#include "sopmon/grid.hpp"

namespace sopmon {

// Rank pattern of a 2x2 block read row by row: r[k] is the rank of the k-th
// value, ties resolved in favour of the earlier position (first occurrence
// gets the lower rank). Always a permutation of {1,2,3,4}.
struct Sop {
  std::array<std::uint8_t, 4> r;
  bool operator==(const Sop&) const = default;
};

// Delay (d1,d2) >= (1,1): the 2x2 block is taken at offsets d1, d2 instead of
// immediate neighbours.
struct Delay {
  int d1 = 1, d2 = 1;
  bool operator==(const Delay&) const = default;
};

// Spatial lag for the autocorrelation; (0,0) is not a valid lag.
struct SpatialLag {
  int h1 = 0, h2 = 0;
  bool operator==(const SpatialLag&) const = default;
};

// Relative frequencies of the three pattern types over one frame, kept
// together with the exact integer counts they came from.
struct TypeFrequencies {
  std::array<double, 3> p{};
  std::array<std::uint64_t, 3> counts{};
  std::uint64_t squares = 0;
};

// The four rank-based dependence statistics. The identity
// kappa_hat + kappa_tilde == tau_hat - tau_tilde holds exactly for the
// underlying frequencies (both sides equal (counts[0]-counts[2])/squares);
// the stored doubles agree to rounding, not bit for bit.
struct DependenceStats {
  double tau_hat;
  double kappa_hat;
  double tau_tilde;
  double kappa_tilde;
};

namespace detail {

// Lehmer code of the rank pattern of (y1,y2,y3,y4), in 0..23. Six strict
// comparisons; ties fall through to the earlier position automatically.
inline int lehmer_of_square(double y1, double y2, double y3, double y4) {
  int c1 = (y2 < y1) + (y3 < y1) + (y4 < y1);
  int c2 = (y3 < y2) + (y4 < y2);
  int c3 = (y4 < y3);
  return c1 * 6 + c2 * 2 + c3;
}

// type_by_lehmer[code] in {1,2,3}; built once from the diagonal rule.
extern const std::array<std::uint8_t, 24> type_by_lehmer;

}  // namespace detail

// Rank pattern of one 2x2 block given row by row.
Sop sop_of_square(double y1, double y2, double y3, double y4);

// Type of a pattern: the rank that shares a diagonal with rank 4 (the other
// main-diagonal corner when rank 4 sits on the main diagonal, the other
// anti-diagonal corner otherwise).
int type_of_sop(const Sop& pi);

// Fast path used by the counting loops: type without materialising the ranks.
inline int type_of_square(double y1, double y2, double y3, double y4) {
  return detail::type_by_lehmer[detail::lehmer_of_square(y1, y2, y3, y4)];
}

// All patterns of a frame at delay d, row-major over s in {d1..m} x {d2..n}.
std::vector<Sop> sop_field(const RealGrid& g, Delay d);

// Type counts over all (m-d1+1)(n-d2+1) blocks, normalised once at the end.
TypeFrequencies type_frequencies(const RealGrid& g, Delay d);

DependenceStats dependence_stats(const TypeFrequencies& f);

// Sample spatial autocorrelation at lag h: sum over the overlap region of
// (Y_s - Ybar)(Y_{s-h} - Ybar), divided by the full-grid sum of squared
// deviations; Ybar is the full-grid mean. Symmetric under h -> -h.
double spatial_acf(const RealGrid& g, SpatialLag h);

}  // namespace sopmon

#endif
