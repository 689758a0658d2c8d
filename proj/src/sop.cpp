#include "sopmon/sop.hpp"

#include <algorithm>
#include <cmath>

namespace sopmon {

namespace detail {

namespace {

int type_from_ranks(const std::array<std::uint8_t, 4>& r) {
  // positions 0 and 3 form the main diagonal, 1 and 2 the anti-diagonal
  int pos4 = 0;
  while (r[pos4] != 4) ++pos4;
  static constexpr int partner[4] = {3, 2, 1, 0};
  return r[partner[pos4]];
}

std::array<std::uint8_t, 24> build_type_table() {
  std::array<std::uint8_t, 24> table{};
  std::array<std::uint8_t, 4> perm = {1, 2, 3, 4};
  do {
    int c1 = (perm[0] - 1);
    int c2 = (perm[1] - 1) - (perm[0] < perm[1]);
    int c3 = (perm[3] < perm[2]);
    table[c1 * 6 + c2 * 2 + c3] = static_cast<std::uint8_t>(type_from_ranks(perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return table;
}

}  // namespace

const std::array<std::uint8_t, 24> type_by_lehmer = build_type_table();

}  // namespace detail

Sop sop_of_square(double y1, double y2, double y3, double y4) {
  const double y[4] = {y1, y2, y3, y4};
  for (double v : y)
    if (!std::isfinite(v)) throw NonFiniteError("block contains NaN or infinity");
  Sop pi{};
  for (int k = 0; k < 4; ++k) {
    int rank = 1;
    for (int l = 0; l < 4; ++l) {
      if (l == k) continue;
      rank += (y[l] < y[k]) || (y[l] == y[k] && l < k);
    }
    pi.r[k] = static_cast<std::uint8_t>(rank);
  }
  return pi;
}

int type_of_sop(const Sop& pi) {
  int pos4 = 0;
  while (pos4 < 4 && pi.r[pos4] != 4) ++pos4;
  if (pos4 == 4) throw ParamError("rank pattern is not a permutation of 1..4");
  static constexpr int partner[4] = {3, 2, 1, 0};
  return pi.r[partner[pos4]];
}

namespace {

void check_delay(const RealGrid& g, Delay d) {
  if (d.d1 < 1 || d.d2 < 1) throw DelayError("delay components must be >= 1");
  if (d.d1 > g.m() || d.d2 > g.n()) throw DelayError("delay exceeds grid extent");
}

}  // namespace

std::vector<Sop> sop_field(const RealGrid& g, Delay d) {
  check_delay(g, d);
  const long long m = g.m(), n = g.n();
  std::vector<Sop> out;
  out.reserve(static_cast<std::size_t>((m - d.d1 + 1) * (n - d.d2 + 1)));
  for (long long s1 = d.d1; s1 <= m; ++s1)
    for (long long s2 = d.d2; s2 <= n; ++s2)
      out.push_back(sop_of_square(g(s1 - d.d1, s2 - d.d2), g(s1 - d.d1, s2),
                                  g(s1, s2 - d.d2), g(s1, s2)));
  return out;
}

TypeFrequencies type_frequencies(const RealGrid& g, Delay d) {
  check_delay(g, d);
  const long long m = g.m(), n = g.n();
  const std::size_t cols = g.cols();
  const double* v = g.data();
  TypeFrequencies f{};
  for (long long s1 = d.d1; s1 <= m; ++s1) {
    const double* top = v + (s1 - d.d1) * cols;
    const double* bot = v + s1 * cols;
    for (long long s2 = d.d2; s2 <= n; ++s2) {
      int t = type_of_square(top[s2 - d.d2], top[s2], bot[s2 - d.d2], bot[s2]);
      ++f.counts[t - 1];
    }
  }
  f.squares = f.counts[0] + f.counts[1] + f.counts[2];
  for (int k = 0; k < 3; ++k)
    f.p[k] = static_cast<double>(f.counts[k]) / static_cast<double>(f.squares);
  return f;
}

DependenceStats dependence_stats(const TypeFrequencies& f) {
  return DependenceStats{
      f.p[0] - 1.0 / 3.0,
      f.p[1] - f.p[2],
      f.p[2] - 1.0 / 3.0,
      f.p[0] - f.p[1],
  };
}

double spatial_acf(const RealGrid& g, SpatialLag h) {
  if (h.h1 == 0 && h.h2 == 0) throw ParamError("lag (0,0) is not a valid spatial lag");
  const long long m = g.m(), n = g.n();
  if (std::llabs(h.h1) > m || std::llabs(h.h2) > n)
    throw OverlapError("lag leaves no overlapping cells");

  // canonical sign: rho(-h1,-h2) == rho(h1,h2) exactly, so flip to h1 > 0,
  // or h1 == 0 and h2 > 0, making the symmetry bit-exact
  int h1 = h.h1, h2 = h.h2;
  if (h1 < 0 || (h1 == 0 && h2 < 0)) {
    h1 = -h1;
    h2 = -h2;
  }

  const std::size_t nc = g.cols();
  const double* v = g.data();
  const std::size_t ncell = g.size();

  bool constant = true;
  for (std::size_t i = 1; i < ncell; ++i)
    if (v[i] != v[0]) {
      constant = false;
      break;
    }
  if (constant) throw DegenerateError("constant frame has no defined autocorrelation");

  double sum = 0.0;
  for (std::size_t i = 0; i < ncell; ++i) sum += v[i];
  const double ybar = sum / static_cast<double>(ncell);

  double den = 0.0;
  for (std::size_t i = 0; i < ncell; ++i) {
    double dvi = v[i] - ybar;
    den += dvi * dvi;
  }
  if (den == 0.0) throw DegenerateError("constant frame has no defined autocorrelation");

  const long long lo1 = std::max<long long>(0, h1), hi1 = m + std::min<long long>(0, h1);
  const long long lo2 = std::max<long long>(0, h2), hi2 = n + std::min<long long>(0, h2);
  double num = 0.0;
  for (long long s1 = lo1; s1 <= hi1; ++s1) {
    const double* row = v + s1 * nc;
    const double* lag = v + (s1 - h1) * nc - h2;
    for (long long s2 = lo2; s2 <= hi2; ++s2) num += (row[s2] - ybar) * (lag[s2] - ybar);
  }
  return num / den;
}

}  // namespace sopmon
