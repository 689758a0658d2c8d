#include "sopmon/grid.hpp"

#include <cmath>

namespace sopmon {

namespace {

void check_shape(std::size_t rows, std::size_t cols) {
  if (rows < 2 || cols < 2) throw DimensionError("frame must be at least 2x2");
}

}  // namespace

RealGrid validate_grid(const std::vector<std::vector<double>>& values) {
  if (values.empty()) throw DimensionError("frame must be at least 2x2");
  std::size_t rows = values.size(), cols = values[0].size();
  check_shape(rows, cols);
  RealGrid g(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (values[i].size() != cols) throw DimensionError("ragged rows in frame");
    for (std::size_t j = 0; j < cols; ++j) {
      if (!std::isfinite(values[i][j])) throw NonFiniteError("frame contains NaN or infinity");
      g(i, j) = values[i][j];
    }
  }
  return g;
}

RealGrid validate_grid(std::size_t rows, std::size_t cols, const std::vector<double>& values) {
  check_shape(rows, cols);
  if (values.size() != rows * cols) throw DimensionError("value count does not match shape");
  RealGrid g(rows, cols);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw NonFiniteError("frame contains NaN or infinity");
    g.data()[i] = values[i];
  }
  return g;
}

CountGrid validate_count_grid(std::size_t rows, std::size_t cols,
                              const std::vector<long long>& values) {
  check_shape(rows, cols);
  if (values.size() != rows * cols) throw DimensionError("value count does not match shape");
  CountGrid g(rows, cols);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < 0) throw ParamError("count frame entries must be >= 0");
    g.data()[i] = values[i];
  }
  return g;
}

void jitter_into(const CountGrid& x, double scale, Rng& rng, RealGrid& out) {
  if (!(scale > 0.0)) throw ScaleError("jitter scale must be > 0");
  if (out.rows() != x.rows() || out.cols() != x.cols()) out.resize(x.rows(), x.cols());
  const long long* src = x.data();
  double* dst = out.data();
  for (std::size_t i = 0, ncell = x.size(); i < ncell; ++i)
    dst[i] = static_cast<double>(src[i]) + scale * rng.uniform01_open();
}

RealGrid jitter(const CountGrid& x, double scale, Rng& rng) {
  RealGrid out;
  jitter_into(x, scale, rng, out);
  return out;
}

void to_real_into(const CountGrid& x, RealGrid& out) {
  if (out.rows() != x.rows() || out.cols() != x.cols()) out.resize(x.rows(), x.cols());
  const long long* src = x.data();
  double* dst = out.data();
  for (std::size_t i = 0, ncell = x.size(); i < ncell; ++i) dst[i] = static_cast<double>(src[i]);
}

RealGrid to_real(const CountGrid& x) {
  RealGrid out;
  to_real_into(x, out);
  return out;
}

}  // namespace sopmon
