#ifndef SOPMON_GRID_HPP
#define SOPMON_GRID_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "sopmon/errors.hpp"
#include "sopmon/rng.hpp"

namespace sopmon {

// Row-major rectangular frame. Row index s1 runs 0..m, column index s2 runs
// 0..n, so the stored matrix is (m+1) x (n+1).
template <class T>
class GridT {
 public:
  GridT() = default;
  GridT(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), v_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return v_.size(); }
  long long m() const { return static_cast<long long>(rows_) - 1; }
  long long n() const { return static_cast<long long>(cols_) - 1; }

  T& operator()(std::size_t s1, std::size_t s2) { return v_[s1 * cols_ + s2]; }
  const T& operator()(std::size_t s1, std::size_t s2) const { return v_[s1 * cols_ + s2]; }

  T* data() { return v_.data(); }
  const T* data() const { return v_.data(); }
  auto begin() { return v_.begin(); }
  auto end() { return v_.end(); }
  auto begin() const { return v_.begin(); }
  auto end() const { return v_.end(); }

  void resize(std::size_t rows, std::size_t cols) {
    rows_ = rows;
    cols_ = cols;
    v_.assign(rows * cols, T{});
  }

  void swap(GridT& o) {
    std::swap(rows_, o.rows_);
    std::swap(cols_, o.cols_);
    v_.swap(o.v_);
  }

  bool same_shape(const GridT& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> v_;
};

using RealGrid = GridT<double>;
using CountGrid = GridT<long long>;

// A stream of frames sharing one shape, indexed by inspection time t = 1, 2, ...
using FrameStream = std::vector<RealGrid>;

// Checks shape (at least 2x2) and finiteness, returning the validated frame.
RealGrid validate_grid(const std::vector<std::vector<double>>& values);
RealGrid validate_grid(std::size_t rows, std::size_t cols, const std::vector<double>& values);
CountGrid validate_count_grid(std::size_t rows, std::size_t cols,
                              const std::vector<long long>& values);

// Breaks ties in an integer frame by adding scale * U with U i.i.d. uniform on
// (0,1). Strict orders among the original values are preserved whenever scale
// does not exceed the smallest positive gap (always true for integer frames
// with scale <= 1).
RealGrid jitter(const CountGrid& x, double scale, Rng& rng);

// In-place variant used by the simulation hot path.
void jitter_into(const CountGrid& x, double scale, Rng& rng, RealGrid& out);

// Plain copy of an integer frame into a real one (no noise).
RealGrid to_real(const CountGrid& x);
void to_real_into(const CountGrid& x, RealGrid& out);

}  // namespace sopmon

#endif
