#ifndef MCFT_MAT_HPP
#define MCFT_MAT_HPP

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "mcft/scalars.hpp"

namespace mcft {

// Dense row-major matrix over an exact or float scalar.
template <class S>
class Mat {
 public:
  Mat() : rows_(0), cols_(0) {}
  Mat(int rows, int cols) : rows_(rows), cols_(cols), d_(static_cast<size_t>(rows) * cols, ScalarTraits<S>::zero()) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("Mat: negative shape");
  }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = ScalarTraits<S>::one();
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  S& operator()(int i, int j) { return d_[static_cast<size_t>(i) * cols_ + j]; }
  const S& operator()(int i, int j) const { return d_[static_cast<size_t>(i) * cols_ + j]; }

  const std::vector<S>& data() const { return d_; }
  std::vector<S>& data() { return d_; }

  bool is_zero() const {
    return std::all_of(d_.begin(), d_.end(), [](const S& x) { return ScalarTraits<S>::is_zero(x); });
  }

  Mat transposed() const {
    Mat t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Mat conjugated() const {
    Mat c(rows_, cols_);
    for (size_t k = 0; k < d_.size(); ++k) c.d_[k] = ScalarTraits<S>::conj(d_[k]);
    return c;
  }

  void add_in_place(const Mat& o) {
    require_same_shape(o);
    for (size_t k = 0; k < d_.size(); ++k) d_[k] += o.d_[k];
  }

  // this += s * o
  void axpy(const S& s, const Mat& o) {
    require_same_shape(o);
    for (size_t k = 0; k < d_.size(); ++k) d_[k] += s * o.d_[k];
  }

  void scale(const S& s) {
    for (auto& x : d_) x = x * s;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& x : d_) m = std::max(m, ScalarTraits<S>::abs_d(x));
    return m;
  }

  friend bool operator==(const Mat& a, const Mat& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.d_ == b.d_;
  }

 private:
  void require_same_shape(const Mat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::logic_error("Mat: shape mismatch");
  }

  int rows_, cols_;
  std::vector<S> d_;
};

inline Mat<Cplx> promote(const Mat<RatC>& a) {
  Mat<Cplx> out(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out(i, j) = to_cplx(a(i, j));
  return out;
}

// Exact Gaussian elimination helpers (coefficients form a field for both scalar kinds,
// but only the exact kind gives meaningful ranks/kernels here).

// Returns the rank; if kernel != nullptr, appends a column basis of the null space.
template <class S>
int row_reduce_rank(Mat<S> a, std::vector<std::vector<S>>* kernel = nullptr) {
  const int m = a.rows(), n = a.cols();
  std::vector<int> pivot_col_of_row;
  std::vector<bool> col_is_pivot(n, false);
  int r = 0;
  for (int c = 0; c < n && r < m; ++c) {
    int p = -1;
    for (int i = r; i < m; ++i)
      if (!ScalarTraits<S>::is_zero(a(i, c))) {
        p = i;
        break;
      }
    if (p < 0) continue;
    if (p != r)
      for (int j = 0; j < n; ++j) std::swap(a(p, j), a(r, j));
    S inv = ScalarTraits<S>::one() / a(r, c);
    for (int j = c; j < n; ++j) a(r, j) = a(r, j) * inv;
    for (int i = 0; i < m; ++i) {
      if (i == r || ScalarTraits<S>::is_zero(a(i, c))) continue;
      S f = a(i, c);
      for (int j = c; j < n; ++j) a(i, j) -= f * a(r, j);
    }
    pivot_col_of_row.push_back(c);
    col_is_pivot[c] = true;
    ++r;
  }
  if (kernel) {
    for (int c = 0; c < n; ++c) {
      if (col_is_pivot[c]) continue;
      std::vector<S> v(n, ScalarTraits<S>::zero());
      v[c] = ScalarTraits<S>::one();
      for (int i = 0; i < r; ++i) v[pivot_col_of_row[i]] = -a(i, c);
      kernel->push_back(std::move(v));
    }
  }
  return r;
}

// Solves a x = b exactly; throws std::domain_error if a is singular.
template <class S>
std::vector<S> solve_exact(Mat<S> a, std::vector<S> b) {
  const int n = a.rows();
  if (a.cols() != n || static_cast<int>(b.size()) != n) throw std::logic_error("solve_exact: shape mismatch");
  for (int c = 0; c < n; ++c) {
    int p = -1;
    for (int i = c; i < n; ++i)
      if (!ScalarTraits<S>::is_zero(a(i, c))) {
        p = i;
        break;
      }
    if (p < 0) throw std::domain_error("solve_exact: singular matrix");
    if (p != c) {
      for (int j = 0; j < n; ++j) std::swap(a(p, j), a(c, j));
      std::swap(b[p], b[c]);
    }
    S inv = ScalarTraits<S>::one() / a(c, c);
    for (int j = c; j < n; ++j) a(c, j) = a(c, j) * inv;
    b[c] = b[c] * inv;
    for (int i = 0; i < n; ++i) {
      if (i == c || ScalarTraits<S>::is_zero(a(i, c))) continue;
      S f = a(i, c);
      for (int j = c; j < n; ++j) a(i, j) -= f * a(c, j);
      b[i] -= f * b[c];
    }
  }
  return b;
}

// Rank plus the list of pivot columns, in elimination order.
template <class S>
int row_reduce_pivots(Mat<S> a, std::vector<int>& pivot_cols) {
  const int m = a.rows(), n = a.cols();
  pivot_cols.clear();
  int r = 0;
  for (int c = 0; c < n && r < m; ++c) {
    int p = -1;
    for (int i = r; i < m; ++i)
      if (!ScalarTraits<S>::is_zero(a(i, c))) {
        p = i;
        break;
      }
    if (p < 0) continue;
    if (p != r)
      for (int j = 0; j < n; ++j) std::swap(a(p, j), a(r, j));
    S inv = ScalarTraits<S>::one() / a(r, c);
    for (int j = c; j < n; ++j) a(r, j) = a(r, j) * inv;
    for (int i = 0; i < m; ++i) {
      if (i == r || ScalarTraits<S>::is_zero(a(i, c))) continue;
      S f = a(i, c);
      for (int j = c; j < n; ++j) a(i, j) -= f * a(r, j);
    }
    pivot_cols.push_back(c);
    ++r;
  }
  return r;
}

// Solves a X = b columnwise; throws std::domain_error if a is singular.
template <class S>
Mat<S> solve_exact_mat(Mat<S> a, Mat<S> b) {
  const int n = a.rows();
  if (a.cols() != n || b.rows() != n) throw std::logic_error("solve_exact_mat: shape mismatch");
  for (int c = 0; c < n; ++c) {
    int p = -1;
    for (int i = c; i < n; ++i)
      if (!ScalarTraits<S>::is_zero(a(i, c))) {
        p = i;
        break;
      }
    if (p < 0) throw std::domain_error("solve_exact_mat: singular matrix");
    if (p != c) {
      for (int j = 0; j < n; ++j) std::swap(a(p, j), a(c, j));
      for (int j = 0; j < b.cols(); ++j) std::swap(b(p, j), b(c, j));
    }
    S inv = ScalarTraits<S>::one() / a(c, c);
    for (int j = c; j < n; ++j) a(c, j) = a(c, j) * inv;
    for (int j = 0; j < b.cols(); ++j) b(c, j) = b(c, j) * inv;
    for (int i = 0; i < n; ++i) {
      if (i == c || ScalarTraits<S>::is_zero(a(i, c))) continue;
      S f = a(i, c);
      for (int j = c; j < n; ++j) a(i, j) -= f * a(c, j);
      for (int j = 0; j < b.cols(); ++j) b(i, j) -= f * b(c, j);
    }
  }
  return b;
}

// Determinant by exact elimination.
template <class S>
S det_exact(Mat<S> a) {
  const int n = a.rows();
  if (a.cols() != n) throw std::logic_error("det_exact: not square");
  S det = ScalarTraits<S>::one();
  for (int c = 0; c < n; ++c) {
    int p = -1;
    for (int i = c; i < n; ++i)
      if (!ScalarTraits<S>::is_zero(a(i, c))) {
        p = i;
        break;
      }
    if (p < 0) return ScalarTraits<S>::zero();
    if (p != c) {
      for (int j = 0; j < n; ++j) std::swap(a(p, j), a(c, j));
      det = -det;
    }
    det = det * a(c, c);
    S inv = ScalarTraits<S>::one() / a(c, c);
    for (int i = c + 1; i < n; ++i) {
      if (ScalarTraits<S>::is_zero(a(i, c))) continue;
      S f = a(i, c) * inv;
      for (int j = c; j < n; ++j) a(i, j) -= f * a(c, j);
    }
  }
  return det;
}

}  // namespace mcft

#endif
