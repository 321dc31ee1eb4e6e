#ifndef MCFT_KERNELS_HPP
#define MCFT_KERNELS_HPP

#include <cstddef>
#include <functional>
#include <vector>

#include "mcft/mat.hpp"

#ifdef MCFT_HAVE_OPENMP
#include <omp.h>
#endif

namespace mcft::kernels {

enum class ExecMode { serial, parallel };

ExecMode exec_mode();
void set_exec_mode(ExecMode m);

// C = A * B. Each output row is accumulated serially in a fixed order, so the
// parallel variant is bitwise identical to the serial one for both scalar kinds.
template <class S>
void gemm_serial(const Mat<S>& a, const Mat<S>& b, Mat<S>& c) {
  const int m = a.rows(), k = a.cols(), n = b.cols();
  for (int i = 0; i < m; ++i)
    for (int l = 0; l < k; ++l) {
      const S& ail = a(i, l);
      if (ScalarTraits<S>::is_zero(ail)) continue;
      for (int j = 0; j < n; ++j) c(i, j) += ail * b(l, j);
    }
}

template <class S>
void gemm_parallel(const Mat<S>& a, const Mat<S>& b, Mat<S>& c) {
  const int m = a.rows(), k = a.cols(), n = b.cols();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < m; ++i)
    for (int l = 0; l < k; ++l) {
      const S& ail = a(i, l);
      if (ScalarTraits<S>::is_zero(ail)) continue;
      for (int j = 0; j < n; ++j) c(i, j) += ail * b(l, j);
    }
}

template <class S>
Mat<S> gemm(const Mat<S>& a, const Mat<S>& b, ExecMode mode) {
  if (a.cols() != b.rows()) throw std::logic_error("gemm: inner dimension mismatch");
  Mat<S> c(a.rows(), b.cols());
  if (mode == ExecMode::parallel)
    gemm_parallel(a, b, c);
  else
    gemm_serial(a, b, c);
  return c;
}

template <class S>
Mat<S> gemm(const Mat<S>& a, const Mat<S>& b) {
  return gemm(a, b, exec_mode());
}

// y = A * x
template <class S>
void gemv_serial(const Mat<S>& a, const std::vector<S>& x, std::vector<S>& y) {
  const int m = a.rows(), n = a.cols();
  for (int i = 0; i < m; ++i) {
    S acc = ScalarTraits<S>::zero();
    for (int j = 0; j < n; ++j) acc += a(i, j) * x[j];
    y[i] += acc;
  }
}

template <class S>
void gemv_parallel(const Mat<S>& a, const std::vector<S>& x, std::vector<S>& y) {
  const int m = a.rows(), n = a.cols();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < m; ++i) {
    S acc = ScalarTraits<S>::zero();
    for (int j = 0; j < n; ++j) acc += a(i, j) * x[j];
    y[i] += acc;
  }
}

template <class S>
void gemv(const Mat<S>& a, const std::vector<S>& x, std::vector<S>& y, ExecMode mode) {
  if (a.cols() != static_cast<int>(x.size()) || a.rows() != static_cast<int>(y.size()))
    throw std::logic_error("gemv: shape mismatch");
  if (mode == ExecMode::parallel)
    gemv_parallel(a, x, y);
  else
    gemv_serial(a, x, y);
}

template <class S>
void gemv(const Mat<S>& a, const std::vector<S>& x, std::vector<S>& y) {
  gemv(a, x, y, exec_mode());
}

// Evaluates fn(i) for i in [0, n) into a preallocated result slot per index.
// Deterministic gather: cell i is written only by its own iteration.
template <class R>
std::vector<R> grid_map(int n, const std::function<R(int)>& fn, ExecMode mode) {
  std::vector<R> out(static_cast<size_t>(n));
  if (mode == ExecMode::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) out[i] = fn(i);
  } else {
    for (int i = 0; i < n; ++i) out[i] = fn(i);
  }
  return out;
}

template <class R>
std::vector<R> grid_map(int n, const std::function<R(int)>& fn) {
  return grid_map(n, fn, exec_mode());
}

}  // namespace mcft::kernels

#endif
