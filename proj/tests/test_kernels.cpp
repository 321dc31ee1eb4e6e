#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mcft/kernels.hpp"

using namespace mcft;
using kernels::ExecMode;

namespace {

Mat<Cplx> random_cplx(int rows, int cols, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat<Cplx> m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = Cplx(u(rng), u(rng));
  return m;
}

Mat<RatC> random_rat(int rows, int cols, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> num(-9, 9);
  std::uniform_int_distribution<long> den(1, 7);
  Mat<RatC> m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = RatC(rat(num(rng), den(rng)), rat(num(rng), den(rng)));
  return m;
}

}  // namespace

TEST_CASE("gemm parallel is bitwise identical to serial, float scalars") {
  for (unsigned seed : {1u, 2u, 3u}) {
    const Mat<Cplx> a = random_cplx(37, 29, seed);
    const Mat<Cplx> b = random_cplx(29, 41, seed + 100);
    const Mat<Cplx> s = kernels::gemm(a, b, ExecMode::serial);
    const Mat<Cplx> p = kernels::gemm(a, b, ExecMode::parallel);
    CHECK(s == p);  // bitwise: same per-row accumulation order
  }
}

TEST_CASE("gemm parallel is bitwise identical to serial, exact scalars") {
  const Mat<RatC> a = random_rat(23, 17, 7);
  const Mat<RatC> b = random_rat(17, 19, 8);
  CHECK(kernels::gemm(a, b, ExecMode::serial) == kernels::gemm(a, b, ExecMode::parallel));
}

TEST_CASE("gemm agrees with a plain triple loop") {
  const Mat<Cplx> a = random_cplx(11, 13, 21);
  const Mat<Cplx> b = random_cplx(13, 9, 22);
  Mat<Cplx> ref(11, 9);
  for (int i = 0; i < 11; ++i)
    for (int j = 0; j < 9; ++j) {
      Cplx acc(0, 0);
      for (int l = 0; l < 13; ++l) acc += a(i, l) * b(l, j);
      ref(i, j) = acc;
    }
  const Mat<Cplx> got = kernels::gemm(a, b, ExecMode::serial);
  for (int i = 0; i < 11; ++i)
    for (int j = 0; j < 9; ++j) CHECK(std::abs(got(i, j) - ref(i, j)) < 1e-13);
}

TEST_CASE("gemm rejects mismatched inner dimensions") {
  CHECK_THROWS_AS(kernels::gemm(Mat<Cplx>(3, 4), Mat<Cplx>(5, 2), ExecMode::serial),
                  std::logic_error);
}

TEST_CASE("gemv matches serial reference and accumulates into y") {
  const Mat<Cplx> a = random_cplx(31, 24, 5);
  std::vector<Cplx> x(24);
  for (int j = 0; j < 24; ++j) x[static_cast<size_t>(j)] = Cplx(0.1 * j, -0.05 * j);
  std::vector<Cplx> ys(31, Cplx(1, 1)), yp(31, Cplx(1, 1));
  kernels::gemv(a, x, ys, ExecMode::serial);
  kernels::gemv(a, x, yp, ExecMode::parallel);
  CHECK(ys == yp);
  CHECK(ys[0] != Cplx(1, 1));
}

TEST_CASE("gemv exact scalars, both modes equal") {
  const Mat<RatC> a = random_rat(12, 15, 40);
  std::vector<RatC> x(15);
  for (int j = 0; j < 15; ++j) x[static_cast<size_t>(j)] = RatC(rat(j - 7, 3));
  std::vector<RatC> ys(12), yp(12);
  kernels::gemv(a, x, ys, ExecMode::serial);
  kernels::gemv(a, x, yp, ExecMode::parallel);
  for (int i = 0; i < 12; ++i) CHECK(ys[static_cast<size_t>(i)] == yp[static_cast<size_t>(i)]);
}

TEST_CASE("gemv rejects shape mismatch") {
  std::vector<Cplx> x(3), y(4);
  CHECK_THROWS_AS(kernels::gemv(Mat<Cplx>(4, 5), x, y, ExecMode::serial), std::logic_error);
}

TEST_CASE("grid_map gathers deterministically in both modes") {
  const std::function<double(int)> fn = [](int i) { return 0.5 * i * i - 3.0 * i; };
  const auto s = kernels::grid_map(257, fn, ExecMode::serial);
  const auto p = kernels::grid_map(257, fn, ExecMode::parallel);
  CHECK(s == p);
  CHECK(s.size() == 257);
  CHECK(s[10] == 0.5 * 100 - 30.0);
}

TEST_CASE("exec mode is a process-wide switch") {
  const ExecMode before = kernels::exec_mode();
  kernels::set_exec_mode(ExecMode::serial);
  CHECK(kernels::exec_mode() == ExecMode::serial);
  kernels::set_exec_mode(ExecMode::parallel);
  CHECK(kernels::exec_mode() == ExecMode::parallel);
  kernels::set_exec_mode(before);
}
