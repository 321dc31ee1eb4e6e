#ifndef MCFT_CIRCLE_HPP
#define MCFT_CIRCLE_HPP

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcft/scalars.hpp"

namespace mcft {

struct TruncationError : std::runtime_error {
  double mass;
  explicit TruncationError(const std::string& what, double m) : std::runtime_error(what), mass(m) {}
};

struct BranchCutError : std::runtime_error {
  explicit BranchCutError(const std::string& what) : std::runtime_error(what) {}
};

// Band-limited function on the circle, stored by Fourier coefficients
// f(e^{i theta}) = sum_{|n| <= band} coeff(n) e^{i n theta}.
class TestFunction {
 public:
  TestFunction() : band_(0), c_(1, Cplx(0, 0)) {}
  explicit TestFunction(int band) : band_(band) {
    if (band < 0) throw std::invalid_argument("TestFunction: negative band");
    c_.assign(2 * static_cast<size_t>(band) + 1, Cplx(0, 0));
  }

  static TestFunction basis(int n) {
    TestFunction f(std::abs(n));
    f.set_coeff(n, Cplx(1, 0));
    return f;
  }

  int band() const { return band_; }
  Cplx coeff(int n) const { return std::abs(n) <= band_ ? c_[static_cast<size_t>(n + band_)] : Cplx(0, 0); }
  void set_coeff(int n, Cplx v) {
    if (std::abs(n) > band_) throw std::out_of_range("TestFunction: coefficient outside band");
    c_[static_cast<size_t>(n + band_)] = v;
  }

  Cplx eval_angle(double theta) const;
  Cplx eval(Cplx z_on_circle) const;

  TestFunction derivative() const;  // d/d theta
  TestFunction truncated(int new_band) const;

  friend TestFunction operator+(const TestFunction& f, const TestFunction& g);
  friend TestFunction operator-(const TestFunction& f, const TestFunction& g);
  friend TestFunction operator*(Cplx s, const TestFunction& f);
  friend TestFunction pointwise_product(const TestFunction& f, const TestFunction& g);

  double l2_norm() const;

 private:
  int band_;
  std::vector<Cplx> c_;
};

// DFT of 2K equispaced samples values[j] = f(e^{2 pi i j / (2K)}), restricted to |n| <= band.
TestFunction from_samples(const std::vector<Cplx>& values, int band);

// || f ||_s = ( sum |f^(n)|^2 (1+n^2)^s )^{1/2}
double sobolev_norm(const TestFunction& f, double s);

enum class Reflect { invert, conjugate, conjugate_invert };
TestFunction reflect_transform(const TestFunction& f, Reflect mode);

// Element of PSU(1,1) acting by z -> (a z + b)/(conj(b) z + conj(a)), stored by the
// representative with Re(a) > 0 (or Im(a) > 0 when Re(a) = 0).
class MoebiusElement {
 public:
  MoebiusElement() : a_(1, 0), b_(0, 0) {}
  MoebiusElement(Cplx a, Cplx b);

  static MoebiusElement identity() { return MoebiusElement(); }
  static MoebiusElement rotation(double phi);

  Cplx a() const { return a_; }
  Cplx b() const { return b_; }

  MoebiusElement inverse() const { return MoebiusElement(std::conj(a_), -b_); }
  friend MoebiusElement compose(const MoebiusElement& g1, const MoebiusElement& g2);

  Cplx apply(Cplx z) const;
  // X_gamma(z) = -i d/d theta log gamma(e^{i theta}); equals 1/|a z + b|^2 on the circle.
  double x_gamma(Cplx z_on_circle) const;

  double distance(const MoebiusElement& o) const;

 private:
  Cplx a_, b_;
};

// alpha(gamma)(z) = 1/gamma(1/z); on representatives (a,b) -> (conj a, conj b).
MoebiusElement alpha_automorphism(const MoebiusElement& g);

// Element of the complexified Lie algebra, c[-1] L_{-1} + c[0] L_0 + c[1] L_1,
// where L_k is the vector field -i e^{i k theta} d/d theta.
class LieElement {
 public:
  LieElement() : c_{Cplx(0, 0), Cplx(0, 0), Cplx(0, 0)} {}
  LieElement(Cplx cm1, Cplx c0, Cplx cp1) : c_{cm1, c0, cp1} {}

  // d/d theta = i L_0, the rotation flow
  static LieElement rotation_generator() { return LieElement(Cplx(0, 0), Cplx(0, 1), Cplx(0, 0)); }
  // the two remaining real directions, L_{-1} - L_1 and i(L_{-1} + L_1)
  static LieElement boost_x() { return LieElement(Cplx(1, 0), Cplx(0, 0), Cplx(-1, 0)); }
  static LieElement boost_y() { return LieElement(Cplx(0, 1), Cplx(0, 0), Cplx(0, 1)); }

  Cplx coeff(int k) const { return c_[static_cast<size_t>(k + 1)]; }

  bool is_real_form(double tol = 1e-12) const;

  // vector field as g(theta) d/d theta with g = sum_k coeff(k) * (-i e^{i k theta})
  TestFunction field_function() const;

  // 2x2 matrix (c0/2, c_{-1}; -c_1, -c0/2), row-major; su(1,1) iff real form
  std::array<Cplx, 4> matrix() const;
  static LieElement from_matrix(const std::array<Cplx, 4>& m);

  friend LieElement bracket(const LieElement& x, const LieElement& y);
  friend LieElement operator+(const LieElement& x, const LieElement& y);
  friend LieElement operator*(Cplx s, const LieElement& x);

 private:
  std::array<Cplx, 3> c_;
};

MoebiusElement exp_lie(const LieElement& x, double t = 1.0);
// Principal logarithm; throws BranchCutError at the elliptic branch cut (rotation by pi).
LieElement log_moebius(const MoebiusElement& g);

struct BetaResult {
  TestFunction f;
  double tail_mass;
};

// beta_d(gamma) f = (X_gamma . gamma^{-1})^{d-1} * (f . gamma^{-1}), band-limited to out_band.
// out_band < 0 selects the default 2*band + 8*ceil(rho^2), rho = |a|+|b|.
BetaResult beta_action_full(int d, const MoebiusElement& g, const TestFunction& f, int out_band = -1);
TestFunction beta_action(int d, const MoebiusElement& g, const TestFunction& f, int out_band = -1,
                         double tail_tol = 1e-9);

}  // namespace mcft

#endif
