#include "mcft/circle.hpp"

#include <cmath>

namespace mcft {

namespace {
constexpr double kPi = 3.14159265358979323846;

Cplx unit(double theta) { return Cplx(std::cos(theta), std::sin(theta)); }

int next_pow2(int n) {
  int p = 1;
  while (p < n) p *= 2;
  return p;
}
}  // namespace

Cplx TestFunction::eval_angle(double theta) const {
  // evaluate as ( ... (c_M w + c_{M-1}) w + ... ) scaled by w^{-M}, w = e^{i theta}
  Cplx w = unit(theta);
  Cplx acc(0, 0);
  for (int n = band_; n >= -band_; --n) acc = acc * w + coeff(n);
  return acc * std::pow(w, Cplx(-band_, 0));
}

Cplx TestFunction::eval(Cplx z) const { return eval_angle(std::arg(z)); }

TestFunction TestFunction::derivative() const {
  TestFunction d(band_);
  for (int n = -band_; n <= band_; ++n) d.set_coeff(n, Cplx(0, n) * coeff(n));
  return d;
}

TestFunction TestFunction::truncated(int new_band) const {
  TestFunction g(new_band);
  for (int n = -new_band; n <= new_band; ++n) g.set_coeff(n, coeff(n));
  return g;
}

TestFunction operator+(const TestFunction& f, const TestFunction& g) {
  TestFunction h(std::max(f.band_, g.band_));
  for (int n = -h.band_; n <= h.band_; ++n) h.set_coeff(n, f.coeff(n) + g.coeff(n));
  return h;
}

TestFunction operator-(const TestFunction& f, const TestFunction& g) {
  TestFunction h(std::max(f.band_, g.band_));
  for (int n = -h.band_; n <= h.band_; ++n) h.set_coeff(n, f.coeff(n) - g.coeff(n));
  return h;
}

TestFunction operator*(Cplx s, const TestFunction& f) {
  TestFunction h(f.band_);
  for (int n = -h.band_; n <= h.band_; ++n) h.set_coeff(n, s * f.coeff(n));
  return h;
}

TestFunction pointwise_product(const TestFunction& f, const TestFunction& g) {
  TestFunction h(f.band_ + g.band_);
  for (int n = -f.band_; n <= f.band_; ++n) {
    if (f.coeff(n) == Cplx(0, 0)) continue;
    for (int m = -g.band_; m <= g.band_; ++m) h.set_coeff(n + m, h.coeff(n + m) + f.coeff(n) * g.coeff(m));
  }
  return h;
}

double TestFunction::l2_norm() const {
  double s = 0;
  for (const auto& x : c_) s += std::norm(x);
  return std::sqrt(s);
}

TestFunction from_samples(const std::vector<Cplx>& values, int band) {
  const int count = static_cast<int>(values.size());
  if (count < 2 * band + 1)
    throw std::invalid_argument("from_samples: sample count too small for requested band");
  TestFunction f(band);
  for (int n = -band; n <= band; ++n) {
    Cplx acc(0, 0);
    for (int j = 0; j < count; ++j) acc += values[static_cast<size_t>(j)] * unit(-2.0 * kPi * j * n / count);
    f.set_coeff(n, acc / static_cast<double>(count));
  }
  return f;
}

double sobolev_norm(const TestFunction& f, double s) {
  if (s < 0) throw std::invalid_argument("sobolev_norm: negative exponent");
  double acc = 0;
  for (int n = -f.band(); n <= f.band(); ++n)
    acc += std::norm(f.coeff(n)) * std::pow(1.0 + static_cast<double>(n) * n, s);
  return std::sqrt(acc);
}

TestFunction reflect_transform(const TestFunction& f, Reflect mode) {
  TestFunction g(f.band());
  for (int n = -f.band(); n <= f.band(); ++n) {
    switch (mode) {
      case Reflect::invert:
        g.set_coeff(n, f.coeff(-n));
        break;
      case Reflect::conjugate:
        g.set_coeff(n, std::conj(f.coeff(-n)));
        break;
      case Reflect::conjugate_invert:
        g.set_coeff(n, std::conj(f.coeff(n)));
        break;
    }
  }
  return g;
}

MoebiusElement::MoebiusElement(Cplx a, Cplx b) : a_(a), b_(b) {
  double det = std::norm(a_) - std::norm(b_);
  if (det <= 0 || std::abs(det - 1.0) > 1e-6)
    throw std::invalid_argument("MoebiusElement: representative not in SU(1,1)");
  double s = 1.0 / std::sqrt(det);
  a_ *= s;
  b_ *= s;
  if (a_.real() < 0 || (a_.real() == 0 && a_.imag() < 0)) {
    a_ = -a_;
    b_ = -b_;
  }
}

MoebiusElement MoebiusElement::rotation(double phi) {
  return MoebiusElement(unit(phi / 2), Cplx(0, 0));
}

MoebiusElement compose(const MoebiusElement& g1, const MoebiusElement& g2) {
  return MoebiusElement(g1.a_ * g2.a_ + g1.b_ * std::conj(g2.b_),
                        g1.a_ * g2.b_ + g1.b_ * std::conj(g2.a_));
}

Cplx MoebiusElement::apply(Cplx z) const { return (a_ * z + b_) / (std::conj(b_) * z + std::conj(a_)); }

double MoebiusElement::x_gamma(Cplx z) const { return 1.0 / std::norm(a_ * z + b_); }

double MoebiusElement::distance(const MoebiusElement& o) const {
  double d1 = std::abs(a_ - o.a_) + std::abs(b_ - o.b_);
  double d2 = std::abs(a_ + o.a_) + std::abs(b_ + o.b_);
  return std::min(d1, d2);
}

MoebiusElement alpha_automorphism(const MoebiusElement& g) {
  return MoebiusElement(std::conj(g.a()), std::conj(g.b()));
}

bool LieElement::is_real_form(double tol) const {
  return std::abs(c_[1].real()) <= tol && std::abs(c_[2] + std::conj(c_[0])) <= tol;
}

TestFunction LieElement::field_function() const {
  TestFunction g(1);
  for (int k = -1; k <= 1; ++k) g.set_coeff(k, Cplx(0, -1) * coeff(k));
  return g;
}

std::array<Cplx, 4> LieElement::matrix() const {
  Cplx x = coeff(0) / 2.0;
  return {x, coeff(-1), -coeff(1), -x};
}

LieElement LieElement::from_matrix(const std::array<Cplx, 4>& m) {
  return LieElement(m[1], 2.0 * m[0], -m[2]);
}

LieElement bracket(const LieElement& x, const LieElement& y) {
  LieElement z;
  for (int m = -1; m <= 1; ++m)
    for (int n = -1; n <= 1; ++n) {
      int k = m + n;
      if (std::abs(k) > 1) continue;  // coefficient (m-n) vanishes when m=n=+-1
      z.c_[static_cast<size_t>(k + 1)] += static_cast<double>(m - n) * x.coeff(m) * y.coeff(n);
    }
  return z;
}

LieElement operator+(const LieElement& x, const LieElement& y) {
  return LieElement(x.coeff(-1) + y.coeff(-1), x.coeff(0) + y.coeff(0), x.coeff(1) + y.coeff(1));
}

LieElement operator*(Cplx s, const LieElement& x) {
  return LieElement(s * x.coeff(-1), s * x.coeff(0), s * x.coeff(1));
}

MoebiusElement exp_lie(const LieElement& x, double t) {
  if (!x.is_real_form(1e-9)) throw std::invalid_argument("exp_lie: not in the real form");
  auto m = x.matrix();
  for (auto& e : m) e *= t;
  Cplx delta = m[0] * m[0] + m[1] * m[2];  // M^2 = delta * I
  Cplx ch, shc;
  if (std::abs(delta) < 1e-10) {
    ch = 1.0 + delta / 2.0 + delta * delta / 24.0;
    shc = 1.0 + delta / 6.0 + delta * delta / 120.0;
  } else {
    Cplx mu = std::sqrt(delta);
    ch = std::cosh(mu);
    shc = std::sinh(mu) / mu;
  }
  Cplx a = ch + shc * m[0];
  Cplx b = shc * m[1];
  return MoebiusElement(a, b);
}

LieElement log_moebius(const MoebiusElement& g) {
  double tr = g.a().real();  // normalized representative, tr/2 >= 0
  if (tr < 1e-9) throw BranchCutError("log_moebius: elliptic element at the branch cut");
  double factor;
  if (tr > 1.0 + 1e-12) {
    double mu = std::acosh(tr);
    factor = mu / std::sinh(mu);
  } else if (tr < 1.0 - 1e-12) {
    double nu = std::acos(tr);
    factor = nu / std::sin(nu);
  } else {
    factor = 1.0;
  }
  std::array<Cplx, 4> m = {factor * (g.a() - tr), factor * g.b(), factor * std::conj(g.b()),
                           factor * (std::conj(g.a()) - tr)};
  return LieElement::from_matrix(m);
}

BetaResult beta_action_full(int d, const MoebiusElement& g, const TestFunction& f, int out_band) {
  if (d < 0) throw std::invalid_argument("beta_action: negative dimension");
  if (out_band < 0) {
    double rho = std::abs(g.a()) + std::abs(g.b());
    out_band = 2 * f.band() + 8 * static_cast<int>(std::ceil(rho * rho));
  }
  const MoebiusElement ginv = g.inverse();
  const int count = next_pow2(4 * (out_band + 1));
  std::vector<Cplx> vals(static_cast<size_t>(count));
  for (int j = 0; j < count; ++j) {
    double theta = 2.0 * kPi * j / count;
    Cplx z = unit(theta);
    Cplx w = ginv.apply(z);
    double x = g.x_gamma(w);
    Cplx v = f.eval(w);
    if (d != 1) v *= std::pow(x, d - 1);
    vals[static_cast<size_t>(j)] = v;
  }
  // coefficients up to the resolution limit; everything beyond out_band is reported as tail
  TestFunction wide = from_samples(vals, count / 2 - 1);
  BetaResult out{wide.truncated(out_band), 0.0};
  double tail2 = 0;
  for (int n = -(count / 2 - 1); n <= count / 2 - 1; ++n)
    if (std::abs(n) > out_band) tail2 += std::norm(wide.coeff(n));
  out.tail_mass = std::sqrt(tail2);
  return out;
}

TestFunction beta_action(int d, const MoebiusElement& g, const TestFunction& f, int out_band,
                         double tail_tol) {
  BetaResult r = beta_action_full(d, g, f, out_band);
  if (r.tail_mass > tail_tol)
    throw TruncationError("beta_action: discarded tail mass above tolerance", r.tail_mass);
  return r.f;
}

}  // namespace mcft
