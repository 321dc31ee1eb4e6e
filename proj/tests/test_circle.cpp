#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "mcft/circle.hpp"

using namespace mcft;

namespace {
constexpr double kPi = 3.14159265358979323846;

double fn_dev(const TestFunction& f, const TestFunction& g) {
  const int b = std::max(f.band(), g.band());
  double d = 0.0;
  for (int n = -b; n <= b; ++n) d = std::max(d, std::abs(f.coeff(n) - g.coeff(n)));
  return d;
}
}  // namespace

TEST_CASE("basis functions and evaluation") {
  const TestFunction e3 = TestFunction::basis(3);
  CHECK(e3.band() == 3);
  CHECK(e3.coeff(3) == Cplx(1, 0));
  CHECK(e3.coeff(-3) == Cplx(0, 0));
  CHECK(e3.coeff(9) == Cplx(0, 0));  // outside the band reads as zero
  const double th = 0.7;
  CHECK(std::abs(e3.eval_angle(th) - std::exp(Cplx(0, 3 * th))) < 1e-15);
  CHECK(std::abs(e3.eval(std::exp(Cplx(0, th))) - e3.eval_angle(th)) < 1e-14);
  CHECK_THROWS_AS(TestFunction(-1), std::invalid_argument);
  TestFunction f(2);
  CHECK_THROWS_AS(f.set_coeff(3, Cplx(1, 0)), std::out_of_range);
}

TEST_CASE("derivative multiplies mode n by i n") {
  TestFunction f(2);
  f.set_coeff(2, Cplx(1, 0));
  f.set_coeff(-1, Cplx(0, 3));
  const TestFunction df = f.derivative();
  CHECK(df.coeff(2) == Cplx(0, 2));
  CHECK(df.coeff(-1) == Cplx(0, 3) * Cplx(0, -1));
  CHECK(df.coeff(0) == Cplx(0, 0));
}

TEST_CASE("pointwise product convolves coefficients") {
  const TestFunction p = pointwise_product(TestFunction::basis(2), TestFunction::basis(-3));
  CHECK(p.band() == 5);
  CHECK(p.coeff(-1) == Cplx(1, 0));
  double other = 0.0;
  for (int n = -5; n <= 5; ++n)
    if (n != -1) other += std::abs(p.coeff(n));
  CHECK(other == 0.0);
}

TEST_CASE("arithmetic and truncation") {
  const TestFunction s = TestFunction::basis(1) + TestFunction::basis(-1);
  CHECK(s.l2_norm() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  const TestFunction t = s.truncated(0);
  CHECK(t.band() == 0);
  CHECK(t.coeff(1) == Cplx(0, 0));
  const TestFunction d = s - Cplx(2, 0) * TestFunction::basis(1);
  CHECK(d.coeff(1) == Cplx(-1, 0));
  CHECK(d.coeff(-1) == Cplx(1, 0));
}

TEST_CASE("from_samples recovers band-limited data") {
  TestFunction f(3);
  f.set_coeff(-2, Cplx(0.5, -1.25));
  f.set_coeff(3, Cplx(-2, 0.75));
  f.set_coeff(0, Cplx(1, 0));
  const int samples = 32;
  std::vector<Cplx> vals(samples);
  for (int j = 0; j < samples; ++j) vals[static_cast<size_t>(j)] = f.eval_angle(2 * kPi * j / samples);
  CHECK(fn_dev(from_samples(vals, 3), f) < 1e-13);
}

TEST_CASE("fourier coefficients of exp(cos theta) are modified Bessel values") {
  const int samples = 256;
  std::vector<Cplx> vals(samples);
  for (int j = 0; j < samples; ++j)
    vals[static_cast<size_t>(j)] = std::exp(std::cos(2 * kPi * j / samples));
  const TestFunction f = from_samples(vals, 6);
  for (int n = 0; n <= 6; ++n) {
    const double in1 = std::cyl_bessel_i(static_cast<double>(n), 1.0);
    CHECK(std::abs(f.coeff(n) - Cplx(in1, 0)) < 1e-12);
    CHECK(std::abs(f.coeff(-n) - Cplx(in1, 0)) < 1e-12);
  }
}

TEST_CASE("sobolev norms of basis combinations") {
  CHECK(sobolev_norm(TestFunction::basis(3), 1.0) == doctest::Approx(std::sqrt(10.0)).epsilon(1e-14));
  const TestFunction s = TestFunction::basis(1) + TestFunction::basis(-1);
  CHECK(sobolev_norm(s, 2.0) == doctest::Approx(std::sqrt(8.0)).epsilon(1e-14));
  CHECK(sobolev_norm(s, 0.0) == doctest::Approx(s.l2_norm()).epsilon(1e-14));
}

TEST_CASE("reflections are involutive and compose") {
  TestFunction f(2);
  f.set_coeff(1, Cplx(0.5, 0.25));
  f.set_coeff(-2, Cplx(-1, 2));
  for (Reflect mode : {Reflect::invert, Reflect::conjugate, Reflect::conjugate_invert})
    CHECK(fn_dev(reflect_transform(reflect_transform(f, mode), mode), f) == 0.0);
  const TestFunction a = reflect_transform(reflect_transform(f, Reflect::invert), Reflect::conjugate);
  CHECK(fn_dev(a, reflect_transform(f, Reflect::conjugate_invert)) == 0.0);
}

TEST_CASE("moebius elements normalize and compose") {
  const MoebiusElement g(std::polar(std::cosh(0.5), 0.3), std::polar(std::sinh(0.5), -0.7));
  CHECK(std::abs(std::norm(g.a()) - std::norm(g.b()) - 1.0) < 1e-12);
  CHECK(g.a().real() > 0);
  const MoebiusElement gi = g.inverse();
  CHECK(compose(g, gi).distance(MoebiusElement::identity()) < 1e-12);
  CHECK(compose(gi, g).distance(MoebiusElement::identity()) < 1e-12);
  const MoebiusElement h = MoebiusElement::rotation(0.4);
  const MoebiusElement k(Cplx(std::cosh(0.25), 0), std::polar(std::sinh(0.25), 0.5));
  const Cplx z = std::exp(Cplx(0, 1.3));
  CHECK(std::abs(compose(g, compose(h, k)).apply(z) - compose(compose(g, h), k).apply(z)) < 1e-12);
}

TEST_CASE("points on the circle stay on the circle") {
  const MoebiusElement g(std::polar(std::cosh(0.8), 0.4), std::polar(std::sinh(0.8), 1.9));
  for (double th : {0.0, 0.9, 2.2, 4.4}) {
    const Cplx z = std::exp(Cplx(0, th));
    CHECK(std::abs(std::abs(g.apply(z)) - 1.0) < 1e-12);
    // X_gamma is the angular derivative of the action: positive Jacobian on the circle
    CHECK(g.x_gamma(z) == doctest::Approx(1.0 / std::norm(g.a() * z + g.b())).epsilon(1e-12));
    CHECK(g.x_gamma(z) > 0);
  }
}

TEST_CASE("rotation matches exp of the rotation generator") {
  for (double phi : {0.3, 1.7, -2.5}) {
    const MoebiusElement r = exp_lie(LieElement::rotation_generator(), phi);
    CHECK(r.distance(MoebiusElement::rotation(phi)) < 1e-12);
    const Cplx z = std::exp(Cplx(0, 0.8));
    CHECK(std::abs(r.apply(z) - std::exp(Cplx(0, phi)) * z) < 1e-12);
  }
}

TEST_CASE("log inverts exp away from the branch cut") {
  for (const LieElement& x : {LieElement::boost_x(), LieElement::boost_y(),
                              LieElement::rotation_generator()}) {
    const double t = 0.45;
    const LieElement back = log_moebius(exp_lie(x, t));
    for (int k = -1; k <= 1; ++k) CHECK(std::abs(back.coeff(k) - t * x.coeff(k)) < 1e-12);
  }
  CHECK_THROWS_AS(log_moebius(MoebiusElement::rotation(kPi)), BranchCutError);
}

TEST_CASE("lie brackets match the matrix commutator") {
  const LieElement x(Cplx(0.3, -0.1), Cplx(0.2, 0.7), Cplx(-1.1, 0.4));
  const LieElement y(Cplx(-0.6, 0.2), Cplx(0.9, -0.3), Cplx(0.5, 0.8));
  const auto xm = x.matrix(), ym = y.matrix();
  std::array<Cplx, 4> comm{};
  comm[0] = xm[0] * ym[0] + xm[1] * ym[2] - (ym[0] * xm[0] + ym[1] * xm[2]);
  comm[1] = xm[0] * ym[1] + xm[1] * ym[3] - (ym[0] * xm[1] + ym[1] * xm[3]);
  comm[2] = xm[2] * ym[0] + xm[3] * ym[2] - (ym[2] * xm[0] + ym[3] * xm[2]);
  comm[3] = xm[2] * ym[1] + xm[3] * ym[3] - (ym[2] * xm[1] + ym[3] * xm[3]);
  const auto bm = bracket(x, y).matrix();
  for (int i = 0; i < 4; ++i) CHECK(std::abs(bm[static_cast<size_t>(i)] - comm[static_cast<size_t>(i)]) < 1e-13);
  const LieElement rt = LieElement::from_matrix(x.matrix());
  for (int k = -1; k <= 1; ++k) CHECK(std::abs(rt.coeff(k) - x.coeff(k)) < 1e-14);
}

TEST_CASE("real form directions and field functions") {
  CHECK(LieElement::rotation_generator().is_real_form());
  CHECK(LieElement::boost_x().is_real_form());
  CHECK(LieElement::boost_y().is_real_form());
  CHECK(!LieElement(Cplx(1, 0), Cplx(0, 0), Cplx(1, 0)).is_real_form());
  // d/d theta flow: field function of the rotation generator is the constant 1
  const TestFunction g = LieElement::rotation_generator().field_function();
  CHECK(std::abs(g.coeff(0) - Cplx(1, 0)) < 1e-15);
  CHECK(std::abs(g.coeff(1)) + std::abs(g.coeff(-1)) < 1e-15);
}

TEST_CASE("alpha automorphism is an involutive homomorphism") {
  const MoebiusElement g(std::polar(std::cosh(0.35), 0.25), std::polar(std::sinh(0.35), -0.9));
  const MoebiusElement h(std::polar(std::cosh(0.6), -0.15), std::polar(std::sinh(0.6), 0.7));
  CHECK(alpha_automorphism(alpha_automorphism(g)).distance(g) < 1e-14);
  CHECK(alpha_automorphism(compose(g, h)).distance(compose(alpha_automorphism(g), alpha_automorphism(h))) < 1e-12);
}

TEST_CASE("beta action of rotations is a diagonal phase") {
  for (int d : {1, 2}) {
    for (int n : {-3, 0, 2}) {
      const TestFunction out = beta_action(d, MoebiusElement::rotation(0.6), TestFunction::basis(n));
      for (int k = -out.band(); k <= out.band(); ++k) {
        const Cplx want = (k == n) ? std::exp(Cplx(0, -0.6 * n)) : Cplx(0, 0);
        CHECK(std::abs(out.coeff(k) - want) < 1e-12);
      }
    }
  }
}

TEST_CASE("beta action composes along the group") {
  const MoebiusElement g1 = exp_lie(LieElement::boost_x(), 0.2);
  const MoebiusElement g2 = exp_lie(LieElement::boost_y(), 0.15);
  const TestFunction f = TestFunction::basis(1) + Cplx(0, 0.5) * TestFunction::basis(-2);
  for (int d : {1, 2}) {
    const TestFunction lhs = beta_action(d, compose(g1, g2), f, 48);
    const TestFunction rhs = beta_action(d, g1, beta_action(d, g2, f, 48), 48);
    CHECK(fn_dev(lhs.truncated(24), rhs.truncated(24)) < 1e-9);
  }
}

TEST_CASE("beta action reports and enforces tail mass") {
  const MoebiusElement big = exp_lie(LieElement::boost_x(), 2.5);
  const BetaResult r = beta_action_full(1, big, TestFunction::basis(2), 4);
  CHECK(r.tail_mass > 1e-6);  // a hard boost pushes mass far outside band 4
  CHECK_THROWS_AS(beta_action(1, big, TestFunction::basis(2), 4), TruncationError);
  const TestFunction ok = beta_action(1, MoebiusElement::rotation(1.0), TestFunction::basis(2), 4);
  CHECK(std::abs(ok.coeff(2)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("beta action of the identity is the identity") {
  TestFunction f(3);
  f.set_coeff(-3, Cplx(0.2, 1));
  f.set_coeff(1, Cplx(-0.7, 0.1));
  for (int d : {1, 2}) CHECK(fn_dev(beta_action(d, MoebiusElement::identity(), f), f) < 1e-14);
}
