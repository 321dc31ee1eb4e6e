#ifndef MCFT_SCALARS_HPP
#define MCFT_SCALARS_HPP

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace mcft {

using Rat = mpq_class;
using Cplx = std::complex<double>;

inline Rat rat(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rat: zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

// Parses "p/q" or "p"; used for exact config values such as the central charge.
inline Rat rat_from_string(const std::string& s) {
  Rat q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("rat_from_string: bad rational '" + s + "'");
  q.canonicalize();
  return q;
}

// Exact complex scalar with rational real and imaginary parts.
struct RatC {
  Rat re, im;

  RatC() : re(0), im(0) {}
  RatC(long n) : re(n), im(0) {}
  RatC(const Rat& r) : re(r), im(0) {}
  RatC(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}

  static RatC unit_i() { return RatC(Rat(0), Rat(1)); }

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  bool is_real() const { return sgn(im) == 0; }

  RatC conj() const { return RatC(re, Rat(-im)); }

  RatC operator-() const { return RatC(Rat(-re), Rat(-im)); }
  RatC& operator+=(const RatC& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  RatC& operator-=(const RatC& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  RatC& operator*=(const RatC& o) {
    Rat r = re * o.re - im * o.im;
    Rat i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }
  RatC& operator/=(const RatC& o) {
    Rat n = o.re * o.re + o.im * o.im;
    if (sgn(n) == 0) throw std::domain_error("RatC: division by zero");
    Rat r = (re * o.re + im * o.im) / n;
    Rat i = (im * o.re - re * o.im) / n;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }

  friend RatC operator+(RatC a, const RatC& b) { return a += b; }
  friend RatC operator-(RatC a, const RatC& b) { return a -= b; }
  friend RatC operator*(RatC a, const RatC& b) { return a *= b; }
  friend RatC operator/(RatC a, const RatC& b) { return a /= b; }
  friend bool operator==(const RatC& a, const RatC& b) { return cmp(a.re, b.re) == 0 && cmp(a.im, b.im) == 0; }
  friend bool operator!=(const RatC& a, const RatC& b) { return !(a == b); }

  std::string str() const {
    if (sgn(im) == 0) return re.get_str();
    return re.get_str() + (sgn(im) < 0 ? "-" : "+") + mpq_class(abs(im)).get_str() + "i";
  }
};

inline Cplx to_cplx(const RatC& x) { return Cplx(x.re.get_d(), x.im.get_d()); }
inline Cplx to_cplx(const Cplx& x) { return x; }

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<RatC> {
  static constexpr bool exact = true;
  static RatC zero() { return RatC(); }
  static RatC one() { return RatC(1); }
  static RatC conj(const RatC& x) { return x.conj(); }
  static bool is_zero(const RatC& x) { return x.is_zero(); }
  static double abs_d(const RatC& x) { return std::abs(to_cplx(x)); }
};

template <>
struct ScalarTraits<Cplx> {
  static constexpr bool exact = false;
  static Cplx zero() { return Cplx(0.0, 0.0); }
  static Cplx one() { return Cplx(1.0, 0.0); }
  static Cplx conj(const Cplx& x) { return std::conj(x); }
  static bool is_zero(const Cplx& x) { return x == Cplx(0.0, 0.0); }
  static double abs_d(const Cplx& x) { return std::abs(x); }
};

// Exact binomial coefficient for integer (possibly negative) upper index.
inline Rat binom_rat(long n, long j) {
  if (j < 0) return Rat(0);
  Rat out(1);
  for (long t = 0; t < j; ++t) {
    out *= Rat(n - t);
    out /= Rat(t + 1);
  }
  return out;
}

}  // namespace mcft

#endif
