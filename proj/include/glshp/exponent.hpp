#ifndef GLSHP_EXPONENT_HPP
#define GLSHP_EXPONENT_HPP

#include <string>
#include <tuple>

#include "glshp/errors.hpp"
#include "glshp/rational.hpp"

namespace glshp {

// The two fractional orders of a problem, both in (0, 1].
struct FracOrders {
  double alpha = 1.0;
  double beta = 1.0;

  FracOrders() = default;
  FracOrders(double a, double b) : alpha(a), beta(b) { check(); }
  explicit FracOrders(double a) : alpha(a), beta(1.0) { check(); }

  void check() const {
    if (!(alpha > 0.0 && alpha <= 1.0))
      throw DomainError("alpha must lie in (0,1]");
    if (!(beta > 0.0 && beta <= 1.0))
      throw DomainError("beta must lie in (0,1]");
  }
};

// Exponent of x or t as an exact affine form p + q*alpha + r*beta.
// Equality and ordering are exact rational comparisons; no floating
// tolerance ever enters canonicalization.
struct Exponent {
  Rational p;  // pure-number part
  Rational q;  // multiplier of alpha
  Rational r;  // multiplier of beta

  constexpr Exponent() = default;
  Exponent(Rational p_, Rational q_ = Rational(0), Rational r_ = Rational(0))
      : p(p_), q(q_), r(r_) {}

  static Exponent number(Rational v) { return Exponent(v); }
  static Exponent alpha(Rational mult = Rational(1)) {
    return Exponent(Rational(0), mult);
  }
  static Exponent beta(Rational mult = Rational(1)) {
    return Exponent(Rational(0), Rational(0), mult);
  }
  // Accepts plain reals only when they are exactly a small rational.
  static Exponent of(double v) { return Exponent(Rational::from_double(v)); }

  bool is_zero() const { return p.is_zero() && q.is_zero() && r.is_zero(); }
  bool is_pure_number() const { return q.is_zero() && r.is_zero(); }

  double numeric(const FracOrders& o) const {
    return p.to_double() + q.to_double() * o.alpha + r.to_double() * o.beta;
  }

  friend Exponent operator+(const Exponent& a, const Exponent& b) {
    return Exponent(a.p + b.p, a.q + b.q, a.r + b.r);
  }
  friend Exponent operator-(const Exponent& a, const Exponent& b) {
    return Exponent(a.p - b.p, a.q - b.q, a.r - b.r);
  }
  Exponent operator-() const { return Exponent(-p, -q, -r); }

  friend bool operator==(const Exponent& a, const Exponent& b) {
    return a.p == b.p && a.q == b.q && a.r == b.r;
  }
  friend bool operator!=(const Exponent& a, const Exponent& b) {
    return !(a == b);
  }
  // Canonical total order for term maps (lexicographic, not numeric).
  friend bool operator<(const Exponent& a, const Exponent& b) {
    return std::tie(a.p, a.q, a.r) < std::tie(b.p, b.q, b.r);
  }

  // Renders e.g. "2", "2*a", "2+2*a", "1/2+3*b".
  std::string str() const {
    std::string out;
    auto append = [&out](const Rational& c, const char* sym) {
      if (c.is_zero()) return;
      std::string piece;
      Rational abs = c;
      bool neg = c < Rational(0);
      if (neg) abs = -c;
      if (sym[0] == '\0') {
        piece = abs.str();
      } else if (abs == Rational(1)) {
        piece = sym;
      } else {
        piece = abs.str() + "*" + sym;
      }
      if (out.empty()) {
        out = neg ? "-" + piece : piece;
      } else {
        out += neg ? "-" + piece : "+" + piece;
      }
    };
    append(p, "");
    append(q, "a");
    append(r, "b");
    if (out.empty()) out = "0";
    return out;
  }
};

}  // namespace glshp

#endif  // GLSHP_EXPONENT_HPP
