#ifndef GLSHP_SERIES_HPP
#define GLSHP_SERIES_HPP

#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <utility>

#include "glshp/exponent.hpp"

namespace glshp {

// One term c * x^a * t^b with exact affine exponents.
struct Monomial {
  double coeff = 0.0;
  Exponent xexp;
  Exponent texp;
};

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Canonical finite sum of monomials keyed by (xexp, texp). No two terms
// share a key and no stored coefficient is exactly zero, so structural
// equality is meaningful and operations commute up to roundoff only in
// the coefficients.
class FracSeries {
 public:
  using Key = std::pair<Exponent, Exponent>;
  using TermMap = std::map<Key, double>;

  FracSeries() = default;

  static FracSeries zero() { return FracSeries(); }
  static FracSeries constant(double c) {
    FracSeries s;
    s.add_term(c, Exponent(), Exponent());
    return s;
  }
  static FracSeries monomial(double c, Exponent xe, Exponent te) {
    FracSeries s;
    s.add_term(c, xe, te);
    return s;
  }

  void add_term(double c, const Exponent& xe, const Exponent& te) {
    if (c == 0.0) return;
    Key k{xe, te};
    auto it = terms_.find(k);
    if (it == terms_.end()) {
      terms_.emplace(k, c);
    } else {
      it->second += c;
      if (it->second == 0.0) terms_.erase(it);
    }
  }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  double coeff(const Exponent& xe, const Exponent& te) const {
    auto it = terms_.find(Key{xe, te});
    return it == terms_.end() ? 0.0 : it->second;
  }

  double max_abs_coeff() const {
    double m = 0.0;
    for (const auto& [k, c] : terms_) m = std::max(m, std::abs(c));
    return m;
  }

  friend FracSeries operator+(const FracSeries& a, const FracSeries& b) {
    FracSeries out = a;
    for (const auto& [k, c] : b.terms_) out.add_term(c, k.first, k.second);
    return out;
  }
  friend FracSeries operator-(const FracSeries& a, const FracSeries& b) {
    FracSeries out = a;
    for (const auto& [k, c] : b.terms_) out.add_term(-c, k.first, k.second);
    return out;
  }
  friend FracSeries operator*(const FracSeries& a, double s) {
    FracSeries out;
    if (s == 0.0) return out;
    for (const auto& [k, c] : a.terms_) out.add_term(c * s, k.first, k.second);
    return out;
  }
  friend FracSeries operator*(double s, const FracSeries& a) { return a * s; }
  FracSeries operator-() const { return *this * -1.0; }

  friend bool operator==(const FracSeries& a, const FracSeries& b) {
    return a.terms_ == b.terms_;
  }

  // Same exponent keys and coefficients within |rel| relative tolerance.
  bool approx_equal(const FracSeries& other, double rel) const {
    if (terms_.size() != other.terms_.size()) return false;
    auto it = other.terms_.begin();
    for (const auto& [k, c] : terms_) {
      if (it->first != k) return false;
      double scale = std::max({1.0, std::abs(c), std::abs(it->second)});
      if (std::abs(c - it->second) > rel * scale) return false;
      ++it;
    }
    return true;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [k, c] : terms_) {
      double a = std::abs(c);
      if (out.empty()) {
        out = c < 0 ? "-" : "";
      } else {
        out += c < 0 ? " - " : " + ";
      }
      out += format_double(a);
      if (!k.first.is_zero()) out += "*x^(" + k.first.str() + ")";
      if (!k.second.is_zero()) out += "*t^(" + k.second.str() + ")";
    }
    return out;
  }

 private:
  TermMap terms_;
};

// Distributive product; exponents add as exact affine forms.
inline FracSeries mul(const FracSeries& a, const FracSeries& b) {
  FracSeries out;
  for (const auto& [ka, ca] : a.terms())
    for (const auto& [kb, cb] : b.terms())
      out.add_term(ca * cb, ka.first + kb.first, ka.second + kb.second);
  return out;
}

inline FracSeries operator*(const FracSeries& a, const FracSeries& b) {
  return mul(a, b);
}

// n-fold classical partial derivative in t. A term whose t-exponent is
// exactly zero (or lands on zero numerically) is annihilated.
inline FracSeries dt(const FracSeries& s, int n,
                     const FracOrders& orders = FracOrders()) {
  if (n < 0) throw DomainError("dt requires n >= 0");
  FracSeries cur = s;
  for (int step = 0; step < n; ++step) {
    FracSeries next;
    for (const auto& [k, c] : cur.terms()) {
      const Exponent& te = k.second;
      if (te.is_zero()) continue;
      double tv = te.numeric(orders);
      if (std::abs(tv) <= 1e-12) continue;
      next.add_term(c * tv, k.first, te - Exponent(Rational(1)));
    }
    cur = std::move(next);
  }
  return cur;
}

// Pointwise value with exponents resolved at the given orders.
inline double eval(const FracSeries& s, double x, double t,
                   const FracOrders& orders) {
  if (x < 0.0 || t < 0.0)
    throw DomainError("eval requires x >= 0 and t >= 0");
  auto powc = [](double base, double e) -> double {
    if (std::abs(e) <= 1e-15) return 1.0;
    if (base == 0.0) {
      if (e < 0.0) throw DomainError("eval: 0 raised to a negative exponent");
      return 0.0;
    }
    return std::pow(base, e);
  };
  double sum = 0.0;
  for (const auto& [k, c] : s.terms())
    sum += c * powc(x, k.first.numeric(orders)) *
           powc(t, k.second.numeric(orders));
  return sum;
}

// Exact integral over [0,1]^2: sum of c / ((a+1)(b+1)).
inline double integrate_unit_square(const FracSeries& s,
                                    const FracOrders& orders) {
  double sum = 0.0;
  for (const auto& [k, c] : s.terms()) {
    double a = k.first.numeric(orders);
    double b = k.second.numeric(orders);
    if (a <= -1.0 + 1e-12 || b <= -1.0 + 1e-12)
      throw DomainError("integrate_unit_square: exponent <= -1");
    sum += c / ((a + 1.0) * (b + 1.0));
  }
  return sum;
}

}  // namespace glshp

#endif  // GLSHP_SERIES_HPP
