#ifndef GLSHP_RATIONAL_HPP
#define GLSHP_RATIONAL_HPP

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

#include "glshp/errors.hpp"

namespace glshp {

// Exact rational over int64, always normalized (gcd 1, positive denominator).
// Magnitudes in this library stay tiny (exponent bookkeeping), so int64 is
// ample; arithmetic still guards against pathological overflow.
class Rational {
 public:
  constexpr Rational() : num_(0), den_(1) {}
  constexpr Rational(std::int64_t n) : num_(n), den_(1) {}
  Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) { normalize(); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(mul(a.num_, b.den_) + mul(b.num_, a.den_),
                    mul(a.den_, b.den_));
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(mul(a.num_, b.den_) - mul(b.num_, a.den_),
                    mul(a.den_, b.den_));
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(mul(a.num_, b.num_), mul(a.den_, b.den_));
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw DomainError("rational division by zero");
    return Rational(mul(a.num_, b.den_), mul(a.den_, b.num_));
  }
  Rational operator-() const { return Rational(-num_, den_); }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) {
    return !(a == b);
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num_) * b.den_ <
           static_cast<__int128>(b.num_) * a.den_;
  }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  // Exact conversion of a double that is a small rational (orders such as
  // 1, 2, 0.5, 1.8 arriving through the convenience overloads). Rejects
  // anything that does not round-trip with denominator <= 10^6.
  static Rational from_double(double v) {
    if (!std::isfinite(v)) throw DomainError("order is not finite");
    // continued-fraction expansion with small denominator bound
    double x = v;
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    for (int it = 0; it < 64; ++it) {
      double fl = std::floor(x);
      std::int64_t a = static_cast<std::int64_t>(fl);
      std::int64_t p2 = a * p1 + p0;
      std::int64_t q2 = a * q1 + q0;
      if (q2 > 1000000 || q2 < 0) break;
      p0 = p1; q0 = q1; p1 = p2; q1 = q2;
      if (static_cast<double>(p1) / static_cast<double>(q1) == v)
        return Rational(p1, q1);
      double frac = x - fl;
      if (frac == 0.0) break;
      x = 1.0 / frac;
    }
    throw DomainError("value " + std::to_string(v) +
                      " is not representable as a small rational");
  }

 private:
  void normalize() {
    if (den_ == 0) throw DomainError("rational with zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  static std::int64_t mul(std::int64_t a, std::int64_t b) {
    // exponent bookkeeping stays tiny; fail loudly rather than wrap
    __int128 p = static_cast<__int128>(a) * b;
    if (p > (std::int64_t{1} << 62) || p < -(std::int64_t{1} << 62))
      throw DomainError("rational overflow");
    return static_cast<std::int64_t>(p);
  }

  std::int64_t num_;
  std::int64_t den_;
};

}  // namespace glshp

#endif  // GLSHP_RATIONAL_HPP
