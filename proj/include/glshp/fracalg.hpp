#ifndef GLSHP_FRACALG_HPP
#define GLSHP_FRACALG_HPP

#include <cmath>

#include "glshp/series.hpp"

namespace glshp {

// Gamma(num)/Gamma(den) via log-Gamma subtraction. Arguments in this
// artifact never exceed ~10, so no further range handling is needed.
inline double gamma_ratio(double num, double den) {
  if (!(num > 0.0) || !(den > 0.0))
    throw DomainError("gamma_ratio requires positive arguments");
  return std::exp(std::lgamma(num) - std::lgamma(den));
}

namespace detail {

// Branch decision for the Caputo power rule on one x-exponent.
// Annihilates terms that are constant in x at the active orders and
// terms at or below the gamma <= order-1 boundary; a term straddling
// the boundary inexactly is rejected rather than silently classified.
enum class CaputoBranch { annihilate, scale };

inline CaputoBranch caputo_branch(const Exponent& xe, const Exponent& order,
                                  const FracOrders& orders) {
  const double kTol = 1e-12;
  if (xe.is_zero()) return CaputoBranch::annihilate;
  double g = xe.numeric(orders);
  if (std::abs(g) <= kTol) return CaputoBranch::annihilate;
  Exponent boundary = order - Exponent(Rational(1));
  if (xe == boundary) return CaputoBranch::annihilate;
  double b = boundary.numeric(orders);
  if (std::abs(g - b) <= kTol)
    throw DomainError(
        "caputo_dx: x-exponent (" + xe.str() +
        ") straddles the annihilation boundary order-1 at the given orders");
  return g < b ? CaputoBranch::annihilate : CaputoBranch::scale;
}

}  // namespace detail

// Caputo fractional partial derivative in x of the given order, applied
// term-wise: x^g -> Gamma(g+1)/Gamma(g-order+1) * x^(g-order), with the
// annihilation branch described above. The order is itself an affine
// form over {1, alpha, beta}, so exponents never leave the representation.
// `annihilated` (optional) counts the terms sent to zero.
inline FracSeries caputo_dx(const FracSeries& s, const Exponent& order,
                            const FracOrders& orders,
                            int* annihilated = nullptr) {
  double w = order.numeric(orders);
  if (!(w > 0.0)) throw DomainError("caputo_dx requires order > 0");
  FracSeries out;
  for (const auto& [k, c] : s.terms()) {
    auto branch = detail::caputo_branch(k.first, order, orders);
    if (branch == detail::CaputoBranch::annihilate) {
      if (annihilated) ++*annihilated;
      continue;
    }
    double g = k.first.numeric(orders);
    out.add_term(c * gamma_ratio(g + 1.0, g - w + 1.0), k.first - order,
                 k.second);
  }
  return out;
}

inline FracSeries caputo_dx(const FracSeries& s, double order,
                            const FracOrders& orders,
                            int* annihilated = nullptr) {
  return caputo_dx(s, Exponent::of(order), orders, annihilated);
}

// Riemann-Liouville fractional integral in x of the given order >= 0:
// x^g -> Gamma(g+1)/Gamma(g+order+1) * x^(g+order); order 0 is identity.
inline FracSeries rl_integral_x(const FracSeries& s, const Exponent& order,
                                const FracOrders& orders) {
  double w = order.numeric(orders);
  if (w < 0.0) throw DomainError("rl_integral_x requires order >= 0");
  if (order.is_zero() || w == 0.0) return s;
  FracSeries out;
  for (const auto& [k, c] : s.terms()) {
    double g = k.first.numeric(orders);
    if (g <= -1.0 + 1e-12)
      throw DomainError("rl_integral_x: x-exponent <= -1");
    out.add_term(c * gamma_ratio(g + 1.0, g + w + 1.0), k.first + order,
                 k.second);
  }
  return out;
}

inline FracSeries rl_integral_x(const FracSeries& s, double order,
                                const FracOrders& orders) {
  return rl_integral_x(s, Exponent::of(order), orders);
}

}  // namespace glshp

#endif  // GLSHP_FRACALG_HPP
