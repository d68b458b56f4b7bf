#ifndef GLSHP_WRONSKIAN_HPP
#define GLSHP_WRONSKIAN_HPP

#include <cmath>
#include <utility>
#include <vector>

#include "glshp/fracalg.hpp"
#include "glshp/log.hpp"

namespace glshp {

// Row order of the paper-shaped 3-function basis. The two orderings
// differ only by a column swap, i.e. by the sign of the determinant.
enum class BasisOrder { x_first, t_first };

inline constexpr double kDefaultWronskianThreshold = 1e-8;

// Point certificate for linear independence of a function list.
struct WronskianReport {
  double value = 0.0;                       // determinant at the point
  double x = 0.0, t = 0.0;                  // where it was evaluated
  double order = 1.0;                       // numeric fractional order used
  std::vector<std::vector<double>> matrix;  // row k = k-fold mixed derivative
  double threshold = kDefaultWronskianThreshold;
  bool independent = false;
};

// Mixed operator d/dt + d^order/dx^order.
inline FracSeries dalpha(const FracSeries& s, const Exponent& order,
                         const FracOrders& orders, int* annihilated = nullptr) {
  return dt(s, 1, orders) + caputo_dx(s, order, orders, annihilated);
}

inline FracSeries dalpha(const FracSeries& s, double order,
                         const FracOrders& orders, int* annihilated = nullptr) {
  return dalpha(s, Exponent::of(order), orders, annihilated);
}

// Literal k-fold composition of dalpha; k = 0 is the identity.
inline FracSeries dalpha_power(const FracSeries& s, int k,
                               const Exponent& order, const FracOrders& orders) {
  if (k < 0) throw DomainError("dalpha_power requires k >= 0");
  FracSeries cur = s;
  for (int i = 0; i < k; ++i) {
    int annihilated = 0;
    cur = dalpha(cur, order, orders, &annihilated);
    if (annihilated > 0)
      log::debug("dalpha_power: " + std::to_string(annihilated) +
                 " term(s) annihilated at composition step " +
                 std::to_string(i + 1));
  }
  return cur;
}

inline FracSeries dalpha_power(const FracSeries& s, int k, double order,
                               const FracOrders& orders) {
  return dalpha_power(s, k, Exponent::of(order), orders);
}

namespace detail {

// Determinant by LU with partial pivoting; n is tiny here.
inline double lu_det(std::vector<std::vector<double>> m) {
  const std::size_t n = m.size();
  double det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    if (m[piv][col] == 0.0) return 0.0;
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      double f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
    }
  }
  return det;
}

}  // namespace detail

// Builds the n x n matrix with entry (k,i) = (dalpha^k fs[i])(x,t) and
// reports its determinant. A zero determinant at one point is
// inconclusive, so it is reported as independent=false, never an error.
inline WronskianReport wronskian_at(const std::vector<FracSeries>& fs,
                                    double x, double t, const Exponent& order,
                                    const FracOrders& orders,
                                    double threshold = kDefaultWronskianThreshold) {
  if (fs.empty()) throw DomainError("wronskian_at: empty function list");
  const std::size_t n = fs.size();
  WronskianReport rep;
  rep.x = x;
  rep.t = t;
  rep.order = order.numeric(orders);
  rep.threshold = threshold;
  rep.matrix.assign(n, std::vector<double>(n, 0.0));

  std::vector<FracSeries> row = fs;
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0)
      for (std::size_t i = 0; i < n; ++i)
        row[i] = dalpha(row[i], order, orders);
    for (std::size_t i = 0; i < n; ++i)
      rep.matrix[k][i] = eval(row[i], x, t, orders);
  }
  rep.value = detail::lu_det(rep.matrix);
  rep.independent = std::abs(rep.value) > threshold;
  return rep;
}

inline WronskianReport wronskian_at(const std::vector<FracSeries>& fs,
                                    double x, double t, double order,
                                    const FracOrders& orders,
                                    double threshold = kDefaultWronskianThreshold) {
  return wronskian_at(fs, x, t, Exponent::of(order), orders, threshold);
}

namespace detail {

// B*(12tA + 8t^2 + 2tG) - t^2*A*(6A + 4t + G) expanded into a series,
// with A = x^w/Gamma(w+1), B = x^{2w}/Gamma(2w+1), G = x^{2-w}/Gamma(3-w)
// and w the fractional order symbol (alpha or beta).
inline FracSeries w3_closed_series(bool use_beta, const FracOrders& orders,
                                   double sign) {
  auto sym = [&](Rational mult) {
    return use_beta ? Exponent::beta(mult) : Exponent::alpha(mult);
  };
  double w = use_beta ? orders.beta : orders.alpha;
  double gw1 = std::tgamma(w + 1.0);
  double g2w1 = std::tgamma(2.0 * w + 1.0);
  double g3mw = std::tgamma(3.0 - w);
  const Exponent one(Rational(1)), two(Rational(2)), three(Rational(3));

  FracSeries s;
  // 12 t A B
  s.add_term(sign * 12.0 / (gw1 * g2w1), sym(Rational(3)), one);
  // 8 t^2 B
  s.add_term(sign * 8.0 / g2w1, sym(Rational(2)), two);
  // 2 t B G
  s.add_term(sign * 2.0 / (g2w1 * g3mw), Exponent(Rational(2)) + sym(Rational(1)), one);
  // -6 t^2 A^2
  s.add_term(sign * -6.0 / (gw1 * gw1), sym(Rational(2)), two);
  // -4 t^3 A
  s.add_term(sign * -4.0 / gw1, sym(Rational(1)), three);
  // -t^2 A G
  s.add_term(sign * -1.0 / (gw1 * g3mw), Exponent(Rational(2)), two);
  return s;
}

}  // namespace detail

// Closed-form 3x3 Wronskian expressions for the standard basis triple
// {x^{2w}/Gamma(2w+1), t^2, t^2 x^{2w}/Gamma(2w+1)+x^{2+2w}/Gamma(2w+3)},
// one series per fractional order symbol. The row-order variant flips
// the sign (the two orderings swap the first two columns). At order 1
// both series reduce to 7 t x^3 - 3 t^2 x^2 - 4 t^3 x.
inline std::pair<FracSeries, FracSeries> closed_form_w3(
    const FracOrders& orders, BasisOrder variant = BasisOrder::x_first) {
  double sign = variant == BasisOrder::x_first ? 1.0 : -1.0;
  return {detail::w3_closed_series(false, orders, sign),
          detail::w3_closed_series(true, orders, sign)};
}

}  // namespace glshp

#endif  // GLSHP_WRONSKIAN_HPP
