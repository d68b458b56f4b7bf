#ifndef GLSHP_HPM_HPP
#define GLSHP_HPM_HPP

#include <optional>
#include <string>
#include <vector>

#include "glshp/fracalg.hpp"
#include "glshp/problems.hpp"
#include "glshp/wronskian.hpp"

namespace glshp {

// Zeroth-order homotopy approximation: the solution of the p = 0 linear
// fractional problem with the original initial conditions.
struct InitialGuess {
  FracSeries series;
  std::vector<InitialCondition> ic_data;
};

// Candidate basis extracted from an initial guess, in report order.
// A Wronskian certificate must be attached before the basis enters the
// fitting stage.
struct BasisSet {
  std::vector<FracSeries> functions;
  std::vector<std::string> source;  // which guess terms each function groups
  std::optional<WronskianReport> certificate;

  bool certified() const { return certificate && certificate->independent; }
};

// ic part + J^{2a} forcing (2b for the second unknown). Factorials enter
// through the x^i/i! Cauchy expansion.
inline InitialGuess bootstrap(const ProblemSpec& problem, Unknown which) {
  if (which == Unknown::v && !problem.coupled())
    throw DomainError("bootstrap: single problem has no second unknown");
  InitialGuess g;
  g.ic_data = problem.ics(which);
  FracSeries ic_part;
  for (const auto& ic : g.ic_data) {
    double factorial = 1.0;
    for (int i = 2; i <= ic.order; ++i) factorial *= i;
    FracSeries shifted;
    for (const auto& [k, c] : ic.series.terms())
      shifted.add_term(c / factorial, k.first + Exponent(Rational(ic.order)),
                       k.second);
    ic_part = ic_part + shifted;
  }
  g.series = ic_part + rl_integral_x(problem.forcing(which),
                                     problem.operator_order(which),
                                     problem.orders);
  return g;
}

namespace detail {

// Leading monomial of a series under the canonical key order.
inline FracSeries::TermMap::const_iterator leading(const FracSeries& s) {
  return s.terms().begin();
}

inline double gamma_of_exponent(const Exponent& xe, const FracOrders& orders) {
  return std::tgamma(xe.numeric(orders) + 1.0);
}

}  // namespace detail

// Groups the monomials of an initial guess into basis functions:
//  (i)  pure-t terms (x-exponent exactly 0) form one function, scaled so
//       its leading coefficient is 1;
//  (ii) the lowest fractional pure-x term becomes x^e/Gamma(e+1);
//  (iii) every remaining monomial x^e t^f joins a single function as
//        x^e t^f / Gamma(e+1).
// The rule is shaped after the worked problems this solver targets; a
// guess with monomials outside these categories fails with GroupingError.
inline BasisSet extract_basis(const InitialGuess& guess,
                              const FracOrders& orders,
                              BasisOrder order = BasisOrder::x_first) {
  FracSeries pure_t;
  std::vector<FracSeries::TermMap::value_type> pure_x, mixed;
  for (const auto& term : guess.series.terms()) {
    const Exponent& xe = term.first.first;
    const Exponent& te = term.first.second;
    if (xe.is_zero()) {
      pure_t.add_term(term.second, xe, te);
    } else if (te.is_zero()) {
      if (xe.is_pure_number())
        throw GroupingError("pure-x term x^(" + xe.str() +
                            ") has no fractional part; no grouping rule applies");
      pure_x.push_back(term);
    } else {
      if (xe.is_pure_number())
        throw GroupingError("mixed term with integer x-exponent x^(" +
                            xe.str() + ") fits no grouping category");
      mixed.push_back(term);
    }
  }

  std::optional<FracSeries> f_t, f_x, f_mixed;
  std::string src_t, src_x, src_mixed;

  if (!pure_t.is_zero()) {
    double lead = detail::leading(pure_t)->second;
    f_t = pure_t * (1.0 / lead);
    src_t = "pure-t terms of the initial guess";
  }

  if (!pure_x.empty()) {
    // lowest numeric x-exponent gets the unit-normalized slot
    std::size_t lowest = 0;
    for (std::size_t i = 1; i < pure_x.size(); ++i)
      if (pure_x[i].first.first.numeric(orders) <
          pure_x[lowest].first.first.numeric(orders))
        lowest = i;
    const Exponent& xe = pure_x[lowest].first.first;
    f_x = FracSeries::monomial(1.0 / detail::gamma_of_exponent(xe, orders), xe,
                               Exponent());
    src_x = "x^(" + xe.str() + ") term of the initial guess";
    for (std::size_t i = 0; i < pure_x.size(); ++i)
      if (i != lowest) mixed.push_back(pure_x[i]);
  }

  if (!mixed.empty()) {
    FracSeries m;
    for (const auto& term : mixed)
      m.add_term(1.0 / detail::gamma_of_exponent(term.first.first, orders),
                 term.first.first, term.first.second);
    if (m.is_zero())
      throw GroupingError("remaining terms normalize to the zero series");
    f_mixed = m;
    src_mixed = "remaining terms of the initial guess, Gamma-normalized";
  }

  BasisSet basis;
  auto push = [&basis](std::optional<FracSeries>& f, const std::string& src) {
    if (f) {
      basis.functions.push_back(*f);
      basis.source.push_back(src);
    }
  };
  if (order == BasisOrder::x_first) {
    push(f_x, src_x);
    push(f_t, src_t);
  } else {
    push(f_t, src_t);
    push(f_x, src_x);
  }
  push(f_mixed, src_mixed);
  if (basis.functions.empty())
    throw GroupingError("initial guess is the zero series");
  return basis;
}

// Coefficients of the guess read against each basis function's leading
// monomial; 0 where the monomial is absent. These seed the fit.
inline std::vector<double> read_coefficients(const BasisSet& basis,
                                             const InitialGuess& guess) {
  std::vector<double> out;
  out.reserve(basis.functions.size());
  for (const auto& f : basis.functions) {
    auto lead = detail::leading(f);
    double c = guess.series.coeff(lead->first.first, lead->first.second);
    out.push_back(c / lead->second);
  }
  return out;
}

}  // namespace glshp

#endif  // GLSHP_HPM_HPP
