#ifndef GLSHP_PROBLEMS_HPP
#define GLSHP_PROBLEMS_HPP

#include <optional>
#include <string>
#include <vector>

#include "glshp/series.hpp"
#include "glshp/wronskian.hpp"

namespace glshp {

enum class Unknown { u = 0, v = 1 };

inline const char* unknown_name(Unknown w) { return w == Unknown::u ? "u" : "v"; }

// One quadratic term coeff * factor * d^2(tt)/dt^2 of an equation's
// nonlinear part. Only the four structured forms u*u_tt, v*u_tt,
// u*v_tt, v*v_tt are admitted.
struct NonlinearTerm {
  double coeff = 0.0;
  Unknown factor = Unknown::u;
  Unknown tt = Unknown::u;
};

// Cauchy data at x = 0: value (order 0) and x-derivative (order 1),
// each a series in t.
struct InitialCondition {
  int order = 0;
  FracSeries series;
};

// A single equation or coupled pair of space-fractional wave equations:
//   d^{2a}u/dx^{2a} + N1(u,v) = f,   d^{2b}v/dx^{2b} + N2(u,v) = g
// on [0,1]^2 with Cauchy data on x = 0.
struct ProblemSpec {
  enum class Kind { single, coupled };

  Kind kind = Kind::single;
  FracOrders orders;
  FracSeries forcing_u;
  std::optional<FracSeries> forcing_v;
  std::vector<NonlinearTerm> nonlin_u;  // nonlinear part of equation 1
  std::vector<NonlinearTerm> nonlin_v;  // nonlinear part of equation 2
  std::vector<InitialCondition> ics_u;
  std::vector<InitialCondition> ics_v;
  std::vector<FracSeries> exact_at_one;  // known solutions at alpha=beta=1

  bool coupled() const { return kind == Kind::coupled; }
  int equation_count() const { return coupled() ? 2 : 1; }

  const FracSeries& forcing(Unknown w) const {
    return w == Unknown::u ? forcing_u : *forcing_v;
  }
  const std::vector<NonlinearTerm>& nonlinearity(Unknown w) const {
    return w == Unknown::u ? nonlin_u : nonlin_v;
  }
  const std::vector<InitialCondition>& ics(Unknown w) const {
    return w == Unknown::u ? ics_u : ics_v;
  }
  // Spatial operator order of the equation: 2*alpha or 2*beta.
  Exponent operator_order(Unknown w) const {
    return w == Unknown::u ? Exponent::alpha(Rational(2))
                           : Exponent::beta(Rational(2));
  }
  // Order symbol of the mixed Wronskian operator for this unknown.
  Exponent wronskian_order(Unknown w) const {
    return w == Unknown::u ? Exponent::alpha() : Exponent::beta();
  }
};

// Presentation defaults carried alongside the built-in problems: the
// basis ordering used for reports and the certificate point.
struct BuiltinInfo {
  std::string name;
  BasisOrder basis_order = BasisOrder::x_first;
  double wronskian_x = 0.2;
  double wronskian_t = 0.5;
};

namespace detail {

inline FracSeries t_squared(double c) {
  return FracSeries::monomial(c, Exponent(), Exponent(Rational(2)));
}

inline FracSeries quadratic_forcing(double c0, double cx2, double ct2) {
  FracSeries s = FracSeries::constant(c0);
  s.add_term(cx2, Exponent(Rational(2)), Exponent());
  s.add_term(ct2, Exponent(), Exponent(Rational(2)));
  return s;
}

}  // namespace detail

// du^{2a}/dx^{2a} - u u_tt = 1 - (x^2+t^2)/2,  u(0,t)=t^2/2, u_x(0,t)=0;
// exact solution (x^2+t^2)/2 at order 1.
inline ProblemSpec example1(const FracOrders& orders = FracOrders()) {
  ProblemSpec p;
  p.kind = ProblemSpec::Kind::single;
  p.orders = orders;
  p.forcing_u = detail::quadratic_forcing(1.0, -0.5, -0.5);
  p.nonlin_u = {{-1.0, Unknown::u, Unknown::u}};
  p.ics_u = {{0, detail::t_squared(0.5)}, {1, FracSeries::zero()}};
  p.exact_at_one = {detail::quadratic_forcing(0.0, 0.5, 0.5)};
  return p;
}

// du^{2a}/dx^{2a} - u u_tt = 2 - 2x^2 - 2t^2,  u(0,t)=t^2, u_x(0,t)=0;
// exact solution t^2 + x^2 at order 1.
inline ProblemSpec example2(const FracOrders& orders = FracOrders()) {
  ProblemSpec p;
  p.kind = ProblemSpec::Kind::single;
  p.orders = orders;
  p.forcing_u = detail::quadratic_forcing(2.0, -2.0, -2.0);
  p.nonlin_u = {{-1.0, Unknown::u, Unknown::u}};
  p.ics_u = {{0, detail::t_squared(1.0)}, {1, FracSeries::zero()}};
  p.exact_at_one = {detail::quadratic_forcing(0.0, 1.0, 1.0)};
  return p;
}

// Coupled system:
//   du^{2a}/dx^{2a} - v u_tt - u v_tt = 2 - 2x^2 - 2t^2
//   dv^{2b}/dx^{2b} - v v_tt + u u_tt = 1 + (3/2)x^2 + (3/2)t^2
// with u(0,t)=t^2, v(0,t)=t^2/2 and zero x-derivatives; exact pair
// (x^2+t^2, (x^2+t^2)/2) at orders 1.
inline ProblemSpec example3(const FracOrders& orders = FracOrders()) {
  ProblemSpec p;
  p.kind = ProblemSpec::Kind::coupled;
  p.orders = orders;
  p.forcing_u = detail::quadratic_forcing(2.0, -2.0, -2.0);
  p.forcing_v = detail::quadratic_forcing(1.0, 1.5, 1.5);
  p.nonlin_u = {{-1.0, Unknown::v, Unknown::u}, {-1.0, Unknown::u, Unknown::v}};
  p.nonlin_v = {{-1.0, Unknown::v, Unknown::v}, {1.0, Unknown::u, Unknown::u}};
  p.ics_u = {{0, detail::t_squared(1.0)}, {1, FracSeries::zero()}};
  p.ics_v = {{0, detail::t_squared(0.5)}, {1, FracSeries::zero()}};
  p.exact_at_one = {detail::quadratic_forcing(0.0, 1.0, 1.0),
                    detail::quadratic_forcing(0.0, 0.5, 0.5)};
  return p;
}

inline ProblemSpec builtin_example(int id, const FracOrders& orders) {
  switch (id) {
    case 1: return example1(orders);
    case 2: return example2(orders);
    case 3: return example3(orders);
    default: throw DomainError("unknown built-in example id");
  }
}

inline BuiltinInfo builtin_info(int id) {
  switch (id) {
    case 1: return {"example1", BasisOrder::x_first, 0.2, 0.5};
    case 2: return {"example2", BasisOrder::t_first, 0.3, 0.4};
    case 3: return {"example3", BasisOrder::x_first, 0.2, 0.5};
    default: throw DomainError("unknown built-in example id");
  }
}

// Structural and numeric checks; an empty list means the spec is usable.
inline std::vector<std::string> validate(const ProblemSpec& p) {
  std::vector<std::string> diags;
  if (!(p.orders.alpha > 0.0 && p.orders.alpha <= 1.0))
    diags.push_back("alpha outside (0,1]");
  if (p.coupled() && !(p.orders.beta > 0.0 && p.orders.beta <= 1.0))
    diags.push_back("beta outside (0,1]");

  bool has_fv = p.forcing_v.has_value();
  bool has_icv = !p.ics_v.empty();
  if (p.coupled() != has_fv)
    diags.push_back("coupled spec requires forcing for v (and single forbids it)");
  if (p.coupled() != has_icv)
    diags.push_back("coupled spec requires initial conditions for v");
  if (!p.coupled() && !p.nonlin_v.empty())
    diags.push_back("single spec carries a second-equation nonlinearity");

  auto check_refs = [&](const std::vector<NonlinearTerm>& terms,
                        const char* eq) {
    for (const auto& term : terms)
      if (!p.coupled() &&
          (term.factor == Unknown::v || term.tt == Unknown::v))
        diags.push_back(std::string("equation ") + eq +
                        " references v in a single-unknown problem");
  };
  check_refs(p.nonlin_u, "u");
  check_refs(p.nonlin_v, "v");

  auto check_ics = [&](const std::vector<InitialCondition>& ics,
                       const char* name) {
    bool seen0 = false, seen1 = false;
    for (const auto& ic : ics) {
      if (ic.order == 0) seen0 = true;
      if (ic.order == 1) seen1 = true;
      for (const auto& [k, c] : ic.series.terms()) {
        (void)c;
        if (!k.first.is_zero())
          diags.push_back(std::string("initial condition for ") + name +
                          " depends on x");
      }
    }
    if (!seen0 || !seen1)
      diags.push_back(std::string("missing Cauchy data (orders 0 and 1) for ") +
                      name);
  };
  check_ics(p.ics_u, "u");
  if (p.coupled()) check_ics(p.ics_v, "v");

  auto check_integrable = [&](const FracSeries& s, const char* what) {
    for (const auto& [k, c] : s.terms()) {
      (void)c;
      if (k.first.numeric(p.orders) <= -1.0 + 1e-12 ||
          k.second.numeric(p.orders) <= -1.0 + 1e-12)
        diags.push_back(std::string(what) +
                        " is not integrable over the unit square");
    }
  };
  check_integrable(p.forcing_u, "forcing for u");
  if (has_fv) check_integrable(*p.forcing_v, "forcing for v");

  if (!p.exact_at_one.empty() &&
      p.exact_at_one.size() != static_cast<std::size_t>(p.equation_count()))
    diags.push_back("exact solution count does not match the number of unknowns");
  return diags;
}

}  // namespace glshp

#endif  // GLSHP_PROBLEMS_HPP
