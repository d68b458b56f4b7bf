#ifndef GLSHP_PIPELINE_HPP
#define GLSHP_PIPELINE_HPP

#include <optional>
#include <string>
#include <vector>

#include "glshp/lsq.hpp"

namespace glshp {

struct SolveConfig {
  BasisOrder basis_order = BasisOrder::x_first;
  double wronskian_x = 0.2;
  double wronskian_t = 0.5;
  double wronskian_threshold = kDefaultWronskianThreshold;
  MinimizeOptions minimize;
  std::optional<double> epsilon;
  int epsilon_grid = 101;
};

inline SolveConfig config_for_builtin(int id) {
  BuiltinInfo info = builtin_info(id);
  SolveConfig c;
  c.basis_order = info.basis_order;
  c.wronskian_x = info.wronskian_x;
  c.wronskian_t = info.wronskian_t;
  return c;
}

// Parameter label in report order: K<i> for u, D<i> for v.
inline std::string param_label(Unknown w, int basis_index) {
  return (w == Unknown::u ? "K" : "D") + std::to_string(basis_index);
}

struct EquationFit {
  Unknown unknown = Unknown::u;
  InitialGuess guess;
  Ansatz ansatz;                  // carries the certified basis and fixed map
  std::vector<double> hpm_start;  // free-parameter start read from the guess
  FracSeries fitted;              // ansatz with fitted parameters substituted
};

struct SolveResult {
  std::vector<EquationFit> equations;
  std::vector<ParamPoly> residuals;  // over the global free-parameter vector
  Functional functional;
  std::vector<double> hpm_start;  // global start vector
  double j_hpm = 0.0;             // functional at the start vector
  FitResult fit;
  std::optional<EpsilonReport> epsilon;
};

// J at fixed numeric parameters through the residual-series route:
// substitute, square, integrate exactly. Mathematically the same value
// as Functional::eval; near a root the series coefficients cancel first,
// so this route keeps tiny J values meaningful.
inline double functional_at(const std::vector<ParamPoly>& residuals,
                            const std::vector<double>& params,
                            const FracOrders& orders) {
  double j = 0.0;
  for (const auto& r : residuals) {
    FracSeries s = r.substitute(params);
    j += integrate_unit_square(mul(s, s), orders);
  }
  return j;
}

// Full fitting pipeline: bootstrap, basis extraction, independence
// certificate, initial conditions, residual assembly, minimization,
// optional epsilon classification.
inline SolveResult solve_problem(const ProblemSpec& problem,
                                 const SolveConfig& config = SolveConfig()) {
  SolveResult result;
  std::vector<Ansatz> ansatzes;
  for (int eq = 0; eq < problem.equation_count(); ++eq) {
    Unknown w = eq == 0 ? Unknown::u : Unknown::v;
    EquationFit ef;
    ef.unknown = w;
    ef.guess = bootstrap(problem, w);
    BasisSet basis = extract_basis(ef.guess, problem.orders, config.basis_order);
    basis.certificate = wronskian_at(
        basis.functions, config.wronskian_x, config.wronskian_t,
        problem.wronskian_order(w), problem.orders, config.wronskian_threshold);
    if (!basis.certificate->independent)
      throw DomainError(
          std::string("independence certificate failed for ") +
          unknown_name(w) + " at the chosen point; pick another point");
    std::vector<double> all_coeffs = read_coefficients(basis, ef.guess);
    Ansatz a = apply_ics(Ansatz::all_free(w, basis), problem);
    for (int idx : a.free) ef.hpm_start.push_back(all_coeffs[idx]);
    ef.ansatz = a;
    ansatzes.push_back(a);
    result.equations.push_back(std::move(ef));
  }

  const Ansatz* av = problem.coupled() ? &ansatzes[1] : nullptr;
  result.residuals = build_residual(problem, ansatzes[0], av);
  result.functional = assemble_functional(result.residuals, problem.orders);

  for (const auto& ef : result.equations)
    result.hpm_start.insert(result.hpm_start.end(), ef.hpm_start.begin(),
                            ef.hpm_start.end());
  result.j_hpm = functional_at(result.residuals, result.hpm_start,
                               problem.orders);

  result.fit = minimize(result.functional, result.hpm_start, config.minimize);
  result.fit.jvalue =
      functional_at(result.residuals, result.fit.params, problem.orders);

  // reconstruct the fitted series per unknown
  std::size_t offset = 0;
  for (auto& ef : result.equations) {
    FracSeries s;
    for (const auto& [idx, val] : ef.ansatz.fixed)
      s = s + ef.ansatz.basis.functions[idx] * val;
    for (std::size_t j = 0; j < ef.ansatz.free.size(); ++j)
      s = s + ef.ansatz.basis.functions[ef.ansatz.free[j]] *
                  result.fit.params[offset + j];
    ef.fitted = s;
    offset += ef.ansatz.free.size();
  }

  if (config.epsilon)
    result.epsilon =
        classify_epsilon(result.residuals, result.fit.params, problem.orders,
                         *config.epsilon, config.epsilon_grid);
  return result;
}

// The canonical three-function basis the closed-form Wronskian covers:
// {x^e/Gamma(e+1), t^2, t^2 x^e/Gamma(e+1) + x^{e+2}/Gamma(e+3)} with
// e = 2a (or 2b). Returns the detected ordering, or nullopt when the
// basis has a different shape.
inline std::optional<BasisOrder> paper_basis_order(const BasisSet& basis,
                                                   const FracOrders& orders,
                                                   Unknown w) {
  if (basis.functions.size() != 3) return std::nullopt;
  Exponent e = w == Unknown::u ? Exponent::alpha(Rational(2))
                               : Exponent::beta(Rational(2));
  double ge1 = std::tgamma(e.numeric(orders) + 1.0);
  double ge3 = std::tgamma(e.numeric(orders) + 3.0);
  FracSeries fx = FracSeries::monomial(1.0 / ge1, e, Exponent());
  FracSeries ft = FracSeries::monomial(1.0, Exponent(), Exponent(Rational(2)));
  FracSeries fm = FracSeries::monomial(1.0 / ge1, e, Exponent(Rational(2)));
  fm.add_term(1.0 / ge3, e + Exponent(Rational(2)), Exponent());

  auto eq = [](const FracSeries& a, const FracSeries& b) {
    return a.approx_equal(b, 1e-12);
  };
  const auto& f = basis.functions;
  if (eq(f[0], fx) && eq(f[1], ft) && eq(f[2], fm)) return BasisOrder::x_first;
  if (eq(f[0], ft) && eq(f[1], fx) && eq(f[2], fm)) return BasisOrder::t_first;
  return std::nullopt;
}

// Closed-form checkpoint value for a paper-shaped basis at a point, or
// nullopt when the closed form does not apply.
inline std::optional<double> closed_form_checkpoint(const BasisSet& basis,
                                                    const FracOrders& orders,
                                                    Unknown w, double x,
                                                    double t) {
  auto order = paper_basis_order(basis, orders, w);
  if (!order) return std::nullopt;
  auto [wu, wv] = closed_form_w3(orders, *order);
  return eval(w == Unknown::u ? wu : wv, x, t, orders);
}

}  // namespace glshp

#endif  // GLSHP_PIPELINE_HPP
