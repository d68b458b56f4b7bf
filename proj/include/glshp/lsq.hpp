#ifndef GLSHP_LSQ_HPP
#define GLSHP_LSQ_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "glshp/hpm.hpp"
#include "glshp/problems.hpp"
#include "glshp/quadrature.hpp"

namespace glshp {

// Exponent vector over the free parameters.
using MultiIndex = std::vector<unsigned>;

// Polynomial in the unknown ansatz coefficients whose coefficients are
// series over (x,t); the shape residuals take before minimization.
class ParamPoly {
 public:
  using TermMap = std::map<MultiIndex, FracSeries>;

  explicit ParamPoly(int nparams = 0) : nparams_(nparams) {}

  int nparams() const { return nparams_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add(const MultiIndex& mi, const FracSeries& s) {
    if (s.is_zero()) return;
    auto it = terms_.find(mi);
    if (it == terms_.end()) {
      terms_.emplace(mi, s);
    } else {
      it->second = it->second + s;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  MultiIndex unit_index() const { return MultiIndex(nparams_, 0); }
  MultiIndex var_index(int var) const {
    MultiIndex mi(nparams_, 0);
    mi[var] = 1;
    return mi;
  }

  int max_param_degree() const {
    int deg = 0;
    for (const auto& [mi, s] : terms_) {
      (void)s;
      int d = 0;
      for (unsigned e : mi) d += static_cast<int>(e);
      deg = std::max(deg, d);
    }
    return deg;
  }

  friend ParamPoly operator+(const ParamPoly& a, const ParamPoly& b) {
    ParamPoly out = a;
    for (const auto& [mi, s] : b.terms_) out.add(mi, s);
    return out;
  }
  friend ParamPoly operator-(const ParamPoly& a, const ParamPoly& b) {
    ParamPoly out = a;
    for (const auto& [mi, s] : b.terms_) out.add(mi, -s);
    return out;
  }
  friend ParamPoly operator*(const ParamPoly& a, double c) {
    ParamPoly out(a.nparams_);
    for (const auto& [mi, s] : a.terms_) out.add(mi, s * c);
    return out;
  }

  friend ParamPoly mul(const ParamPoly& a, const ParamPoly& b) {
    ParamPoly out(a.nparams_);
    for (const auto& [ma, sa] : a.terms_)
      for (const auto& [mb, sb] : b.terms_) {
        MultiIndex mi = ma;
        for (std::size_t i = 0; i < mi.size(); ++i) mi[i] += mb[i];
        out.add(mi, glshp::mul(sa, sb));
      }
    return out;
  }

  // Term-wise map of the series coefficients (linear operators commute
  // with the parameter structure).
  ParamPoly map_series(
      const std::function<FracSeries(const FracSeries&)>& op) const {
    ParamPoly out(nparams_);
    for (const auto& [mi, s] : terms_) out.add(mi, op(s));
    return out;
  }

  // Numeric series at a concrete parameter vector.
  FracSeries substitute(const std::vector<double>& params) const {
    FracSeries out;
    for (const auto& [mi, s] : terms_) {
      double f = 1.0;
      for (std::size_t i = 0; i < mi.size(); ++i)
        for (unsigned e = 0; e < mi[i]; ++e) f *= params[i];
      out = out + s * f;
    }
    return out;
  }

 private:
  int nparams_;
  TermMap terms_;
};

// Real-coefficient polynomial over the free parameters.
class PolyN {
 public:
  using TermMap = std::map<MultiIndex, double>;

  explicit PolyN(int nparams = 0) : nparams_(nparams) {}

  int nparams() const { return nparams_; }
  const TermMap& terms() const { return terms_; }

  void add(const MultiIndex& mi, double c) {
    if (c == 0.0) return;
    auto it = terms_.find(mi);
    if (it == terms_.end()) {
      terms_.emplace(mi, c);
    } else {
      it->second += c;
      if (it->second == 0.0) terms_.erase(it);
    }
  }

  double eval(const std::vector<double>& params) const {
    double sum = 0.0;
    for (const auto& [mi, c] : terms_) {
      double f = c;
      for (std::size_t i = 0; i < mi.size(); ++i)
        for (unsigned e = 0; e < mi[i]; ++e) f *= params[i];
      sum += f;
    }
    return sum;
  }

  PolyN derivative(int var) const {
    PolyN out(nparams_);
    for (const auto& [mi, c] : terms_) {
      if (mi[var] == 0) continue;
      MultiIndex d = mi;
      d[var] -= 1;
      out.add(d, c * mi[var]);
    }
    return out;
  }

  int degree() const {
    int deg = 0;
    for (const auto& [mi, c] : terms_) {
      (void)c;
      int d = 0;
      for (unsigned e : mi) d += static_cast<int>(e);
      deg = std::max(deg, d);
    }
    return deg;
  }

 private:
  int nparams_;
  TermMap terms_;
};

// The squared-residual functional as an exact polynomial in the free
// parameters; degree <= 4 for the quadratically nonlinear problem class.
struct Functional {
  PolyN poly;
  double eval(const std::vector<double>& params) const {
    return poly.eval(params);
  }
};

// Linear ansatz over a certified basis. Coefficients fixed by the
// initial conditions are numbers; the rest are free parameters. Indices
// refer to basis positions, so labels (K0, K1, ...) follow report order.
struct Ansatz {
  Unknown unknown = Unknown::u;
  BasisSet basis;
  std::map<int, double> fixed;
  std::vector<int> free;

  static Ansatz all_free(Unknown w, const BasisSet& b) {
    Ansatz a;
    a.unknown = w;
    a.basis = b;
    for (int i = 0; i < static_cast<int>(b.functions.size()); ++i)
      a.free.push_back(i);
    return a;
  }
};

// Outcome of the stationarity solve.
struct FitResult {
  std::vector<double> params;  // free parameters, global order
  double jvalue = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string start;  // provenance of the winning initial point
};

namespace detail {

// Sub-series of terms whose x-exponent is exactly the given form, with
// the x factor stripped (a series in t).
inline FracSeries x_slice(const FracSeries& s, const Exponent& xe) {
  FracSeries out;
  for (const auto& [k, c] : s.terms())
    if (k.first == xe) out.add_term(c, Exponent(), k.second);
  return out;
}

}  // namespace detail

// Matches the ansatz's x-exponent-0 and x-exponent-1 slices at x = 0
// against the problem's Cauchy data, fixing every coefficient those
// equations determine uniquely. Under-determined matches stay free;
// an unsatisfiable match throws InconsistentIC.
inline Ansatz apply_ics(const Ansatz& ansatz, const ProblemSpec& problem) {
  const auto& ics = problem.ics(ansatz.unknown);
  const auto& fns = ansatz.basis.functions;

  // linear rows: sum_i coeff_i K_i = rhs, one per (slice, t-monomial)
  struct Row {
    std::vector<double> coeff;
    double rhs;
  };
  std::vector<Row> rows;
  for (const auto& ic : ics) {
    if (ic.order != 0 && ic.order != 1) continue;
    Exponent xe(Rational(ic.order));
    double deriv_scale = 1.0;  // i! of the Cauchy expansion; 1 for i in {0,1}
    for (int i = 2; i <= ic.order; ++i) deriv_scale *= i;
    std::vector<FracSeries> slices;
    slices.reserve(fns.size());
    for (const auto& f : fns) slices.push_back(detail::x_slice(f, xe));
    // all t-monomial keys appearing on either side
    std::map<Exponent, bool> keys;
    for (const auto& s : slices)
      for (const auto& [k, c] : s.terms()) {
        (void)c;
        keys[k.second] = true;
      }
    for (const auto& [k, c] : ic.series.terms()) {
      (void)c;
      keys[k.second] = true;
    }
    for (const auto& [te, used] : keys) {
      (void)used;
      Row row;
      row.coeff.resize(fns.size(), 0.0);
      for (std::size_t i = 0; i < fns.size(); ++i)
        row.coeff[i] = deriv_scale * slices[i].coeff(Exponent(), te);
      row.rhs = ic.series.coeff(Exponent(), te);
      rows.push_back(std::move(row));
    }
  }

  Ansatz out = ansatz;
  bool progress = true;
  while (progress) {
    progress = false;
    for (const auto& row : rows) {
      double rhs = row.rhs;
      int unknown_idx = -1;
      int unknown_count = 0;
      for (std::size_t i = 0; i < row.coeff.size(); ++i) {
        if (row.coeff[i] == 0.0) continue;
        auto it = out.fixed.find(static_cast<int>(i));
        if (it != out.fixed.end()) {
          rhs -= row.coeff[i] * it->second;
        } else {
          ++unknown_count;
          unknown_idx = static_cast<int>(i);
        }
      }
      if (unknown_count == 0) {
        if (std::abs(rhs) > 1e-12 * std::max(1.0, std::abs(row.rhs)))
          throw InconsistentIC(
              "initial conditions cannot be satisfied by any coefficient "
              "assignment for " +
              std::string(unknown_name(ansatz.unknown)));
      } else if (unknown_count == 1) {
        out.fixed[unknown_idx] = rhs / row.coeff[unknown_idx];
        progress = true;
      }
    }
    // rows fully resolved on a later sweep are re-checked; fixing is
    // monotone so the loop terminates
    if (progress) {
      out.free.clear();
      for (int i = 0; i < static_cast<int>(fns.size()); ++i)
        if (!out.fixed.count(i)) out.free.push_back(i);
    }
  }
  return out;
}

namespace detail {

// The ansatz as a degree-1 ParamPoly over the global parameter vector.
inline ParamPoly ansatz_poly(const Ansatz& a, int offset, int nglobal) {
  ParamPoly pp(nglobal);
  FracSeries fixed_part;
  for (const auto& [idx, val] : a.fixed)
    fixed_part = fixed_part + a.basis.functions[idx] * val;
  pp.add(pp.unit_index(), fixed_part);
  for (std::size_t j = 0; j < a.free.size(); ++j)
    pp.add(pp.var_index(offset + static_cast<int>(j)),
           a.basis.functions[a.free[j]]);
  return pp;
}

}  // namespace detail

// Substitutes the ansatz (pair) into the equations and returns one
// residual polynomial per equation: linear-operator part, quadratic
// nonlinearities, minus forcing. Requires certified bases.
inline std::vector<ParamPoly> build_residual(const ProblemSpec& problem,
                                             const Ansatz& ansatz_u,
                                             const Ansatz* ansatz_v = nullptr) {
  if (!ansatz_u.basis.certified())
    throw DomainError("build_residual: u basis lacks a passing Wronskian certificate");
  if (problem.coupled()) {
    if (!ansatz_v)
      throw DomainError("build_residual: coupled problem needs a v ansatz");
    if (!ansatz_v->basis.certified())
      throw DomainError("build_residual: v basis lacks a passing Wronskian certificate");
  }

  int n_u = static_cast<int>(ansatz_u.free.size());
  int n_v = ansatz_v ? static_cast<int>(ansatz_v->free.size()) : 0;
  int nglobal = n_u + n_v;

  ParamPoly pp_u = detail::ansatz_poly(ansatz_u, 0, nglobal);
  ParamPoly pp_v(nglobal);
  if (ansatz_v) pp_v = detail::ansatz_poly(*ansatz_v, n_u, nglobal);

  const FracOrders& ord = problem.orders;
  auto tt = [&ord](const ParamPoly& p) {
    return p.map_series([&ord](const FracSeries& s) { return dt(s, 2, ord); });
  };
  ParamPoly pp_u_tt = tt(pp_u);
  ParamPoly pp_v_tt = ansatz_v ? tt(pp_v) : ParamPoly(nglobal);

  auto pick = [&](Unknown w) -> const ParamPoly& {
    return w == Unknown::u ? pp_u : pp_v;
  };
  auto pick_tt = [&](Unknown w) -> const ParamPoly& {
    return w == Unknown::u ? pp_u_tt : pp_v_tt;
  };

  std::vector<ParamPoly> residuals;
  for (int eq = 0; eq < problem.equation_count(); ++eq) {
    Unknown w = eq == 0 ? Unknown::u : Unknown::v;
    Exponent op_order = problem.operator_order(w);
    ParamPoly r = pick(w).map_series([&](const FracSeries& s) {
      return caputo_dx(s, op_order, ord);
    });
    for (const auto& term : problem.nonlinearity(w))
      r = r + mul(pick(term.factor), pick_tt(term.tt)) * term.coeff;
    ParamPoly forcing(nglobal);
    forcing.add(forcing.unit_index(), problem.forcing(w));
    residuals.push_back(r - forcing);
  }
  return residuals;
}

// J = sum over equations of the exact integral of the squared residual:
// squaring doubles the parameter degree, each series coefficient
// integrates in closed form.
inline Functional assemble_functional(const std::vector<ParamPoly>& residuals,
                                      const FracOrders& orders) {
  int nparams = residuals.empty() ? 0 : residuals.front().nparams();
  Functional f{PolyN(nparams)};
  for (const auto& r : residuals) {
    ParamPoly sq = mul(r, r);
    for (const auto& [mi, s] : sq.terms())
      f.poly.add(mi, integrate_unit_square(s, orders));
  }
  return f;
}

// Exact partial derivatives of the functional, one polynomial per
// free parameter.
inline std::vector<PolyN> gradient(const Functional& f) {
  std::vector<PolyN> g;
  g.reserve(f.poly.nparams());
  for (int i = 0; i < f.poly.nparams(); ++i)
    g.push_back(f.poly.derivative(i));
  return g;
}

struct MinimizeOptions {
  double grad_tol = 1e-12;
  int max_iterations = 200;
  int random_starts = 8;
  double random_box = 3.0;
  std::uint64_t seed = 0x5EED;
};

namespace detail {

// Gaussian elimination with partial pivoting; returns false on a
// numerically singular system.
inline bool solve_dense(std::vector<std::vector<double>> a,
                        std::vector<double> b, std::vector<double>& out) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (std::abs(a[piv][col]) < 1e-300) return false;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      double f = a[r][col] / a[col][col];
      b[r] -= f * b[col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  out.assign(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * out[j];
    out[i] = s / a[i][i];
  }
  return true;
}

inline double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

struct NewtonOutcome {
  std::vector<double> params;
  double jvalue = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Damped Newton on the stationarity system grad J = 0 with the exact
// polynomial Hessian; Levenberg-style diagonal damping, steps accepted
// only when J decreases, gradient-descent backtracking as fallback.
inline NewtonOutcome newton_run(const Functional& f,
                                const std::vector<PolyN>& grad,
                                const std::vector<std::vector<PolyN>>& hess,
                                std::vector<double> k,
                                const MinimizeOptions& opt) {
  const int m = static_cast<int>(k.size());
  NewtonOutcome out;
  double lambda = 1e-8;
  double j_cur = f.eval(k);
  int iter = 0;
  for (; iter < opt.max_iterations; ++iter) {
    std::vector<double> g(m);
    for (int i = 0; i < m; ++i) g[i] = grad[i].eval(k);
    double gn = norm2(g);
    if (gn <= opt.grad_tol) {
      out.converged = true;
      break;
    }
    std::vector<std::vector<double>> h(m, std::vector<double>(m, 0.0));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) h[i][j] = hess[i][j].eval(k);

    bool stepped = false;
    for (int attempt = 0; attempt < 60 && !stepped; ++attempt) {
      auto hd = h;
      for (int i = 0; i < m; ++i) hd[i][i] += lambda;
      std::vector<double> rhs(m), delta;
      for (int i = 0; i < m; ++i) rhs[i] = -g[i];
      if (solve_dense(hd, rhs, delta)) {
        std::vector<double> trial(k);
        for (int i = 0; i < m; ++i) trial[i] += delta[i];
        double j_new = f.eval(trial);
        if (j_new < j_cur) {
          k = std::move(trial);
          j_cur = j_new;
          lambda = std::max(lambda / 10.0, 1e-12);
          stepped = true;
          break;
        }
      }
      lambda *= 10.0;
      if (lambda > 1e12) break;
    }
    if (!stepped) {
      // steepest descent with backtracking
      double step = 1.0;
      bool ok = false;
      while (step > 1e-18) {
        std::vector<double> trial(k);
        for (int i = 0; i < m; ++i) trial[i] -= step * g[i];
        double j_new = f.eval(trial);
        if (j_new < j_cur) {
          k = std::move(trial);
          j_cur = j_new;
          ok = true;
          break;
        }
        step /= 2.0;
      }
      if (!ok) break;  // stalled; report best iterate
    }
  }
  std::vector<double> g(m);
  for (int i = 0; i < m; ++i) g[i] = grad[i].eval(k);
  out.grad_norm = norm2(g);
  if (out.grad_norm <= opt.grad_tol) out.converged = true;
  out.params = std::move(k);
  out.jvalue = j_cur;
  out.iterations = iter;
  return out;
}

}  // namespace detail

// Multi-start stationarity solve: the caller-provided start (normally
// the coefficients read from the initial guess), the zero vector, and
// seeded random points in the box. Returns the lowest-J stationary
// point; ties break to the smaller parameter norm, then start order.
// When no start converges, the best iterate is reported with
// converged=false rather than thrown.
inline FitResult minimize(const Functional& f, const std::vector<double>& start,
                          const MinimizeOptions& opt = MinimizeOptions()) {
  const int m = f.poly.nparams();
  if (static_cast<int>(start.size()) != m)
    throw DomainError("minimize: start vector size mismatch");

  FitResult result;
  if (m == 0) {
    result.params = {};
    result.jvalue = f.eval({});
    result.grad_norm = 0.0;
    result.converged = true;
    result.start = "empty";
    return result;
  }

  std::vector<PolyN> grad = gradient(f);
  std::vector<std::vector<PolyN>> hess(m, std::vector<PolyN>());
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) hess[i].push_back(grad[i].derivative(j));

  std::vector<std::pair<std::string, std::vector<double>>> starts;
  starts.emplace_back("hpm", start);
  starts.emplace_back("zero", std::vector<double>(m, 0.0));
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> box(-opt.random_box, opt.random_box);
  for (int s = 0; s < opt.random_starts; ++s) {
    std::vector<double> p(m);
    for (int i = 0; i < m; ++i) p[i] = box(rng);
    starts.emplace_back("random" + std::to_string(s), std::move(p));
  }

  bool have_best = false;
  detail::NewtonOutcome best;
  std::string best_name;
  for (const auto& [name, p] : starts) {
    auto run = detail::newton_run(f, grad, hess, p, opt);
    bool better = false;
    if (!have_best) {
      better = true;
    } else if (run.converged != best.converged) {
      better = run.converged;
    } else if (run.jvalue != best.jvalue) {
      better = run.jvalue < best.jvalue;
    } else {
      better = detail::norm2(run.params) < detail::norm2(best.params);
    }
    if (better) {
      best = run;
      best_name = name;
      have_best = true;
    }
  }

  result.params = best.params;
  result.jvalue = best.jvalue;
  result.grad_norm = best.grad_norm;
  result.iterations = best.iterations;
  result.converged = best.converged;
  result.start = best_name;
  return result;
}

// Independent numeric check of the exact assembly: the summed squared
// residual evaluated pointwise on a graded tensor Gauss-Legendre grid.
inline double quadrature_oracle(const std::vector<ParamPoly>& residuals,
                                const std::vector<double>& params,
                                const FracOrders& orders, int nodes) {
  if (nodes < 8) throw DomainError("quadrature_oracle requires nodes >= 8");
  std::vector<FracSeries> series;
  series.reserve(residuals.size());
  for (const auto& r : residuals) series.push_back(r.substitute(params));
  QuadGrid1D grid = graded_gl_grid(nodes);
  return integrate_square(
      [&](double x, double t) {
        double s = 0.0;
        for (const auto& r : series) {
          double v = eval(r, x, t, orders);
          s += v * v;
        }
        return s;
      },
      grid, grid);
}

// Residual-size classification of a fitted solution.
struct EpsilonReport {
  bool pointwise = false;  // max |R_i| < epsilon on the lattice, all equations
  bool weak = false;       // sum of exact integrals of R_i^2 <= epsilon
  double pointwise_max = 0.0;
  double weak_integral = 0.0;
};

inline EpsilonReport classify_epsilon(const std::vector<ParamPoly>& residuals,
                                      const std::vector<double>& params,
                                      const FracOrders& orders, double epsilon,
                                      int grid = 101) {
  if (!(epsilon > 0.0)) throw DomainError("classify_epsilon requires epsilon > 0");
  if (grid < 2) throw DomainError("classify_epsilon requires grid >= 2");
  EpsilonReport rep;
  for (const auto& r : residuals) {
    FracSeries s = r.substitute(params);
    for (int i = 0; i < grid; ++i)
      for (int j = 0; j < grid; ++j) {
        double x = static_cast<double>(i) / (grid - 1);
        double t = static_cast<double>(j) / (grid - 1);
        rep.pointwise_max =
            std::max(rep.pointwise_max, std::abs(eval(s, x, t, orders)));
      }
    rep.weak_integral += integrate_unit_square(mul(s, s), orders);
  }
  rep.pointwise = rep.pointwise_max < epsilon;
  rep.weak = rep.weak_integral <= epsilon;
  return rep;
}

}  // namespace glshp

#endif  // GLSHP_LSQ_HPP
