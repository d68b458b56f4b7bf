#include <doctest.h>

#include <random>

#include "glshp/pipeline.hpp"
#include "oracles.hpp"

using namespace glshp;

namespace {

Ansatz certified_ansatz(const ProblemSpec& p, Unknown w, BasisOrder order,
                        double x, double t) {
  InitialGuess g = bootstrap(p, w);
  BasisSet basis = extract_basis(g, p.orders, order);
  basis.certificate = wronskian_at(basis.functions, x, t,
                                   p.wronskian_order(w), p.orders);
  REQUIRE(basis.certificate->independent);
  return apply_ics(Ansatz::all_free(w, basis), p);
}

std::vector<ParamPoly> example_residuals(const ProblemSpec& p,
                                         BasisOrder order = BasisOrder::x_first,
                                         double x = 0.2, double t = 0.5) {
  Ansatz au = certified_ansatz(p, Unknown::u, order, x, t);
  if (!p.coupled()) return build_residual(p, au);
  Ansatz av = certified_ansatz(p, Unknown::v, order, x, t);
  return build_residual(p, au, &av);
}

std::vector<double> random_params(std::mt19937_64& rng, int m) {
  std::uniform_real_distribution<double> box(-3.0, 3.0);
  std::vector<double> p(m);
  for (auto& v : p) v = box(rng);
  return p;
}

}  // namespace

TEST_CASE("apply_ics fixes the determined coefficients") {
  SUBCASE("first problem fixes the t^2 slot to 1/2") {
    ProblemSpec p = example1(FracOrders(0.9));
    Ansatz a = certified_ansatz(p, Unknown::u, BasisOrder::x_first, 0.2, 0.5);
    REQUIRE(a.fixed.size() == 1);
    CHECK(a.fixed.at(1) == doctest::Approx(0.5));
    CHECK(a.free == std::vector<int>{0, 2});
  }
  SUBCASE("coupled problem fixes both t^2 slots") {
    ProblemSpec p = example3(FracOrders(0.9, 0.8));
    Ansatz au = certified_ansatz(p, Unknown::u, BasisOrder::x_first, 0.2, 0.5);
    Ansatz av = certified_ansatz(p, Unknown::v, BasisOrder::x_first, 0.2, 0.5);
    CHECK(au.fixed.at(1) == doctest::Approx(1.0));
    CHECK(av.fixed.at(1) == doctest::Approx(0.5));
  }
  SUBCASE("no pure-t basis and zero data fixes nothing") {
    ProblemSpec p;
    p.kind = ProblemSpec::Kind::single;
    p.orders = FracOrders(0.9);
    p.forcing_u = FracSeries::constant(1.0);
    p.ics_u = {{0, FracSeries::zero()}, {1, FracSeries::zero()}};
    InitialGuess g = bootstrap(p, Unknown::u);
    BasisSet basis = extract_basis(g, p.orders, BasisOrder::x_first);
    basis.certificate = wronskian_at(basis.functions, 0.2, 0.5,
                                     p.wronskian_order(Unknown::u), p.orders);
    Ansatz a = apply_ics(Ansatz::all_free(Unknown::u, basis), p);
    CHECK(a.fixed.empty());
    CHECK(a.free.size() == basis.functions.size());
  }
  SUBCASE("unsatisfiable data is rejected") {
    ProblemSpec p = example1(FracOrders(0.9));
    // a t^3 component no basis function can reproduce
    p.ics_u[0].series.add_term(1.0, Exponent(), Exponent(Rational(3)));
    InitialGuess g = bootstrap(example1(FracOrders(0.9)), Unknown::u);
    BasisSet basis = extract_basis(g, p.orders, BasisOrder::x_first);
    basis.certificate = wronskian_at(basis.functions, 0.2, 0.5,
                                     p.wronskian_order(Unknown::u), p.orders);
    CHECK_THROWS_AS(apply_ics(Ansatz::all_free(Unknown::u, basis), p),
                    InconsistentIC);
  }
}

TEST_CASE("build_residual vanishes at the exact order-one coefficients") {
  SUBCASE("first problem at (K0,K2) = (1,0)") {
    ProblemSpec p = example1(FracOrders(1.0));
    auto residuals = example_residuals(p);
    REQUIRE(residuals.size() == 1);
    CHECK(residuals[0].substitute({1.0, 0.0}).max_abs_coeff() <= 1e-14);
  }
  SUBCASE("second problem at x-coefficient 2") {
    ProblemSpec p = example2(FracOrders(1.0));
    auto residuals = example_residuals(p, BasisOrder::t_first, 0.3, 0.4);
    REQUIRE(residuals.size() == 1);
    CHECK(residuals[0].substitute({2.0, 0.0}).max_abs_coeff() <= 1e-14);
  }
  SUBCASE("coupled problem at (2,0,1,0)") {
    ProblemSpec p = example3(FracOrders(1.0, 1.0));
    auto residuals = example_residuals(p);
    REQUIRE(residuals.size() == 2);
    for (const auto& r : residuals)
      CHECK(r.substitute({2.0, 0.0, 1.0, 0.0}).max_abs_coeff() <= 1e-14);
  }
  SUBCASE("zero ansatz, zero forcing, zero nonlinearity") {
    ProblemSpec p;
    p.kind = ProblemSpec::Kind::single;
    p.orders = FracOrders(0.9);
    p.forcing_u = FracSeries::zero();
    p.ics_u = {{0, FracSeries::zero()}, {1, FracSeries::zero()}};
    BasisSet basis;
    basis.functions = {FracSeries::monomial(1.0, Exponent::alpha(Rational(2)),
                                            Exponent())};
    basis.source = {"synthetic"};
    basis.certificate = wronskian_at(basis.functions, 0.5, 0.5,
                                     Exponent::alpha(), p.orders);
    Ansatz a = Ansatz::all_free(Unknown::u, basis);
    a.fixed[0] = 0.0;
    a.free.clear();
    auto residuals = build_residual(p, a);
    REQUIRE(residuals.size() == 1);
    CHECK(residuals[0].is_zero());
  }
  SUBCASE("certificate requirement is enforced") {
    ProblemSpec p = example1(FracOrders(0.9));
    InitialGuess g = bootstrap(p, Unknown::u);
    BasisSet basis = extract_basis(g, p.orders, BasisOrder::x_first);
    Ansatz a = apply_ics(Ansatz::all_free(Unknown::u, basis), p);
    CHECK_THROWS_AS(build_residual(p, a), DomainError);
  }
}

TEST_CASE("residual parameter degrees stay quadratic") {
  ProblemSpec p = example3(FracOrders(0.9, 0.8));
  auto residuals = example_residuals(p);
  for (const auto& r : residuals) CHECK(r.max_param_degree() <= 2);
}

TEST_CASE("assemble_functional on hand-checked inputs") {
  FracOrders ord(0.9);
  SUBCASE("constant residual, no parameters") {
    ParamPoly r(0);
    r.add(MultiIndex{}, FracSeries::constant(1.0));
    Functional f = assemble_functional({r}, ord);
    CHECK(f.eval({}) == doctest::Approx(1.0));
  }
  SUBCASE("single parameter K0*x - 1") {
    ParamPoly r(1);
    r.add(MultiIndex{1}, FracSeries::monomial(1.0, Exponent(Rational(1)),
                                              Exponent()));
    r.add(MultiIndex{0}, FracSeries::constant(-1.0));
    Functional f = assemble_functional({r}, ord);
    // J(K) = K^2/3 - K + 1
    CHECK(f.eval({0.0}) == doctest::Approx(1.0));
    CHECK(f.eval({1.0}) == doctest::Approx(1.0 / 3.0));
    CHECK(f.eval({3.0}) == doctest::Approx(3.0 - 3.0 + 1.0));
    auto g = gradient(f);
    REQUIRE(g.size() == 1);
    CHECK(g[0].eval({1.5}) == doctest::Approx(0.0));
  }
  SUBCASE("worked problem at the exact optimum") {
    ProblemSpec p = example1(FracOrders(1.0));
    auto residuals = example_residuals(p);
    Functional f = assemble_functional(residuals, p.orders);
    CHECK(f.eval({1.0, 0.0}) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(f.poly.degree() <= 4);
  }
  SUBCASE("fractional-order value against an externally computed anchor") {
    ProblemSpec p = example1(FracOrders(0.9));
    auto residuals = example_residuals(p);
    Functional f = assemble_functional(residuals, p.orders);
    CHECK(f.eval({0.3, -0.7}) ==
          doctest::Approx(0.7312615940406726).epsilon(1e-12));
  }
}

TEST_CASE("functional is nonnegative wherever sampled") {
  std::mt19937_64 rng(21);
  for (int id : {1, 2, 3}) {
    ProblemSpec p = builtin_example(id, FracOrders(0.9, 0.8));
    auto residuals =
        example_residuals(p, id == 2 ? BasisOrder::t_first : BasisOrder::x_first,
                          id == 2 ? 0.3 : 0.2, id == 2 ? 0.4 : 0.5);
    Functional f = assemble_functional(residuals, p.orders);
    int m = residuals.front().nparams();
    for (int i = 0; i < 50; ++i)
      CHECK(f.eval(random_params(rng, m)) >= -1e-10);
  }
}

TEST_CASE("exact assembly matches the quadrature oracle") {
  std::mt19937_64 rng(33);
  for (int id : {1, 2, 3}) {
    for (double a : {0.7, 0.9, 1.0}) {
      FracOrders ord(a, a == 0.7 ? 0.9 : 0.7);
      ProblemSpec p = builtin_example(id, ord);
      auto residuals = example_residuals(
          p, id == 2 ? BasisOrder::t_first : BasisOrder::x_first,
          id == 2 ? 0.3 : 0.2, id == 2 ? 0.4 : 0.5);
      Functional f = assemble_functional(residuals, p.orders);
      int m = residuals.front().nparams();
      for (int i = 0; i < 4; ++i) {
        auto params = random_params(rng, m);
        double exact = f.eval(params);
        double quad = quadrature_oracle(residuals, params, p.orders, 64);
        CHECK(std::abs(exact - quad) <= 1e-9);
      }
    }
  }
}

TEST_CASE("quadrature_oracle basics") {
  FracOrders ord(0.9);
  ParamPoly r(0);
  r.add(MultiIndex{}, FracSeries::monomial(1.0, Exponent(Rational(1)),
                                           Exponent()) +
                          FracSeries::constant(-0.5));
  CHECK(quadrature_oracle({r}, {}, ord, 64) ==
        doctest::Approx(1.0 / 12.0).epsilon(1e-12));
  CHECK_THROWS_AS(quadrature_oracle({r}, {}, ord, 4), DomainError);

  ProblemSpec p = example1(FracOrders(1.0));
  auto residuals = example_residuals(p);
  CHECK(quadrature_oracle(residuals, {1.0, 0.0}, p.orders, 64) <= 1e-12);
}

TEST_CASE("gradient matches central finite differences") {
  std::mt19937_64 rng(55);
  for (int id : {1, 2, 3}) {
    ProblemSpec p = builtin_example(id, FracOrders(0.9, 0.8));
    auto residuals = example_residuals(
        p, id == 2 ? BasisOrder::t_first : BasisOrder::x_first,
        id == 2 ? 0.3 : 0.2, id == 2 ? 0.4 : 0.5);
    Functional f = assemble_functional(residuals, p.orders);
    auto grads = gradient(f);
    int m = residuals.front().nparams();
    const double h = 1e-6;
    for (int trial = 0; trial < 20; ++trial) {
      auto params = random_params(rng, m);
      for (int i = 0; i < m; ++i) {
        auto up = params, dn = params;
        up[i] += h;
        dn[i] -= h;
        double fd = (f.eval(up) - f.eval(dn)) / (2 * h);
        double an = grads[i].eval(params);
        CHECK(an == doctest::Approx(fd).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("minimize on convex and worked cases") {
  SUBCASE("strictly convex quadratic from any start") {
    // J = (K - 3/2)^2
    Functional f{PolyN(1)};
    f.poly.add(MultiIndex{0}, 2.25);
    f.poly.add(MultiIndex{1}, -3.0);
    f.poly.add(MultiIndex{2}, 1.0);
    for (double s : {-3.0, 0.0, 2.0}) {
      FitResult r = minimize(f, {s});
      CHECK(r.converged);
      CHECK(r.params[0] == doctest::Approx(1.5).epsilon(1e-10));
      CHECK(r.grad_norm <= 1e-12);
    }
  }
  SUBCASE("first worked problem at order one") {
    ProblemSpec p = example1(FracOrders(1.0));
    auto residuals = example_residuals(p);
    Functional f = assemble_functional(residuals, p.orders);
    FitResult r = minimize(f, {1.0, -0.5});
    REQUIRE(r.converged);
    CHECK(r.params[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.params[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
    CHECK(r.jvalue <= 1e-15);
  }
  SUBCASE("coupled worked problem at order one") {
    ProblemSpec p = example3(FracOrders(1.0, 1.0));
    auto residuals = example_residuals(p);
    Functional f = assemble_functional(residuals, p.orders);
    FitResult r = minimize(f, {2.0, -2.0, 1.0, 1.5});
    REQUIRE(r.converged);
    CHECK(r.params[0] == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(r.params[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-8));
    CHECK(r.params[2] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(r.params[3] == doctest::Approx(0.0).scale(1.0).epsilon(1e-8));
  }
  SUBCASE("empty parameter vector") {
    Functional f{PolyN(0)};
    f.poly.add(MultiIndex{}, 0.25);
    FitResult r = minimize(f, {});
    CHECK(r.converged);
    CHECK(r.jvalue == doctest::Approx(0.25));
  }
}

TEST_CASE("fit never loses to its own start") {
  for (int id : {1, 2, 3}) {
    for (double a : {0.7, 0.9, 1.0}) {
      FracOrders ord(a, a);
      ProblemSpec p = builtin_example(id, ord);
      SolveConfig config = config_for_builtin(id);
      SolveResult r = solve_problem(p, config);
      CHECK(r.fit.converged);
      CHECK(r.fit.jvalue <= r.j_hpm + 1e-12);
    }
  }
}

TEST_CASE("fitted residual at order one is the zero series") {
  for (int id : {1, 2, 3}) {
    ProblemSpec p = builtin_example(id, FracOrders(1.0, 1.0));
    SolveConfig config = config_for_builtin(id);
    SolveResult r = solve_problem(p, config);
    for (const auto& res : r.residuals)
      CHECK(res.substitute(r.fit.params).max_abs_coeff() <= 1e-9);
  }
}

TEST_CASE("classify_epsilon pointwise and weak semantics") {
  FracOrders ord(0.9);
  SUBCASE("residual identically one") {
    ParamPoly r(0);
    r.add(MultiIndex{}, FracSeries::constant(1.0));
    EpsilonReport rep = classify_epsilon({r}, {}, ord, 0.5);
    CHECK_FALSE(rep.pointwise);
    CHECK_FALSE(rep.weak);
  }
  SUBCASE("residual x*t splits the two notions at 0.3") {
    ParamPoly r(0);
    r.add(MultiIndex{}, FracSeries::monomial(1.0, Exponent(Rational(1)),
                                             Exponent(Rational(1))));
    EpsilonReport rep = classify_epsilon({r}, {}, ord, 0.3);
    CHECK_FALSE(rep.pointwise);  // sup is 1 at the corner
    CHECK(rep.weak);             // integral of x^2 t^2 is 1/9
    CHECK(rep.pointwise_max == doctest::Approx(1.0));
    CHECK(rep.weak_integral == doctest::Approx(1.0 / 9.0));
  }
  SUBCASE("fitted order-one solution classifies cleanly") {
    ProblemSpec p = example1(FracOrders(1.0));
    SolveConfig config = config_for_builtin(1);
    SolveResult r = solve_problem(p, config);
    EpsilonReport rep =
        classify_epsilon(r.residuals, r.fit.params, p.orders, 1e-10);
    CHECK(rep.pointwise);
    CHECK(rep.weak);
  }
}

TEST_CASE("pointwise bound controls the weak integral") {
  for (int id : {1, 2, 3}) {
    for (double a : {0.89, 0.97, 1.0}) {
      FracOrders ord(a, a);
      ProblemSpec p = builtin_example(id, ord);
      SolveConfig config = config_for_builtin(id);
      SolveResult r = solve_problem(p, config);
      EpsilonReport rep =
          classify_epsilon(r.residuals, r.fit.params, p.orders, 1.0);
      double m = rep.pointwise_max;
      CHECK(rep.weak_integral <= p.equation_count() * m * m + 1e-18);
    }
  }
}
