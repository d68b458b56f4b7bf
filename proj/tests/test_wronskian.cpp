#include <doctest.h>

#include <algorithm>
#include <random>

#include "glshp/wronskian.hpp"
#include "oracles.hpp"

using namespace glshp;

namespace {

// The worked three-function basis for a given fractional order symbol.
std::vector<FracSeries> paper_basis(double a, BasisOrder order) {
  double g1 = std::tgamma(2 * a + 1), g3 = std::tgamma(2 * a + 3);
  Exponent e2a = Exponent::alpha(Rational(2));
  FracSeries fx = FracSeries::monomial(1.0 / g1, e2a, Exponent());
  FracSeries ft = FracSeries::monomial(1.0, Exponent(), Exponent(Rational(2)));
  FracSeries fm = FracSeries::monomial(1.0 / g1, e2a, Exponent(Rational(2)));
  fm.add_term(1.0 / g3, e2a + Exponent(Rational(2)), Exponent());
  if (order == BasisOrder::x_first) return {fx, ft, fm};
  return {ft, fx, fm};
}

double quartic_w3(double x, double t) {
  return 7 * t * x * x * x - 3 * t * t * x * x - 4 * t * t * t * x;
}

}  // namespace

TEST_CASE("dalpha basics") {
  FracOrders ord(1.0);
  FracSeries t2 = FracSeries::monomial(1.0, Exponent(), Exponent(Rational(2)));
  FracSeries d = dalpha(t2, Exponent::alpha(), ord);
  REQUIRE(d.size() == 1);
  CHECK(d.coeff(Exponent(), Exponent(Rational(1))) == doctest::Approx(2.0));

  FracSeries xt = FracSeries::monomial(1.0, Exponent(Rational(1)),
                                       Exponent(Rational(1)));
  FracSeries dxt = dalpha(xt, Exponent::alpha(), ord);
  CHECK(dxt.coeff(Exponent(Rational(1)), Exponent()) == doctest::Approx(1.0));
  CHECK(dxt.coeff(Exponent(), Exponent(Rational(1))) == doctest::Approx(1.0));
}

TEST_CASE("dalpha maps x^(2a)/Gamma(2a+1) to x^a/Gamma(a+1)") {
  for (double a : {0.6, 0.8, 1.0}) {
    FracOrders ord(a);
    FracSeries f = FracSeries::monomial(1.0 / std::tgamma(2 * a + 1),
                                        Exponent::alpha(Rational(2)),
                                        Exponent());
    FracSeries d = dalpha(f, Exponent::alpha(), ord);
    REQUIRE(d.size() == 1);
    CHECK(d.coeff(Exponent::alpha(), Exponent()) ==
          doctest::Approx(1.0 / std::tgamma(a + 1)).epsilon(1e-12));
  }
  // numeric cross-check of the fractional part at alpha = 0.8
  FracOrders ord(0.8);
  FracSeries f = FracSeries::monomial(1.0 / std::tgamma(2 * 0.8 + 1),
                                      Exponent::alpha(Rational(2)), Exponent());
  double direct = eval(dalpha(f, Exponent::alpha(), ord), 0.6, 0.0, ord);
  double numeric = oracles::caputo_convolution(f, 0.8, 0.6, 0.0, ord);
  CHECK(direct == doctest::Approx(numeric).epsilon(1e-6));
}

TEST_CASE("dalpha is linear") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> coeff(-3.0, 3.0);
  FracOrders ord(0.85);
  FracSeries f = FracSeries::monomial(1.0, Exponent::alpha(Rational(2)),
                                      Exponent(Rational(2)));
  FracSeries g = FracSeries::monomial(1.0, Exponent(Rational(2)),
                                      Exponent(Rational(1)));
  for (int i = 0; i < 20; ++i) {
    double a = coeff(rng), b = coeff(rng);
    FracSeries lhs = dalpha(f * a + g * b, Exponent::alpha(), ord);
    FracSeries rhs = dalpha(f, Exponent::alpha(), ord) * a +
                     dalpha(g, Exponent::alpha(), ord) * b;
    CHECK(lhs.approx_equal(rhs, 1e-13));
  }
}

TEST_CASE("dalpha_power composes and k=0 is the identity") {
  FracOrders ord(1.0);
  FracSeries t2 = FracSeries::monomial(1.0, Exponent(), Exponent(Rational(2)));
  FracSeries d2 = dalpha_power(t2, 2, Exponent::alpha(), ord);
  REQUIRE(d2.size() == 1);
  CHECK(d2.coeff(Exponent(), Exponent()) == doctest::Approx(2.0));
  CHECK(dalpha_power(t2, 0, Exponent::alpha(), ord) == t2);

  // matches the printed second-order expansion
  // d^2/dt^2 + 2 d^2/(dt dx^a) + d^{2a}/dx^{2a} on the mixed function
  for (double a : {0.7, 0.9, 1.0}) {
    FracOrders o(a);
    double g1 = std::tgamma(2 * a + 1), g3 = std::tgamma(2 * a + 3);
    FracSeries fm = FracSeries::monomial(1.0 / g1, Exponent::alpha(Rational(2)),
                                         Exponent(Rational(2)));
    fm.add_term(1.0 / g3, Exponent::alpha(Rational(2)) + Exponent(Rational(2)),
                Exponent());
    FracSeries composed = dalpha_power(fm, 2, Exponent::alpha(), o);
    FracSeries expanded =
        dt(fm, 2, o) +
        2.0 * caputo_dx(dt(fm, 1, o), Exponent::alpha(), o) +
        caputo_dx(caputo_dx(fm, Exponent::alpha(), o), Exponent::alpha(), o);
    CHECK(composed.approx_equal(expanded, 1e-12));
  }
}

TEST_CASE("wronskian_at determinant properties") {
  FracOrders ord(0.9);
  auto fs = paper_basis(0.9, BasisOrder::x_first);

  SUBCASE("duplicate functions give a zero determinant") {
    FracSeries t2 = FracSeries::monomial(1.0, Exponent(),
                                         Exponent(Rational(2)));
    auto rep = wronskian_at({t2, t2}, 0.4, 0.6, Exponent::alpha(), ord);
    CHECK(rep.value == doctest::Approx(0.0));
    CHECK_FALSE(rep.independent);
  }

  SUBCASE("antisymmetry under column swaps, parity over all permutations") {
    auto base = wronskian_at(fs, 0.4, 0.6, Exponent::alpha(), ord);
    std::vector<int> perm{0, 1, 2};
    do {
      std::vector<FracSeries> shuffled{fs[perm[0]], fs[perm[1]], fs[perm[2]]};
      auto rep = wronskian_at(shuffled, 0.4, 0.6, Exponent::alpha(), ord);
      int inversions = 0;
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
          if (perm[i] > perm[j]) ++inversions;
      double expect = (inversions % 2 == 0) ? base.value : -base.value;
      CHECK(rep.value == doctest::Approx(expect).epsilon(1e-12));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  SUBCASE("appending a linear combination forces dependence") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    for (int i = 0; i < 10; ++i) {
      double c1 = coeff(rng), c2 = coeff(rng);
      std::vector<FracSeries> dep{fs[0], fs[1], fs[0] * c1 + fs[1] * c2};
      for (double x : {0.2, 0.5, 0.8})
        for (double t : {0.3, 0.7}) {
          auto rep = wronskian_at(dep, x, t, Exponent::alpha(), ord);
          CHECK(std::abs(rep.value) <= 1e-10);
        }
    }
  }

  SUBCASE("report carries the evaluated matrix") {
    auto rep = wronskian_at(fs, 0.4, 0.6, Exponent::alpha(), ord, 1e-8);
    REQUIRE(rep.matrix.size() == 3);
    for (int i = 0; i < 3; ++i)
      CHECK(rep.matrix[0][i] ==
            doctest::Approx(eval(fs[i], 0.4, 0.6, ord)).epsilon(1e-14));
    CHECK(rep.threshold == 1e-8);
    CHECK(rep.order == doctest::Approx(0.9));
  }
}

TEST_CASE("wronskian_at on an independent determinant route") {
  // cofactor expansion over explicit permutations, independent of the LU
  FracOrders ord(0.8);
  auto fs = paper_basis(0.8, BasisOrder::x_first);
  auto rep = wronskian_at(fs, 0.35, 0.55, Exponent::alpha(), ord);
  const auto& m = rep.matrix;
  double direct = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                  m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                  m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  CHECK(rep.value == doctest::Approx(direct).epsilon(1e-13));
}

TEST_CASE("closed_form_w3 reproduces the reported checkpoints") {
  FracOrders ord(1.0, 1.0);
  auto [wu, wv] = closed_form_w3(ord, BasisOrder::x_first);
  CHECK(eval(wu, 0.2, 0.5, ord) == doctest::Approx(-0.102).epsilon(1e-12));
  CHECK(eval(wv, 0.2, 0.5, ord) == doctest::Approx(-0.102).epsilon(1e-12));

  auto [wu2, wv2] = closed_form_w3(ord, BasisOrder::t_first);
  CHECK(eval(wu2, 0.3, 0.4, ord) == doctest::Approx(0.0444).epsilon(1e-12));
  CHECK(eval(wu2, 0.2, 0.5, ord) == doctest::Approx(0.102).epsilon(1e-12));
  (void)wv2;
}

TEST_CASE("closed_form_w3 equals the order-one quartic at random points") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> pt(0.01, 1.0);
  FracOrders ord(1.0, 1.0);
  auto [wu, wv] = closed_form_w3(ord, BasisOrder::x_first);
  for (int i = 0; i < 100; ++i) {
    double x = pt(rng), t = pt(rng);
    CHECK(eval(wu, x, t, ord) ==
          doctest::Approx(quartic_w3(x, t)).epsilon(1e-12));
    CHECK(eval(wv, x, t, ord) ==
          doctest::Approx(quartic_w3(x, t)).epsilon(1e-12));
  }
}

TEST_CASE("closed_form_w3 vanishes on the x = 0 edge") {
  for (double a : {0.6, 0.8, 1.0}) {
    FracOrders ord(a, a);
    auto [wu, wv] = closed_form_w3(ord, BasisOrder::x_first);
    for (double t : {0.0, 0.4, 1.0}) {
      CHECK(eval(wu, 0.0, t, ord) == 0.0);
      CHECK(eval(wv, 0.0, t, ord) == 0.0);
    }
  }
}

TEST_CASE("closed_form_w3 variants are sign flips of each other") {
  for (double a : {0.6, 0.8, 1.0}) {
    FracOrders ord(a, 0.75);
    auto [xu, xv] = closed_form_w3(ord, BasisOrder::x_first);
    auto [tu, tv] = closed_form_w3(ord, BasisOrder::t_first);
    for (double x : {0.2, 0.7})
      for (double t : {0.3, 0.9}) {
        CHECK(eval(xu, x, t, ord) ==
              doctest::Approx(-eval(tu, x, t, ord)).epsilon(1e-14));
        CHECK(eval(xv, x, t, ord) ==
              doctest::Approx(-eval(tv, x, t, ord)).epsilon(1e-14));
      }
  }
}

TEST_CASE("determinant and closed form certify the same checkpoints") {
  // The closed-form expressions carry the reported checkpoint values;
  // the determinant is computed from the definition. The two disagree
  // in magnitude (see the basis notes in the README) but both certify
  // independence at the worked points.
  FracOrders ord(1.0, 1.0);
  auto fs1 = paper_basis(1.0, BasisOrder::x_first);
  auto rep1 = wronskian_at(fs1, 0.2, 0.5, Exponent::alpha(), ord);
  CHECK(rep1.independent);
  CHECK(rep1.value == doctest::Approx(-0.00936).epsilon(1e-10));

  auto fs2 = paper_basis(1.0, BasisOrder::t_first);
  auto rep2 = wronskian_at(fs2, 0.3, 0.4, Exponent::alpha(), ord);
  CHECK(rep2.independent);
  CHECK(rep2.value == doctest::Approx(0.0046125).epsilon(1e-10));
}
