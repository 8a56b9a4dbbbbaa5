#include <doctest.h>

#include <random>

#include "fewnomial/hybrid.hpp"
#include "fewnomial/oracle.hpp"

using namespace fewnomial;

namespace {

// c^(1/D) to 300 bits.
mpq_class rootn(const mpq_class& c, unsigned long D) {
  mpfr_t v;
  mpfr_init2(v, 300);
  mpfr_set_q(v, c.get_mpq_t(), MPFR_RNDN);
  mpfr_rootn_ui(v, v, D, MPFR_RNDN);
  mpq_class out;
  mpfr_get_q(out.get_mpq_t(), v);
  mpfr_clear(v);
  return out;
}

mpq_class ten_pow(int e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? -e : e));
  return e < 0 ? mpq_class(1, 1) / mpq_class(p) : mpq_class(p);
}

HybridInput<Rational> binomial_input(unsigned long D, const mpq_class& c, const mpq_class& R,
                                     const mpq_class& eps) {
  HybridInput<Rational> in;
  in.phi = Poly::from_terms({{Rational(-c), 0}, {Rational(1), D}});
  in.eps = Rational(eps);
  in.R = Rational(R);
  in.alpha_star = Rational(mpq_class(D - 1, 2));
  if (D == 1) in.alpha_star = Rational(mpq_class(1, 2));
  in.direction = Direction::Increasing;
  return in;
}

mpq_class absq(const mpq_class& q) { return q < 0 ? mpq_class(-q) : q; }

}  // namespace

TEST_CASE("HYBRID on x^2 - 2") {
  auto in = binomial_input(2, 2, 2, ten_pow(-6));
  OpCounter ctr;
  auto res = hybrid_solve_diag(in, ctr);
  mpq_class zeta = rootn(2, 2);
  CHECK(absq(res.global.value() - zeta) < ten_pow(-6));
  CHECK(res.certified);
  CHECK_FALSE(res.bisection_fallback);
  CHECK(res.evals == ctr.evals);
}

TEST_CASE("HYBRID on x^1000 - 2") {
  auto in = binomial_input(1000, 2, 2, ten_pow(-9));
  OpCounter ctr;
  auto res = hybrid_solve_diag(in, ctr);
  mpq_class zeta = rootn(2, 1000);
  CHECK(absq(res.global.value() - zeta) < ten_pow(-9));
  CHECK_FALSE(res.bisection_fallback);
  // log2(alpha log2(R/eps)) is about 13.9
  CHECK(res.evals <= 4 * 14);
}

TEST_CASE("HYBRID on a linear function") {
  auto in = binomial_input(1, 1, 2, mpq_class(1, 10));
  OpCounter ctr;
  auto res = hybrid_solve_diag(in, ctr);
  CHECK(absq(res.global.value() - 1) < mpq_class(1, 10));
}

TEST_CASE("HYBRID through a reflected and negated view") {
  // phi(x) = f(1 - x) with f = 1 - 3x + x^2 is increasing and convex on (0, 1).
  HybridInput<Rational> in;
  in.phi = parse_poly("1,0;-3,1;1,2");
  in.origin = Rational(1);
  in.orientation = -1;
  in.eps = Rational(ten_pow(-8));
  in.R = Rational(1);
  in.alpha_star = Rational(1);
  in.direction = Direction::Increasing;
  OpCounter ctr;
  auto res = hybrid_solve_diag(in, ctr);
  DensePoly p = expand(in.phi);
  auto iso = isolate_and_refine(p, CountQuery::open(0, 1), ten_pow(-30));
  REQUIRE(iso.root_count() == 1);
  mpq_class zeta = iso.brackets()[0].first;
  CHECK(absq(res.global.value() - zeta) < ten_pow(-8));
}

TEST_CASE("HYBRID decreasing convex") {
  HybridInput<Rational> in;
  in.phi = parse_poly("1,0;-3,1;1,2");
  in.eps = Rational(ten_pow(-10));
  in.R = Rational(mpq_class(3, 2));
  in.alpha_star = Rational(1);
  in.direction = Direction::Decreasing;
  OpCounter ctr;
  auto res = hybrid_solve_diag(in, ctr);
  auto iso = isolate_and_refine(expand(in.phi), CountQuery::open(0, mpq_class(3, 2)), ten_pow(-30));
  REQUIRE(iso.root_count() == 1);
  mpq_class zeta = iso.brackets()[0].first;
  CHECK(absq(res.global.value() - zeta) < ten_pow(-10));
  CHECK(res.grid_point.value() <= zeta);
}

TEST_CASE("HYBRID root below eps and exact grid hit") {
  auto in = binomial_input(3, mpq_class(1, 1000000000), 2, ten_pow(-2));
  OpCounter ctr;
  auto res = hybrid_solve_diag(in, ctr);
  CHECK(absq(res.global.value() - mpq_class(1, 100)) < ten_pow(-2));

  auto hit = binomial_input(1, mpq_class(1, 100), 2, mpq_class(1, 100));
  OpCounter c2;
  auto r2 = hybrid_solve_diag(hit, c2);
  CHECK(r2.exact_hit);
  CHECK(r2.global.value() == mpq_class(1, 100));
}

TEST_CASE("HYBRID randomized binomials with grid exit invariant") {
  std::mt19937_64 rng(11);
  int fallbacks = 0;
  for (int trial = 0; trial < 120; ++trial) {
    unsigned long D = 2 + rng() % 2000;
    mpq_class c(1 + static_cast<long>(rng() % 200), 20);
    mpq_class zeta = rootn(c, D);
    mpq_class R = zeta * 2 + mpq_class(static_cast<long>(rng() % 10), 7);
    int e = 3 + static_cast<int>(rng() % 10);
    mpq_class eps = ten_pow(-e);
    if (eps >= zeta) continue;
    auto in = binomial_input(D, c, R, eps);
    OpCounter ctr;
    auto res = hybrid_solve_diag(in, ctr);
    INFO("D=" << D << " c=" << c.get_str() << " e=" << e);
    CHECK(absq(res.global.value() - zeta) < eps);
    // x_hat <= zeta <= c0 x_hat, with slack for the rounding of grid ratios
    const mpq_class x = res.grid_point.value();
    const mpq_class c0 = 1 / (1 - 1 / (8 * in.alpha_star.value()));
    if (!res.exact_hit) {
      CHECK(x <= zeta);
      CHECK(zeta <= c0 * x * (1 + mpq_class(1, 1 << 20)));
    }
    fallbacks += res.bisection_fallback ? 1 : 0;
  }
  CHECK(fallbacks == 0);
}

TEST_CASE("HYBRID on the float backend") {
  for (unsigned long D : {1024ul, 65536ul, 1048576ul}) {
    HybridResult<AdaptiveFloat> res = with_escalation([&] {
      HybridInput<AdaptiveFloat> in;
      in.phi = convert<AdaptiveFloat>(parse_poly("-2,0;1," + std::to_string(D)));
      in.eps = AdaptiveFloat::from_rational(ten_pow(-12));
      in.R = AdaptiveFloat(2);
      in.alpha_star = AdaptiveFloat::from_rational(mpq_class(D - 1, 2));
      OpCounter ctr;
      return hybrid_solve_diag(in, ctr);
    });
    CHECK(absq(to_rational(res.global) - rootn(2, D)) < ten_pow(-12));
  }
}

TEST_CASE("is_approximate_root examples") {
  Poly f = parse_poly("-2,0;1,2");
  Rational zeta(rootn(2, 2));
  CHECK(is_approximate_root(f, Rational(mpq_class(3, 2)), zeta, 5));
  CHECK_FALSE(is_approximate_root(f, Rational(100), zeta, 5));
  Poly lin = parse_poly("-1,0;1,1");
  CHECK(is_approximate_root(lin, Rational(37), Rational(1), 5));
  CHECK(is_approximate_root(lin, Rational(-5), Rational(1), 5));
  CHECK_THROWS_AS(is_approximate_root(f, Rational(0), zeta, 3), Error);
}

TEST_CASE("alpha_bound values") {
  CHECK(alpha_bound(100, 2).value == mpq_class(99, 2));
  CHECK(alpha_bound(100, 3).value == 4851);
  CHECK(alpha_bound(2, 3).value == mpq_class(1, 2));
  auto a4 = alpha_bound(100, 4);
  CHECK_FALSE(a4.verified);
  CHECK(a4.value == 4851);
  CHECK(alpha_bound(100, 4, mpq_class(7)).value == 7);
  CHECK_THROWS_AS(alpha_bound(100, 4, std::nullopt, true), Error);
  CHECK_THROWS_AS(alpha_bound(1, 3), Error);
}

TEST_CASE("gamma of binomials") {
  Poly f = parse_poly("-2,0;1,2");
  AdaptiveFloat g = gamma(f, 3, 10);
  CHECK(to_double(g) * 3 == doctest::Approx(0.5).epsilon(1e-30));
  Poly f10 = parse_poly("-7,0;1,10");
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    mpq_class x(1 + static_cast<long>(rng() % 1000), 1 + rng() % 100);
    double xg = to_double(AdaptiveFloat::from_rational(x) * gamma(f10, x, 10));
    CHECK(xg == doctest::Approx(4.5).epsilon(1e-14));
  }
  CHECK_THROWS_AS(gamma(f, 0, 5), Error);
}

TEST_CASE("gamma matches the defining formula") {
  Poly f = parse_poly("1,0;-3,3;1,5");
  const Rational x(2);
  const double d1 = to_double(eval(derivative(f), x));
  double best = 0;
  double fact = 1;
  for (unsigned k = 2; k <= 5; ++k) {
    fact *= k;
    double dk = to_double(eval(derivative(f, k), x));
    best = std::max(best, std::pow(std::fabs(dk / (fact * d1)), 1.0 / (k - 1)));
  }
  CHECK(to_double(gamma(f, 2, 100)) == doctest::Approx(best).epsilon(1e-13));
  // k_max truncates the supremum
  CHECK(to_double(gamma(f, 2, 2)) == doctest::Approx(std::fabs(to_double(eval(derivative(f, 2), x)) / (2 * d1))));
}

TEST_CASE("gamma of a positive combination stays under the larger bound") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 40; ++i) {
    std::uint64_t a = 2 + rng() % 60, b = 2 + rng() % 60;
    if (a == b) continue;
    Poly f = Poly::from_terms({{Rational(-5), 0},
                               {Rational(1 + static_cast<long>(rng() % 9)), a},
                               {Rational(1 + static_cast<long>(rng() % 9)), b}});
    mpq_class x(1 + static_cast<long>(rng() % 300), 100);
    mpq_class bound(std::max(a, b) - 1, 2);
    mpq_class xg = x * to_rational(gamma(f, x, 200));
    CHECK(xg <= bound * (1 + mpq_class(1, 1000000000)));
  }
}

TEST_CASE("HYBRID through a negated view") {
  // -(3 - x^4) is increasing and convex on (0, 2)
  HybridInput<Rational> in;
  in.phi = parse_poly("3,0;-1,4");
  in.sign = -1;
  in.eps = Rational(ten_pow(-11));
  in.R = Rational(2);
  in.alpha_star = Rational(mpq_class(3, 2));
  OpCounter ctr;
  auto res = hybrid_solve_diag(in, ctr);
  CHECK(absq(res.global.value() - rootn(3, 4)) < ten_pow(-11));
  CHECK_FALSE(res.bisection_fallback);
}
