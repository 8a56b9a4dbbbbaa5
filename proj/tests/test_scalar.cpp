#include <doctest.h>

#include "fewnomial/scalar.hpp"

using namespace fewnomial;

TEST_CASE("parse_rational accepts integers, fractions and decimals") {
  CHECK(parse_rational("42") == mpq_class(42));
  CHECK(parse_rational("-3/6") == mpq_class(-1, 2));
  CHECK(parse_rational("1.25") == mpq_class(5, 4));
  CHECK(parse_rational("1e-3") == mpq_class(1, 1000));
  CHECK(parse_rational("-2.5E2") == mpq_class(-250));
  CHECK(parse_rational(" +7 ") == mpq_class(7));
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK_THROWS_AS(parse_rational("abc"), Error);
  CHECK_THROWS_AS(parse_rational("1.2.3"), Error);
  CHECK_THROWS_AS(parse_rational(""), Error);
}

TEST_CASE("to_decimal rounds exactly") {
  CHECK(to_decimal(mpq_class(1, 3), 4) == "0.3333");
  CHECK(to_decimal(mpq_class(2, 3), 4) == "0.6667");
  CHECK(to_decimal(mpq_class(-1, 8), 2) == "-0.13");
  CHECK(to_decimal(mpq_class(-1, 1000), 2) == "0.00");
  CHECK(to_decimal(mpq_class(5), 0) == "5");
  CHECK(to_decimal(mpq_class(123, 100), 3) == "1.230");
}

TEST_CASE("Rational tidy keeps the requested significant bits") {
  Rational x(mpq_class(1, 3));
  Rational t = tidy(x, 20);
  CHECK(t.value().get_den() <= mpz_class(1) << 22);
  mpq_class err = t.value() - x.value();
  CHECK(abs(err) <= mpq_class(1, 1 << 20));
  Rational big(mpq_class(1000001, 3));
  CHECK(abs(tidy(big, 40).value() - big.value()) <= mpq_class(1000001, 1l << 40));
  CHECK(tidy(Rational(7), 2).value() == 7);
}

TEST_CASE("Rational sqrt_approx") {
  Rational s = sqrt_approx(Rational(2), 40);
  mpq_class d = s.value() * s.value() - 2;
  CHECK(abs(d) < mpq_class(1, 1l << 36));
  CHECK(sign(sqrt_approx(Rational(0), 10)) == 0);
  Rational tiny(mpq_class(1, 1000000));
  CHECK(abs(sqrt_approx(tiny, 30).value() - mpq_class(1, 1000)) < mpq_class(1, 1l << 30));
}

TEST_CASE("AdaptiveFloat encloses exact values") {
  PrecisionScope scope(64);
  AdaptiveFloat third = AdaptiveFloat::from_rational(mpq_class(1, 3));
  CHECK(sign(third) == 1);
  AdaptiveFloat sum = third + third + third - AdaptiveFloat(1);
  // the enclosure of 0 straddles zero
  CHECK_THROWS_AS(sign(sum), IndeterminateSign);
  AdaptiveFloat exact = AdaptiveFloat(3) * AdaptiveFloat(-2);
  CHECK(sign(exact) == -1);
  CHECK(exact.is_point());
  CHECK(to_double(exact) == -6.0);
  CHECK(sign(AdaptiveFloat(0)) == 0);
}

TEST_CASE("AdaptiveFloat interval products and quotients") {
  PrecisionScope scope(80);
  AdaptiveFloat a = AdaptiveFloat::from_rational(mpq_class(-1, 3));
  AdaptiveFloat b = AdaptiveFloat::from_rational(mpq_class(2, 7));
  AdaptiveFloat p = a * b;
  CHECK(mpfr_cmp_d(p.lo(), -2.0 / 21) <= 0);
  CHECK(mpfr_cmp_d(p.hi(), -2.0 / 21 + 1e-15) <= 0);
  CHECK(sign(p) == -1);
  AdaptiveFloat q = b / a;
  CHECK(to_double(q) == doctest::Approx(-6.0 / 7));
  AdaptiveFloat z = a + AdaptiveFloat::from_rational(mpq_class(1, 3));
  CHECK_THROWS_AS(b / z, IndeterminateSign);
}

TEST_CASE("with_escalation doubles precision until signs are decided") {
  FloatContext::set_cap(4096);
  // 1 + 2^-200 - 1 needs more than 128 bits
  mpq_class tiny(1);
  mpq_div_2exp(tiny.get_mpq_t(), tiny.get_mpq_t(), 200);
  unsigned used = 0;
  int s = with_escalation([&] {
    used = FloatContext::precision();
    AdaptiveFloat x = AdaptiveFloat::from_rational(1 + tiny) - AdaptiveFloat(1);
    return sign(x);
  });
  CHECK(s == 1);
  CHECK(used >= 200);
  CHECK_THROWS_WITH_AS(with_escalation([&] {
                         AdaptiveFloat third = AdaptiveFloat::from_rational(mpq_class(1, 3));
                         return sign(third * AdaptiveFloat(3) - AdaptiveFloat(1));
                       }),
                       doctest::Contains("sign undecided"), Error);
  FloatContext::set_cap(FloatContext::kDefaultCapBits);
}

TEST_CASE("AdaptiveFloat overflow reports PrecisionExhausted") {
  PrecisionScope scope(64);
  AdaptiveFloat x(2);
  bool thrown = false;
  try {
    for (int i = 0; i < 80; ++i) x = x * x;
  } catch (const Error& e) {
    thrown = e.code() == ErrorCode::PrecisionExhausted;
  }
  CHECK(thrown);
}

TEST_CASE("to_rational of a point enclosure is exact") {
  PrecisionScope scope(64);
  AdaptiveFloat x = AdaptiveFloat::from_rational(mpq_class(3, 8));
  CHECK(to_rational(x) == mpq_class(3, 8));
  AdaptiveFloat r = root_enclosure(AdaptiveFloat(8), 3);
  CHECK(to_double(r) == doctest::Approx(2.0));
}
