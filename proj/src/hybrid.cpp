#include "fewnomial/hybrid.hpp"

namespace fewnomial {

AlphaBound alpha_bound(std::uint64_t D, std::uint64_t m, const std::optional<mpq_class>& override,
                       bool strict) {
  if (D < 2 || m < 2) fail(ErrorCode::InvalidRequest, "alpha_bound needs D >= 2 and m >= 2");
  const mpq_class binomial = mpq_class(mpz_class(D - 1), mpz_class(2));
  if (m == 2) return {binomial, true};
  mpz_class t = mpz_class(D - 1) * mpz_class(D - 2);
  mpq_class trinomial(t, mpz_class(2));
  trinomial.canonicalize();
  if (trinomial < binomial) trinomial = binomial;
  if (m == 3) return {trinomial, true};
  if (override) {
    if (sgn(*override) <= 0) fail(ErrorCode::InvalidRequest, "alpha override must be positive");
    return {*override, false};
  }
  if (strict) fail(ErrorCode::AlphaUnknown, "no known alpha bound for four or more terms");
  return {trinomial, false};
}

namespace {

mpq_class pow_q(const mpq_class& x, unsigned long e) {
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), x.get_num_mpz_t(), e);
  mpz_pow_ui(d.get_mpz_t(), x.get_den_mpz_t(), e);
  mpq_class r(n, d);
  r.canonicalize();
  return r;
}

// f^(k)(x) / k! = sum c C(a, k) x^(a-k)
mpq_class taylor_coeff(const Poly& f, const mpq_class& x, std::uint64_t k) {
  mpq_class acc = 0;
  for (const auto& t : f.terms()) {
    if (t.exp < k) continue;
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), t.exp, k);
    acc += t.coeff.value() * mpq_class(b) * pow_q(x, t.exp - k);
  }
  return acc;
}

}  // namespace

AdaptiveFloat gamma(const Poly& f, const mpq_class& x, std::uint64_t k_max) {
  if (k_max < 2) fail(ErrorCode::InvalidRequest, "gamma needs k_max >= 2");
  const mpq_class d1 = taylor_coeff(f, x, 1);
  if (sgn(d1) == 0) fail(ErrorCode::SingularPoint, "f' vanishes at the gamma point");
  const std::uint64_t top = std::min<std::uint64_t>(k_max, f.degree());
  mpfr_t lo, hi;
  mpfr_init2(lo, FloatContext::precision());
  mpfr_init2(hi, FloatContext::precision());
  mpfr_set_zero(lo, 1);
  mpfr_set_zero(hi, 1);
  for (std::uint64_t k = 2; k <= top; ++k) {
    mpq_class r = abs(taylor_coeff(f, x, k) / d1);
    if (sgn(r) == 0) continue;
    AdaptiveFloat v = root_enclosure(AdaptiveFloat::from_rational(r), k - 1);
    mpfr_max(lo, lo, v.lo(), MPFR_RNDD);
    mpfr_max(hi, hi, v.hi(), MPFR_RNDU);
  }
  AdaptiveFloat out = AdaptiveFloat::from_bounds(lo, hi);
  mpfr_clear(lo);
  mpfr_clear(hi);
  return out;
}

}  // namespace fewnomial
