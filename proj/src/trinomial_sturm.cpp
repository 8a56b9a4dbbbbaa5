#include "fewnomial/trinomial_sturm.hpp"

#include <random>

#include "fewnomial/oracle.hpp"

namespace fewnomial {

namespace {

template <class S>
std::uint64_t count_with(const Poly& f, const CountQuery& q, OpCounter& ctr) {
  SparsePoly<S> fs = convert<S>(f);
  TrinomialCounter<S> counter(fs, ctr);
  // order the endpoints exactly; enclosures of equal rationals overlap
  ++ctr.cmp;
  if (q.a == q.b) return (!q.a_open && !q.b_open && counter.is_root(S::from_rational(q.a), ctr)) ? 1 : 0;
  return counter.count_ordered(S::from_rational(q.a), q.a_open, S::from_rational(q.b), q.b_open, ctr);
}

}  // namespace

std::uint64_t count_roots(const Poly& f, const CountQuery& q, OpCounter& ctr, Backend backend) {
  if (f.is_zero()) fail(ErrorCode::ZeroPolynomial, "root count of the zero polynomial");
  if (q.a > q.b) fail(ErrorCode::InvalidRequest, "interval with a > b");
  if (f.term_count() > 3) {
    if (backend != Backend::Exact) {
      fail(ErrorCode::InvalidRequest, "more than three terms needs the exact backend");
    }
    DenseSturm st(expand(f));
    // Horner cost per chain element at each endpoint.
    ctr.mul += 2 * st.chain_length() * (f.degree() + 1);
    ctr.add += 2 * st.chain_length() * f.degree();
    ctr.cmp += 2 * st.chain_length();
    return st.count(q);
  }
  if (backend == Backend::Exact) return count_with<Rational>(f, q, ctr);
  const OpCounter start = ctr;
  return with_escalation([&] {
    ctr = start;
    return count_with<AdaptiveFloat>(f, q, ctr);
  });
}

std::uint64_t count_roots(const Poly& f, const CountQuery& q) {
  OpCounter scratch;
  return count_roots(f, q, scratch);
}

std::vector<ChainStatRow> chain_length_stats(const std::vector<std::uint64_t>& degrees,
                                             std::uint64_t trials, std::uint64_t seed,
                                             Backend backend) {
  std::vector<ChainStatRow> rows;
  std::mt19937_64 rng(seed);
  for (std::uint64_t D : degrees) {
    if (D < 2) fail(ErrorCode::InvalidRequest, "chain statistics need D >= 2");
    for (std::uint64_t t = 0; t < trials; ++t) {
      Poly f = random_trinomial(rng, D);
      ChainStatRow row;
      row.D = D;
      row.trial = t;
      row.bound = chain_length_bound(D);
      row.poly = format_poly(f);
      std::vector<std::uint64_t> ell;
      auto exact = [&] {
        SturmChain<Rational> ch = build_trinomial_chain(f);
        row.K = ch.K();
        ell = ch.ell();
      };
      if (backend == Backend::Exact) {
        exact();
      } else {
        try {
          with_escalation([&] {
            SturmChain<AdaptiveFloat> ch = build_trinomial_chain(convert<AdaptiveFloat>(f));
            row.K = ch.K();
            ell = ch.ell();
            return 0;
          });
        } catch (const Error& e) {
          // an exactly vanishing remainder (f and f' share a factor) never
          // separates from zero in interval arithmetic
          if (e.code() != ErrorCode::PrecisionExhausted) throw;
          exact();
          row.exact_fallback = true;
        }
      }
      row.halving = halving_holds(ell);
      row.ok = row.K <= row.bound && row.halving;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace fewnomial
