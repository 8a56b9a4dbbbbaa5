#pragma once

#include <atomic>
#include <cstdint>
#include <vector>

#include "fewnomial/interval.hpp"
#include "fewnomial/op_counter.hpp"
#include "fewnomial/sparse_poly.hpp"

namespace fewnomial {

enum class Backend { Exact, Float };

inline std::uint64_t chain_length_bound(std::uint64_t D) { return 3ull * ceil_log2(D) + 2; }

// Process-wide tally of every compressed chain built, for audit reports.
struct ChainAudit {
  std::atomic<std::uint64_t> built{0};
  std::atomic<std::uint64_t> length_violations{0};
  std::atomic<std::uint64_t> halving_violations{0};
  std::atomic<std::uint64_t> arity_violations{0};

  static ChainAudit& global() {
    static ChainAudit audit;
    return audit;
  }
};

// Exponent gap of a binomial, 0 for monomials and constants.  For a
// trinomial this is the full spread a_3 - a_1.
template <class S>
std::uint64_t exponent_gap(const SparsePoly<S>& p) {
  if (p.term_count() < 2) return 0;
  return p.degree() - p.min_exp();
}

// min{l_{i+2}, l_{i+3}} <= l_i / 2 for every i, with l_j = 0 past the end.
inline bool halving_holds(const std::vector<std::uint64_t>& ell) {
  auto at = [&](std::size_t j) -> std::uint64_t { return j < ell.size() ? ell[j] : 0; };
  for (std::size_t i = 0; i < ell.size(); ++i) {
    if (2 * std::min(at(i + 2), at(i + 3)) > ell[i]) return false;
  }
  return true;
}

template <class S>
struct SturmChain {
  std::vector<SparsePoly<S>> elems;
  std::uint64_t D = 0;

  std::size_t K() const { return elems.empty() ? 0 : elems.size() - 1; }
  std::vector<std::uint64_t> ell() const {
    std::vector<std::uint64_t> out;
    out.reserve(elems.size());
    for (const auto& p : elems) out.push_back(exponent_gap(p));
    return out;
  }
};

namespace detail {

// Remainder of P modulo B (one or two terms), by repeated substitution
// x^{A1} = r x^{A0} with r = -b0/b1.  Each term needs the least k with
// e - k(A1 - A0) < A1.
template <class S>
SparsePoly<S> reduce_mod(const SparsePoly<S>& P, const SparsePoly<S>& B, OpCounter& ctr) {
  const std::uint64_t A1 = B.degree();
  std::vector<Term<S>> out;
  if (B.term_count() == 1) {
    for (const auto& t : P.terms()) {
      if (t.exp < A1) out.push_back(t);
    }
    return SparsePoly<S>::from_canonical(std::move(out));
  }
  const std::uint64_t A0 = B.exp(0);
  const std::uint64_t g = A1 - A0;
  S r = -(B.coeff(0) / B.coeff(1));
  ++ctr.div;
  PowerCache<S> rp(r);
  for (const auto& t : P.terms()) {
    if (t.exp < A1) {
      out.push_back(t);
      continue;
    }
    const std::uint64_t k = (t.exp - A1) / g + 1;
    out.push_back({rp.scaled_power(t.coeff, k, ctr), t.exp - k * g});
  }
  ctr.add += out.size();
  ctr.cmp += out.size();
  return SparsePoly<S>::from_terms(std::move(out));
}

// Sign of p just right (side > 0) or just left (side < 0) of x.
template <class S>
int side_sign(const SparsePoly<S>& p, PowerCache<S>& cache, int side, OpCounter& ctr) {
  if (p.is_zero()) return 0;
  int s = sign(eval(p, cache, ctr));
  ++ctr.cmp;
  if (s != 0) return s;
  if (sign(cache.base()) == 0) {
    s = sign(p.coeff(0));
    return (side < 0 && (p.min_exp() & 1u)) ? -s : s;
  }
  SparsePoly<S> q = p;
  for (std::uint64_t k = 1;; ++k) {
    q = derivative(q);
    s = sign(eval(q, cache, ctr));
    ++ctr.cmp;
    if (s != 0) return (side < 0 && (k & 1u)) ? -s : s;
  }
}

template <class S>
void audit_chain(const SturmChain<S>& ch) {
  ChainAudit& audit = ChainAudit::global();
  audit.built.fetch_add(1, std::memory_order_relaxed);
  if (!halving_holds(ch.ell())) audit.halving_violations.fetch_add(1, std::memory_order_relaxed);
  for (std::size_t i = 1; i < ch.elems.size(); ++i) {
    if (ch.elems[i].term_count() > 2) {
      audit.arity_violations.fetch_add(1, std::memory_order_relaxed);
      break;
    }
  }
  if (ch.K() > chain_length_bound(ch.D)) {
    audit.length_violations.fetch_add(1, std::memory_order_relaxed);
    fail(ErrorCode::InvariantViolation, "compressed chain longer than its bound");
  }
}

// Chain for any p0 with at most three terms and a constant term.
template <class S>
SturmChain<S> build_chain(const SparsePoly<S>& p0, OpCounter& ctr) {
  SturmChain<S> ch;
  ch.D = p0.degree();
  ch.elems.push_back(p0);
  SparsePoly<S> p1 = derivative(p0);
  ctr.mul += p1.term_count();
  if (p1.is_zero()) {
    audit_chain(ch);
    return ch;
  }
  ch.elems.push_back(std::move(p1));
  while (ch.elems.back().degree() > 0) {
    const std::size_t n = ch.elems.size();
    SparsePoly<S> rem = reduce_mod(ch.elems[n - 2], ch.elems[n - 1], ctr);
    if (rem.is_zero()) break;
    // -rem scaled by 1/|lc|, a positive factor
    S lc = rem.leading();
    S f = sign(lc) > 0 ? -(S(1) / lc) : S(1) / lc;
    ++ctr.div;
    ++ctr.cmp;
    ctr.mul += rem.term_count();
    ch.elems.push_back(scale(rem, f));
  }
  audit_chain(ch);
  return ch;
}

}  // namespace detail

// Compressed Sturm chain of a trinomial with a constant term.
template <class S>
SturmChain<S> build_trinomial_chain(const SparsePoly<S>& f, OpCounter& ctr) {
  if (f.term_count() != 3) fail(ErrorCode::WrongArity, "compressed chain needs exactly three terms");
  if (f.min_exp() != 0) fail(ErrorCode::NeedsSFirst, "compressed chain needs a constant term");
  return detail::build_chain(f, ctr);
}

template <class S>
SturmChain<S> build_trinomial_chain(const SparsePoly<S>& f) {
  OpCounter scratch;
  return build_trinomial_chain(f, scratch);
}

template <class S>
std::vector<int> chain_sign_sequence(const SturmChain<S>& ch, PowerCache<S>& cache, OpCounter& ctr) {
  std::vector<int> s;
  s.reserve(ch.elems.size());
  for (const auto& p : ch.elems) {
    s.push_back(sign(eval(p, cache, ctr)));
    ++ctr.cmp;
  }
  return s;
}

template <class S>
std::vector<int> chain_sign_sequence(const SturmChain<S>& ch, const S& x, OpCounter& ctr) {
  PowerCache<S> cache(x);
  return chain_sign_sequence(ch, cache, ctr);
}

// Distinct-root counter for polynomials with at most three terms after S.
// The chain of S(f) is built once and shared by every query.
template <class S>
class TrinomialCounter {
 public:
  TrinomialCounter(const SparsePoly<S>& f, OpCounter& ctr) {
    g_ = op_S(f);
    delta_ = f.min_exp();
    if (g_.term_count() > 3) fail(ErrorCode::WrongArity, "compressed counting needs at most three terms");
    chain_ = detail::build_chain(g_, ctr);
  }

  const SturmChain<S>& chain() const { return chain_; }
  const SparsePoly<S>& reduced() const { return g_; }
  std::uint64_t delta() const { return delta_; }

  std::uint64_t count(const S& a, bool a_open, const S& b, bool b_open, OpCounter& ctr) const {
    const int ab = compare(a, b);
    ++ctr.cmp;
    if (ab > 0) fail(ErrorCode::InvalidRequest, "interval with a > b");
    if (ab == 0) return (!a_open && !b_open && is_root(a, ctr)) ? 1 : 0;
    return count_ordered(a, a_open, b, b_open, ctr);
  }

  // count() for a caller that has already established a < b, e.g. on the
  // rational endpoints before they were widened to enclosures.
  std::uint64_t count_ordered(const S& a, bool a_open, const S& b, bool b_open, OpCounter& ctr) const {
    PowerCache<S> ca(a), cb(b);
    std::uint64_t n = open_count(ca, cb, ctr);
    if (delta_ > 0 && sign(a) < 0 && sign(b) > 0) ++n;
    if (!a_open && is_root(a, ctr)) ++n;
    if (!b_open && is_root(b, ctr)) ++n;
    return n;
  }

  bool is_root(const S& x, OpCounter& ctr) const {
    if (delta_ > 0 && sign(x) == 0) return true;
    ++ctr.cmp;
    return sign(eval(g_, x, ctr)) == 0;
  }

 private:
  // V(a+) - V(b-) for S(f), which has no root at 0.
  std::uint64_t open_count(PowerCache<S>& ca, PowerCache<S>& cb, OpCounter& ctr) const {
    std::vector<int> sa, sb;
    sa.reserve(chain_.elems.size());
    sb.reserve(chain_.elems.size());
    for (const auto& p : chain_.elems) {
      sa.push_back(detail::side_sign(p, ca, +1, ctr));
      sb.push_back(detail::side_sign(p, cb, -1, ctr));
    }
    const std::uint64_t va = sign_alternations(sa);
    const std::uint64_t vb = sign_alternations(sb);
    if (vb > va) fail(ErrorCode::InvariantViolation, "negative Sturm count");
    return va - vb;
  }

  SparsePoly<S> g_;
  std::uint64_t delta_ = 0;
  SturmChain<S> chain_;
};

// Exact number of distinct real roots of f in q.  At most three terms after
// S uses the compressed chain; more terms fall back to the dense oracle,
// which needs the exact backend.
std::uint64_t count_roots(const Poly& f, const CountQuery& q, OpCounter& ctr,
                          Backend backend = Backend::Exact);
std::uint64_t count_roots(const Poly& f, const CountQuery& q);

struct ChainStatRow {
  std::uint64_t D = 0;
  std::uint64_t trial = 0;
  std::uint64_t K = 0;
  std::uint64_t bound = 0;
  bool halving = false;
  bool ok = false;
  bool exact_fallback = false;
  std::string poly;
};

// Random trinomials per degree (see random_trinomial); records K and checks
// the length bound and the gap-halving inequality on every chain.
std::vector<ChainStatRow> chain_length_stats(const std::vector<std::uint64_t>& degrees,
                                             std::uint64_t trials, std::uint64_t seed,
                                             Backend backend = Backend::Float);

// Random trinomial c1 + c2 x^a2 + c3 x^D with coefficients in
// {-10..10} \ {0} and 0 < a2 < D.
template <class Rng>
Poly random_trinomial(Rng& rng, std::uint64_t D) {
  auto coeff = [&]() {
    long c = static_cast<long>(rng() % 20) - 10;
    return c >= 0 ? c + 1 : c;
  };
  std::uint64_t a2 = 1 + rng() % (D - 1);
  std::vector<Term<Rational>> t;
  t.push_back({Rational(coeff()), 0});
  t.push_back({Rational(coeff()), a2});
  t.push_back({Rational(coeff()), D});
  return Poly::from_canonical(std::move(t));
}

}  // namespace fewnomial
