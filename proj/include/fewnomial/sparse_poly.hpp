#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "fewnomial/errors.hpp"
#include "fewnomial/op_counter.hpp"
#include "fewnomial/scalar.hpp"

namespace fewnomial {

template <class S>
struct Term {
  S coeff;
  std::uint64_t exp = 0;
};

// f = c_1 x^{a_1} + ... + c_m x^{a_m}, nonzero coefficients, a_1 < ... < a_m.
// The empty term list is the zero polynomial.
template <class S>
class SparsePoly {
 public:
  using scalar_type = S;

  SparsePoly() = default;

  // Sorts by exponent, merges equal exponents and drops zero coefficients.
  static SparsePoly from_terms(std::vector<Term<S>> terms) {
    std::stable_sort(terms.begin(), terms.end(),
                     [](const Term<S>& a, const Term<S>& b) { return a.exp < b.exp; });
    SparsePoly p;
    for (auto& t : terms) {
      if (!p.terms_.empty() && p.terms_.back().exp == t.exp) {
        p.terms_.back().coeff += t.coeff;
      } else {
        p.terms_.push_back(std::move(t));
      }
    }
    std::erase_if(p.terms_, [](const Term<S>& t) { return sign(t.coeff) == 0; });
    return p;
  }

  // Caller guarantees the invariants (used by operations that preserve them).
  static SparsePoly from_canonical(std::vector<Term<S>> terms) {
    SparsePoly p;
    p.terms_ = std::move(terms);
    return p;
  }

  static SparsePoly monomial(S c, std::uint64_t e) {
    std::vector<Term<S>> t;
    t.push_back({std::move(c), e});
    return from_terms(std::move(t));
  }

  const std::vector<Term<S>>& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  std::uint64_t degree() const { return terms_.empty() ? 0 : terms_.back().exp; }
  std::uint64_t min_exp() const { return terms_.empty() ? 0 : terms_.front().exp; }
  const S& coeff(std::size_t i) const { return terms_[i].coeff; }
  std::uint64_t exp(std::size_t i) const { return terms_[i].exp; }
  const S& leading() const { return terms_.back().coeff; }

 private:
  std::vector<Term<S>> terms_;
};

using Poly = SparsePoly<Rational>;

template <class T, class S>
SparsePoly<T> convert(const SparsePoly<S>& f) {
  std::vector<Term<T>> out;
  out.reserve(f.term_count());
  for (const auto& t : f.terms()) out.push_back({T::from_rational(to_rational(t.coeff)), t.exp});
  return SparsePoly<T>::from_canonical(std::move(out));
}

template <class S>
SparsePoly<S> scale(const SparsePoly<S>& f, const S& c) {
  if (sign(c) == 0) return {};
  std::vector<Term<S>> out;
  out.reserve(f.term_count());
  for (const auto& t : f.terms()) out.push_back({t.coeff * c, t.exp});
  return SparsePoly<S>::from_canonical(std::move(out));
}

template <class S>
SparsePoly<S> negate(const SparsePoly<S>& f) {
  std::vector<Term<S>> out;
  out.reserve(f.term_count());
  for (const auto& t : f.terms()) out.push_back({-t.coeff, t.exp});
  return SparsePoly<S>::from_canonical(std::move(out));
}

// f(-x).
template <class S>
SparsePoly<S> reflect(const SparsePoly<S>& f) {
  std::vector<Term<S>> out;
  out.reserve(f.term_count());
  for (const auto& t : f.terms()) out.push_back({(t.exp & 1u) ? -t.coeff : t.coeff, t.exp});
  return SparsePoly<S>::from_canonical(std::move(out));
}

////////////////////////////////////////////////////////////////////////////////
// Evaluation by recursive squaring.  Squares x^{2^i} are computed once per
// point and shared by every term (and by every polynomial evaluated through
// the same cache).
////////////////////////////////////////////////////////////////////////////////

inline unsigned bit_length(std::uint64_t v) { return static_cast<unsigned>(std::bit_width(v)); }

inline unsigned ceil_log2(std::uint64_t v) {
  return v <= 1 ? 0 : static_cast<unsigned>(std::bit_width(v - 1));
}

template <class S>
class PowerCache {
 public:
  explicit PowerCache(S x) { squares_.push_back(std::move(x)); }

  const S& base() const { return squares_.front(); }

  // x^{2^i}
  const S& square(unsigned i, OpCounter& ctr) {
    while (squares_.size() <= i) {
      const S& last = squares_.back();
      S next = last * last;
      ++ctr.mul;
      squares_.push_back(std::move(next));
    }
    return squares_[i];
  }

  // c * x^e; charges popcount(e) multiplications plus any new squarings.
  S scaled_power(const S& c, std::uint64_t e, OpCounter& ctr) {
    S t = c;
    for (unsigned b = 0; e != 0; ++b, e >>= 1) {
      if (e & 1u) {
        t *= square(b, ctr);
        ++ctr.mul;
      }
    }
    return t;
  }

 private:
  std::vector<S> squares_;
};

// m(2 ceil(log2(D+1)) + 1) + m - 1; ceil(log2(D+1)) is the bit length of D.
inline std::uint64_t eval_mul_bound(std::size_t m, std::uint64_t D) {
  const std::uint64_t lg = bit_length(D);
  return m * (2 * lg + 1) + (m == 0 ? 0 : m - 1);
}

template <class S>
S eval(const SparsePoly<S>& f, PowerCache<S>& cache, OpCounter& ctr) {
  if (f.is_zero()) return S(0);
  S acc;
  bool first = true;
  for (const auto& t : f.terms()) {
    S v = cache.scaled_power(t.coeff, t.exp, ctr);
    if (first) {
      acc = std::move(v);
      first = false;
    } else {
      acc += v;
      ++ctr.add;
    }
  }
  return acc;
}

template <class S>
S eval(const SparsePoly<S>& f, const S& x, OpCounter& ctr) {
  PowerCache<S> cache(x);
  const std::uint64_t before = ctr.mul;
  S v = eval(f, cache, ctr);
  if (ctr.mul - before > eval_mul_bound(f.term_count(), f.degree())) {
    fail(ErrorCode::InvariantViolation, "evaluation exceeded its multiplication budget");
  }
  return v;
}

template <class S>
S eval(const SparsePoly<S>& f, const S& x) {
  OpCounter scratch;
  return eval(f, x, scratch);
}

template <class S>
S power(const S& x, std::uint64_t e, OpCounter& ctr) {
  PowerCache<S> cache(x);
  return cache.scaled_power(S(1), e, ctr);
}

////////////////////////////////////////////////////////////////////////////////
// Derivatives and the sparsity-preserving operators.
////////////////////////////////////////////////////////////////////////////////

template <class S>
SparsePoly<S> derivative(const SparsePoly<S>& f) {
  std::vector<Term<S>> out;
  out.reserve(f.term_count());
  for (const auto& t : f.terms()) {
    if (t.exp == 0) continue;
    out.push_back({t.coeff * S::from_uint64(t.exp), t.exp - 1});
  }
  return SparsePoly<S>::from_canonical(std::move(out));
}

// k-th derivative, coefficients via falling factorials (a)_k.
template <class S>
SparsePoly<S> derivative(const SparsePoly<S>& f, std::uint64_t k) {
  std::vector<Term<S>> out;
  for (const auto& t : f.terms()) {
    if (t.exp < k) continue;
    S c = t.coeff;
    for (std::uint64_t j = 0; j < k; ++j) c *= S::from_uint64(t.exp - j);
    out.push_back({std::move(c), t.exp - k});
  }
  return SparsePoly<S>::from_canonical(std::move(out));
}

template <class S>
SparsePoly<S> op_S(const SparsePoly<S>& f) {
  if (f.is_zero()) fail(ErrorCode::ZeroPolynomial, "S of the zero polynomial");
  const std::uint64_t d = f.min_exp();
  if (d == 0) return f;
  std::vector<Term<S>> out;
  out.reserve(f.term_count());
  for (const auto& t : f.terms()) out.push_back({t.coeff, t.exp - d});
  return SparsePoly<S>::from_canonical(std::move(out));
}

template <class S>
SparsePoly<S> op_L1(const SparsePoly<S>& f) {
  return derivative(op_S(f));
}

template <class S>
SparsePoly<S> op_L2(const SparsePoly<S>& f) {
  return derivative(derivative(op_S(f)));
}

// Number of sign alternations, zeros skipped.
inline std::uint64_t sign_alternations(const std::vector<int>& s) {
  std::uint64_t n = 0;
  int last = 0;
  for (int v : s) {
    if (v == 0) continue;
    if (last != 0 && v != last) ++n;
    last = v;
  }
  return n;
}

template <class S>
std::uint64_t descartes_bound(const SparsePoly<S>& f) {
  if (f.is_zero()) fail(ErrorCode::ZeroPolynomial, "Descartes bound of the zero polynomial");
  std::vector<int> s;
  s.reserve(f.term_count());
  for (const auto& t : f.terms()) s.push_back(sign(t.coeff));
  return sign_alternations(s);
}

// x^D f(1/x) for f with a constant term.
template <class S>
SparsePoly<S> reciprocal_transform(const SparsePoly<S>& f) {
  if (f.is_zero()) fail(ErrorCode::ZeroPolynomial, "reciprocal of the zero polynomial");
  if (f.min_exp() != 0) fail(ErrorCode::NeedsSFirst, "reciprocal transform needs a constant term");
  const std::uint64_t D = f.degree();
  std::vector<Term<S>> out;
  out.reserve(f.term_count());
  for (auto it = f.terms().rbegin(); it != f.terms().rend(); ++it) {
    out.push_back({it->coeff, D - it->exp});
  }
  return SparsePoly<S>::from_canonical(std::move(out));
}

// a3^a3 c3^a2 c1^(a3-a2) + (-1)^(a3-1) a2^a2 (a3-a2)^(a3-a2) c2^a3
// for f = c1 + c2 x^a2 + c3 x^a3 with gcd(a2, a3) = 1.
template <class S>
S trinomial_discriminant(const SparsePoly<S>& f, OpCounter& ctr) {
  if (f.term_count() != 3) fail(ErrorCode::WrongArity, "discriminant needs exactly three terms");
  if (f.min_exp() != 0) fail(ErrorCode::NeedsSFirst, "discriminant needs a constant term");
  const std::uint64_t a2 = f.exp(1);
  const std::uint64_t a3 = f.exp(2);
  if (std::gcd(a2, a3) != 1) {
    fail(ErrorCode::NotPrimitive, "exponents " + std::to_string(a2) + " and " +
                                      std::to_string(a3) + " share a factor");
  }
  const S& c1 = f.coeff(0);
  const S& c2 = f.coeff(1);
  const S& c3 = f.coeff(2);
  S first = power(S::from_uint64(a3), a3, ctr) * power(c3, a2, ctr) * power(c1, a3 - a2, ctr);
  S second = power(S::from_uint64(a2), a2, ctr) * power(S::from_uint64(a3 - a2), a3 - a2, ctr) *
             power(c2, a3, ctr);
  ctr.mul += 4;
  ctr.add += 1;
  return (a3 - 1) % 2 == 0 ? first + second : first - second;
}

template <class S>
S trinomial_discriminant(const SparsePoly<S>& f) {
  OpCounter scratch;
  return trinomial_discriminant(f, scratch);
}

template <class S>
bool operator==(const SparsePoly<S>& a, const SparsePoly<S>& b) {
  if (a.term_count() != b.term_count()) return false;
  for (std::size_t i = 0; i < a.term_count(); ++i) {
    if (a.exp(i) != b.exp(i) || compare(a.coeff(i), b.coeff(i)) != 0) return false;
  }
  return true;
}

// Text form "coeff,exp;coeff,exp".  Coefficients are integers, p/q or
// decimals; exponents are decimal non-negative integers.
Poly parse_poly(const std::string& text);
std::string format_poly(const Poly& f);

}  // namespace fewnomial
