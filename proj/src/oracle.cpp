#include "fewnomial/oracle.hpp"

#include <algorithm>
#include <functional>

namespace fewnomial {

namespace {

void trim(std::vector<mpq_class>& c) {
  while (!c.empty() && sgn(c.back()) == 0) c.pop_back();
}

// Integer coefficient vector, primitive, positive multiple of p.
std::vector<mpz_class> integer_form(const DensePoly& p) {
  std::vector<mpz_class> out;
  if (p.is_zero()) return out;
  mpz_class l = 1;
  for (const auto& c : p.coeffs()) {
    if (sgn(c) != 0) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den().get_mpz_t());
  }
  mpz_class g = 0;
  out.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) {
    mpz_class v = c.get_num() * (l / c.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    out.push_back(std::move(v));
  }
  if (g > 1) {
    for (auto& v : out) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
  }
  return out;
}

int integer_sign_at(const std::vector<mpz_class>& c, const mpq_class& x) {
  if (c.empty()) return 0;
  if (sgn(x) == 0) return sgn(c[0]);
  const mpz_class& n = x.get_num();
  const mpz_class& d = x.get_den();
  const std::size_t D = c.size() - 1;
  std::size_t nnz = 0;
  for (const auto& v : c) nnz += sgn(v) != 0;
  const std::size_t lg = static_cast<std::size_t>(mpz_sizeinbase(mpz_class(D + 1).get_mpz_t(), 2));
  mpz_class acc = 0;
  if (nnz * lg * 2 < D) {
    // sum c_i n^i d^(D-i) over nonzero terms
    mpz_class t, np, dp;
    for (std::size_t i = 0; i <= D; ++i) {
      if (sgn(c[i]) == 0) continue;
      mpz_pow_ui(np.get_mpz_t(), n.get_mpz_t(), i);
      mpz_pow_ui(dp.get_mpz_t(), d.get_mpz_t(), D - i);
      t = c[i] * np;
      t *= dp;
      acc += t;
    }
  } else {
    // homogeneous Horner
    mpz_class dp = 1;
    acc = c[D];
    for (std::size_t k = 1; k <= D; ++k) {
      acc *= n;
      dp *= d;
      const mpz_class& ci = c[D - k];
      if (sgn(ci) != 0) acc += ci * dp;
    }
  }
  return sgn(acc);
}

mpq_class abs_q(const mpq_class& q) { return sgn(q) < 0 ? mpq_class(-q) : q; }

}  // namespace

DensePoly::DensePoly(std::vector<mpq_class> coeffs) : c_(std::move(coeffs)) {
  for (auto& c : c_) c.canonicalize();
  trim(c_);
}

std::size_t DensePoly::nonzero_count() const {
  std::size_t n = 0;
  for (const auto& c : c_) n += sgn(c) != 0;
  return n;
}

bool operator==(const DensePoly& a, const DensePoly& b) { return a.coeffs() == b.coeffs(); }

DensePoly expand(const Poly& f) {
  if (f.is_zero()) return {};
  if (f.degree() > kDenseDegreeLimit) {
    fail(ErrorCode::DegreeTooLarge,
         "degree " + std::to_string(f.degree()) + " exceeds dense limit " +
             std::to_string(kDenseDegreeLimit));
  }
  std::vector<mpq_class> c(f.degree() + 1);
  for (const auto& t : f.terms()) c[t.exp] = t.coeff.value();
  return DensePoly(std::move(c));
}

Poly to_sparse(const DensePoly& p) {
  std::vector<Term<Rational>> terms;
  for (std::size_t i = 0; i < p.coeffs().size(); ++i) {
    if (sgn(p[i]) != 0) terms.push_back({Rational(p[i]), i});
  }
  return Poly::from_canonical(std::move(terms));
}

DensePoly dense_derivative(const DensePoly& p) {
  if (p.degree() <= 0) return {};
  std::vector<mpq_class> c(p.coeffs().size() - 1);
  for (std::size_t i = 1; i < p.coeffs().size(); ++i) c[i - 1] = p[i] * static_cast<unsigned long>(i);
  return DensePoly(std::move(c));
}

void dense_divmod(const DensePoly& a, const DensePoly& b, DensePoly& q, DensePoly& r) {
  if (b.is_zero()) fail(ErrorCode::InvalidRequest, "polynomial division by zero");
  if (a.degree() < b.degree()) {
    q = DensePoly();
    r = a;
    return;
  }
  const std::size_t db = static_cast<std::size_t>(b.degree());
  std::vector<std::size_t> support;
  for (std::size_t j = 0; j < db; ++j) {
    if (sgn(b[j]) != 0) support.push_back(j);
  }
  std::vector<mpq_class> rem = a.coeffs();
  std::vector<mpq_class> quo(rem.size() - db);
  mpq_class t;
  for (std::size_t i = rem.size(); i-- > db;) {
    if (sgn(rem[i]) == 0) continue;
    t = rem[i] / b.leading();
    for (std::size_t j : support) rem[i - db + j] -= t * b[j];
    rem[i] = 0;
    quo[i - db] = t;
  }
  rem.resize(db);
  q = DensePoly(std::move(quo));
  r = DensePoly(std::move(rem));
}

DensePoly dense_rem(const DensePoly& a, const DensePoly& b) {
  DensePoly q, r;
  dense_divmod(a, b, q, r);
  return r;
}

DensePoly primitive_part(const DensePoly& p) {
  std::vector<mpz_class> z = integer_form(p);
  std::vector<mpq_class> c(z.begin(), z.end());
  return DensePoly(std::move(c));
}

DensePoly dense_gcd(const DensePoly& a, const DensePoly& b) {
  DensePoly x = primitive_part(a), y = primitive_part(b);
  while (!y.is_zero()) {
    DensePoly r = primitive_part(dense_rem(x, y));
    x = std::move(y);
    y = std::move(r);
  }
  if (x.is_zero()) return x;
  std::vector<mpq_class> c = x.coeffs();
  mpq_class lc = c.back();
  for (auto& v : c) v /= lc;
  return DensePoly(std::move(c));
}

int dense_sign_at(const DensePoly& p, const mpq_class& x) { return integer_sign_at(integer_form(p), x); }

std::vector<DensePoly> dense_sturm_sequence(const DensePoly& p, bool normalize) {
  std::vector<DensePoly> seq;
  if (p.is_zero()) return seq;
  auto norm = [&](const DensePoly& q) { return normalize ? primitive_part(q) : q; };
  seq.push_back(norm(p));
  DensePoly d = dense_derivative(p);
  if (d.is_zero()) return seq;
  seq.push_back(norm(d));
  for (;;) {
    DensePoly r = dense_rem(seq[seq.size() - 2], seq.back());
    if (r.is_zero()) break;
    std::vector<mpq_class> neg = r.coeffs();
    for (auto& v : neg) v = -v;
    seq.push_back(norm(DensePoly(std::move(neg))));
  }
  return seq;
}

DenseSturm::DenseSturm(const DensePoly& p) {
  if (p.is_zero()) fail(ErrorCode::ZeroPolynomial, "root count of the zero polynomial");
  if (p.degree() > static_cast<long>(kDenseDegreeLimit)) {
    fail(ErrorCode::DegreeTooLarge, "degree exceeds dense limit");
  }
  std::vector<DensePoly> seq = dense_sturm_sequence(p, true);
  if (seq.back().degree() > 0) {
    DensePoly q, r;
    dense_divmod(p, seq.back(), q, r);
    if (!r.is_zero()) fail(ErrorCode::InvariantViolation, "gcd does not divide p");
    sqf_ = primitive_part(q);
    seq = dense_sturm_sequence(sqf_, true);
  } else {
    sqf_ = seq.front();
  }
  chain_ = std::move(seq);
}

std::uint64_t DenseSturm::variations(const mpq_class& x) const {
  std::vector<int> s;
  s.reserve(chain_.size());
  for (const auto& p : chain_) s.push_back(dense_sign_at(p, x));
  return sign_alternations(s);
}

std::uint64_t DenseSturm::count(const CountQuery& q) const {
  if (q.a > q.b) fail(ErrorCode::InvalidRequest, "interval with a > b");
  if (q.a == q.b) return (!q.a_open && !q.b_open && sign_at(q.a) == 0) ? 1 : 0;
  // For a squarefree chain V(a) - V(b) counts the roots in (a, b].
  std::uint64_t va = variations(q.a);
  std::uint64_t vb = variations(q.b);
  std::uint64_t n = va - vb;
  if (q.b_open && sign_at(q.b) == 0) --n;
  if (!q.a_open && sign_at(q.a) == 0) ++n;
  return n;
}

std::uint64_t dense_sturm_count(const DensePoly& p, const CountQuery& q) {
  return DenseSturm(p).count(q);
}

std::vector<std::pair<mpq_class, mpq_class>> IsolationResult::brackets() const {
  std::vector<std::pair<mpq_class, mpq_class>> out = intervals;
  for (const auto& r : exact_roots) out.emplace_back(r, r);
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  return out;
}

IsolationResult isolate_and_refine(const DensePoly& p, const CountQuery& range, const mpq_class& width) {
  if (sgn(width) <= 0) fail(ErrorCode::InvalidRequest, "isolation width must be positive");
  IsolationResult res;
  DenseSturm st(p);
  if (range.a > range.b) fail(ErrorCode::InvalidRequest, "interval with a > b");
  if (range.a == range.b) {
    if (!range.a_open && !range.b_open && st.sign_at(range.a) == 0) res.exact_roots.push_back(range.a);
    return res;
  }
  if (!range.a_open && st.sign_at(range.a) == 0) res.exact_roots.push_back(range.a);
  if (!range.b_open && st.sign_at(range.b) == 0) res.exact_roots.push_back(range.b);

  auto count_open = [&](const mpq_class& lo, const mpq_class& hi) {
    return st.count(CountQuery::open(lo, hi));
  };
  // Whether the single root of (lo, hi) lies in (lo, mid), given g(mid) != 0.
  auto root_left = [&](const mpq_class& lo, const mpq_class& mid, const mpq_class& hi, int sm) {
    int sl = st.sign_at(lo);
    if (sl != 0) return sl != sm;
    int sh = st.sign_at(hi);
    if (sh != 0) return sh == sm;
    return count_open(lo, mid) == 1;
  };

  std::vector<std::pair<mpq_class, mpq_class>> work;
  work.emplace_back(range.a, range.b);
  while (!work.empty()) {
    auto [lo, hi] = work.back();
    work.pop_back();
    std::uint64_t n = count_open(lo, hi);
    if (n == 0) continue;
    if (n == 1) {
      bool exact = false;
      while (hi - lo >= width) {
        mpq_class mid = (lo + hi) / 2;
        int sm = st.sign_at(mid);
        if (sm == 0) {
          res.exact_roots.push_back(mid);
          exact = true;
          break;
        }
        if (root_left(lo, mid, hi, sm)) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      if (!exact) res.intervals.emplace_back(lo, hi);
      continue;
    }
    mpq_class mid = (lo + hi) / 2;
    if (st.sign_at(mid) == 0) res.exact_roots.push_back(mid);
    work.emplace_back(mid, hi);
    work.emplace_back(lo, mid);
  }
  std::sort(res.intervals.begin(), res.intervals.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  std::sort(res.exact_roots.begin(), res.exact_roots.end());
  return res;
}

mpq_class cauchy_bound(const DensePoly& p) {
  if (p.degree() <= 0) return mpq_class(1);
  mpq_class m = 0;
  for (long i = 0; i < p.degree(); ++i) m = std::max(m, abs_q(p[i] / p.leading()));
  return m + 1;
}

bool bijective_eps_matching(const std::vector<mpq_class>& Z,
                            const std::vector<std::pair<mpq_class, mpq_class>>& brackets,
                            const mpq_class& eps) {
  if (Z.size() != brackets.size()) return false;
  const std::size_t n = Z.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (abs_q(Z[i] - brackets[j].first) <= eps && abs_q(Z[i] - brackets[j].second) <= eps) {
        adj[i].push_back(j);
      }
    }
  }
  // Kuhn's augmenting paths.
  std::vector<long> owner(n, -1);
  std::vector<char> seen;
  std::function<bool(std::size_t)> augment = [&](std::size_t i) {
    for (std::size_t j : adj[i]) {
      if (seen[j]) continue;
      seen[j] = 1;
      if (owner[j] < 0 || augment(static_cast<std::size_t>(owner[j]))) {
        owner[j] = static_cast<long>(i);
        return true;
      }
    }
    return false;
  };
  for (std::size_t i = 0; i < n; ++i) {
    seen.assign(n, 0);
    if (!augment(i)) return false;
  }
  return true;
}

BlowupRow tetranomial_blowup(std::uint64_t D) {
  if (D < 3) fail(ErrorCode::InvalidRequest, "blowup family needs D >= 3");
  std::vector<mpq_class> c(2 * D + 1);
  c[0] = 1;
  c[D] = 1;
  c[D + 1] = 1;
  c[2 * D] = 1;
  DensePoly p0(std::move(c));
  DensePoly p1 = dense_derivative(p0);
  DensePoly r = dense_rem(p0, p1);
  std::vector<mpq_class> neg = r.coeffs();
  for (auto& v : neg) v = -v;
  DensePoly p2(std::move(neg));
  DensePoly r3 = dense_rem(p1, p2);
  std::vector<mpq_class> neg3 = r3.coeffs();
  for (auto& v : neg3) v = -v;
  DensePoly p3(std::move(neg3));

  std::vector<mpq_class> expect(D + 2);
  expect[0] = -1;
  expect[D] = mpq_class(-1, 2);
  expect[D + 1] = -mpq_class(D - 1, 2 * D);
  BlowupRow row;
  row.D = D;
  row.p2_matches = p2 == DensePoly(std::move(expect));
  row.p3_degree = p3.degree();
  row.p3_terms = p3.nonzero_count();
  row.chain_length = dense_sturm_sequence(p0, true).size();
  return row;
}

}  // namespace fewnomial
