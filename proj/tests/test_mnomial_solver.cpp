#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "fewnomial/mnomial_solver.hpp"
#include "fewnomial/oracle.hpp"

using namespace fewnomial;

namespace {

mpq_class ten_pow(int e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(e));
  return mpq_class(mpz_class(1), p);
}

RootReport run(const Poly& f, const mpq_class& R, const mpq_class& eps, Backend b = Backend::Exact) {
  SolveRequest req;
  req.f = f;
  req.R = R;
  req.eps = eps;
  req.backend = b;
  return solve(req);
}

// Oracle brackets of the distinct roots of f in [0, R].
std::vector<std::pair<mpq_class, mpq_class>> oracle_roots(const Poly& f, const mpq_class& R) {
  return isolate_and_refine(expand(f), CountQuery::closed(0, R), mpq_class(1, 1) / (mpz_class(1) << 80))
      .brackets();
}

bool matches_oracle(const Poly& f, const mpq_class& R, const mpq_class& eps, const RootReport& rep) {
  return bijective_eps_matching(rep.values(), oracle_roots(f, R), eps);
}

Poly random_poly(std::mt19937_64& rng, std::size_t m, std::uint64_t D) {
  std::set<std::uint64_t> exps{0, D};
  while (exps.size() < m) exps.insert(1 + rng() % (D - 1));
  std::vector<Term<Rational>> t;
  for (std::uint64_t e : exps) {
    long c = static_cast<long>(rng() % 20) - 10;
    t.push_back({Rational(c >= 0 ? c + 1 : c), e});
  }
  return Poly::from_terms(std::move(t));
}

// f(R - x), expanded; small degrees only.
Poly shifted_reflection(const Poly& f, const mpq_class& R) {
  DensePoly p = expand(f);
  std::vector<mpq_class> out(static_cast<std::size_t>(p.degree() + 1), 0);
  for (long k = 0; k <= p.degree(); ++k) {
    for (long j = 0; j <= k; ++j) {
      mpz_class b;
      mpz_bin_uiui(b.get_mpz_t(), k, j);
      mpq_class Rp = 1;
      for (long i = 0; i < k - j; ++i) Rp *= R;
      mpq_class term = p[k] * mpq_class(b) * Rp;
      out[j] += (j % 2 ? mpq_class(-term) : term);
    }
  }
  std::vector<Term<Rational>> t;
  for (std::size_t j = 0; j < out.size(); ++j) t.push_back({Rational(out[j]), j});
  return Poly::from_terms(std::move(t));
}

}  // namespace

TEST_CASE("solve factored quadratics") {
  RootReport a = run(parse_poly("2,0;-3,1;1,2"), 10, ten_pow(9));
  REQUIRE(a.roots.size() == 2);
  CHECK(abs(Rational(a.roots[0].z - 1)).value() < ten_pow(9));
  CHECK(abs(Rational(a.roots[1].z - 2)).value() < ten_pow(9));
  RootReport b = run(parse_poly("1,0;-2,1;1,2"), 10, ten_pow(9));
  REQUIRE(b.roots.size() == 1);
  CHECK(b.roots[0].z == 1);
}

TEST_CASE("solve x^1000 - 1 on [0, 2]") {
  RootReport r = run(parse_poly("-1,0;1,1000"), 2, ten_pow(12));
  REQUIRE(r.roots.size() == 1);
  CHECK(abs(Rational(r.roots[0].z - 1)).value() < ten_pow(12));
}

TEST_CASE("solve 1 - 3x^37 + x^100") {
  Poly f = parse_poly("1,0;-3,37;1,100");
  RootReport r = run(f, 2, ten_pow(9));
  CHECK(r.roots.size() == oracle_roots(f, 2).size());
  CHECK(matches_oracle(f, 2, ten_pow(9), r));
  CHECK(residual_check(f, 2, ten_pow(9), r).ok);
}

TEST_CASE("solve trivia") {
  CHECK(run(Poly(), 1, ten_pow(3)).all_reals);
  CHECK(run(parse_poly("3,0"), 1, ten_pow(3)).roots.empty());
  RootReport mono = run(parse_poly("3,5"), 1, ten_pow(3));
  REQUIRE(mono.roots.size() == 1);
  CHECK(mono.roots[0].provenance == Provenance::ZeroRoot);
  RootReport lin = run(parse_poly("-1,2;2,3"), 1, ten_pow(3));
  REQUIRE(lin.roots.size() == 2);
  CHECK(lin.roots[0].z == 0);
  CHECK(lin.roots[1].z == mpq_class(1, 2));
  RootReport end = run(parse_poly("-1,0;1,4"), 1, ten_pow(3));
  REQUIRE(end.roots.size() == 1);
  CHECK(end.roots[0].provenance == Provenance::Endpoint);
  CHECK_THROWS_AS(run(parse_poly("1,0;1,1"), 1, 2), Error);
  CHECK_THROWS_AS(run(parse_poly("1,0;1,1"), -1, ten_pow(3)), Error);
}

TEST_CASE("solve with a linear second term goes through the reciprocal") {
  Poly f = parse_poly("1,0;-5,1;1,7");
  RootReport r = run(f, 3, ten_pow(10));
  CHECK(matches_oracle(f, 3, ten_pow(10), r));
  CHECK(residual_check(f, 3, ten_pow(10), r).ok);
}

TEST_CASE("solve random trinomials against the oracle") {
  std::mt19937_64 rng(2024);
  const mpq_class eps = ten_pow(9);
  for (int i = 0; i < 80; ++i) {
    const std::uint64_t D = 3 + rng() % 300;
    Poly f = random_poly(rng, 3, D);
    const mpq_class R = std::vector<long>{1, 2, 10}[rng() % 3];
    RootReport r = run(f, R, eps);
    INFO(format_poly(f) << " R=" << R.get_str());
    CHECK(matches_oracle(f, R, eps, r));
    CHECK(r.max_depth <= 2);
  }
}

TEST_CASE("solve random tetranomials and pentanomials against the oracle") {
  std::mt19937_64 rng(77);
  const mpq_class eps = ten_pow(8);
  for (int i = 0; i < 40; ++i) {
    const std::size_t m = 4 + rng() % 2;
    const std::uint64_t D = m + rng() % 40;
    Poly f = random_poly(rng, m, D);
    SolveRequest req;
    req.f = f;
    req.R = 2;
    req.eps = eps;
    RootReport r;
    try {
      r = solve(req);
    } catch (const Error& e) {
      REQUIRE(e.code() == ErrorCode::NotDampened);
      CHECK(check_dampened(f, 256).overall() == DampVerdict::NotDampened);
      continue;
    }
    INFO(format_poly(f));
    CHECK(matches_oracle(f, 2, eps, r));
    CHECK(r.max_depth <= m - 1);
  }
}

TEST_CASE("solve clustered roots") {
  // 10^6 (x - 1)(x - 1 - 10^-6)(x + 3)
  Poly f = parse_poly("3000003,0;-5000002,1;999999,2;1000000,3");
  RootReport r = run(f, 5, ten_pow(4));
  CHECK(r.roots.size() == 2);
  CHECK(matches_oracle(f, 5, ten_pow(4), r));
  CHECK(residual_check(f, 5, ten_pow(4), r).ok);
}

TEST_CASE("shift and reflect coherence") {
  std::mt19937_64 rng(99);
  const mpq_class eps = ten_pow(7);
  for (int i = 0; i < 25; ++i) {
    Poly f = random_poly(rng, 3, 3 + rng() % 8);
    const mpq_class R = 2;
    Poly g = shifted_reflection(f, R);
    RootReport a = run(f, R, eps);
    RootReport b = run(g, R, eps);
    std::vector<mpq_class> mirrored;
    for (const auto& e : b.roots) mirrored.push_back(R - e.z);
    std::vector<std::pair<mpq_class, mpq_class>> pts;
    for (const auto& e : a.roots) pts.push_back({e.z, e.z});
    INFO(format_poly(f));
    CHECK(bijective_eps_matching(mirrored, pts, 2 * eps));
  }
}

TEST_CASE("solve on the float backend agrees with exact") {
  std::mt19937_64 rng(5);
  const mpq_class eps = ten_pow(9);
  for (int i = 0; i < 20; ++i) {
    Poly f = random_poly(rng, 3, 3 + rng() % 500);
    RootReport a = run(f, 2, eps, Backend::Float);
    INFO(format_poly(f));
    CHECK(matches_oracle(f, 2, eps, a));
  }
  Poly big = parse_poly("1,0;-3,37111;1,1048576");
  RootReport r = run(big, 2, ten_pow(12), Backend::Float);
  CHECK(residual_check(big, 2, ten_pow(12), r).ok);
}

TEST_CASE("solve_closed_count examples") {
  OpCounter ctr;
  CHECK(solve_closed_count(parse_poly("2,0;-3,1;1,2"), CountQuery::closed(-5, 5), ctr) == 2);
  CHECK(solve_closed_count(parse_poly("-1,1;1,3"), CountQuery::closed(-2, 2), ctr) == 3);
  CHECK(solve_closed_count(parse_poly("-1,1;1,3"), CountQuery::open(-1, 1), ctr) == 1);
  CHECK(solve_closed_count(parse_poly("-1,1;1,3"), CountQuery::closed(-3, -1), ctr) == 1);
}

TEST_CASE("solve_closed_count random trinomials against the oracle") {
  std::mt19937_64 rng(31);
  OpCounter ctr;
  for (int i = 0; i < 300; ++i) {
    Poly f = random_trinomial(rng, 2 + rng() % 200);
    mpq_class a(static_cast<long>(rng() % 400) - 200, 1 + rng() % 50);
    mpq_class b(static_cast<long>(rng() % 400) - 200, 1 + rng() % 50);
    if (a > b) std::swap(a, b);
    CountQuery q{a, b, (rng() & 1) != 0, (rng() & 2) != 0};
    INFO(format_poly(f) << " " << q.str());
    CHECK(solve_closed_count(f, q, ctr) == dense_sturm_count(expand(f), q));
  }
}

TEST_CASE("check_dampened verdicts") {
  for (const char* s : {"1,0;-3,37;1,100", "4,0;1,3;-2,7;1,12"}) {
    DampenedCertificate c = check_dampened(parse_poly(s), 256);
    CHECK(c.overall() == DampVerdict::DampenedByTheorem);
    CHECK_FALSE(c.family.empty());
  }
  // f' > 0 on the positive axis while f'' has two positive roots
  Poly bad = parse_poly("10,0;100,1;5,2;-20,3;2,5");
  CHECK_FALSE(is_dampened_explicit(bad));
  CHECK(check_dampened(bad, 256).overall() == DampVerdict::NotDampened);
  CHECK(check_dampened(bad, 4).overall() == DampVerdict::Unknown);
  SolveRequest req;
  req.f = bad;
  req.R = 2;
  req.eps = ten_pow(6);
  try {
    solve(req);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotDampened);
  }
}

TEST_CASE("explicit dampening matches a bracket recount") {
  std::mt19937_64 rng(8);
  const mpq_class tiny = mpq_class(1, 1) / (mpz_class(1) << 100);
  for (int i = 0; i < 40; ++i) {
    Poly g = random_poly(rng, 5, 5 + rng() % 30);
    DensePoly p1 = expand(derivative(g));
    DensePoly p2 = expand(derivative(g, 2));
    const mpq_class far = std::max(cauchy_bound(p1), cauchy_bound(p2));
    auto r1 = isolate_and_refine(p1, CountQuery::open(0, far), tiny).brackets();
    auto r2 = isolate_and_refine(p2, CountQuery::open(0, far), tiny).brackets();
    std::vector<int> per_cell(r1.size() + 1, 0);
    bool shared = false;
    for (const auto& b : r2) {
      std::size_t cell = 0;
      for (const auto& a : r1) {
        if (b.second < a.first) break;
        if (b.first <= a.second) shared = true;
        ++cell;
      }
      ++per_cell[cell];
    }
    if (shared) continue;
    bool expect = std::all_of(per_cell.begin(), per_cell.end(), [](int n) { return n <= 1; });
    INFO(format_poly(g));
    CHECK(is_dampened_explicit(g) == expect);
  }
}

TEST_CASE("residual_check rejects a tampered report") {
  Poly f = parse_poly("2,0;-3,1;1,2");
  RootReport r = run(f, 10, ten_pow(6));
  REQUIRE(residual_check(f, 10, ten_pow(6), r).ok);
  RootReport moved = r;
  moved.roots[1].z = 3;
  CHECK_FALSE(residual_check(f, 10, ten_pow(6), moved).ok);
  RootReport dropped = r;
  dropped.roots.pop_back();
  CHECK_FALSE(residual_check(f, 10, ten_pow(6), dropped).ok);
}

TEST_CASE("solve_interval on signed and half-open intervals") {
  // (x - 1/2)(x - 1)(x + 2) = x^3 + x^2/2 - 5x/2 + 1
  Poly f = parse_poly("2,0;-5,1;1,2;2,3");
  SolveRequest req{f, 0, ten_pow(6)};
  auto vals = [&](const CountQuery& q) { return solve_interval(req, q).values(); };
  CHECK(vals(CountQuery::closed(-3, 3)).size() == 3);
  CHECK(vals(CountQuery{mpq_class(1, 2), 1, true, false}).size() == 1);
  CHECK(vals(CountQuery{mpq_class(1, 2), 1, true, true}).empty());
  CHECK(vals(CountQuery::closed(-2, 0)) == std::vector<mpq_class>{-2});
  CHECK(vals(CountQuery::closed(mpq_class(1, 2), 1)).size() == 2);
}

TEST_CASE("solve_interval matches the oracle on random intervals") {
  std::mt19937_64 rng(31);
  const mpq_class eps = ten_pow(8);
  for (int i = 0; i < 60; ++i) {
    Poly f = random_poly(rng, 3, 2 + rng() % 200);
    mpq_class a(static_cast<long>(rng() % 41) - 20, 8), b(static_cast<long>(rng() % 41) - 20, 8);
    a.canonicalize();
    b.canonicalize();
    if (a > b) std::swap(a, b);
    if (b - a <= eps) continue;
    CountQuery q{a, b, (rng() & 1) != 0, (rng() & 1) != 0};
    INFO(format_poly(f) << " on " << q.str());
    RootReport rep = solve_interval(SolveRequest{f, 0, eps}, q);
    auto brackets = isolate_and_refine(expand(f), q, mpq_class(1, 1) / (mpz_class(1) << 80)).brackets();
    CHECK(bijective_eps_matching(rep.values(), brackets, eps));
    CHECK(residual_check(f, q, eps, rep).ok);
  }
}

TEST_CASE("reciprocal path with 1/R beyond the root bound") {
  // 10 - 3x - 6x^3 has its positive root near 0.93; on [0, 1/2] there is none
  Poly f = parse_poly("10,0;-3,1;-6,3");
  CHECK(run(f, mpq_class(1, 2), ten_pow(8)).roots.empty());
  CHECK(run(f, 2, ten_pow(8)).roots.size() == 1);
}
