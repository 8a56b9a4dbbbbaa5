#include "fewnomial/mnomial_solver.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <set>

#include "fewnomial/hybrid.hpp"
#include "fewnomial/oracle.hpp"

namespace fewnomial {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::Endpoint: return "Endpoint";
    case Provenance::CriticalNbhd: return "CriticalNbhd";
    case Provenance::InflectionNbhd: return "InflectionNbhd";
    case Provenance::HybridInterval: return "HybridInterval";
    case Provenance::ExactHit: return "ExactHit";
    case Provenance::ZeroRoot: return "ZeroRoot";
    case Provenance::QuadraticFormula: return "QuadraticFormula";
  }
  return "?";
}

std::string to_string(DampVerdict v) {
  switch (v) {
    case DampVerdict::DampenedByTheorem: return "DampenedByTheorem";
    case DampVerdict::Dampened: return "Dampened";
    case DampVerdict::NotDampened: return "NotDampened";
    case DampVerdict::Unknown: return "Unknown";
  }
  return "?";
}

std::vector<mpq_class> RootReport::values() const {
  std::vector<mpq_class> out;
  out.reserve(roots.size());
  for (const auto& r : roots) out.push_back(r.z);
  return out;
}

namespace {

mpq_class absq(const mpq_class& q) { return q < 0 ? mpq_class(-q) : q; }

mpq_class clip(const mpq_class& x, const mpq_class& lo, const mpq_class& hi) {
  return x < lo ? lo : (x > hi ? hi : x);
}

// 1 + max |c_i / c_D|, a strict bound on every root.
mpq_class sparse_cauchy_bound(const Poly& f) {
  const mpq_class lead = absq(f.leading().value());
  mpq_class best = 0;
  for (std::size_t i = 0; i + 1 < f.term_count(); ++i) {
    best = std::max(best, mpq_class(absq(f.coeff(i).value()) / lead));
  }
  return best + 1;
}

// Root counts with the chains of each polynomial built once per solve.
class CountCache {
 public:
  explicit CountCache(Backend b) : backend_(b) {}

  std::uint64_t count(const Poly& f, const CountQuery& q, OpCounter& ctr) {
    if (f.is_zero()) fail(ErrorCode::ZeroPolynomial, "root count of the zero polynomial");
    const std::string key = format_poly(f);
    if (op_S(f).term_count() > 3) {
      auto it = dense_.find(key);
      if (it == dense_.end()) it = dense_.emplace(key, std::make_unique<DenseSturm>(expand(f))).first;
      const std::uint64_t len = it->second->chain_length();
      ctr.mul += 2 * len * (f.degree() + 1);
      ctr.add += 2 * len * f.degree();
      ctr.cmp += 2 * len;
      return it->second->count(q);
    }
    if (backend_ == Backend::Float) return count_roots(f, q, ctr, Backend::Float);
    auto it = tri_.find(key);
    if (it == tri_.end()) {
      it = tri_.emplace(key, std::make_unique<TrinomialCounter<Rational>>(f, ctr)).first;
    }
    return it->second->count(Rational(q.a), q.a_open, Rational(q.b), q.b_open, ctr);
  }

 private:
  Backend backend_;
  std::map<std::string, std::unique_ptr<TrinomialCounter<Rational>>> tri_;
  std::map<std::string, std::unique_ptr<DenseSturm>> dense_;
};

struct Center {
  mpq_class z;
  bool critical = false;
  std::int64_t index = -1;
};

template <class S>
class Solver {
 public:
  Solver(const SolveRequest& req, OpCounter& ctr, RootReport& rep)
      : req_(req), ctr_(ctr), rep_(rep), counts_(req.backend) {}

  std::vector<RootEntry> run(const Poly& f0, const mpq_class& R, const mpq_class& eps, unsigned depth) {
    rep_.max_depth = std::max<std::uint64_t>(rep_.max_depth, depth);
    const std::string key = format_poly(f0) + "|" + R.get_str() + "|" + eps.get_str();
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    std::vector<RootEntry> out;
    // Steps 1-3
    if (f0.is_zero() || f0.term_count() == 0) return out;
    if (f0.term_count() == 1) {
      if (f0.min_exp() > 0) out.push_back({0, Provenance::ZeroRoot, -1});
      return memo(key, std::move(out));
    }
    // Step 4
    if (f0.min_exp() > 0) out.push_back({0, Provenance::ZeroRoot, -1});
    const Poly f = op_S(f0);
    const std::uint64_t D = f.degree();
    // Step 7, checked first so later steps only look inside (0, R)
    if (sign_at(f, R) == 0) out.push_back({R, Provenance::Endpoint, -1});

    if (D == 1) {
      // Step 5
      mpq_class r = -f.coeff(0).value() / f.coeff(1).value();
      ++ctr_.div;
      if (r > 0 && r < R) out.push_back({r, Provenance::ExactHit, -1});
    } else if (D == 2) {
      quadratic(f, R, eps, out);
    } else if (f.term_count() == 2) {
      // Steps 8-9: s f is increasing and convex for s = sign of the top coefficient
      const int s0 = sign(f.coeff(0));
      const int sR = sign_at(f, R);
      if (s0 * sR < 0) {
        const int s = sign(f.leading());
        bool exact = false;
        mpq_class z = hybrid(f, 0, 1, s, Direction::Increasing, R, eps, alpha_for(f), exact);
        out.push_back({clip(z, 0, R), exact ? Provenance::ExactHit : Provenance::HybridInterval, 0});
      }
    } else if (f.exp(1) == 1 && D - f.exp(f.term_count() - 2) > 1) {
      reciprocal(f, R, eps, depth, out);
    } else {
      general(f, R, eps, depth, out);
    }
    sort_entries(out);
    return memo(key, std::move(out));
  }

 private:
  std::vector<RootEntry> memo(const std::string& key, std::vector<RootEntry> v) {
    memo_.emplace(key, v);
    return v;
  }

  static void sort_entries(std::vector<RootEntry>& v) {
    std::stable_sort(v.begin(), v.end(), [](const RootEntry& a, const RootEntry& b) { return a.z < b.z; });
  }

  int sign_at(const Poly& f, const mpq_class& x) {
    ++ctr_.cmp;
    return sign(eval(convert<S>(f), S::from_rational(x), ctr_));
  }

  std::uint64_t count(const Poly& f, const mpq_class& a, bool a_open, const mpq_class& b, bool b_open) {
    CountQuery q{a, b, a_open, b_open};
    return counts_.count(f, q, ctr_);
  }

  mpq_class alpha_for(const Poly& f) {
    if (req_.alpha_star) return *req_.alpha_star;
    AlphaBound a = alpha_bound(std::max<std::uint64_t>(f.degree(), 2),
                               std::max<std::size_t>(f.term_count(), 2), std::nullopt, req_.strict_alpha);
    if (!a.verified) rep_.alpha_verified = false;
    return a.value;
  }

  mpq_class hybrid(const Poly& f, const mpq_class& origin, int orientation, int sgn, Direction dir,
                   const mpq_class& L, const mpq_class& eps, const mpq_class& alpha, bool& exact) {
    HybridInput<S> in;
    in.phi = convert<S>(f);
    in.origin = S::from_rational(origin);
    in.orientation = orientation;
    in.sign = sgn;
    in.direction = dir;
    in.R = S::from_rational(L);
    in.eps = S::from_rational(eps);
    in.alpha_star = S::from_rational(alpha);
    HybridResult<S> res = hybrid_solve_diag(in, ctr_);
    ++rep_.hybrid_calls;
    if (res.bisection_fallback) ++rep_.hybrid_fallbacks;
    exact = res.exact_hit;
    if (req_.trace_hybrid) {
      auto global = [&](const S& x) {
        return orientation > 0 ? mpq_class(origin + to_rational(x)) : mpq_class(origin - to_rational(x));
      };
      HybridTrace t{f, global(res.newton_start), to_rational(res.global), global(res.bracket_lo),
                    global(res.bracket_hi), res.bisection_fallback};
      if (t.lo > t.hi) std::swap(t.lo, t.hi);
      rep_.traces.push_back(std::move(t));
    }
    return to_rational(res.global);
  }

  // Step 6: roots h -+ sqrt(w) of c0 + c1 x + c2 x^2 after completing the square.
  void quadratic(const Poly& f, const mpq_class& R, const mpq_class& eps, std::vector<RootEntry>& out) {
    mpq_class c0 = 0, c1 = 0, c2 = 0;
    for (const auto& t : f.terms()) {
      (t.exp == 0 ? c0 : t.exp == 1 ? c1 : c2) = t.coeff.value();
    }
    const mpq_class h = -c1 / (2 * c2);
    const mpq_class w = h * h - c0 / c2;
    ctr_.mul += 3;
    ctr_.div += 2;
    ctr_.add += 1;
    if (w < 0) return;
    const std::uint64_t n = count(f, 0, true, R, true);
    if (n == 0) return;
    if (w == 0) {
      out.push_back({h, Provenance::ExactHit, -1});
      return;
    }
    std::uint64_t nl = 0;
    if (h >= R) {
      nl = n;
    } else if (h > 0) {
      nl = count(f, 0, true, h, false);
    }
    const double mag = std::max(0.0, log2_of(w)) / 2;
    const unsigned bits = static_cast<unsigned>(std::ceil(mag + std::max(0.0, -log2_of(eps)))) + 8;
    const mpq_class s = sqrt_approx(Rational(w), bits).value();
    ++ctr_.mul;
    if (nl > 0) out.push_back({clip(h - s, 0, R), Provenance::QuadraticFormula, 0});
    if (n - nl > 0) out.push_back({clip(h + s, 0, R), Provenance::QuadraticFormula, 1});
  }

  // Step 11: solve x^D f(1/x) on [0, B] with a tighter eps and take reciprocals.
  void reciprocal(const Poly& f, const mpq_class& R, const mpq_class& eps, unsigned depth,
                  std::vector<RootEntry>& out) {
    const Poly g = reciprocal_transform(f);
    const mpq_class B = sparse_cauchy_bound(g);
    const mpq_class inv_R = 1 / R;
    ++ctr_.div;
    // every root of g lies below B, so (0, R) holds none when 1/R >= B
    if (inv_R >= B) return;
    mpq_class et = 1;
    et = std::min(et, mpq_class(eps * eps * eps / 2));
    et = std::min(et, mpq_class(1 / (2 * R * R)));
    et = std::min(et, mpq_class(eps / (4 * R * R)));
    std::vector<RootEntry> inner = run(g, B, et, depth);
    const std::uint64_t n = count(g, inv_R, true, B, false);
    if (n > inner.size()) fail(ErrorCode::InvariantViolation, "reciprocal solve lost roots");
    for (std::size_t i = inner.size() - n; i < inner.size(); ++i) {
      RootEntry e = inner[i];
      if (e.z <= 0) fail(ErrorCode::InvariantViolation, "reciprocal solve returned a non-positive root");
      e.z = std::min(mpq_class(1 / e.z), R);
      ++ctr_.div;
      out.push_back(std::move(e));
    }
  }

  // Steps 10 and 12-18: centers from the roots of f' and f'', counted
  // neighborhoods around them, and HYBRID on each monotone convex gap.
  void general(const Poly& f, const mpq_class& R, const mpq_class& eps, unsigned depth,
               std::vector<RootEntry>& out) {
    const Poly d1 = op_L1(f);
    const Poly d2 = derivative(d1);
    ctr_.mul += d1.term_count() + d2.term_count();
    const std::vector<RootEntry> U = run(d1, R, eps, depth + 1);
    const std::vector<RootEntry> V = run(d2, R, eps, depth + 1);

    std::vector<Center> centers;
    for (std::size_t i = 0; i < U.size(); ++i) centers.push_back({U[i].z, true, static_cast<std::int64_t>(i)});
    for (std::size_t i = 0; i < V.size(); ++i) centers.push_back({V[i].z, false, static_cast<std::int64_t>(i)});
    std::stable_sort(centers.begin(), centers.end(), [](const Center& a, const Center& b) {
      return a.z < b.z || (a.z == b.z && a.critical && !b.critical);
    });

    const mpq_class two_eps = 2 * eps;
    mpq_class gap_start = 0;
    bool left_critical = true;  // u_0 = 0
    std::int64_t gap_index = 0;
    for (std::size_t i = 0; i < centers.size();) {
      std::size_t j = i + 1;
      bool has_u = centers[i].critical;
      while (j < centers.size() && centers[j].z - centers[j - 1].z < two_eps) {
        has_u = has_u || centers[j].critical;
        ++j;
      }
      const mpq_class lo = std::max(mpq_class(0), mpq_class(centers[i].z - eps));
      const mpq_class hi = std::min(R, mpq_class(centers[j - 1].z + eps));
      gap(f, gap_start, lo, R, eps, left_critical, has_u, gap_index++, out);

      const Center& head = centers[i];
      const Provenance prov = has_u ? Provenance::CriticalNbhd : Provenance::InflectionNbhd;
      std::int64_t idx = head.index;
      for (std::size_t k = i; k < j; ++k) {
        if (centers[k].critical == has_u) {
          idx = centers[k].index;
          break;
        }
      }
      const std::uint64_t n = count(f, lo, true, hi, true);
      if (n > 0) {
        if (centers[i].z == centers[j - 1].z) {
          for (std::uint64_t k = 0; k < n; ++k) out.push_back({head.z, prov, idx});
        } else {
          refine(f, lo, hi, n, eps, prov, idx, out);
        }
      }
      gap_start = hi;
      left_critical = has_u;
      i = j;
    }
    gap(f, gap_start, R, R, eps, left_critical, true, gap_index, out);
  }

  // n distinct roots in the open interval (lo, hi), split by counting until
  // each piece is at most 2 eps wide.
  void refine(const Poly& f, const mpq_class& lo, const mpq_class& hi, std::uint64_t n, const mpq_class& eps,
              Provenance prov, std::int64_t idx, std::vector<RootEntry>& out) {
    const mpq_class mid = (lo + hi) / 2;
    if (hi - lo <= 2 * eps) {
      for (std::uint64_t k = 0; k < n; ++k) out.push_back({mid, prov, idx});
      return;
    }
    std::uint64_t left = count(f, lo, true, mid, true);
    std::uint64_t right = n - left;
    if (sign_at(f, mid) == 0) {
      out.push_back({mid, Provenance::ExactHit, idx});
      --right;
    }
    if (left > 0) refine(f, lo, mid, left, eps, prov, idx, out);
    if (right > 0) refine(f, mid, hi, right, eps, prov, idx, out);
  }

  // [A, B] holds no root of f' or f'' in its interior.
  void gap(const Poly& f, const mpq_class& A, const mpq_class& B, const mpq_class& R, const mpq_class& eps,
           bool left_critical, bool right_critical, std::int64_t index, std::vector<RootEntry>& out) {
    if (A == B) {
      if (A > 0 && A < R && sign_at(f, A) == 0) out.push_back({A, Provenance::ExactHit, index});
      return;
    }
    // Step 17(a)/(c)
    const int sA = sign_at(f, A);
    const int sB = sign_at(f, B);
    if (sA == 0 && A > 0) out.push_back({A, Provenance::ExactHit, index});
    if (sB == 0 && B < R) out.push_back({B, Provenance::ExactHit, index});
    if (sA * sB >= 0) return;
    // Step 17(b)/(d)
    const mpq_class L = B - A;
    const mpq_class mid = (A + B) / 2;
    if (L <= eps) {
      out.push_back({mid, Provenance::HybridInterval, index});
      return;
    }
    const int s2 = sign_at(derivative(f, 2), mid);
    const int s1 = sign_at(derivative(f), mid);
    if (s1 == 0 || s2 == 0) fail(ErrorCode::InvariantViolation, "critical point inside a monotone gap");
    const bool from_left = left_critical || !right_critical;
    const int orientation = from_left ? 1 : -1;
    const Direction dir = s2 * orientation * s1 > 0 ? Direction::Increasing : Direction::Decreasing;
    bool exact = false;
    mpq_class z = hybrid(f, from_left ? A : B, orientation, s2, dir, L, eps, alpha_for(f), exact);
    out.push_back({clip(z, A, B), exact ? Provenance::ExactHit : Provenance::HybridInterval, index});
  }

  const SolveRequest& req_;
  OpCounter& ctr_;
  RootReport& rep_;
  CountCache counts_;
  std::map<std::string, std::vector<RootEntry>> memo_;
};

template <class S>
void run_solver(const SolveRequest& req, OpCounter& ctr, RootReport& rep) {
  Solver<S> solver(req, ctr, rep);
  rep.roots = solver.run(req.f, req.R, req.eps, 0);
}

}  // namespace

RootReport solve(const SolveRequest& req, OpCounter& ctr) {
  if (req.R <= 0) fail(ErrorCode::InvalidRequest, "solve needs R > 0");
  if (req.eps <= 0 || req.eps >= req.R) fail(ErrorCode::InvalidRequest, "solve needs 0 < eps < R");
  RootReport rep;
  if (req.f.is_zero()) {
    rep.all_reals = true;
    return rep;
  }
  const std::size_t m = req.f.term_count();
  const std::uint64_t D = req.f.degree();
  if (m >= 5) {
    DampenedCertificate cert = check_dampened(req.f, req.max_D_explicit);
    if (cert.overall() == DampVerdict::NotDampened) {
      fail(ErrorCode::NotDampened, "a member of the derivative family is not dampened");
    }
  }
  if (req.alpha_star) {
    if (*req.alpha_star <= 0) fail(ErrorCode::InvalidRequest, "alpha override must be positive");
    rep.alpha = *req.alpha_star;
  } else if (D >= 2 && m >= 2) {
    AlphaBound a = alpha_bound(D, m, std::nullopt, req.strict_alpha);
    rep.alpha = a.value;
    rep.alpha_verified = a.verified;
  }
  if (req.backend == Backend::Exact) {
    run_solver<Rational>(req, ctr, rep);
  } else {
    const OpCounter start = ctr;
    const RootReport blank = rep;
    with_escalation([&] {
      ctr = start;
      rep = blank;
      run_solver<AdaptiveFloat>(req, ctr, rep);
      return 0;
    });
  }
  return rep;
}

RootReport solve(const SolveRequest& req) {
  OpCounter scratch;
  return solve(req, scratch);
}

std::uint64_t solve_closed_count(const Poly& f, const CountQuery& q, OpCounter& ctr, Backend backend) {
  if (q.a > q.b) fail(ErrorCode::InvalidRequest, "interval with a > b");
  if (q.a >= 0) return count_roots(f, q, ctr, backend);
  const Poly g = reflect(f);
  if (q.b <= 0) return count_roots(g, CountQuery{-q.b, -q.a, q.b_open, q.a_open}, ctr, backend);
  return count_roots(g, CountQuery{0, -q.a, true, q.a_open}, ctr, backend) +
         count_roots(f, CountQuery{0, q.b, false, q.b_open}, ctr, backend);
}

DampVerdict DampenedCertificate::overall() const {
  bool unknown = false, explicit_ok = false;
  for (const auto& m : family) {
    if (m.verdict == DampVerdict::NotDampened) return DampVerdict::NotDampened;
    unknown = unknown || m.verdict == DampVerdict::Unknown;
    explicit_ok = explicit_ok || m.verdict == DampVerdict::Dampened;
  }
  if (unknown) return DampVerdict::Unknown;
  return explicit_ok ? DampVerdict::Dampened : DampVerdict::DampenedByTheorem;
}

bool is_dampened_explicit(const Poly& g) {
  if (g.degree() < 3) return true;
  const DensePoly p1 = expand(derivative(g));
  DensePoly h = expand(derivative(g, 2));
  for (;;) {
    DensePoly c = dense_gcd(h, p1);
    if (c.degree() <= 0) break;
    DensePoly q, r;
    dense_divmod(h, c, q, r);
    h = q;
  }
  if (h.degree() <= 0) return true;
  const DenseSturm hs(h);
  const CountQuery positive{0, cauchy_bound(p1), true, true};
  std::vector<std::pair<mpq_class, mpq_class>> brackets;
  for (unsigned k = 4;; k *= 2) {
    const mpq_class width(mpz_class(1), mpz_class(1) << k);
    brackets = isolate_and_refine(p1, positive, width).brackets();
    bool clean = true;
    for (const auto& b : brackets) {
      if (hs.count(CountQuery::closed(b.first, b.second)) != 0) {
        clean = false;
        break;
      }
    }
    if (clean) break;
  }
  mpq_class left = 0;
  bool left_open = true;
  for (const auto& b : brackets) {
    if (hs.count(CountQuery{left, b.first, left_open, false}) > 1) return false;
    left = b.second;
    left_open = false;
  }
  mpq_class far = std::max(cauchy_bound(h), mpq_class(left + 1));
  return hs.count(CountQuery{left, far, left_open, true}) <= 1;
}

DampenedCertificate check_dampened(const Poly& f, std::uint64_t max_D_explicit) {
  DampenedCertificate cert;
  if (f.is_zero()) return cert;
  std::set<std::string> seen;
  const std::size_t m = f.term_count();
  struct Item {
    Poly p;
    std::string path;
    std::size_t k;
  };
  std::vector<Item> stack{{op_S(f), "", 0}};
  while (!stack.empty()) {
    Item it = std::move(stack.back());
    stack.pop_back();
    if (it.p.is_zero()) continue;
    const std::string key = format_poly(it.p);
    if (!seen.insert(key).second) continue;
    DampenedMember member{it.p, it.path.empty() ? "S" : it.path, DampVerdict::Unknown};
    if (it.p.term_count() <= 4) {
      member.verdict = DampVerdict::DampenedByTheorem;
    } else if (it.p.degree() <= max_D_explicit) {
      member.verdict = is_dampened_explicit(it.p) ? DampVerdict::Dampened : DampVerdict::NotDampened;
    }
    cert.family.push_back(member);
    if (it.k + 1 >= m) continue;
    for (int e : {2, 1}) {
      Poly next = e == 1 ? op_L1(it.p) : op_L2(it.p);
      if (next.is_zero()) continue;
      std::string path = (it.path.empty() ? "" : it.path + ".") + (e == 1 ? "L1" : "L2");
      stack.push_back({op_S(next), path, it.k + 1});
    }
  }
  return cert;
}

namespace {

// Distinct roots in a bounded interval that may straddle 0.
std::uint64_t count_signed(CountCache& cache, const Poly& f, const CountQuery& q, OpCounter& ctr) {
  if (q.a > q.b) fail(ErrorCode::InvalidRequest, "interval with a > b");
  if (q.a >= 0) return cache.count(f, q, ctr);
  const Poly g = reflect(f);
  if (q.b <= 0) return cache.count(g, CountQuery{-q.b, -q.a, q.b_open, q.a_open}, ctr);
  return cache.count(g, CountQuery{0, -q.a, true, q.a_open}, ctr) +
         cache.count(f, CountQuery{0, q.b, false, q.b_open}, ctr);
}

// Roots of f in p with 0 <= p.a <= p.b.  f is solved on [0, max(b, 2 eps)];
// the approximations come out in the order of the roots they match, so the
// ones for p are a contiguous run ending at the last root <= b.
std::vector<RootEntry> positive_piece(const SolveRequest& base, const Poly& f, const CountQuery& p,
                                      OpCounter& ctr, RootReport& agg, bool& first) {
  std::vector<RootEntry> out;
  const bool zero_root = f.term_count() > 0 && f.min_exp() > 0;
  if (sgn(p.b) == 0) {
    if (!p.a_open && !p.b_open && zero_root) out.push_back({0, Provenance::ZeroRoot, -1});
    return out;
  }
  SolveRequest sub = base;
  sub.f = f;
  sub.R = std::max(p.b, mpq_class(2 * base.eps));
  RootReport rep = solve(sub, ctr);
  if (first) {
    agg.alpha = rep.alpha;
    first = false;
  }
  agg.alpha_verified = agg.alpha_verified && rep.alpha_verified;
  agg.max_depth = std::max(agg.max_depth, rep.max_depth);
  agg.hybrid_calls += rep.hybrid_calls;
  agg.hybrid_fallbacks += rep.hybrid_fallbacks;
  for (auto& t : rep.traces) agg.traces.push_back(std::move(t));

  CountCache cache(base.backend);
  std::uint64_t upper = cache.count(f, CountQuery::closed(0, p.b), ctr);
  if (p.b_open) upper = cache.count(f, CountQuery{0, p.b, false, true}, ctr);
  const std::uint64_t n = cache.count(f, p, ctr);
  if (n > upper || upper > rep.roots.size()) {
    fail(ErrorCode::InvariantViolation, "solve and count disagree on " + p.str());
  }
  out.assign(rep.roots.begin() + static_cast<std::ptrdiff_t>(upper - n),
             rep.roots.begin() + static_cast<std::ptrdiff_t>(upper));
  return out;
}

}  // namespace

RootReport solve_interval(const SolveRequest& req, const CountQuery& q, OpCounter& ctr) {
  if (q.a > q.b) fail(ErrorCode::InvalidRequest, "interval with a > b");
  if (req.eps <= 0 || req.eps >= q.b - q.a) {
    fail(ErrorCode::InvalidRequest, "solve needs 0 < eps < interval width");
  }
  RootReport out;
  if (req.f.is_zero()) {
    out.all_reals = true;
    return out;
  }
  bool first = true;
  if (q.a < 0) {
    const CountQuery neg = q.b < 0 ? CountQuery{-q.b, -q.a, q.b_open, q.a_open}
                                   : CountQuery{0, -q.a, true, q.a_open};
    for (auto& e : positive_piece(req, reflect(req.f), neg, ctr, out, first)) {
      e.z = -e.z;
      out.roots.push_back(std::move(e));
    }
  }
  if (q.b >= 0) {
    const CountQuery pos{std::max(q.a, mpq_class(0)), q.b, q.a >= 0 && q.a_open, q.b_open};
    if (q.a <= q.b) {
      for (auto& e : positive_piece(req, req.f, pos, ctr, out, first)) out.roots.push_back(std::move(e));
    }
  }
  std::stable_sort(out.roots.begin(), out.roots.end(),
                   [](const RootEntry& x, const RootEntry& y) { return x.z < y.z; });
  return out;
}

RootReport solve_interval(const SolveRequest& req, const CountQuery& q) {
  OpCounter scratch;
  return solve_interval(req, q, scratch);
}

ResidualCheck residual_check(const Poly& f, const CountQuery& range, const mpq_class& eps,
                             const RootReport& report) {
  ResidualCheck rc;
  if (report.all_reals) {
    rc.ok = rc.checked = f.is_zero();
    rc.message = rc.ok ? "zero polynomial" : "all-reals flag on a nonzero polynomial";
    return rc;
  }
  try {
    OpCounter scratch;
    // Interval counts are certified too and avoid exact powers at large D.
    CountCache counts(Backend::Float);
    rc.expected = count_signed(counts, f, range, scratch);
    rc.checked = true;
    if (report.roots.size() != rc.expected) {
      rc.message = "reported " + std::to_string(report.roots.size()) + " roots, expected " +
                   std::to_string(rc.expected);
      return rc;
    }
    for (std::size_t i = 0; i < report.roots.size();) {
      std::size_t j = i;
      while (j < report.roots.size() && report.roots[j].z == report.roots[i].z) ++j;
      const mpq_class& z = report.roots[i].z;
      if (z < range.a || z > range.b) {
        rc.message = "root outside " + range.str() + ": " + z.get_str();
        return rc;
      }
      const mpq_class lo = z - eps, hi = z + eps;
      CountQuery q{lo > range.a ? lo : range.a, hi < range.b ? hi : range.b,
                   lo > range.a || range.a_open, hi < range.b || range.b_open};
      const std::uint64_t near = q.a <= q.b ? count_signed(counts, f, q, scratch) : 0;
      if (near < j - i) {
        rc.message = "value " + z.get_str() + " repeated " + std::to_string(j - i) + " times with " +
                     std::to_string(near) + " roots within eps";
        return rc;
      }
      i = j;
    }
    rc.ok = true;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegreeTooLarge) throw;
    rc.ok = true;
    rc.checked = false;
    rc.message = e.what();
  }
  return rc;
}

ResidualCheck residual_check(const Poly& f, const mpq_class& R, const mpq_class& eps, const RootReport& report) {
  return residual_check(f, CountQuery::closed(0, R), eps, report);
}

}  // namespace fewnomial
