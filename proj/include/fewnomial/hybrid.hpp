#pragma once

#include <cmath>
#include <cstdint>
#include <optional>

#include "fewnomial/op_counter.hpp"
#include "fewnomial/scalar.hpp"
#include "fewnomial/sparse_poly.hpp"

namespace fewnomial {

enum class Direction { Increasing, Decreasing };

// HYBRID searches (0, R) for the unique root of
//   phi_view(x) = sign * phi(origin + orientation * x),
// which must be convex and monotone there.  The view lets callers solve a
// shifted or reflected piece of a sparse polynomial without expanding it.
template <class S>
struct HybridInput {
  S eps;
  S R;
  SparsePoly<S> phi;
  S alpha_star;
  Direction direction = Direction::Increasing;
  S origin = S(0);
  int orientation = 1;
  int sign = 1;
  // Significant bits kept on grid points and Newton iterates by the exact
  // backend; 0 derives it from R/eps and alpha_star.
  unsigned working_bits = 0;
};

template <class S>
struct GridState {
  S c0;
  unsigned M = 0;
  S x_hat;
  unsigned k_hat = 0;
};

template <class S>
struct HybridResult {
  S z;             // in view coordinates
  S global;        // origin + orientation * z
  S grid_point;    // x_hat when the grid loop exits
  S newton_start;  // z_0 handed to Newton, view coordinates
  S bracket_lo;    // ζ lies in (bracket_lo, bracket_hi), view coordinates
  S bracket_hi;
  unsigned M = 0;
  unsigned newton_iters = 0;
  bool exact_hit = false;
  bool certified = false;
  bool bisection_fallback = false;
  std::uint64_t evals = 0;
};

// ceil(log2(3 + log2(R/eps))) + 1
inline unsigned newton_iterations(const mpq_class& R, const mpq_class& eps) {
  double inner = 3.0 + std::max(0.0, log2_of(R / eps));
  return static_cast<unsigned>(std::ceil(std::log2(inner))) + 1;
}

inline unsigned hybrid_working_bits(const mpq_class& R, const mpq_class& eps, const mpq_class& alpha) {
  double span = std::max(0.0, log2_of(R / eps));
  double a = log2_of(8 * alpha + 1);
  return static_cast<unsigned>(std::ceil(span + std::max(0.0, a))) + 48;
}

namespace detail {

template <class S>
class PhiView {
 public:
  PhiView(const HybridInput<S>& in, OpCounter& ctr) : in_(in), dphi_(derivative(in.phi)) {
    ctr.mul += dphi_.term_count();
  }

  S global(const S& x) const { return in_.orientation > 0 ? in_.origin + x : in_.origin - x; }

  S value(const S& x, OpCounter& ctr) const {
    ++ctr.evals;
    ++ctr.add;
    S v = eval(in_.phi, global(x), ctr);
    return in_.sign > 0 ? v : -v;
  }

  S slope(const S& x, OpCounter& ctr) const {
    ++ctr.evals;
    ++ctr.add;
    S v = eval(dphi_, global(x), ctr);
    return in_.sign * in_.orientation > 0 ? v : -v;
  }

 private:
  const HybridInput<S>& in_;
  SparsePoly<S> dphi_;
};

}  // namespace detail

template <class S>
GridState<S> hybrid_grid(const HybridInput<S>& in, unsigned bits, std::vector<S>& ratios) {
  GridState<S> g;
  S alpha = in.alpha_star;
  if (in.direction == Direction::Increasing && compare(alpha * S(8), S(2)) < 0) {
    alpha = S(1) / S(4);  // 1 - 1/(8a) must stay positive; a larger bound is still a bound
  }
  S inv = S(1) / (S(8) * alpha);
  g.c0 = tidy(in.direction == Direction::Decreasing ? S(1) + inv : S(1) / (S(1) - inv), bits);
  const S target = in.R / in.eps;
  ratios.assign(1, g.c0);
  do {
    ratios.push_back(tidy(ratios.back() * ratios.back(), bits));
  } while (compare(ratios.back(), target) < 0);
  g.M = static_cast<unsigned>(ratios.size() - 1);
  g.x_hat = in.eps;
  g.k_hat = g.M;
  return g;
}

template <class S>
HybridResult<S> hybrid_solve_diag(const HybridInput<S>& in, OpCounter& ctr) {
  if (sign(in.eps) <= 0 || compare(in.R, in.eps) <= 0) {
    fail(ErrorCode::InvalidRequest, "HYBRID needs 0 < eps < R");
  }
  if (sign(in.alpha_star) <= 0) fail(ErrorCode::InvalidRequest, "HYBRID needs alpha_star > 0");
  const std::uint64_t evals0 = ctr.evals;
  const unsigned bits = in.working_bits ? in.working_bits
                                        : hybrid_working_bits(to_rational(in.R), to_rational(in.eps),
                                                              to_rational(in.alpha_star));
  detail::PhiView<S> phi(in, ctr);
  const int left_sign = in.direction == Direction::Decreasing ? 1 : -1;

  HybridResult<S> res;
  res.bracket_lo = S(0);
  res.bracket_hi = in.R;
  // +1: root above x; -1: root below x; 0: x is the root.
  auto side = [&](const S& x) {
    S v = phi.value(x, ctr);
    ++ctr.cmp;
    int s = sign(v);
    if (s == 0) return 0;
    if (s == left_sign) {
      res.bracket_lo = x;
      return 1;
    }
    res.bracket_hi = x;
    return -1;
  };
  auto finish = [&](S z, bool exact) {
    res.z = std::move(z);
    res.global = phi.global(res.z);
    res.exact_hit = exact;
    res.certified = true;
    res.evals = ctr.evals - evals0;
    return res;
  };

  std::vector<S> c;
  GridState<S> g = hybrid_grid(in, bits, c);
  res.M = g.M;
  for (; g.k_hat >= 1; --g.k_hat) {
    S t = tidy(c[g.k_hat - 1] * g.x_hat, bits);
    ++ctr.mul;
    ++ctr.cmp;
    if (compare(t, res.bracket_hi) >= 0) continue;
    int r = side(t);
    if (r == 0) return finish(t, true);
    if (r > 0) g.x_hat = t;
  }
  res.grid_point = g.x_hat;
  if (compare(g.x_hat, in.eps) == 0) {
    int r = side(in.eps);
    if (r == 0) return finish(in.eps, true);
    if (r < 0) {
      res.newton_start = in.eps;
      return finish(in.eps / S(2), false);
    }
  }

  // Newton from the side where convexity makes the iteration monotone.
  S z = g.x_hat;
  if (in.direction == Direction::Increasing) {
    z = tidy(c[0] * g.x_hat, bits);
    ++ctr.mul;
    if (compare(z, res.bracket_hi) > 0) z = res.bracket_hi;
  }
  res.newton_start = z;
  res.newton_iters = newton_iterations(to_rational(in.R), to_rational(in.eps));
  for (unsigned i = 0; i < res.newton_iters; ++i) {
    S v = phi.value(z, ctr);
    ++ctr.cmp;
    const int s = sign(v);
    if (s == 0) return finish(z, true);
    if (s == left_sign) {
      res.bracket_lo = z;
    } else {
      res.bracket_hi = z;
    }
    S d = phi.slope(z, ctr);
    ++ctr.cmp;
    if (sign(d) == 0) break;
    S next = tidy(z - v / d, bits);
    ctr.div += 1;
    ctr.add += 1;
    ctr.cmp += 2;
    if (compare(next, z) == 0) break;
    if (compare(next, res.bracket_lo) <= 0 || compare(next, res.bracket_hi) >= 0) {
      next = tidy((res.bracket_lo + res.bracket_hi) / S(2), bits);
    }
    z = std::move(next);
  }

  // Certify |z - ζ| < eps by a sign change across z ± 0.9 eps.
  const S h = in.eps * S(9) / S(10);
  S a = z - h;
  S b = z + h;
  ctr.add += 2;
  ctr.cmp += 2;
  int ra = compare(a, res.bracket_lo) <= 0 ? 1 : side(a);
  if (ra == 0) return finish(a, true);
  int rb = compare(b, res.bracket_hi) >= 0 ? -1 : side(b);
  if (rb == 0) return finish(b, true);
  if (ra > 0 && rb < 0) return finish(z, false);

  res.bisection_fallback = true;
  for (;;) {
    S w = res.bracket_hi - res.bracket_lo;
    ++ctr.cmp;
    if (compare(w, in.eps) <= 0) break;
    S mid = tidy((res.bracket_lo + res.bracket_hi) / S(2), bits);
    if (side(mid) == 0) return finish(mid, true);
  }
  return finish(tidy((res.bracket_lo + res.bracket_hi) / S(2), bits), false);
}

template <class S>
S hybrid_solve(const HybridInput<S>& in, OpCounter& ctr) {
  return hybrid_solve_diag(in, ctr).global;
}

// ᾱ(D, m): (D-1)/2 for binomials, (D-1)(D-2)/2 for trinomials (never below
// (D-1)/2).  Four or more terms take the override, else fall back to the
// trinomial value marked unverified; strict mode refuses instead.
struct AlphaBound {
  mpq_class value;
  bool verified = true;
};

AlphaBound alpha_bound(std::uint64_t D, std::uint64_t m,
                       const std::optional<mpq_class>& override = std::nullopt, bool strict = false);

// max over 2 <= k <= min(k_max, D) of |f^(k)(x) / (k! f'(x))|^(1/(k-1)),
// enclosed at the calling thread's float precision.
AdaptiveFloat gamma(const Poly& f, const mpq_class& x, std::uint64_t k_max);

// Newton from z0 with iterates rounded to `bits`; true when
// |z_{i+1} - zeta| <= 8 (1/2)^(2^i) |z0 - zeta| for every i < iters.
template <class S>
bool is_approximate_root(const SparsePoly<S>& f, const S& z0, const S& zeta, unsigned iters,
                         unsigned bits = 256) {
  const SparsePoly<S> df = derivative(f);
  const S d0 = abs(z0 - zeta);
  S z = z0;
  S factor(4);  // 8 (1/2)^(2^i), next is factor^2 / 8
  for (unsigned i = 0; i < iters; ++i) {
    S d = eval(df, z);
    if (sign(d) == 0) fail(ErrorCode::SingularPoint, "f' vanishes along the Newton orbit");
    z = tidy(z - eval(f, z) / d, bits);
    if (compare(abs(z - zeta), factor * d0) > 0) return false;
    factor = tidy(factor * factor / S(8), bits);
  }
  return true;
}

}  // namespace fewnomial
