#pragma once

// Brute-force ground truth over exact rationals: dense polynomials, the
// classical Sturm sequence with full long division, bisection isolation.
// Nothing here depends on the sparse algorithms it is used to check.

#include <cstdint>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "fewnomial/interval.hpp"
#include "fewnomial/op_counter.hpp"
#include "fewnomial/sparse_poly.hpp"

namespace fewnomial {

inline constexpr std::uint64_t kDenseDegreeLimit = 4096;

class DensePoly {
 public:
  DensePoly() = default;
  explicit DensePoly(std::vector<mpq_class> coeffs);

  // -1 for the zero polynomial.
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<mpq_class>& coeffs() const { return c_; }
  const mpq_class& operator[](std::size_t i) const { return c_[i]; }
  const mpq_class& leading() const { return c_.back(); }
  std::size_t nonzero_count() const;

 private:
  std::vector<mpq_class> c_;
};

bool operator==(const DensePoly& a, const DensePoly& b);

DensePoly expand(const Poly& f);
Poly to_sparse(const DensePoly& p);

DensePoly dense_derivative(const DensePoly& p);
// a = q*b + r with deg r < deg b.
void dense_divmod(const DensePoly& a, const DensePoly& b, DensePoly& q, DensePoly& r);
DensePoly dense_rem(const DensePoly& a, const DensePoly& b);
// Monic gcd; zero only if both inputs are zero.
DensePoly dense_gcd(const DensePoly& a, const DensePoly& b);
// Positive multiple of p with coprime integer coefficients.
DensePoly primitive_part(const DensePoly& p);

int dense_sign_at(const DensePoly& p, const mpq_class& x);

// p_0 = p, p_1 = p', p_{i+1} = -rem(p_{i-1}, p_i), stopping before the first
// zero remainder.  With normalize, each element is replaced by its
// primitive part (a positive multiple).
std::vector<DensePoly> dense_sturm_sequence(const DensePoly& p, bool normalize);

// Root counting by the classical Sturm sequence of the squarefree part.
class DenseSturm {
 public:
  explicit DenseSturm(const DensePoly& p);

  std::uint64_t count(const CountQuery& q) const;
  int sign_at(const mpq_class& x) const { return dense_sign_at(sqf_, x); }
  const DensePoly& squarefree() const { return sqf_; }
  std::size_t chain_length() const { return chain_.size(); }

 private:
  std::uint64_t variations(const mpq_class& x) const;
  DensePoly sqf_;
  std::vector<DensePoly> chain_;
};

std::uint64_t dense_sturm_count(const DensePoly& p, const CountQuery& q);

struct IsolationResult {
  // Open intervals, each holding exactly one distinct root.
  std::vector<std::pair<mpq_class, mpq_class>> intervals;
  // Roots hit exactly by a bisection point or an endpoint.
  std::vector<mpq_class> exact_roots;

  std::size_t root_count() const { return intervals.size() + exact_roots.size(); }
  // Every root as a closed bracket [lo, hi] (lo == hi for exact roots), sorted.
  std::vector<std::pair<mpq_class, mpq_class>> brackets() const;
};

// Brackets every distinct root of p in the range to width below `width`.
IsolationResult isolate_and_refine(const DensePoly& p, const CountQuery& range, const mpq_class& width);

// Bound B with |z| < B for every complex root z.
mpq_class cauchy_bound(const DensePoly& p);

// True iff |Z| equals the number of brackets and Z pairs off with them
// bijectively so that every point of each bracket is within eps of its z.
bool bijective_eps_matching(const std::vector<mpq_class>& Z,
                            const std::vector<std::pair<mpq_class, mpq_class>>& brackets,
                            const mpq_class& eps);

struct BlowupRow {
  std::uint64_t D = 0;
  long p3_degree = 0;
  std::size_t p3_terms = 0;
  bool p2_matches = false;
  std::size_t chain_length = 0;
};

// Dense Sturm sequence of x^{2D} + x^{D+1} + x^D + 1.
BlowupRow tetranomial_blowup(std::uint64_t D);

}  // namespace fewnomial
