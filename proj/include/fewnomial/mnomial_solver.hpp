#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fewnomial/interval.hpp"
#include "fewnomial/op_counter.hpp"
#include "fewnomial/sparse_poly.hpp"
#include "fewnomial/trinomial_sturm.hpp"

namespace fewnomial {

struct SolveRequest {
  Poly f;
  mpq_class R;
  mpq_class eps;
  // Upper bound handed to HYBRID; alpha_bound(D, m) at each level when unset.
  std::optional<mpq_class> alpha_star;
  Backend backend = Backend::Exact;
  // Refuse m >= 4 levels that have no known alpha bound and no override.
  bool strict_alpha = false;
  // Degree limit for the explicit dampening check on m >= 5.
  std::uint64_t max_D_explicit = 256;
  // Record every HYBRID handoff in RootReport::traces.
  bool trace_hybrid = false;
};

enum class Provenance {
  Endpoint,
  CriticalNbhd,
  InflectionNbhd,
  HybridInterval,
  ExactHit,
  ZeroRoot,
  QuadraticFormula,
};

std::string to_string(Provenance p);

struct RootEntry {
  mpq_class z;
  Provenance provenance = Provenance::HybridInterval;
  // Center index for neighborhood entries, subinterval index for HYBRID.
  std::int64_t index = -1;
};

// One HYBRID call, in the coordinates of the polynomial it searched.
struct HybridTrace {
  Poly f;
  mpq_class start;  // Newton starting point
  mpq_class z;      // returned approximation
  mpq_class lo, hi; // the root lies strictly between
  bool fallback = false;
};

struct RootReport {
  std::vector<RootEntry> roots;  // sorted by z
  bool all_reals = false;        // f is the zero polynomial
  mpq_class alpha;               // bound used at the top level
  bool alpha_verified = true;    // false once any level used an unproven bound
  std::uint64_t max_depth = 0;   // deepest recursive call
  std::uint64_t hybrid_calls = 0;
  std::uint64_t hybrid_fallbacks = 0;
  std::vector<HybridTrace> traces;

  std::vector<mpq_class> values() const;
};

// epsilon-approximations of every distinct root of f in [0, R].
RootReport solve(const SolveRequest& req, OpCounter& ctr);
RootReport solve(const SolveRequest& req);

// Roots in an arbitrary bounded interval; req.R is ignored.  The negative
// part is solved as f(-x) on the reflected interval.
RootReport solve_interval(const SolveRequest& req, const CountQuery& q, OpCounter& ctr);
RootReport solve_interval(const SolveRequest& req, const CountQuery& q);

// Distinct roots of f in any bounded interval.  The negative part is
// counted on f(-x).
std::uint64_t solve_closed_count(const Poly& f, const CountQuery& q, OpCounter& ctr,
                                 Backend backend = Backend::Exact);

enum class DampVerdict { DampenedByTheorem, Dampened, NotDampened, Unknown };

std::string to_string(DampVerdict v);

struct DampenedMember {
  Poly poly;
  std::string path;  // operators applied, outermost last, e.g. "L1.L2"
  DampVerdict verdict = DampVerdict::Unknown;
};

struct DampenedCertificate {
  std::vector<DampenedMember> family;
  DampVerdict overall() const;
};

// Family {(S o L_e1 o ... o L_ek)(f) : k <= m-1, e_i in {1,2}}.  Members with
// at most four terms are dampened by theorem; larger ones are checked with
// the dense oracle up to max_D_explicit and Unknown beyond.
DampenedCertificate check_dampened(const Poly& f, std::uint64_t max_D_explicit);

// Explicit check on the positive axis: between consecutive positive roots
// of g' (and in the two end cells) g'' has at most one root.
bool is_dampened_explicit(const Poly& g);

struct ResidualCheck {
  bool ok = false;
  bool checked = false;  // false when the degree is beyond the dense oracle
  std::uint64_t expected = 0;
  std::string message;
};

// Exact certificate for a report: |Z| equals the distinct-root count in
// [0, R], and every distinct value z carries no more copies than there are
// roots in (z - eps, z + eps) ∩ [0, R].
ResidualCheck residual_check(const Poly& f, const mpq_class& R, const mpq_class& eps,
                             const RootReport& report);
ResidualCheck residual_check(const Poly& f, const CountQuery& range, const mpq_class& eps,
                             const RootReport& report);

}  // namespace fewnomial
