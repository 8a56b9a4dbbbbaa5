#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include <gmpxx.h>
#include <mpfr.h>

#include "fewnomial/errors.hpp"

namespace fewnomial {

////////////////////////////////////////////////////////////////////////////////
// Rational: exact arithmetic over Q.  sign() is always decided.
////////////////////////////////////////////////////////////////////////////////

class Rational {
 public:
  Rational() = default;
  explicit Rational(long v) : q_(v) {}
  explicit Rational(const mpz_class& z) : q_(z) {}
  explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

  static Rational from_rational(const mpq_class& q) { return Rational(q); }
  static Rational from_uint64(std::uint64_t v);

  const mpq_class& value() const { return q_; }

  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.q_)); }

 private:
  mpq_class q_;
};

int sign(const Rational& x);
Rational abs(const Rational& x);
// Nearest dyadic rational with `bits` significant bits.
Rational tidy(const Rational& x, unsigned bits);
double to_double(const Rational& x);
mpq_class to_rational(const Rational& x);
// Approximation of sqrt(w), w >= 0, with absolute error below 2^-bits
// relative to max(1, sqrt(w)).
Rational sqrt_approx(const Rational& w, unsigned bits);

////////////////////////////////////////////////////////////////////////////////
// AdaptiveFloat: MPFR interval [lo, hi] with outward rounding.  The working
// precision comes from the calling thread's FloatContext.  sign() throws
// IndeterminateSign when the enclosure contains zero; with_escalation()
// reruns a whole computation at doubled precision until the cap.
////////////////////////////////////////////////////////////////////////////////

class FloatContext {
 public:
  static constexpr unsigned kDefaultBits = 128;
  static constexpr unsigned kDefaultCapBits = 8192;

  static unsigned precision();
  static void set_precision(unsigned bits);
  static unsigned cap();
  static void set_cap(unsigned bits);
  // Starting precision for escalation: FEWNOMIAL_FLOAT_BITS if set, else
  // kDefaultBits.
  static unsigned default_bits();
  // Per-thread starting precision for with_escalation; 0 restores
  // default_bits().
  static unsigned start_bits();
  static void set_start_bits(unsigned bits);
};

class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits) : saved_(FloatContext::precision()) {
    FloatContext::set_precision(bits);
  }
  ~PrecisionScope() { FloatContext::set_precision(saved_); }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_;
};

class AdaptiveFloat {
 public:
  AdaptiveFloat();
  explicit AdaptiveFloat(long v);
  AdaptiveFloat(const AdaptiveFloat& o);
  AdaptiveFloat(AdaptiveFloat&& o) noexcept;
  AdaptiveFloat& operator=(const AdaptiveFloat& o);
  AdaptiveFloat& operator=(AdaptiveFloat&& o) noexcept;
  ~AdaptiveFloat();

  static AdaptiveFloat from_rational(const mpq_class& q);
  static AdaptiveFloat from_uint64(std::uint64_t v);
  // Enclosure [lo, hi] rounded outward to the context precision.
  static AdaptiveFloat from_bounds(mpfr_srcptr lo, mpfr_srcptr hi);

  AdaptiveFloat& operator+=(const AdaptiveFloat& o);
  AdaptiveFloat& operator-=(const AdaptiveFloat& o);
  AdaptiveFloat& operator*=(const AdaptiveFloat& o);
  AdaptiveFloat& operator/=(const AdaptiveFloat& o);

  friend AdaptiveFloat operator+(AdaptiveFloat a, const AdaptiveFloat& b) { return a += b; }
  friend AdaptiveFloat operator-(AdaptiveFloat a, const AdaptiveFloat& b) { return a -= b; }
  friend AdaptiveFloat operator*(AdaptiveFloat a, const AdaptiveFloat& b) { return a *= b; }
  friend AdaptiveFloat operator/(AdaptiveFloat a, const AdaptiveFloat& b) { return a /= b; }
  friend AdaptiveFloat operator-(const AdaptiveFloat& a);

  mpfr_srcptr lo() const { return lo_; }
  mpfr_srcptr hi() const { return hi_; }
  bool is_point() const;
  // Width of the enclosure relative to its magnitude, as a double.
  double relative_width() const;

  // Enclosure of sqrt(w) for w >= 0.
  friend AdaptiveFloat sqrt_enclosure(const AdaptiveFloat& w);
  // Enclosure of w^(1/k) for w >= 0.
  friend AdaptiveFloat root_enclosure(const AdaptiveFloat& w, unsigned long k);

 private:
  void check_finite() const;
  mpfr_t lo_;
  mpfr_t hi_;
};

int sign(const AdaptiveFloat& x);
AdaptiveFloat abs(const AdaptiveFloat& x);
// Collapses the enclosure to its midpoint.  `bits` is ignored: the point
// carries the context precision.
AdaptiveFloat tidy(const AdaptiveFloat& x, unsigned bits);
double to_double(const AdaptiveFloat& x);
// Midpoint of the enclosure, exactly.
mpq_class to_rational(const AdaptiveFloat& x);
AdaptiveFloat sqrt_approx(const AdaptiveFloat& w, unsigned bits);
AdaptiveFloat max(const AdaptiveFloat& a, const AdaptiveFloat& b);

template <class Fn>
auto with_escalation(Fn&& fn) -> decltype(fn()) {
  unsigned bits = FloatContext::start_bits();
  const unsigned cap = FloatContext::cap();
  for (;;) {
    PrecisionScope scope(bits);
    try {
      return fn();
    } catch (const IndeterminateSign& e) {
      if (bits >= cap) {
        throw Error(ErrorCode::PrecisionExhausted,
                    std::string("sign undecided at ") + std::to_string(bits) +
                        " bits: " + e.what());
      }
      bits = bits * 2 > cap ? cap : bits * 2;
    }
  }
}

////////////////////////////////////////////////////////////////////////////////
// Backend-independent helpers.
////////////////////////////////////////////////////////////////////////////////

template <class S>
bool is_zero(const S& x) {
  return sign(x) == 0;
}

template <class S>
int compare(const S& a, const S& b) {
  return sign(a - b);
}

template <class S>
S from_rational(const mpq_class& q) {
  return S::from_rational(q);
}

// Decimal string rounded to `digits` places after the point.
std::string to_decimal(const mpq_class& q, int digits);

template <class S>
std::string to_decimal(const S& x, int digits) {
  return to_decimal(to_rational(x), digits);
}

// log2(q) for q > 0, to double accuracy, without overflow.
double log2_of(const mpq_class& q);

// Parses an integer, "p/q", or a decimal with optional exponent exactly.
mpq_class parse_rational(const std::string& text);

}  // namespace fewnomial
