#include "fewnomial/scalar.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>

namespace fewnomial {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorCode::NeedsSFirst: return "NeedsSFirst";
    case ErrorCode::NotPrimitive: return "NotPrimitive";
    case ErrorCode::WrongArity: return "WrongArity";
    case ErrorCode::Indeterminate: return "Indeterminate";
    case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::SingularPoint: return "SingularPoint";
    case ErrorCode::AlphaUnknown: return "AlphaUnknown";
    case ErrorCode::NotDampened: return "NotDampened";
    case ErrorCode::InvalidRequest: return "InvalidRequest";
    case ErrorCode::DegreeTooLarge: return "DegreeTooLarge";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

// ---------------------------------------------------------------- Rational

Rational Rational::from_uint64(std::uint64_t v) {
  mpz_class z;
  mpz_import(z.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return Rational(z);
}

Rational& Rational::operator/=(const Rational& o) {
  if (sgn(o.q_) == 0) fail(ErrorCode::InvalidRequest, "division by zero");
  q_ /= o.q_;
  return *this;
}

int sign(const Rational& x) { return sgn(x.value()); }

Rational abs(const Rational& x) { return Rational(mpq_class(::abs(x.value()))); }

Rational tidy(const Rational& x, unsigned bits) {
  const mpq_class& q = x.value();
  if (sgn(q) == 0) return x;
  const mpz_class& num = q.get_num();
  const mpz_class& den = q.get_den();
  if (den == 1) return x;
  long e = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2)) -
           static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2));
  long shift = static_cast<long>(bits) - e;
  // round(num * 2^shift / den) / 2^shift
  mpz_class scaled_num = num;
  mpz_class scaled_den = den;
  if (shift >= 0) {
    mpz_mul_2exp(scaled_num.get_mpz_t(), scaled_num.get_mpz_t(), shift);
  } else {
    mpz_mul_2exp(scaled_den.get_mpz_t(), scaled_den.get_mpz_t(), -shift);
  }
  mpz_class twice = 2 * scaled_num + scaled_den;
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), twice.get_mpz_t(), mpz_class(2 * scaled_den).get_mpz_t());
  mpq_class out(r);
  if (shift >= 0) {
    mpq_div_2exp(out.get_mpq_t(), out.get_mpq_t(), shift);
  } else {
    mpq_mul_2exp(out.get_mpq_t(), out.get_mpq_t(), -shift);
  }
  return Rational(out);
}

double to_double(const Rational& x) { return x.value().get_d(); }

mpq_class to_rational(const Rational& x) { return x.value(); }

Rational sqrt_approx(const Rational& w, unsigned bits) {
  if (sign(w) < 0) fail(ErrorCode::InvalidRequest, "sqrt of negative value");
  if (sign(w) == 0) return Rational(0);
  // floor(sqrt(w * 4^k)) / 2^k has absolute error below 2^-k.
  long mag = static_cast<long>(mpz_sizeinbase(w.value().get_num().get_mpz_t(), 2)) -
             static_cast<long>(mpz_sizeinbase(w.value().get_den().get_mpz_t(), 2));
  long k = static_cast<long>(bits) + std::max(0L, -mag / 2) + 2;
  mpz_class scaled = w.value().get_num();
  mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), 2 * k);
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), w.value().get_den().get_mpz_t());
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), q.get_mpz_t());
  mpq_class out(root);
  mpq_div_2exp(out.get_mpq_t(), out.get_mpq_t(), k);
  return Rational(out);
}

// ---------------------------------------------------------- FloatContext

namespace {

struct ThreadFloatState {
  unsigned precision = FloatContext::default_bits();
  unsigned cap = FloatContext::kDefaultCapBits;
  unsigned start = 0;
  ThreadFloatState() {
    // Large-degree powers need the widest exponent range MPFR offers; the
    // range is per thread in thread-safe MPFR builds.
    mpfr_set_emax(mpfr_get_emax_max());
    mpfr_set_emin(mpfr_get_emin_min());
  }
};

ThreadFloatState& state() {
  thread_local ThreadFloatState s;
  return s;
}

}  // namespace

unsigned FloatContext::precision() { return state().precision; }

void FloatContext::set_precision(unsigned bits) {
  state().precision = std::max<unsigned>(bits, MPFR_PREC_MIN + 1);
}

unsigned FloatContext::cap() { return state().cap; }

void FloatContext::set_cap(unsigned bits) { state().cap = bits; }

unsigned FloatContext::default_bits() {
  static const unsigned bits = [] {
    const char* env = std::getenv("FEWNOMIAL_FLOAT_BITS");
    if (env != nullptr) {
      char* end = nullptr;
      unsigned long v = std::strtoul(env, &end, 10);
      if (end != env && v >= 16 && v <= 1u << 20) return static_cast<unsigned>(v);
    }
    return kDefaultBits;
  }();
  return bits;
}

unsigned FloatContext::start_bits() {
  return state().start != 0 ? state().start : default_bits();
}

void FloatContext::set_start_bits(unsigned bits) { state().start = bits; }

// --------------------------------------------------------- AdaptiveFloat

AdaptiveFloat::AdaptiveFloat() {
  mpfr_prec_t p = FloatContext::precision();
  mpfr_init2(lo_, p);
  mpfr_init2(hi_, p);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

AdaptiveFloat::AdaptiveFloat(long v) : AdaptiveFloat() {
  mpfr_set_si(lo_, v, MPFR_RNDD);
  mpfr_set_si(hi_, v, MPFR_RNDU);
}

AdaptiveFloat::AdaptiveFloat(const AdaptiveFloat& o) {
  mpfr_init2(lo_, mpfr_get_prec(o.lo_));
  mpfr_init2(hi_, mpfr_get_prec(o.hi_));
  mpfr_set(lo_, o.lo_, MPFR_RNDD);
  mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

AdaptiveFloat::AdaptiveFloat(AdaptiveFloat&& o) noexcept : AdaptiveFloat() {
  mpfr_swap(lo_, o.lo_);
  mpfr_swap(hi_, o.hi_);
}

AdaptiveFloat& AdaptiveFloat::operator=(const AdaptiveFloat& o) {
  if (this != &o) {
    mpfr_set_prec(lo_, mpfr_get_prec(o.lo_));
    mpfr_set_prec(hi_, mpfr_get_prec(o.hi_));
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
  }
  return *this;
}

AdaptiveFloat& AdaptiveFloat::operator=(AdaptiveFloat&& o) noexcept {
  mpfr_swap(lo_, o.lo_);
  mpfr_swap(hi_, o.hi_);
  return *this;
}

AdaptiveFloat::~AdaptiveFloat() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

AdaptiveFloat AdaptiveFloat::from_rational(const mpq_class& q) {
  AdaptiveFloat r;
  mpfr_set_q(r.lo_, q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_, q.get_mpq_t(), MPFR_RNDU);
  return r;
}

AdaptiveFloat AdaptiveFloat::from_uint64(std::uint64_t v) {
  AdaptiveFloat r;
  mpz_class z;
  mpz_import(z.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  mpfr_set_z(r.lo_, z.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(r.hi_, z.get_mpz_t(), MPFR_RNDU);
  return r;
}

AdaptiveFloat AdaptiveFloat::from_bounds(mpfr_srcptr lo, mpfr_srcptr hi) {
  AdaptiveFloat r;
  mpfr_set(r.lo_, lo, MPFR_RNDD);
  mpfr_set(r.hi_, hi, MPFR_RNDU);
  return r;
}

void AdaptiveFloat::check_finite() const {
  if (!mpfr_number_p(lo_) || !mpfr_number_p(hi_)) {
    fail(ErrorCode::PrecisionExhausted, "floating-point overflow or NaN");
  }
}

namespace {

// Scratch variables reused across interval products.
struct Scratch {
  mpfr_t t[4];
  mpfr_prec_t prec = 0;
  Scratch() {
    for (auto& v : t) mpfr_init2(v, MPFR_PREC_MIN + 1);
  }
  ~Scratch() {
    for (auto& v : t) mpfr_clear(v);
  }
  void ensure(mpfr_prec_t p) {
    if (prec == p) return;
    for (auto& v : t) mpfr_set_prec(v, p);
    prec = p;
  }
};

Scratch& scratch() {
  thread_local Scratch s;
  return s;
}

}  // namespace

AdaptiveFloat& AdaptiveFloat::operator+=(const AdaptiveFloat& o) {
  Scratch& s = scratch();
  s.ensure(FloatContext::precision());
  mpfr_add(s.t[0], lo_, o.lo_, MPFR_RNDD);
  mpfr_add(s.t[1], hi_, o.hi_, MPFR_RNDU);
  mpfr_set_prec(lo_, s.prec);
  mpfr_set_prec(hi_, s.prec);
  mpfr_set(lo_, s.t[0], MPFR_RNDD);
  mpfr_set(hi_, s.t[1], MPFR_RNDU);
  check_finite();
  return *this;
}

AdaptiveFloat& AdaptiveFloat::operator-=(const AdaptiveFloat& o) {
  Scratch& s = scratch();
  s.ensure(FloatContext::precision());
  mpfr_sub(s.t[0], lo_, o.hi_, MPFR_RNDD);
  mpfr_sub(s.t[1], hi_, o.lo_, MPFR_RNDU);
  mpfr_set_prec(lo_, s.prec);
  mpfr_set_prec(hi_, s.prec);
  mpfr_set(lo_, s.t[0], MPFR_RNDD);
  mpfr_set(hi_, s.t[1], MPFR_RNDU);
  check_finite();
  return *this;
}

AdaptiveFloat& AdaptiveFloat::operator*=(const AdaptiveFloat& o) {
  Scratch& s = scratch();
  s.ensure(FloatContext::precision());
  const bool a_nonneg = mpfr_sgn(lo_) >= 0;
  const bool b_nonneg = mpfr_sgn(o.lo_) >= 0;
  const bool a_nonpos = mpfr_sgn(hi_) <= 0;
  const bool b_nonpos = mpfr_sgn(o.hi_) <= 0;
  if (a_nonneg && b_nonneg) {
    mpfr_mul(s.t[0], lo_, o.lo_, MPFR_RNDD);
    mpfr_mul(s.t[1], hi_, o.hi_, MPFR_RNDU);
  } else if (a_nonpos && b_nonpos) {
    mpfr_mul(s.t[0], hi_, o.hi_, MPFR_RNDD);
    mpfr_mul(s.t[1], lo_, o.lo_, MPFR_RNDU);
  } else if (a_nonneg && b_nonpos) {
    mpfr_mul(s.t[0], hi_, o.lo_, MPFR_RNDD);
    mpfr_mul(s.t[1], lo_, o.hi_, MPFR_RNDU);
  } else if (a_nonpos && b_nonneg) {
    mpfr_mul(s.t[0], lo_, o.hi_, MPFR_RNDD);
    mpfr_mul(s.t[1], hi_, o.lo_, MPFR_RNDU);
  } else {
    // At least one operand straddles zero: take the hull of all products.
    mpfr_mul(s.t[0], lo_, o.lo_, MPFR_RNDD);
    mpfr_mul(s.t[2], lo_, o.hi_, MPFR_RNDD);
    mpfr_min(s.t[0], s.t[0], s.t[2], MPFR_RNDD);
    mpfr_mul(s.t[2], hi_, o.lo_, MPFR_RNDD);
    mpfr_min(s.t[0], s.t[0], s.t[2], MPFR_RNDD);
    mpfr_mul(s.t[2], hi_, o.hi_, MPFR_RNDD);
    mpfr_min(s.t[0], s.t[0], s.t[2], MPFR_RNDD);
    mpfr_mul(s.t[1], lo_, o.lo_, MPFR_RNDU);
    mpfr_mul(s.t[3], lo_, o.hi_, MPFR_RNDU);
    mpfr_max(s.t[1], s.t[1], s.t[3], MPFR_RNDU);
    mpfr_mul(s.t[3], hi_, o.lo_, MPFR_RNDU);
    mpfr_max(s.t[1], s.t[1], s.t[3], MPFR_RNDU);
    mpfr_mul(s.t[3], hi_, o.hi_, MPFR_RNDU);
    mpfr_max(s.t[1], s.t[1], s.t[3], MPFR_RNDU);
  }
  mpfr_set_prec(lo_, s.prec);
  mpfr_set_prec(hi_, s.prec);
  mpfr_set(lo_, s.t[0], MPFR_RNDD);
  mpfr_set(hi_, s.t[1], MPFR_RNDU);
  check_finite();
  return *this;
}

AdaptiveFloat& AdaptiveFloat::operator/=(const AdaptiveFloat& o) {
  if (mpfr_sgn(o.lo_) <= 0 && mpfr_sgn(o.hi_) >= 0) {
    throw IndeterminateSign("divisor enclosure contains zero");
  }
  Scratch& s = scratch();
  s.ensure(FloatContext::precision());
  // Reciprocal of o, then multiply.
  AdaptiveFloat inv;
  mpfr_ui_div(s.t[0], 1, o.hi_, MPFR_RNDD);
  mpfr_ui_div(s.t[1], 1, o.lo_, MPFR_RNDU);
  mpfr_set_prec(inv.lo_, s.prec);
  mpfr_set_prec(inv.hi_, s.prec);
  mpfr_set(inv.lo_, s.t[0], MPFR_RNDD);
  mpfr_set(inv.hi_, s.t[1], MPFR_RNDU);
  return *this *= inv;
}

AdaptiveFloat operator-(const AdaptiveFloat& a) {
  AdaptiveFloat r;
  mpfr_set_prec(r.lo_, mpfr_get_prec(a.hi_));
  mpfr_set_prec(r.hi_, mpfr_get_prec(a.lo_));
  mpfr_neg(r.lo_, a.hi_, MPFR_RNDD);
  mpfr_neg(r.hi_, a.lo_, MPFR_RNDU);
  return r;
}

bool AdaptiveFloat::is_point() const { return mpfr_equal_p(lo_, hi_) != 0; }

double AdaptiveFloat::relative_width() const {
  double lo = mpfr_get_d(lo_, MPFR_RNDN);
  double hi = mpfr_get_d(hi_, MPFR_RNDN);
  double mag = std::max(std::fabs(lo), std::fabs(hi));
  if (mag == 0.0) return 0.0;
  return (hi - lo) / mag;
}

AdaptiveFloat sqrt_enclosure(const AdaptiveFloat& w) {
  if (mpfr_sgn(w.hi_) < 0) fail(ErrorCode::InvalidRequest, "sqrt of negative value");
  AdaptiveFloat r;
  if (mpfr_sgn(w.lo_) <= 0) {
    mpfr_set_zero(r.lo_, 1);
  } else {
    mpfr_sqrt(r.lo_, w.lo_, MPFR_RNDD);
  }
  mpfr_sqrt(r.hi_, w.hi_, MPFR_RNDU);
  return r;
}

AdaptiveFloat root_enclosure(const AdaptiveFloat& w, unsigned long k) {
  if (mpfr_sgn(w.hi_) < 0) fail(ErrorCode::InvalidRequest, "root of negative value");
  AdaptiveFloat r;
  if (mpfr_sgn(w.lo_) <= 0) {
    mpfr_set_zero(r.lo_, 1);
  } else {
    mpfr_rootn_ui(r.lo_, w.lo_, k, MPFR_RNDD);
  }
  mpfr_rootn_ui(r.hi_, w.hi_, k, MPFR_RNDU);
  return r;
}

int sign(const AdaptiveFloat& x) {
  if (mpfr_sgn(x.lo()) > 0) return 1;
  if (mpfr_sgn(x.hi()) < 0) return -1;
  if (mpfr_zero_p(x.lo()) && mpfr_zero_p(x.hi())) return 0;
  throw IndeterminateSign("enclosure straddles zero");
}

AdaptiveFloat abs(const AdaptiveFloat& x) {
  int s = sign(x);
  return s < 0 ? -x : x;
}

AdaptiveFloat max(const AdaptiveFloat& a, const AdaptiveFloat& b) {
  return sign(a - b) >= 0 ? a : b;
}

AdaptiveFloat tidy(const AdaptiveFloat& x, unsigned /*bits*/) {
  if (x.is_point() && mpfr_get_prec(x.lo()) == static_cast<mpfr_prec_t>(FloatContext::precision())) {
    return x;
  }
  mpfr_t mid;
  mpfr_init2(mid, FloatContext::precision());
  mpfr_add(mid, x.lo(), x.hi(), MPFR_RNDN);
  mpfr_div_2ui(mid, mid, 1, MPFR_RNDN);
  mpq_class q;
  mpfr_exp_t e = 0;
  mpz_class m;
  e = mpfr_get_z_2exp(m.get_mpz_t(), mid);
  mpfr_clear(mid);
  q = m;
  if (e >= 0) {
    mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<unsigned long>(e));
  } else {
    mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<unsigned long>(-e));
  }
  return AdaptiveFloat::from_rational(q);
}

double to_double(const AdaptiveFloat& x) {
  mpfr_t mid;
  mpfr_init2(mid, mpfr_get_prec(x.lo()) + 1);
  mpfr_add(mid, x.lo(), x.hi(), MPFR_RNDN);
  double d = mpfr_get_d(mid, MPFR_RNDN) / 2.0;
  mpfr_clear(mid);
  return d;
}

mpq_class to_rational(const AdaptiveFloat& x) {
  auto exact = [](mpfr_srcptr v) {
    mpz_class m;
    mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), v);
    mpq_class q(m);
    if (e >= 0) {
      mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<unsigned long>(e));
    } else {
      mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<unsigned long>(-e));
    }
    return q;
  };
  mpq_class q = (exact(x.lo()) + exact(x.hi())) / 2;
  q.canonicalize();
  return q;
}

AdaptiveFloat sqrt_approx(const AdaptiveFloat& w, unsigned /*bits*/) {
  return sqrt_enclosure(w);
}

// ------------------------------------------------------------ text helpers

double log2_of(const mpq_class& q) {
  if (sgn(q) <= 0) fail(ErrorCode::InvalidRequest, "log2 of a non-positive value");
  mpfr_t v;
  mpfr_init2(v, 64);
  mpfr_set_q(v, q.get_mpq_t(), MPFR_RNDN);
  mpfr_log2(v, v, MPFR_RNDN);
  double d = mpfr_get_d(v, MPFR_RNDN);
  mpfr_clear(v);
  return d;
}

std::string to_decimal(const mpq_class& q, int digits) {
  if (digits < 0) digits = 0;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  mpq_class scaled = ::abs(q) * scale;
  // round half up on the magnitude
  mpz_class n = scaled.get_num() * 2 + scaled.get_den();
  mpz_class d = scaled.get_den() * 2;
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  std::string s = r.get_str();
  if (digits > 0) {
    if (s.size() <= static_cast<std::size_t>(digits)) {
      s.insert(0, static_cast<std::size_t>(digits) - s.size() + 1, '0');
    }
    s.insert(s.size() - static_cast<std::size_t>(digits), ".");
  }
  bool all_zero = std::all_of(s.begin(), s.end(), [](char c) { return c == '0' || c == '.'; });
  if (sgn(q) < 0 && !all_zero) s.insert(0, "-");
  return s;
}

mpq_class parse_rational(const std::string& raw) {
  std::string text;
  for (char c : raw) {
    if (!std::isspace(static_cast<unsigned char>(c))) text.push_back(c);
  }
  auto bad = [&]() -> mpq_class {
    fail(ErrorCode::ParseError, "not a number: '" + raw + "'");
  };
  if (text.empty()) return bad();
  auto slash = text.find('/');
  auto is_int = [](const std::string& s) {
    std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i >= s.size()) return false;
    return std::all_of(s.begin() + static_cast<long>(i), s.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; });
  };
  if (slash != std::string::npos) {
    std::string num = text.substr(0, slash);
    std::string den = text.substr(slash + 1);
    if (!is_int(num) || !is_int(den)) return bad();
    if (num[0] == '+') num.erase(0, 1);
    if (den[0] == '+') den.erase(0, 1);
    mpz_class n(num, 10), d(den, 10);
    if (d == 0) fail(ErrorCode::ParseError, "zero denominator in '" + raw + "'");
    mpq_class q(n, d);
    q.canonicalize();
    return q;
  }
  // decimal: [sign] digits [. digits] [e [sign] digits]
  std::size_t i = 0;
  bool neg = false;
  if (text[i] == '+' || text[i] == '-') {
    neg = text[i] == '-';
    ++i;
  }
  std::string mantissa;
  long frac_digits = 0;
  bool seen_dot = false;
  bool any_digit = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mantissa.push_back(c);
      any_digit = true;
      if (seen_dot) ++frac_digits;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (!any_digit) return bad();
  long exp10 = 0;
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') return bad();
    std::string e = text.substr(i + 1);
    if (!is_int(e) || e.size() > 7) return bad();
    exp10 = std::stol(e);
  }
  mpz_class m(mantissa, 10);
  long net = exp10 - frac_digits;
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(net < 0 ? -net : net));
  mpq_class q = net >= 0 ? mpq_class(m * p) : mpq_class(m, p);
  q.canonicalize();
  if (neg) q = -q;
  return q;
}

}  // namespace fewnomial
