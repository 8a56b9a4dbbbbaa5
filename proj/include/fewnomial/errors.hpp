#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fewnomial {

enum class ErrorCode {
  ZeroPolynomial,
  NeedsSFirst,
  NotPrimitive,
  WrongArity,
  Indeterminate,
  PrecisionExhausted,
  SingularPoint,
  AlphaUnknown,
  NotDampened,
  InvalidRequest,
  DegreeTooLarge,
  ParseError,
  InvariantViolation,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Thrown by AdaptiveFloat when an enclosure straddles zero.  Callers that
// can recompute at a higher precision catch this; everything else sees it
// converted to PrecisionExhausted.
class IndeterminateSign : public Error {
 public:
  explicit IndeterminateSign(const std::string& what)
      : Error(ErrorCode::Indeterminate, what) {}
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace fewnomial
