#pragma once

#include <string>

#include <gmpxx.h>

namespace fewnomial {

// Interval with rational endpoints a <= b; each end open or closed.
struct CountQuery {
  mpq_class a;
  mpq_class b;
  bool a_open = false;
  bool b_open = false;

  static CountQuery open(mpq_class a, mpq_class b) { return {std::move(a), std::move(b), true, true}; }
  static CountQuery closed(mpq_class a, mpq_class b) {
    return {std::move(a), std::move(b), false, false};
  }

  bool contains(const mpq_class& x) const {
    if (a_open ? x <= a : x < a) return false;
    if (b_open ? x >= b : x > b) return false;
    return true;
  }

  std::string str() const {
    return std::string(a_open ? "(" : "[") + a.get_str() + "," + b.get_str() + (b_open ? ")" : "]");
  }
};

}  // namespace fewnomial
