#pragma once

#include <cstdint>

namespace fewnomial {

// Tally of field operations and sign decisions charged by one solve or
// count invocation.  This is the arithmetic-complexity measure: bignum bit
// costs are not represented here.
struct OpCounter {
  std::uint64_t mul = 0;
  std::uint64_t div = 0;
  std::uint64_t add = 0;
  std::uint64_t cmp = 0;
  // Evaluations of a function or its derivative requested by HYBRID.
  std::uint64_t evals = 0;

  std::uint64_t total() const { return mul + div + add + cmp; }

  OpCounter& operator+=(const OpCounter& o) {
    mul += o.mul;
    div += o.div;
    add += o.add;
    cmp += o.cmp;
    evals += o.evals;
    return *this;
  }
};

}  // namespace fewnomial
