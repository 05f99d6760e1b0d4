#pragma once

#include <cstdint>
#include <string>

#include "ideflow/lattice.hpp"

namespace ideflow {

// Closed family of environment transformers over the flat constant lattice:
//
//   AllTop     l -> top
//   AllBottom  l -> bottom
//   Identity   l -> l
//   Constant   l -> c
//   Linear     l -> m*l + b           (m != 0, (m,b) != (1,0))
//   DivBy      l -> trunc(l / k)      (|k| > 1; evaluated exactly only when
//                                      composed after a Constant)
//
// Constructors normalize: linear(1,0) is Identity, linear(0,b) is
// Constant(b), div_by(1) is Identity, div_by(-1) is Linear(-1,0).
// The family is closed under compose and meet; compose is exact except for
// compositions after DivBy, which degrade to AllBottom (sound, documented).
struct EdgeFn {
  enum class Kind : uint8_t { AllTop, AllBottom, Identity, Constant, Linear,
                              DivBy };
  Kind kind = Kind::AllTop;
  long long m = 0;  // Linear slope / DivBy divisor
  long long b = 0;  // Linear intercept / Constant value

  bool operator==(const EdgeFn&) const = default;
  bool is_top() const { return kind == Kind::AllTop; }
  std::string to_string() const;

  static EdgeFn all_top() { return EdgeFn{}; }
  static EdgeFn all_bottom() { return EdgeFn{Kind::AllBottom, 0, 0}; }
  static EdgeFn identity() { return EdgeFn{Kind::Identity, 0, 0}; }
  static EdgeFn constant(long long c) { return EdgeFn{Kind::Constant, 0, c}; }
  static EdgeFn linear(long long m, long long b);
  static EdgeFn div_by(long long k);
};

// compose(f, g) applies f first, then g (g after f).
EdgeFn compose(const EdgeFn& f, const EdgeFn& g);

// Pointwise meet, over-approximated to AllBottom where the family has no
// exact representative. AllTop is neutral, AllBottom absorbing.
EdgeFn meet_edge(const EdgeFn& a, const EdgeFn& b);

Value apply(const EdgeFn& f, const Value& v);

// Arithmetic that leaves the lattice (signed overflow) degrades the result
// to bottom and bumps this counter; the first event logs a warning.
uint64_t overflow_event_count();
void reset_overflow_events();

}  // namespace ideflow
