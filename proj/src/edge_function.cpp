#include "ideflow/edge_function.hpp"

#include <atomic>
#include <cassert>
#include <climits>
#include <cstdio>

namespace ideflow {

namespace {

std::atomic<uint64_t> g_overflow_events{0};

void note_overflow() {
  if (g_overflow_events.fetch_add(1, std::memory_order_relaxed) == 0) {
    std::fprintf(stderr,
                 "warning: integer overflow in edge-function arithmetic; "
                 "result degraded to bottom (further warnings suppressed)\n");
  }
}

bool checked_mul(long long a, long long b, long long* out) {
  return !__builtin_mul_overflow(a, b, out);
}

bool checked_add(long long a, long long b, long long* out) {
  return !__builtin_add_overflow(a, b, out);
}

// m*l + b with overflow detection.
bool eval_linear(long long m, long long b, long long l, long long* out) {
  long long t;
  return checked_mul(m, l, &t) && checked_add(t, b, out);
}

bool eval_div(long long l, long long k, long long* out) {
  assert(k != 0);
  if (l == LLONG_MIN && k == -1) return false;
  *out = l / k;
  return true;
}

}  // namespace

uint64_t overflow_event_count() {
  return g_overflow_events.load(std::memory_order_relaxed);
}

void reset_overflow_events() {
  g_overflow_events.store(0, std::memory_order_relaxed);
}

std::string EdgeFn::to_string() const {
  switch (kind) {
    case Kind::AllTop:    return "top";
    case Kind::AllBottom: return "bottom";
    case Kind::Identity:  return "id";
    case Kind::Constant:  return "const(" + std::to_string(b) + ")";
    case Kind::Linear:
      return "linear(" + std::to_string(m) + "*l+" + std::to_string(b) + ")";
    case Kind::DivBy:     return "div(" + std::to_string(m) + ")";
  }
  return "?";
}

EdgeFn EdgeFn::linear(long long m, long long b) {
  if (m == 0) return constant(b);
  if (m == 1 && b == 0) return identity();
  return EdgeFn{Kind::Linear, m, b};
}

EdgeFn EdgeFn::div_by(long long k) {
  assert(k != 0);
  if (k == 1) return identity();
  if (k == -1) return linear(-1, 0);
  return EdgeFn{Kind::DivBy, k, 0};
}

EdgeFn compose(const EdgeFn& f, const EdgeFn& g) {
  using K = EdgeFn::Kind;
  if (f.kind == K::Identity) return g;
  if (g.kind == K::Identity) return f;
  // g ignores its input or forces a fixed result regardless of f.
  if (g.kind == K::Constant || g.kind == K::AllTop || g.kind == K::AllBottom) {
    return g;
  }
  // g is strict (Linear or DivBy) from here on.
  switch (f.kind) {
    case K::AllTop:
      return EdgeFn::all_top();
    case K::AllBottom:
      return EdgeFn::all_bottom();
    case K::Constant: {
      long long out;
      bool ok = g.kind == K::Linear ? eval_linear(g.m, g.b, f.b, &out)
                                    : eval_div(f.b, g.m, &out);
      if (!ok) {
        note_overflow();
        return EdgeFn::all_bottom();
      }
      return EdgeFn::constant(out);
    }
    case K::Linear: {
      if (g.kind == K::DivBy) return EdgeFn::all_bottom();
      long long m, b;
      if (!checked_mul(g.m, f.m, &m) || !eval_linear(g.m, g.b, f.b, &b)) {
        note_overflow();
        return EdgeFn::all_bottom();
      }
      return EdgeFn::linear(m, b);
    }
    case K::DivBy:
      // trunc division composes with nothing representable here.
      return EdgeFn::all_bottom();
    default:
      return EdgeFn::all_bottom();
  }
}

EdgeFn meet_edge(const EdgeFn& a, const EdgeFn& b) {
  if (a == b) return a;
  if (a.kind == EdgeFn::Kind::AllTop) return b;
  if (b.kind == EdgeFn::Kind::AllTop) return a;
  // Distinct constants meet to bottom pointwise; any other mixed pair has no
  // exact representative and is over-approximated the same way.
  return EdgeFn::all_bottom();
}

Value apply(const EdgeFn& f, const Value& v) {
  switch (f.kind) {
    case EdgeFn::Kind::AllTop:
      return Value::top();
    case EdgeFn::Kind::AllBottom:
      return Value::bottom();
    case EdgeFn::Kind::Identity:
      return v;
    case EdgeFn::Kind::Constant:
      return Value::constant(f.b);
    case EdgeFn::Kind::Linear: {
      if (!v.is_const()) return v;
      long long out;
      if (!eval_linear(f.m, f.b, v.num, &out)) {
        note_overflow();
        return Value::bottom();
      }
      return Value::constant(out);
    }
    case EdgeFn::Kind::DivBy: {
      if (!v.is_const()) return v;
      long long out;
      if (!eval_div(v.num, f.m, &out)) {
        note_overflow();
        return Value::bottom();
      }
      return Value::constant(out);
    }
  }
  return Value::bottom();
}

}  // namespace ideflow
