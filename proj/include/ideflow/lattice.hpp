#pragma once

#include <cstdint>
#include <string>

namespace ideflow {

// Flat constant lattice: Top (no reaching definition observed) above every
// Const(c), Bottom (conflicting definitions) below everything.
struct Value {
  enum class Kind : uint8_t { Top, Bottom, Const };
  Kind kind = Kind::Top;
  long long num = 0;

  bool operator==(const Value&) const = default;
  bool is_top() const { return kind == Kind::Top; }
  bool is_bottom() const { return kind == Kind::Bottom; }
  bool is_const() const { return kind == Kind::Const; }

  static Value top() { return Value{}; }
  static Value bottom() { return Value{Kind::Bottom, 0}; }
  static Value constant(long long c) { return Value{Kind::Const, c}; }

  std::string to_string() const {
    switch (kind) {
      case Kind::Top:    return "top";
      case Kind::Bottom: return "bottom";
      case Kind::Const:  return std::to_string(num);
    }
    return "?";
  }
};

inline Value meet_value(const Value& a, const Value& b) {
  if (a.is_top()) return b;
  if (b.is_top()) return a;
  if (a.is_bottom() || b.is_bottom()) return Value::bottom();
  return a.num == b.num ? a : Value::bottom();
}

// True when a is at or below b in the lattice order.
inline bool value_leq(const Value& a, const Value& b) {
  return meet_value(a, b) == a;
}

}  // namespace ideflow
