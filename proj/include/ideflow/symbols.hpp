#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace ideflow {

using SymbolId = uint32_t;
inline constexpr SymbolId kNoSymbol = UINT32_MAX;

// Data-flow fact identity. Locals, field accesses, and array elements are
// qualified by the procedure owning the base local; statics are global.
// Ret is the synthetic per-procedure return-value carrier.
struct Symbol {
  enum class Kind : uint8_t { Lambda, Local, Field, Static, ArrayElem, Ret };
  Kind kind = Kind::Lambda;
  int proc = -1;        // Local/Field/ArrayElem/Ret
  std::string base;     // local name, or class name for Static
  std::string member;   // field name (Field/Static)
  long long index = 0;  // ArrayElem index

  bool operator==(const Symbol&) const = default;
  bool is_heap() const {
    return kind == Kind::Field || kind == Kind::Static ||
           kind == Kind::ArrayElem;
  }
  std::string to_string() const;

  static Symbol lambda() { return Symbol{}; }
  static Symbol local(int proc, std::string name);
  static Symbol field(int proc, std::string base, std::string member);
  static Symbol static_field(std::string klass, std::string member);
  static Symbol array_elem(int proc, std::string base, long long index);
  static Symbol ret(int proc);
};

struct SymbolHash {
  size_t operator()(const Symbol& s) const;
};

// Interning table. Lambda is always id 0. Interning happens during problem
// construction; afterwards the table is read-only and safe to share.
class SymbolTable {
 public:
  SymbolTable();

  SymbolId intern(const Symbol& s);
  SymbolId find(const Symbol& s) const;  // kNoSymbol if absent
  const Symbol& get(SymbolId id) const { return symbols_[id]; }
  size_t size() const { return symbols_.size(); }

  static constexpr SymbolId kLambda = 0;

 private:
  std::vector<Symbol> symbols_;
  std::unordered_map<Symbol, SymbolId, SymbolHash> index_;
};

}  // namespace ideflow
