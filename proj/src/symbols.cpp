#include "ideflow/symbols.hpp"

#include <cassert>

namespace ideflow {

std::string Symbol::to_string() const {
  switch (kind) {
    case Kind::Lambda:    return "<lambda>";
    case Kind::Local:     return base;
    case Kind::Field:     return base + "." + member;
    case Kind::Static:    return "@" + base + "." + member;
    case Kind::ArrayElem: return base + "[" + std::to_string(index) + "]";
    case Kind::Ret:       return "<ret>";
  }
  return "?";
}

Symbol Symbol::local(int proc, std::string name) {
  Symbol s;
  s.kind = Kind::Local;
  s.proc = proc;
  s.base = std::move(name);
  return s;
}

Symbol Symbol::field(int proc, std::string base, std::string member) {
  Symbol s;
  s.kind = Kind::Field;
  s.proc = proc;
  s.base = std::move(base);
  s.member = std::move(member);
  return s;
}

Symbol Symbol::static_field(std::string klass, std::string member) {
  Symbol s;
  s.kind = Kind::Static;
  s.base = std::move(klass);
  s.member = std::move(member);
  return s;
}

Symbol Symbol::array_elem(int proc, std::string base, long long index) {
  Symbol s;
  s.kind = Kind::ArrayElem;
  s.proc = proc;
  s.base = std::move(base);
  s.index = index;
  return s;
}

Symbol Symbol::ret(int proc) {
  Symbol s;
  s.kind = Kind::Ret;
  s.proc = proc;
  return s;
}

size_t SymbolHash::operator()(const Symbol& s) const {
  size_t h = static_cast<size_t>(s.kind);
  auto mix = [&h](size_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  };
  mix(static_cast<size_t>(s.proc));
  mix(std::hash<std::string>{}(s.base));
  mix(std::hash<std::string>{}(s.member));
  mix(static_cast<size_t>(s.index));
  return h;
}

SymbolTable::SymbolTable() {
  SymbolId id = intern(Symbol::lambda());
  assert(id == kLambda);
  (void)id;
}

SymbolId SymbolTable::intern(const Symbol& s) {
  auto it = index_.find(s);
  if (it != index_.end()) return it->second;
  SymbolId id = static_cast<SymbolId>(symbols_.size());
  symbols_.push_back(s);
  index_.emplace(s, id);
  return id;
}

SymbolId SymbolTable::find(const Symbol& s) const {
  auto it = index_.find(s);
  return it == index_.end() ? kNoSymbol : it->second;
}

}  // namespace ideflow
