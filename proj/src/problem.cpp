#include "ideflow/problem.hpp"

#include <algorithm>

namespace ideflow {

namespace {

bool contains(const std::vector<SymbolId>& v, SymbolId d) {
  return std::binary_search(v.begin(), v.end(), d);
}

}  // namespace

bool StmtRelevance::flow_identity_for(SymbolId d) const {
  return !contains(flow_reads, d) && !contains(flow_writes, d);
}

bool StmtRelevance::edge_identity_for(SymbolId d) const {
  return !contains(edge_reads, d) && !contains(edge_writes, d);
}

SymbolId Problem::resolve_spec(int proc, const SymbolSpec& spec) const {
  switch (spec.kind) {
    case SymbolSpec::Kind::Local:
      return symtab_.find(Symbol::local(proc, spec.base));
    case SymbolSpec::Kind::Field:
      return symtab_.find(Symbol::field(proc, spec.base, spec.member));
    case SymbolSpec::Kind::Static:
      return symtab_.find(Symbol::static_field(spec.base, spec.member));
    case SymbolSpec::Kind::ArrayElem:
      return symtab_.find(Symbol::array_elem(proc, spec.base, spec.index));
  }
  return kNoSymbol;
}

std::vector<SymbolId> Problem::query_universe(int proc) const {
  std::vector<SymbolId> out;
  for (SymbolId d = 0; d < symtab_.size(); ++d) {
    const Symbol& sym = symtab_.get(d);
    bool local_here = sym.kind == Symbol::Kind::Local && sym.proc == proc;
    if (local_here || sym.is_heap()) out.push_back(d);
  }
  return out;
}

}  // namespace ideflow
