#include "ideflow/clients.hpp"

#include <algorithm>

namespace ideflow {

namespace {

void push_unique(std::vector<SymbolId>& v, SymbolId d) {
  if (std::find(v.begin(), v.end(), d) == v.end()) v.push_back(d);
}

bool contains(const std::vector<SymbolId>& sorted, SymbolId d) {
  return std::binary_search(sorted.begin(), sorted.end(), d);
}

}  // namespace

void GenKillClient::build() {
  const Program& prog = program();
  aliases_ = compute_aliases(prog);
  int nprocs = static_cast<int>(prog.procs.size());
  for (int p = 0; p < nprocs; ++p) {
    for (const std::string& name : prog.procs[p].locals) {
      symtab_.intern(Symbol::local(p, name));
    }
    symtab_.intern(Symbol::ret(p));
  }

  auto local_id = [this](int p, const std::string& name) {
    return symtab_.intern(Symbol::local(p, name));
  };
  // Store targets cover every local that may point to the written site,
  // across procedures; the alias set always contains the base itself.
  auto expand_field = [&](int p, const std::string& base,
                          const std::string& field) {
    std::vector<SymbolId> out;
    for (const auto& ref : aliases_.aliases_of(p, base)) {
      out.push_back(symtab_.intern(Symbol::field(ref.proc, ref.name, field)));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };
  auto expand_elem = [&](int p, const std::string& base, long long index) {
    std::vector<SymbolId> out;
    for (const auto& ref : aliases_.aliases_of(p, base)) {
      out.push_back(
          symtab_.intern(Symbol::array_elem(ref.proc, ref.name, index)));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };

  info_.resize(nprocs);
  for (int p = 0; p < nprocs; ++p) {
    const Procedure& proc = prog.procs[p];
    info_[p].resize(proc.body.size());
    for (const Statement& s : proc.body) {
      StmtInfo& fo = info_[p][s.id];
      switch (s.op) {
        case Opcode::ConstAssign:
          fo.target = local_id(p, s.target);
          break;
        case Opcode::Binop:
        case Opcode::LocalCopy:
          fo.target = local_id(p, s.target);
          fo.source = local_id(p, s.source);
          break;
        case Opcode::FieldLoad:
          fo.target = local_id(p, s.target);
          fo.heap_source =
              symtab_.intern(Symbol::field(p, s.source, s.field));
          break;
        case Opcode::FieldStore:
          fo.source = local_id(p, s.source);
          fo.heap_targets = expand_field(p, s.target, s.field);
          break;
        case Opcode::StaticLoad:
          fo.target = local_id(p, s.target);
          fo.heap_source =
              symtab_.intern(Symbol::static_field(s.klass, s.field));
          break;
        case Opcode::StaticStore:
          fo.source = local_id(p, s.source);
          fo.heap_targets = {
              symtab_.intern(Symbol::static_field(s.klass, s.field))};
          break;
        case Opcode::ArrayLoad:
          fo.target = local_id(p, s.target);
          fo.heap_source =
              symtab_.intern(Symbol::array_elem(p, s.source, s.literal));
          break;
        case Opcode::ArrayStore:
          fo.source = local_id(p, s.source);
          fo.heap_targets = expand_elem(p, s.target, s.literal);
          break;
        case Opcode::Call: {
          int q = prog.proc_index(s.callee);
          for (const std::string& a : s.args) fo.actuals.push_back(local_id(p, a));
          for (const std::string& f : prog.procs[q].params) {
            fo.formals.push_back(local_id(q, f));
          }
          fo.callee_ret = symtab_.intern(Symbol::ret(q));
          if (!s.target.empty()) fo.target = local_id(p, s.target);
          break;
        }
        case Opcode::Return:
          if (!s.source.empty()) {
            fo.source = local_id(p, s.source);
            fo.ret_carrier = symtab_.intern(Symbol::ret(p));
          }
          break;
        case Opcode::New:
        case Opcode::Branch:
        case Opcode::Goto:
        case Opcode::Nop:
          break;
      }
      declare_relevance(s, fo, fo.relevance);
    }
  }
}

void GenKillClient::flow_normal(int proc, int node, SymbolId d,
                                std::vector<SymbolId>& out) const {
  out.clear();
  if (node == 0) {  // start-node edge carries everything unchanged
    out.push_back(d);
    return;
  }
  const Statement& s = program().procs[proc].body[node - 1];
  const StmtInfo& fo = info_[proc][node - 1];
  switch (s.op) {
    case Opcode::ConstAssign:
      out.push_back(d);
      if (d == SymbolTable::kLambda) out.push_back(fo.target);
      return;
    case Opcode::Binop:
    case Opcode::LocalCopy:
      if (fo.source == fo.target) {  // a = a + 1: value update, fact kept
        out.push_back(d);
        return;
      }
      if (d == fo.source) {
        out.push_back(d);
        out.push_back(fo.target);
        return;
      }
      if (d == fo.target) return;
      out.push_back(d);
      return;
    case Opcode::FieldLoad:
    case Opcode::StaticLoad:
    case Opcode::ArrayLoad:
      if (d == fo.heap_source) {
        out.push_back(d);
        out.push_back(fo.target);
        return;
      }
      if (d == fo.target) return;
      out.push_back(d);
      return;
    case Opcode::FieldStore:
    case Opcode::StaticStore:
    case Opcode::ArrayStore:
      if (d == fo.source) {
        out.push_back(d);
        for (SymbolId t : fo.heap_targets) out.push_back(t);
        return;
      }
      if (contains(fo.heap_targets, d)) return;
      out.push_back(d);
      return;
    case Opcode::Return:
      if (fo.source != kNoSymbol) {
        if (d == fo.source) {
          out.push_back(d);
          out.push_back(fo.ret_carrier);
          return;
        }
        if (d == fo.ret_carrier) return;
      }
      out.push_back(d);
      return;
    default:  // New, Branch, Goto, Nop
      out.push_back(d);
      return;
  }
}

void GenKillClient::flow_call(int caller, int call_stmt, SymbolId d,
                              std::vector<SymbolId>& out) const {
  out.clear();
  if (d == SymbolTable::kLambda || symtab_.get(d).is_heap()) {
    out.push_back(d);
    return;
  }
  const StmtInfo& fo = info_[caller][call_stmt];
  for (size_t i = 0; i < fo.actuals.size(); ++i) {
    if (fo.actuals[i] == d) push_unique(out, fo.formals[i]);
  }
}

void GenKillClient::flow_call_inverse(int caller, int call_stmt, SymbolId dc,
                                      std::vector<SymbolId>& out) const {
  out.clear();
  if (dc == SymbolTable::kLambda || symtab_.get(dc).is_heap()) {
    out.push_back(dc);
    return;
  }
  const StmtInfo& fo = info_[caller][call_stmt];
  for (size_t i = 0; i < fo.formals.size(); ++i) {
    if (fo.formals[i] == dc) push_unique(out, fo.actuals[i]);
  }
}

void GenKillClient::flow_return(int caller, int call_stmt, SymbolId d_exit,
                                std::vector<SymbolId>& out) const {
  out.clear();
  if (d_exit == SymbolTable::kLambda || symtab_.get(d_exit).is_heap()) {
    out.push_back(d_exit);
    return;
  }
  const StmtInfo& fo = info_[caller][call_stmt];
  if (d_exit == fo.callee_ret && fo.target != kNoSymbol) {
    out.push_back(fo.target);
  }
}

void GenKillClient::flow_call_to_return(int caller, int call_stmt, SymbolId d,
                                        std::vector<SymbolId>& out) const {
  out.clear();
  if (d == SymbolTable::kLambda) {
    out.push_back(d);
    return;
  }
  const StmtInfo& fo = info_[caller][call_stmt];
  for (SymbolId a : fo.actuals) {
    if (a == d) return;  // passed into the callee; the summary brings results
  }
  out.push_back(d);
}

EdgeFn GenKillClient::edge_normal(int proc, int node, SymbolId din,
                                  SymbolId dout) const {
  if (node == 0) return EdgeFn::identity();
  const Statement& s = program().procs[proc].body[node - 1];
  const StmtInfo& fo = info_[proc][node - 1];
  switch (s.op) {
    case Opcode::ConstAssign:
      if (din == SymbolTable::kLambda && dout == fo.target) {
        return const_gen_edge(s.literal);
      }
      if (din == fo.target && dout == fo.target) {
        return const_update_edge(s.literal);
      }
      return EdgeFn::identity();
    case Opcode::Binop:
      if (din == fo.source && dout == fo.target) {
        return binop_edge(s.binop, s.literal);
      }
      return EdgeFn::identity();
    default:
      return EdgeFn::identity();
  }
}

EdgeFn GenKillClient::edge_call(int, int, SymbolId, SymbolId) const {
  return EdgeFn::identity();
}

EdgeFn GenKillClient::edge_return(int, int, SymbolId, SymbolId) const {
  return EdgeFn::identity();
}

EdgeFn GenKillClient::edge_call_to_return(int, int, SymbolId, SymbolId) const {
  return EdgeFn::identity();
}

const StmtRelevance& GenKillClient::relevance(int proc, int stmt) const {
  return info_[proc][stmt].relevance;
}

bool GenKillClient::call_relevant(int caller, int call_stmt, SymbolId d) const {
  const StmtInfo& fo = info_[caller][call_stmt];
  if (d == fo.target) return true;
  for (SymbolId a : fo.actuals) {
    if (a == d) return true;
  }
  return false;
}

namespace {

// Fact-motion relevance shared by both clients: statements where d appears,
// disappears, or spawns another fact. Constant assignments and self-binops
// are excluded here because the clients disagree on them.
bool motion_relevance(const Statement& s, const StmtInfo& fo,
                      StmtRelevance& out) {
  switch (s.op) {
    case Opcode::Binop:
    case Opcode::LocalCopy:
      if (fo.source == fo.target) return false;
      out.flow_reads = {fo.source};
      out.flow_writes = {fo.target};
      return true;
    case Opcode::FieldLoad:
    case Opcode::StaticLoad:
    case Opcode::ArrayLoad:
      out.flow_reads = {fo.heap_source};
      out.flow_writes = {fo.target};
      return true;
    case Opcode::FieldStore:
    case Opcode::StaticStore:
    case Opcode::ArrayStore:
      out.flow_reads = {fo.source};
      out.flow_writes = fo.heap_targets;
      return true;
    case Opcode::Return:
      if (fo.source == kNoSymbol) return false;
      out.flow_reads = {fo.source};
      out.flow_writes = {fo.ret_carrier};
      return true;
    default:
      return false;
  }
}

}  // namespace

EdgeFn LcpProblem::const_gen_edge(long long c) const {
  return EdgeFn::constant(c);
}

EdgeFn LcpProblem::const_update_edge(long long c) const {
  return EdgeFn::constant(c);
}

EdgeFn LcpProblem::binop_edge(char op, long long k) const {
  switch (op) {
    case '+':
      return EdgeFn::linear(1, k);
    case '-':
      return EdgeFn::linear(1, -k);
    case '*':
      return EdgeFn::linear(k, 0);
    default:
      return EdgeFn::div_by(k);
  }
}

void LcpProblem::declare_relevance(const Statement& s, const StmtInfo& fo,
                                   StmtRelevance& out) const {
  if (motion_relevance(s, fo, out)) {
    if (s.op == Opcode::Binop) {  // target's value is computed from source
      out.edge_reads = {fo.source};
      out.edge_writes = {fo.target};
    }
    return;
  }
  switch (s.op) {
    case Opcode::ConstAssign:
      // Reassignment: the fact survives but its value is remapped.
      out.flow_writes = {fo.target};
      out.edge_writes = {fo.target};
      out.generator = true;
      return;
    case Opcode::Binop:  // a = a op k: pure value update
      out.edge_reads = {fo.target};
      out.edge_writes = {fo.target};
      return;
    default:
      return;
  }
}

EdgeFn TaintProblem::const_gen_edge(long long) const {
  return EdgeFn::all_bottom();
}

EdgeFn TaintProblem::const_update_edge(long long) const {
  return EdgeFn::identity();
}

EdgeFn TaintProblem::binop_edge(char, long long) const {
  return EdgeFn::identity();
}

void TaintProblem::declare_relevance(const Statement& s, const StmtInfo& fo,
                                     StmtRelevance& out) const {
  motion_relevance(s, fo, out);
  // Reassignments and value updates are invisible: a's taint is unchanged
  // by a = 3 (a already exists) and by a = a + 1 (no value domain).
  if (s.op == Opcode::ConstAssign) out.generator = true;
}

}  // namespace ideflow
