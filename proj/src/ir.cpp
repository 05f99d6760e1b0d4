#include "ideflow/ir.hpp"

#include <cassert>
#include <deque>
#include <sstream>

namespace ideflow {

const char* opcode_name(Opcode op) {
  switch (op) {
    case Opcode::ConstAssign: return "ConstAssign";
    case Opcode::LocalCopy:   return "LocalCopy";
    case Opcode::Binop:       return "Binop";
    case Opcode::FieldLoad:   return "FieldLoad";
    case Opcode::FieldStore:  return "FieldStore";
    case Opcode::StaticLoad:  return "StaticLoad";
    case Opcode::StaticStore: return "StaticStore";
    case Opcode::ArrayLoad:   return "ArrayLoad";
    case Opcode::ArrayStore:  return "ArrayStore";
    case Opcode::New:         return "New";
    case Opcode::Call:        return "Call";
    case Opcode::Return:      return "Return";
    case Opcode::Branch:      return "Branch";
    case Opcode::Goto:        return "Goto";
    case Opcode::Nop:         return "Nop";
  }
  return "?";
}

std::string SymbolSpec::to_string() const {
  switch (kind) {
    case Kind::Local:     return base;
    case Kind::Field:     return base + "." + member;
    case Kind::Static:    return "@" + base + "." + member;
    case Kind::ArrayElem: return base + "[" + std::to_string(index) + "]";
  }
  return "?";
}

std::string ExpectedValue::to_string() const {
  switch (kind) {
    case Kind::Top:    return "top";
    case Kind::Bottom: return "bottom";
    case Kind::Const:  return std::to_string(constant);
  }
  return "?";
}

bool Statement::structurally_equal(const Statement& o) const {
  return op == o.op && id == o.id && target == o.target && source == o.source &&
         field == o.field && klass == o.klass && literal == o.literal &&
         binop == o.binop && callee == o.callee && args == o.args &&
         label == o.label && label_target == o.label_target && cond == o.cond;
}

bool Procedure::structurally_equal(const Procedure& o) const {
  if (name != o.name || params != o.params || locals != o.locals ||
      expectations != o.expectations || body.size() != o.body.size()) {
    return false;
  }
  for (size_t i = 0; i < body.size(); ++i) {
    if (!body[i].structurally_equal(o.body[i])) return false;
  }
  return true;
}

const Procedure* Program::find_proc(const std::string& name) const {
  int i = proc_index(name);
  return i < 0 ? nullptr : &procs[i];
}

int Program::proc_index(const std::string& name) const {
  for (size_t i = 0; i < procs.size(); ++i) {
    if (procs[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

bool Program::structurally_equal(const Program& o) const {
  if (procs.size() != o.procs.size()) return false;
  for (size_t i = 0; i < procs.size(); ++i) {
    if (!procs[i].structurally_equal(o.procs[i])) return false;
  }
  return true;
}

void build_cfg(Procedure& proc) {
  assert(!proc.body.empty() && proc.body.back().op == Opcode::Return);
  int n = proc.node_count();
  proc.succ.assign(n, {});
  proc.pred.assign(n, {});

  auto add_edge = [&proc](int from, int to) {
    proc.succ[from].push_back(to);
    proc.pred[to].push_back(from);
  };

  add_edge(proc.start_node(), proc.stmt_node(0));
  for (int i = 0; i < static_cast<int>(proc.body.size()); ++i) {
    const Statement& s = proc.body[i];
    int at = proc.stmt_node(i);
    switch (s.op) {
      case Opcode::Return:
        add_edge(at, proc.exit_node());
        break;
      case Opcode::Goto:
        add_edge(at, proc.stmt_node(s.label_target));
        break;
      case Opcode::Branch:
        // Fallthrough first, then the taken edge; conditions are never
        // evaluated, both successors stay feasible.
        add_edge(at, proc.stmt_node(i + 1));
        add_edge(at, proc.stmt_node(s.label_target));
        break;
      default:
        add_edge(at, proc.stmt_node(i + 1));
        break;
    }
  }

  proc.reachable.assign(n, false);
  std::deque<int> work{proc.start_node()};
  proc.reachable[proc.start_node()] = true;
  while (!work.empty()) {
    int at = work.front();
    work.pop_front();
    for (int nx : proc.succ[at]) {
      if (!proc.reachable[nx]) {
        proc.reachable[nx] = true;
        work.push_back(nx);
      }
    }
  }
}

namespace {

void print_statement(std::ostringstream& out, const Statement& s) {
  switch (s.op) {
    case Opcode::ConstAssign:
      out << "  " << s.target << " = " << s.literal;
      break;
    case Opcode::LocalCopy:
      out << "  " << s.target << " = " << s.source;
      break;
    case Opcode::Binop:
      out << "  " << s.target << " = " << s.source << " " << s.binop << " "
          << s.literal;
      break;
    case Opcode::FieldLoad:
      out << "  " << s.target << " = " << s.source << "." << s.field;
      break;
    case Opcode::FieldStore:
      out << "  " << s.target << "." << s.field << " = " << s.source;
      break;
    case Opcode::StaticLoad:
      out << "  " << s.target << " = @" << s.klass << "." << s.field;
      break;
    case Opcode::StaticStore:
      out << "  @" << s.klass << "." << s.field << " = " << s.source;
      break;
    case Opcode::ArrayLoad:
      out << "  " << s.target << " = " << s.source << "[" << s.literal << "]";
      break;
    case Opcode::ArrayStore:
      out << "  " << s.target << "[" << s.literal << "] = " << s.source;
      break;
    case Opcode::New:
      out << "  " << s.target << " = new";
      break;
    case Opcode::Call:
      out << "  ";
      if (!s.target.empty()) out << s.target << " = ";
      out << "call " << s.callee << "(";
      for (size_t i = 0; i < s.args.size(); ++i) {
        if (i) out << ", ";
        out << s.args[i];
      }
      out << ")";
      break;
    case Opcode::Return:
      out << "  return";
      if (!s.source.empty()) out << " " << s.source;
      break;
    case Opcode::Branch:
      out << "  if " << (s.cond.empty() ? "*" : s.cond) << " goto " << s.label;
      break;
    case Opcode::Goto:
      out << "  goto " << s.label;
      break;
    case Opcode::Nop:
      out << s.label << ":";
      break;
  }
  out << "\n";
}

}  // namespace

std::string print_program(const Program& prog) {
  std::ostringstream out;
  bool first = true;
  for (const Procedure& p : prog.procs) {
    if (!first) out << "\n";
    first = false;
    out << "proc " << p.name << "(";
    for (size_t i = 0; i < p.params.size(); ++i) {
      if (i) out << ", ";
      out << p.params[i];
    }
    out << ") {\n";
    for (const Statement& s : p.body) {
      print_statement(out, s);
      for (const Expectation& e : p.expectations) {
        if (e.stmt_id == s.id) {
          out << "  // expect " << e.symbol.to_string() << " = "
              << e.value.to_string() << "\n";
        }
      }
    }
    out << "}\n";
  }
  return out.str();
}

}  // namespace ideflow
