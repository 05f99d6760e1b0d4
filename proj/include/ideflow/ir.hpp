#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ideflow {

enum class Opcode : uint8_t {
  ConstAssign,  // x = 5
  LocalCopy,    // x = y
  Binop,        // x = y <op> 5   (op: + - * /)
  FieldLoad,    // x = y.f
  FieldStore,   // x.f = y
  StaticLoad,   // x = @C.f
  StaticStore,  // @C.f = y
  ArrayLoad,    // x = a[3]
  ArrayStore,   // a[3] = y
  New,          // x = new
  Call,         // x = call f(a, b)  or  call f(a)
  Return,       // return x  or  return
  Branch,       // if * goto L  or  if x goto L
  Goto,         // goto L
  Nop,          // label anchor "L:"
};

const char* opcode_name(Opcode op);

// Textual reference to an analyzable symbol, as written in queries and
// "// expect" annotations. Resolution to interned ids happens per client.
struct SymbolSpec {
  enum class Kind : uint8_t { Local, Field, Static, ArrayElem };
  Kind kind = Kind::Local;
  std::string base;    // local name, or class name for Static
  std::string member;  // field name (Field/Static)
  long long index = 0; // ArrayElem index literal

  bool operator==(const SymbolSpec&) const = default;
  std::string to_string() const;
};

struct ExpectedValue {
  enum class Kind : uint8_t { Top, Bottom, Const };
  Kind kind = Kind::Top;
  long long constant = 0;

  bool operator==(const ExpectedValue&) const = default;
  std::string to_string() const;
};

// Attached to the statement it annotates; asserts the symbol's lattice value
// at the program point immediately after that statement.
struct Expectation {
  int stmt_id = -1;
  SymbolSpec symbol;
  ExpectedValue value;

  bool operator==(const Expectation&) const = default;
};

struct Statement {
  Opcode op = Opcode::Nop;
  int id = -1;              // index within the procedure body
  std::string target;       // defined local / store base / Nop label owner
  std::string source;       // source local (copies, stores, return value)
  std::string field;        // field name (field/static ops)
  std::string klass;        // class name (static ops)
  long long literal = 0;    // const value, binop rhs literal, array index
  char binop = 0;           // '+', '-', '*', '/'
  std::string callee;       // call target procedure
  std::vector<std::string> args;
  std::string label;        // branch/goto target label; Nop: its own label
  int label_target = -1;    // resolved statement id of `label`
  std::string cond;         // branch condition local; empty means "*"
  int line = 0, col = 0;

  bool structurally_equal(const Statement& o) const;
};

struct Procedure {
  std::string name;
  std::vector<std::string> params;
  std::vector<Statement> body;        // non-empty; last statement is a Return
  std::vector<std::string> locals;    // sorted, unique
  std::vector<Expectation> expectations;

  // CFG nodes: 0 = synthetic start, i+1 = body[i], body.size()+1 = exit.
  int start_node() const { return 0; }
  int exit_node() const { return static_cast<int>(body.size()) + 1; }
  int stmt_node(int stmt_id) const { return stmt_id + 1; }
  int node_stmt(int node) const { return node - 1; }
  int node_count() const { return static_cast<int>(body.size()) + 2; }
  bool is_stmt_node(int node) const {
    return node >= 1 && node <= static_cast<int>(body.size());
  }

  std::vector<std::vector<int>> succ;  // per node
  std::vector<std::vector<int>> pred;  // per node
  std::vector<bool> reachable;         // from start, per node

  bool structurally_equal(const Procedure& o) const;
};

struct Program {
  std::vector<Procedure> procs;

  const Procedure* find_proc(const std::string& name) const;
  int proc_index(const std::string& name) const;  // -1 if absent

  bool structurally_equal(const Program& o) const;
};

// Fills succ/pred/reachable. Requires a body whose last statement is a
// Return and whose labels are resolved (the parser guarantees both).
void build_cfg(Procedure& proc);

// Regenerates source text; parse(print(p)) is structurally identical to p.
std::string print_program(const Program& prog);

}  // namespace ideflow
