#include <string>

#include "doctest.h"
#include "ideflow/ir.hpp"
#include "ideflow/parser.hpp"

using namespace ideflow;

namespace {

const char* kAllForms = R"(proc helper(p, q) {
  r = p + 1
  return r
}

proc main() {
  a = 42
  b = a
  c = b * -3
  o = new
  o.f = a
  x = o.f
  @C.s = b
  y = @C.s
  arr = new
  arr[2] = c
  z = arr[2]
  w = call helper(a, b)
  if w goto L
  d = 1
  goto M
L:
  d = 2
M:
  return d
}
)";

}  // namespace

TEST_CASE("print/parse round trip is structurally identical") {
  Program p1 = parse_program(kAllForms);
  std::string text = print_program(p1);
  Program p2 = parse_program(text);
  CHECK(p1.structurally_equal(p2));
  // And printing is a fixpoint.
  CHECK(print_program(p2) == text);
}

TEST_CASE("round trip keeps expectations") {
  Program p1 = parse_program(
      "proc main() {\n"
      "  a = 3 // expect a = 3\n"
      "  b = a + 1\n"
      "  // expect b = 4\n"
      "  return b\n"
      "}\n");
  REQUIRE(p1.procs.size() == 1);
  REQUIRE(p1.procs[0].expectations.size() == 2);
  Program p2 = parse_program(print_program(p1));
  CHECK(p1.structurally_equal(p2));
}

TEST_CASE("structural equality ignores positions") {
  Program a = parse_program("proc main() {\n  a = 1\n  return a\n}\n");
  Program b = parse_program(
      "// leading comment\nproc main() {\n\n\n  a =    1\n  return a\n}\n");
  CHECK(a.structurally_equal(b));
  Program c = parse_program("proc main() {\n  a = 2\n  return a\n}\n");
  CHECK(!a.structurally_equal(c));
}

TEST_CASE("cfg shape of a straight line") {
  Program p = parse_program("proc main() {\n  a = 1\n  b = a\n  return b\n}\n");
  const Procedure& m = p.procs[0];
  CHECK(m.node_count() == 5);
  CHECK(m.start_node() == 0);
  CHECK(m.exit_node() == 4);
  CHECK(m.stmt_node(0) == 1);
  CHECK(m.node_stmt(3) == 2);
  CHECK(m.succ[0] == std::vector<int>{1});
  CHECK(m.succ[1] == std::vector<int>{2});
  CHECK(m.succ[2] == std::vector<int>{3});
  CHECK(m.succ[3] == std::vector<int>{4});  // return -> exit
  CHECK(m.succ[4].empty());
  CHECK(m.pred[4] == std::vector<int>{3});
  for (int n = 0; n < m.node_count(); ++n) CHECK(m.reachable[n]);
}

TEST_CASE("branch fans out, fallthrough first") {
  Program p = parse_program(
      "proc main() {\n"
      "  if * goto L\n"
      "  a = 1\n"
      "L:\n"
      "  return a\n"
      "}\n");
  const Procedure& m = p.procs[0];
  REQUIRE(m.body.size() == 4);
  CHECK(m.body[0].op == Opcode::Branch);
  CHECK(m.body[0].label_target == 2);
  CHECK(m.body[2].op == Opcode::Nop);
  CHECK(m.succ[m.stmt_node(0)] == std::vector<int>{2, 3});
}

TEST_CASE("goto makes dead code unreachable") {
  Program p = parse_program(
      "proc main() {\n"
      "  goto L\n"
      "  a = 7\n"
      "L:\n"
      "  return\n"
      "}\n");
  const Procedure& m = p.procs[0];
  CHECK(m.succ[m.stmt_node(0)] == std::vector<int>{3});
  CHECK(!m.reachable[m.stmt_node(1)]);
  CHECK(m.reachable[m.stmt_node(2)]);
  CHECK(m.reachable[m.exit_node()]);
}

TEST_CASE("proc lookup by name") {
  Program p = parse_program(kAllForms);
  CHECK(p.proc_index("main") == 1);
  CHECK(p.proc_index("helper") == 0);
  CHECK(p.proc_index("nosuch") == -1);
  REQUIRE(p.find_proc("helper") != nullptr);
  CHECK(p.find_proc("helper")->params ==
        std::vector<std::string>{"p", "q"});
  CHECK(p.find_proc("nosuch") == nullptr);
}

TEST_CASE("locals are collected sorted and unique") {
  Program p = parse_program(
      "proc main() {\n  b = 1\n  a = b\n  b = a + 1\n  return b\n}\n");
  CHECK(p.procs[0].locals == std::vector<std::string>{"a", "b"});
}

TEST_CASE("opcode names are distinct") {
  CHECK(std::string(opcode_name(Opcode::ConstAssign)) !=
        std::string(opcode_name(Opcode::LocalCopy)));
  CHECK(std::string(opcode_name(Opcode::Call)) != "");
}
