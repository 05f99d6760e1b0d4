#include "doctest.h"
#include "ideflow/clients.hpp"
#include "ideflow/oracle.hpp"
#include "ideflow/parser.hpp"
#include "ideflow/solver.hpp"
#include "ideflow/supergraph.hpp"

using namespace ideflow;

namespace {

struct Fixture {
  Program program;
  Supergraph sg;
  LcpProblem problem;

  explicit Fixture(const char* text)
      : program(parse_program(text)),
        sg(build_supergraph(program, {"main"})),
        problem(sg) {}

  SymbolId sym(const std::string& name, int proc = 0) {
    return problem.resolve_spec(proc, parse_symbol_spec_text(name));
  }
};

}  // namespace

TEST_CASE("straight-line execution records entry values") {
  Fixture fx("proc main() {\n  a = 3\n  b = a\n  return b\n}\n");
  Oracle oracle(fx.problem);
  oracle.run();
  const Procedure& m = fx.program.procs[0];
  CHECK(oracle.value_at(0, m.exit_node(), fx.sym("b")) == Value::constant(3));
  CHECK(oracle.value_at(0, m.exit_node(), fx.sym("a")) == Value::constant(3));
  // Values are observed on node entry: before its own assignment, b is
  // uninitialized.
  CHECK(oracle.value_at(0, m.stmt_node(1), fx.sym("b")) == Value::top());
  CHECK(oracle.paths() == 1);
}

TEST_CASE("uninitialized reads stay top and poison nothing") {
  Fixture fx("proc main() {\n  b = a\n  c = b + 1\n  return c\n}\n");
  Oracle oracle(fx.problem);
  oracle.run();
  const Procedure& m = fx.program.procs[0];
  CHECK(oracle.value_at(0, m.exit_node(), fx.sym("b")) == Value::top());
  CHECK(oracle.value_at(0, m.exit_node(), fx.sym("c")) == Value::top());
}

TEST_CASE("both branch edges are always explored") {
  Fixture fx(
      "proc main() {\n"
      "  c = 1\n"
      "  if c goto L\n"
      "  a = 1\n"
      "  goto M\n"
      "L:\n"
      "  a = 2\n"
      "M:\n"
      "  return a\n"
      "}\n");
  Oracle oracle(fx.problem);
  oracle.run();
  const Procedure& m = fx.program.procs[0];
  // The condition is concrete, but conditions are never evaluated.
  CHECK(oracle.value_at(0, m.exit_node(), fx.sym("a")) == Value::bottom());
  CHECK(oracle.value_at(0, m.exit_node(), fx.sym("c")) == Value::constant(1));
  CHECK(oracle.paths() == 2);
}

TEST_CASE("agreeing paths keep their constant") {
  Fixture fx(
      "proc main() {\n"
      "  if * goto L\n"
      "  a = 7\n"
      "  goto M\n"
      "L:\n"
      "  a = 7\n"
      "M:\n"
      "  b = a + 1\n"
      "  return b\n"
      "}\n");
  Oracle oracle(fx.problem);
  oracle.run();
  CHECK(oracle.value_at(0, fx.program.procs[0].exit_node(), fx.sym("b")) ==
        Value::constant(8));
}

TEST_CASE("heap cells are path-local") {
  Fixture fx(
      "proc main() {\n"
      "  o = new\n"
      "  p = o\n"
      "  a = 4\n"
      "  p.f = a\n"
      "  x = o.f\n"
      "  arr = new\n"
      "  arr[2] = x\n"
      "  y = arr[2]\n"
      "  @C.s = y\n"
      "  z = @C.s\n"
      "  return z\n"
      "}\n");
  Oracle oracle(fx.problem);
  oracle.run();
  const Procedure& m = fx.program.procs[0];
  CHECK(oracle.value_at(0, m.exit_node(), fx.sym("x")) == Value::constant(4));
  CHECK(oracle.value_at(0, m.exit_node(), fx.sym("y")) == Value::constant(4));
  CHECK(oracle.value_at(0, m.exit_node(), fx.sym("z")) == Value::constant(4));
  CHECK(oracle.value_at(0, m.exit_node(), fx.sym("o.f")) ==
        Value::constant(4));
}

TEST_CASE("calls execute the callee concretely") {
  Fixture fx(
      "proc inc(x) {\n  y = x + 1\n  return y\n}\n"
      "proc main() {\n  a = 5\n  r = call inc(a)\n  return r\n}\n");
  Oracle oracle(fx.problem);
  oracle.run();
  int m = fx.program.proc_index("main");
  CHECK(oracle.value_at(m, fx.program.procs[m].exit_node(), fx.sym("r", m)) ==
        Value::constant(6));
}

TEST_CASE("overflow leaves the lattice as bottom") {
  Fixture fx(
      "proc main() {\n"
      "  a = 9223372036854775807\n"
      "  b = a * 2\n"
      "  return b\n"
      "}\n");
  Oracle oracle(fx.problem);
  oracle.run();
  CHECK(oracle.value_at(0, fx.program.procs[0].exit_node(), fx.sym("b")) ==
        Value::bottom());
}

TEST_CASE("cyclic control flow is out of the fragment") {
  Fixture fx(
      "proc main() {\n"
      "  a = 1\n"
      "Head:\n"
      "  a = a + 1\n"
      "  goto Head\n"
      "}\n");
  CHECK_THROWS_AS(Oracle(fx.problem), OracleUnsupported);
}

TEST_CASE("the oracle agrees with both solver modes where it applies") {
  const char* cases[] = {
      "proc main() {\n  a = 3\n  a = a + 1\n  b = a * 2\n  return b\n}\n",
      "proc main() {\n  if * goto L\n  a = 1\n  goto M\nL:\n  a = 2\nM:\n"
      "  b = a\n  return b\n}\n",
      "proc main() {\n  o = new\n  q = o\n  a = 9\n  q.f = a\n  x = o.f\n"
      "  return x\n}\n",
  };
  for (const char* text : cases) {
    Fixture fx(text);
    Oracle oracle(fx.problem);
    oracle.run();
    Solver dense(fx.problem), sparse(fx.problem, true);
    dense.run();
    sparse.run();
    const Procedure& m = fx.program.procs[0];
    for (int n = 0; n < m.node_count(); ++n) {
      for (SymbolId d : fx.problem.query_universe(0)) {
        Value want = oracle.value_at(0, n, d);
        CHECK(dense.value_at(0, n, d) == want);
        CHECK(sparse.value_at(0, n, d) == want);
      }
    }
  }
}
