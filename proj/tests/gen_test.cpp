#include <cmath>

#include "doctest.h"
#include "ideflow/clients.hpp"
#include "ideflow/errors.hpp"
#include "ideflow/gen.hpp"
#include "ideflow/parser.hpp"
#include "ideflow/solver.hpp"
#include "ideflow/supergraph.hpp"

using namespace ideflow;

namespace {

GenParams small() {
  GenParams p;
  p.procs = 8;
  p.stmts_per_proc = 30;
  p.rho = 0.7;
  p.depth = 3;
  p.seed = 42;
  return p;
}

long long count_op(const Program& prog, Opcode op) {
  long long n = 0;
  for (const auto& proc : prog.procs) {
    for (const auto& s : proc.body) {
      if (s.op == op) ++n;
    }
  }
  return n;
}

long long total_stmts(const Program& prog) {
  long long n = 0;
  for (const auto& proc : prog.procs) {
    n += static_cast<long long>(proc.body.size());
  }
  return n;
}

}  // namespace

TEST_CASE("equal params generate structurally equal programs") {
  Program a = generate_program(small());
  Program b = generate_program(small());
  CHECK(a.structurally_equal(b));
}

TEST_CASE("the seed changes the program") {
  GenParams p1 = small();
  GenParams p2 = small();
  p2.seed = 43;
  CHECK(!generate_program(p1).structurally_equal(generate_program(p2)));
}

TEST_CASE("shape follows the knobs") {
  GenParams p = small();
  Program prog = generate_program(p);
  CHECK(static_cast<int>(prog.procs.size()) == p.procs);
  CHECK(prog.procs[0].name == "main");
  // The budget is exact: frame statements count toward it.
  CHECK(total_stmts(prog) == p.procs * p.stmts_per_proc);
}

TEST_CASE("control flow is strictly forward") {
  Program prog = generate_program(small());
  for (const auto& proc : prog.procs) {
    for (int v = 0; v < proc.node_count(); ++v) {
      for (int s : proc.succ[v]) {
        CHECK(s > v);
      }
    }
  }
}

TEST_CASE("every procedure hangs off main's call tree") {
  Program prog = generate_program(small());
  Supergraph sg = build_supergraph(prog, {"main"});
  for (size_t i = 0; i < prog.procs.size(); ++i) {
    CHECK(sg.proc_reachable[i]);
    if (prog.procs[i].name != "main") {
      CHECK(!sg.callers[i].empty());
    }
  }
}

TEST_CASE("rho shifts work toward skippable decoys") {
  GenParams lo = small();
  lo.rho = 0.0;
  GenParams hi = small();
  hi.rho = 0.95;
  long long lo_consts = count_op(generate_program(lo), Opcode::ConstAssign);
  long long hi_consts = count_op(generate_program(hi), Opcode::ConstAssign);
  CHECK(hi_consts > lo_consts);

  // And the sparse solver gets proportionally cheaper.
  auto ratio = [](const GenParams& p) {
    Program prog = generate_program(p);
    Supergraph sg = build_supergraph(prog, {"main"});
    LcpProblem problem(sg);
    Solver dense(problem), sparse(problem, true);
    dense.run();
    sparse.run();
    return static_cast<double>(dense.stats().propagations) /
           static_cast<double>(std::max(1LL, sparse.stats().propagations));
  };
  CHECK(ratio(hi) > ratio(lo));
}

TEST_CASE("generated text parses back to the same program") {
  Program prog = generate_program(small());
  Program reparsed = parse_program(print_program(prog));
  CHECK(prog.structurally_equal(reparsed));
}

TEST_CASE("parameter validation") {
  GenParams p = small();
  p.procs = 0;
  CHECK_THROWS_AS(generate_program(p), AnalysisError);
  p = small();
  p.rho = 1.5;
  CHECK_THROWS_AS(generate_program(p), AnalysisError);
  p = small();
  p.rho = -0.1;
  CHECK_THROWS_AS(generate_program(p), AnalysisError);
  p = small();
  p.depth = 0;
  CHECK_THROWS_AS(generate_program(p), AnalysisError);
  p = small();
  p.branch_density = 2.0;
  CHECK_THROWS_AS(generate_program(p), AnalysisError);
  p = small();
  p.stmts_per_proc = 1;
  CHECK_THROWS_AS(generate_program(p), AnalysisError);
}
