#include "doctest.h"
#include "ideflow/errors.hpp"
#include "ideflow/parser.hpp"
#include "ideflow/supergraph.hpp"

using namespace ideflow;

namespace {

const char* kCallGraph = R"(proc leaf(x) {
  y = x + 1
  return y
}

proc mid(a) {
  r = call leaf(a)
  return r
}

proc main() {
  v = 5
  r1 = call mid(v)
  r2 = call leaf(v)
  return r1
}

proc orphan() {
  z = 9
  return z
}
)";

}  // namespace

TEST_CASE("call wiring and reachability") {
  Program p = parse_program(kCallGraph);
  Supergraph sg = build_supergraph(p, {"main"});
  int leaf = p.proc_index("leaf");
  int mid = p.proc_index("mid");
  int main_ = p.proc_index("main");
  int orphan = p.proc_index("orphan");

  CHECK(sg.entries == std::vector<int>{main_});
  CHECK(sg.is_entry(main_));
  CHECK(!sg.is_entry(leaf));

  CHECK(sg.call_stmts[main_] == std::vector<int>{1, 2});
  CHECK(sg.is_call_stmt(main_, 1));
  CHECK(!sg.is_call_stmt(main_, 0));
  CHECK(sg.callee(main_, 1) == mid);
  CHECK(sg.callee(main_, 2) == leaf);
  CHECK(sg.callee_of[main_][0] == -1);

  // leaf is called from mid and from main.
  REQUIRE(sg.callers[leaf].size() == 2);
  CHECK(sg.callers[leaf][0] == std::pair<int, int>{mid, 0});
  CHECK(sg.callers[leaf][1] == std::pair<int, int>{main_, 2});
  CHECK(sg.callers[main_].empty());

  // Control resumes at the statement after the call.
  CHECK(sg.return_site(main_, 1) == p.procs[main_].stmt_node(2));

  CHECK(sg.proc_reachable[main_]);
  CHECK(sg.proc_reachable[mid]);
  CHECK(sg.proc_reachable[leaf]);
  CHECK(!sg.proc_reachable[orphan]);
}

TEST_CASE("multiple entries merge reachability") {
  Program p = parse_program(kCallGraph);
  Supergraph sg = build_supergraph(p, {"main", "orphan"});
  CHECK(sg.proc_reachable[p.proc_index("orphan")]);
  CHECK(sg.entries.size() == 2);
}

TEST_CASE("entry validation") {
  Program p = parse_program(kCallGraph);
  CHECK_THROWS_AS(build_supergraph(p, {"nosuch"}), AnalysisError);
  CHECK_THROWS_AS(build_supergraph(p, {}), AnalysisError);
  CHECK_THROWS_AS(build_supergraph(p, {"main", "main"}), AnalysisError);
}
