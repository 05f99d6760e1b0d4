#include <algorithm>
#include <vector>

#include "doctest.h"
#include "ideflow/clients.hpp"
#include "ideflow/errors.hpp"
#include "ideflow/parser.hpp"
#include "ideflow/supergraph.hpp"

using namespace ideflow;

namespace {

struct Fixture {
  Program program;
  Supergraph sg;
  explicit Fixture(const char* text, std::vector<std::string> entries = {
                                         "main"})
      : program(parse_program(text)),
        sg(build_supergraph(program, entries)) {}
};

SymbolId local(const Problem& pr, int proc, const std::string& name) {
  SymbolId id = pr.symbols().find(Symbol::local(proc, name));
  REQUIRE(id != kNoSymbol);
  return id;
}

std::vector<SymbolId> flow(const Problem& pr, int proc, int stmt, SymbolId d) {
  std::vector<SymbolId> out;
  pr.flow_normal(proc, pr.program().procs[proc].stmt_node(stmt), d, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<SymbolId> sorted(std::vector<SymbolId> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("lcp constant assignment spawns the target and remaps it") {
  Fixture fx(
      "proc main() {\n  a = 3\n  b = 7\n  return a\n}\n");
  LcpProblem pr(fx.sg);
  SymbolId a = local(pr, 0, "a");
  SymbolId b = local(pr, 0, "b");
  SymbolId lam = SymbolTable::kLambda;

  CHECK(flow(pr, 0, 0, lam) == sorted({lam, a}));
  CHECK(flow(pr, 0, 0, a) == sorted({a}));   // fact survives, value remapped
  CHECK(flow(pr, 0, 0, b) == sorted({b}));   // unrelated fact passes
  CHECK(pr.edge_normal(0, 1, lam, a) == EdgeFn::constant(3));
  CHECK(pr.edge_normal(0, 1, a, a) == EdgeFn::constant(3));
  CHECK(pr.edge_normal(0, 1, b, b) == EdgeFn::identity());

  const StmtRelevance& rel = pr.relevance(0, 0);
  CHECK(rel.generator);
  CHECK(rel.flow_writes == std::vector<SymbolId>{a});
  CHECK(rel.edge_writes == std::vector<SymbolId>{a});
  CHECK(!rel.flow_identity_for(a));
  CHECK(rel.flow_identity_for(b));
}

TEST_CASE("lcp binop kills the old target and tracks the source") {
  Fixture fx(
      "proc main() {\n  a = 8\n  b = a + 2\n  c = a * 3\n  d = a - 1\n"
      "  e = a / 2\n  a = a + 1\n  return b\n}\n");
  LcpProblem pr(fx.sg);
  SymbolId a = local(pr, 0, "a");
  SymbolId b = local(pr, 0, "b");

  CHECK(flow(pr, 0, 1, a) == sorted({a, b}));
  CHECK(flow(pr, 0, 1, b).empty());  // strong update
  CHECK(pr.edge_normal(0, 2, a, b) == EdgeFn::linear(1, 2));
  CHECK(pr.edge_normal(0, 3, a, local(pr, 0, "c")) == EdgeFn::linear(3, 0));
  CHECK(pr.edge_normal(0, 4, a, local(pr, 0, "d")) == EdgeFn::linear(1, -1));
  CHECK(pr.edge_normal(0, 5, a, local(pr, 0, "e")) == EdgeFn::div_by(2));

  // Self update: no fact movement, value remapped in place.
  CHECK(flow(pr, 0, 5, a) == sorted({a}));
  CHECK(pr.edge_normal(0, 6, a, a) == EdgeFn::linear(1, 1));
  const StmtRelevance& rel = pr.relevance(0, 5);
  CHECK(rel.flow_writes.empty());
  CHECK(rel.edge_writes == std::vector<SymbolId>{a});
  CHECK(rel.flow_identity_for(a));
  CHECK(!rel.edge_identity_for(a));
}

TEST_CASE("lcp copies and loads move facts with identity edges") {
  Fixture fx(
      "proc main() {\n  a = 5\n  b = a\n  o = new\n  o.f = b\n  x = o.f\n"
      "  return x\n}\n");
  LcpProblem pr(fx.sg);
  SymbolId a = local(pr, 0, "a");
  SymbolId b = local(pr, 0, "b");
  SymbolId x = local(pr, 0, "x");
  SymbolId of = pr.symbols().find(Symbol::field(0, "o", "f"));
  REQUIRE(of != kNoSymbol);

  CHECK(flow(pr, 0, 1, a) == sorted({a, b}));
  CHECK(pr.edge_normal(0, 2, a, b) == EdgeFn::identity());

  // Store: source reaches the heap symbol; old heap value is killed.
  CHECK(flow(pr, 0, 3, b) == sorted({b, of}));
  CHECK(flow(pr, 0, 3, of).empty());
  // Load: heap symbol reaches the loaded local.
  CHECK(flow(pr, 0, 4, of) == sorted({of, x}));
  CHECK(flow(pr, 0, 4, x).empty());
}

TEST_CASE("lcp stores through aliases kill every aliased target") {
  Fixture fx(
      "proc main() {\n  o = new\n  p = o\n  a = 4\n  p.f = a\n  x = o.f\n"
      "  return x\n}\n");
  LcpProblem pr(fx.sg);
  SymbolId a = local(pr, 0, "a");
  SymbolId of = pr.symbols().find(Symbol::field(0, "o", "f"));
  SymbolId pf = pr.symbols().find(Symbol::field(0, "p", "f"));
  REQUIRE(of != kNoSymbol);
  REQUIRE(pf != kNoSymbol);

  CHECK(flow(pr, 0, 3, a) == sorted({a, of, pf}));
  CHECK(flow(pr, 0, 3, of).empty());
  CHECK(flow(pr, 0, 3, pf).empty());
}

TEST_CASE("return feeds the per-procedure carrier") {
  Fixture fx("proc main() {\n  a = 2\n  return a\n}\n");
  LcpProblem pr(fx.sg);
  SymbolId a = local(pr, 0, "a");
  SymbolId ret = pr.symbols().find(Symbol::ret(0));
  REQUIRE(ret != kNoSymbol);
  CHECK(flow(pr, 0, 1, a) == sorted({a, ret}));
  CHECK(flow(pr, 0, 1, ret).empty());
  CHECK(pr.edge_normal(0, 2, a, ret) == EdgeFn::identity());
}

TEST_CASE("call edges bind actuals to formals and results back") {
  Fixture fx(
      "proc inc(x) {\n  y = x + 1\n  return y\n}\n"
      "proc main() {\n  a = 5\n  b = 1\n  r = call inc(a)\n  return r\n}\n",
      {"main"});
  LcpProblem pr(fx.sg);
  int inc = fx.program.proc_index("inc");
  int mn = fx.program.proc_index("main");
  SymbolId a = local(pr, mn, "a");
  SymbolId b = local(pr, mn, "b");
  SymbolId r = local(pr, mn, "r");
  SymbolId x = local(pr, inc, "x");
  SymbolId inc_ret = pr.symbols().find(Symbol::ret(inc));
  SymbolId lam = SymbolTable::kLambda;

  std::vector<SymbolId> out;
  pr.flow_call(mn, 2, a, out);
  CHECK(sorted(out) == sorted({x}));
  out.clear();
  pr.flow_call(mn, 2, b, out);
  CHECK(out.empty());  // not passed
  out.clear();
  pr.flow_call(mn, 2, lam, out);
  CHECK(out == std::vector<SymbolId>{lam});
  CHECK(pr.edge_call(mn, 2, a, x) == EdgeFn::identity());

  // Inverse agrees with the forward map.
  out.clear();
  pr.flow_call_inverse(mn, 2, x, out);
  CHECK(sorted(out) == sorted({a}));

  out.clear();
  pr.flow_return(mn, 2, inc_ret, out);
  CHECK(sorted(out) == sorted({r}));
  out.clear();
  pr.flow_return(mn, 2, x, out);
  CHECK(out.empty());  // callee locals die at the boundary

  // Call-to-return: the actual is killed (the callee may see it), the
  // rest of the frame survives.
  out.clear();
  pr.flow_call_to_return(mn, 2, a, out);
  CHECK(out.empty());
  out.clear();
  pr.flow_call_to_return(mn, 2, b, out);
  CHECK(out == std::vector<SymbolId>{b});
  out.clear();
  pr.flow_call_to_return(mn, 2, lam, out);
  CHECK(out == std::vector<SymbolId>{lam});

  CHECK(pr.call_relevant(mn, 2, a));
  CHECK(pr.call_relevant(mn, 2, r));
  CHECK(!pr.call_relevant(mn, 2, b));
}

TEST_CASE("taint sees motion but not value updates") {
  Fixture fx("proc main() {\n  a = 3\n  a = a + 1\n  b = a\n  return b\n}\n");
  TaintProblem pr(fx.sg);
  SymbolId a = local(pr, 0, "a");
  SymbolId lam = SymbolTable::kLambda;

  // Generation: a constant source taints its target.
  CHECK(flow(pr, 0, 0, lam) == sorted({lam, a}));
  CHECK(pr.edge_normal(0, 1, lam, a) == EdgeFn::all_bottom());
  // Reassignment and update leave the existing fact alone.
  CHECK(pr.edge_normal(0, 1, a, a) == EdgeFn::identity());
  CHECK(pr.edge_normal(0, 2, a, a) == EdgeFn::identity());

  const StmtRelevance& reassign = pr.relevance(0, 0);
  CHECK(reassign.generator);
  CHECK(reassign.flow_writes.empty());
  CHECK(reassign.edge_writes.empty());
  CHECK(reassign.flow_identity_for(a));
  CHECK(reassign.edge_identity_for(a));

  const StmtRelevance& update = pr.relevance(0, 1);
  CHECK(!update.generator);
  CHECK(update.flow_identity_for(a));
  CHECK(update.edge_identity_for(a));

  // Motion still counts: the copy reads a.
  const StmtRelevance& copy = pr.relevance(0, 2);
  CHECK(copy.flow_reads == std::vector<SymbolId>{a});
  CHECK(!copy.flow_identity_for(a));
}

TEST_CASE("clients disagree exactly on value-update relevance") {
  Fixture fx("proc main() {\n  a = 3\n  a = a + 1\n  return a\n}\n");
  LcpProblem lcp(fx.sg);
  TaintProblem taint(fx.sg);
  SymbolId a_lcp = local(lcp, 0, "a");
  SymbolId a_tnt = local(taint, 0, "a");

  CHECK(!lcp.relevance(0, 0).flow_identity_for(a_lcp));
  CHECK(!lcp.relevance(0, 1).edge_identity_for(a_lcp));
  CHECK(taint.relevance(0, 0).flow_identity_for(a_tnt));
  CHECK(taint.relevance(0, 0).edge_identity_for(a_tnt));
  CHECK(taint.relevance(0, 1).flow_identity_for(a_tnt));
  CHECK(taint.relevance(0, 1).edge_identity_for(a_tnt));

  CHECK(lcp.chain_height() == 3);
  CHECK(taint.chain_height() == 2);
  CHECK(std::string(lcp.client_name()) == "lcp");
  CHECK(std::string(taint.client_name()) == "taint");
}

TEST_CASE("query universe covers locals and heap symbols only") {
  Fixture fx(
      "proc main() {\n  a = 1\n  o = new\n  o.f = a\n  @C.s = a\n"
      "  return a\n}\n");
  LcpProblem pr(fx.sg);
  auto uni = pr.query_universe(0);
  CHECK(std::find(uni.begin(), uni.end(), local(pr, 0, "a")) != uni.end());
  CHECK(std::find(uni.begin(), uni.end(),
                  pr.symbols().find(Symbol::field(0, "o", "f"))) != uni.end());
  CHECK(std::find(uni.begin(), uni.end(),
                  pr.symbols().find(Symbol::static_field("C", "s"))) !=
        uni.end());
  CHECK(std::find(uni.begin(), uni.end(), SymbolTable::kLambda) == uni.end());
  CHECK(std::find(uni.begin(), uni.end(),
                  pr.symbols().find(Symbol::ret(0))) == uni.end());
}

TEST_CASE("symbol specs resolve against the right procedure") {
  Fixture fx(
      "proc main() {\n  a = 1\n  o = new\n  o.f = a\n  arr = new\n"
      "  arr[2] = a\n  return a\n}\n");
  LcpProblem pr(fx.sg);
  CHECK(pr.resolve_spec(0, parse_symbol_spec_text("a")) ==
        local(pr, 0, "a"));
  CHECK(pr.resolve_spec(0, parse_symbol_spec_text("o.f")) ==
        pr.symbols().find(Symbol::field(0, "o", "f")));
  CHECK(pr.resolve_spec(0, parse_symbol_spec_text("arr[2]")) ==
        pr.symbols().find(Symbol::array_elem(0, "arr", 2)));
  CHECK(pr.resolve_spec(0, parse_symbol_spec_text("nosuch")) == kNoSymbol);
}
