#pragma once

#include <vector>

#include "ideflow/alias.hpp"
#include "ideflow/problem.hpp"

namespace ideflow {

// Resolved symbol ids for one statement. kNoSymbol marks an absent slot.
// heap_targets is alias-expanded (store to x.f hits p.f for every p that may
// point to the same site as x) and sorted; actuals keep positional order.
struct StmtInfo {
  SymbolId target = kNoSymbol;
  SymbolId source = kNoSymbol;
  SymbolId heap_source = kNoSymbol;
  std::vector<SymbolId> heap_targets;
  std::vector<SymbolId> actuals;
  std::vector<SymbolId> formals;
  SymbolId callee_ret = kNoSymbol;
  SymbolId ret_carrier = kNoSymbol;
  StmtRelevance relevance;
};

// Shared gen/kill structure: LCP and taint move facts identically and differ
// only in edge functions, relevance declarations, and chain height. Call
// edges pass lambda and heap symbols through, bind actuals to formals
// positionally, and return the callee's ret carrier into the call target;
// call-to-return kills exactly the actuals.
class GenKillClient : public Problem {
 public:
  void flow_normal(int proc, int node, SymbolId d,
                   std::vector<SymbolId>& out) const override;
  void flow_call(int caller, int call_stmt, SymbolId d,
                 std::vector<SymbolId>& out) const override;
  void flow_call_inverse(int caller, int call_stmt, SymbolId dc,
                         std::vector<SymbolId>& out) const override;
  void flow_return(int caller, int call_stmt, SymbolId d_exit,
                   std::vector<SymbolId>& out) const override;
  void flow_call_to_return(int caller, int call_stmt, SymbolId d,
                           std::vector<SymbolId>& out) const override;

  EdgeFn edge_normal(int proc, int node, SymbolId din,
                     SymbolId dout) const override;
  EdgeFn edge_call(int caller, int call_stmt, SymbolId din,
                   SymbolId dout) const override;
  EdgeFn edge_return(int caller, int call_stmt, SymbolId din,
                     SymbolId dout) const override;
  EdgeFn edge_call_to_return(int caller, int call_stmt, SymbolId din,
                             SymbolId dout) const override;

  const StmtRelevance& relevance(int proc, int stmt) const override;
  bool call_relevant(int caller, int call_stmt, SymbolId d) const override;
  const StmtInfo& info(int proc, int stmt) const { return info_[proc][stmt]; }
  const AliasInfo& aliases() const { return aliases_; }

 protected:
  explicit GenKillClient(const Supergraph& sg) : Problem(sg) {}
  // Interns symbols and fills info_. Subclass constructors call this once
  // the relevance hooks are reachable.
  void build();

  virtual EdgeFn const_gen_edge(long long c) const = 0;     // lambda -> a
  virtual EdgeFn const_update_edge(long long c) const = 0;  // a -> a
  virtual EdgeFn binop_edge(char op, long long k) const = 0;
  virtual void declare_relevance(const Statement& s, const StmtInfo& fo,
                                 StmtRelevance& out) const = 0;

 private:
  std::vector<std::vector<StmtInfo>> info_;
  AliasInfo aliases_;
};

// Linear constant propagation: edge functions track values through constant
// assignments and single-literal binops; relevance is value-aware, so a
// reassignment (a = 3) and a value update (a = a + 1) both count as touching
// a.
class LcpProblem : public GenKillClient {
 public:
  explicit LcpProblem(const Supergraph& sg) : GenKillClient(sg) { build(); }
  const char* client_name() const override { return "lcp"; }
  int chain_height() const override { return 3; }

 protected:
  EdgeFn const_gen_edge(long long c) const override;
  EdgeFn const_update_edge(long long c) const override;
  EdgeFn binop_edge(char op, long long k) const override;
  void declare_relevance(const Statement& s, const StmtInfo& fo,
                         StmtRelevance& out) const override;
};

// Reachability-only client over the same gen/kill shape: every edge is
// Identity except fact generation, which jumps straight to bottom (tainted).
// Value-update statements are invisible to it, so its sparse CFGs skip
// statements LCP must keep.
class TaintProblem : public GenKillClient {
 public:
  explicit TaintProblem(const Supergraph& sg) : GenKillClient(sg) { build(); }
  const char* client_name() const override { return "taint"; }
  int chain_height() const override { return 2; }

 protected:
  EdgeFn const_gen_edge(long long c) const override;
  EdgeFn const_update_edge(long long c) const override;
  EdgeFn binop_edge(char op, long long k) const override;
  void declare_relevance(const Statement& s, const StmtInfo& fo,
                         StmtRelevance& out) const override;
};

}  // namespace ideflow
