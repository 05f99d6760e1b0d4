#pragma once

#include <vector>

#include "ideflow/edge_function.hpp"
#include "ideflow/ir.hpp"
#include "ideflow/supergraph.hpp"
#include "ideflow/symbols.hpp"

namespace ideflow {

// Which symbols a statement touches, from the client's point of view.
// flow_* encode reachability effects (a fact appearing, disappearing, or
// spawning another); edge_* encode value effects (a symbol's value being
// remapped or read to compute another's). The sparse builder skips a
// statement for d exactly when d is in none of the four sets and no
// structural rule retains it.
struct StmtRelevance {
  std::vector<SymbolId> flow_reads;
  std::vector<SymbolId> flow_writes;
  std::vector<SymbolId> edge_reads;
  std::vector<SymbolId> edge_writes;
  bool generator = false;  // creates facts out of lambda

  bool flow_identity_for(SymbolId d) const;
  bool edge_identity_for(SymbolId d) const;
};

// A distributive data-flow problem over the exploded supergraph. Flow
// functions are per-fact and return their outputs in deterministic order;
// edge functions are drawn from the EdgeFn family. All call-site-keyed
// functions identify the site by (caller proc index, call statement id).
class Problem {
 public:
  virtual ~Problem() = default;

  const Program& program() const { return *sg_->program; }
  const Supergraph& supergraph() const { return *sg_; }
  const SymbolTable& symbols() const { return symtab_; }
  virtual const char* client_name() const = 0;

  // Facts survive the longest chain of strict jump-function updates this
  // family allows; one more update trips the termination guard.
  virtual int chain_height() const = 0;

  // Effect of leaving `node` along a normal intraprocedural edge. Never
  // called on call nodes (the solver dispatches those to the three
  // call-related kinds below).
  virtual void flow_normal(int proc, int node, SymbolId d,
                           std::vector<SymbolId>& out) const = 0;
  virtual void flow_call(int caller, int call_stmt, SymbolId d,
                         std::vector<SymbolId>& out) const = 0;
  // Exact inverse of flow_call: all caller-side d with dc in flow_call(d).
  virtual void flow_call_inverse(int caller, int call_stmt, SymbolId dc,
                                 std::vector<SymbolId>& out) const = 0;
  virtual void flow_return(int caller, int call_stmt, SymbolId d_exit,
                           std::vector<SymbolId>& out) const = 0;
  virtual void flow_call_to_return(int caller, int call_stmt, SymbolId d,
                                   std::vector<SymbolId>& out) const = 0;

  virtual EdgeFn edge_normal(int proc, int node, SymbolId din,
                             SymbolId dout) const = 0;
  virtual EdgeFn edge_call(int caller, int call_stmt, SymbolId din,
                           SymbolId dout) const = 0;
  virtual EdgeFn edge_return(int caller, int call_stmt, SymbolId din,
                             SymbolId dout) const = 0;
  virtual EdgeFn edge_call_to_return(int caller, int call_stmt, SymbolId din,
                                     SymbolId dout) const = 0;

  virtual const StmtRelevance& relevance(int proc, int stmt) const = 0;

  // True when the call statement may read, kill, or (re)define d: d is
  // passed as an argument or is the call's result target. Heap symbols and
  // lambda are handled structurally by the sparse CFG builder.
  virtual bool call_relevant(int caller, int call_stmt, SymbolId d) const = 0;

  // Interned id for a textual symbol reference, with locals and bases
  // resolved against `proc`. kNoSymbol when the program never mentions it.
  SymbolId resolve_spec(int proc, const SymbolSpec& spec) const;

  // Symbols whose values are meaningfully queryable at nodes of `proc`:
  // its locals plus every heap symbol. Excludes lambda and ret carriers.
  std::vector<SymbolId> query_universe(int proc) const;

 protected:
  explicit Problem(const Supergraph& sg) : sg_(&sg) {}

  const Supergraph* sg_;
  SymbolTable symtab_;
};

}  // namespace ideflow
