#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "ideflow/problem.hpp"

namespace ideflow {

// Conditions 1.1/1.2: d neither appears in, disappears at, nor spawns
// another fact at this statement, judged by the client's relevance oracle.
bool is_identity_flow(const Problem& problem, int proc, int stmt, SymbolId d);

// Conditions 2.1/2.2: the statement's edge functions neither remap d's value
// nor read it to compute another symbol's, for every lattice value.
bool is_identity_transformer(const Problem& problem, int proc, int stmt,
                             SymbolId d);

// Full retention test for a statement node in G_{p,d}: the identity
// predicates above, plus the structural rules (branches and gotos always;
// returns always; calls when d crosses or survives-killed; generator
// statements for d = lambda; heap symbols at every call).
bool sparse_retains(const Problem& problem, int proc, int stmt, SymbolId d);

// Per-(procedure, symbol) reduction of the dense CFG. next_at_or_after[v]
// is the first retained node reachable from v through skipped nodes
// (v itself when retained); well-defined because skipped nodes have exactly
// one successor and every CFG cycle contains a retained branch or goto.
struct SparseCfg {
  std::vector<char> retained;
  std::vector<int> next_at_or_after;
  int retained_count = 0;
};

// Lazy cache over per-procedure retention indexes. Queries are answered
// from the index without materializing a per-symbol graph: a symbol's
// sparse CFG is its procedure's base graph plus the few statements whose
// relevance sets name it, so membership and next-retained lookups combine
// one array read with a scan of that short span. get() materializes the
// full SparseCfg on demand for tools. Graph construction work (indexes and
// materializations) is timed so its share of a sparse solve can be
// reported; serving a memoized symbol is lookup, not construction.
class SparseCfgCache {
 public:
  explicit SparseCfgCache(const Problem& problem);
  // Served references alias cache-owned storage.
  SparseCfgCache(const SparseCfgCache&) = delete;
  SparseCfgCache& operator=(const SparseCfgCache&) = delete;

  const SparseCfg& get(int proc, SymbolId d);
  bool has(int proc, SymbolId d) const;

  // True when G_{proc,d} keeps this node; matches sparse_retains, with
  // start and exit always kept.
  bool retained(int proc, SymbolId d, int node);
  // Sparse successors of node: first retained nodes at or after each dense
  // successor. Deduplicated, deterministic order.
  void next_use(int proc, SymbolId d, int node, std::vector<int>& out);
  // First retained node at or after node itself.
  int first_at_or_after(int proc, SymbolId d, int node);

  long long build_count() const { return build_count_; }
  double build_ms() const { return build_ms_; }

 private:
  // One relevance pass per procedure, shared by every symbol. The two
  // bases are finished graphs: base_local keeps only the symbol-independent
  // floor (start, exit, branches, gotos, returns), base_heap additionally
  // keeps every call. mention_syms/mention_nodes are parallel arrays
  // sorted by (symbol, node): a symbol's extra retained nodes form a
  // contiguous ascending span. Equivalent to sparse_retains because the
  // identity predicates are set membership over the same relevance sets.
  struct ProcIndex {
    bool built = false;
    std::vector<SymbolId> mention_syms;
    std::vector<int> mention_nodes;
    std::vector<int> call_nodes;
    std::vector<int> gen_nodes;
    SparseCfg base_local;
    SparseCfg base_heap;
  };

  // Resolved view of one symbol's graph: base plus its mention span plus
  // ascending extra nodes (calls the symbol crosses, or generators for
  // lambda). Pointers alias ProcIndex storage, which never moves.
  struct Served {
    const SparseCfg* base = nullptr;
    const int* span_lo = nullptr;
    const int* span_hi = nullptr;
    std::vector<int> extra;
  };

  const ProcIndex& index_for(int proc);
  const Served& serve(int proc, SymbolId d);
  // First retained node at or after v in the served view: the base's
  // answer, improved by the symbol's span and extra nodes.
  static int served_next(const Served& s, int v);

  const Problem* problem_;
  std::vector<std::unordered_map<SymbolId, Served>> by_proc_;
  std::vector<std::unordered_map<SymbolId, SparseCfg>> materialized_;
  std::vector<ProcIndex> index_;
  long long build_count_ = 0;
  double build_ms_ = 0;
};

// Graphviz views for debugging: one sparse CFG, or every tabulated path
// edge of a finished solve.
std::string dot_sparse_cfg(const Problem& problem, const SparseCfg& g,
                           int proc, SymbolId d);

class Solver;
std::string dot_path_edges(const Solver& solver);

}  // namespace ideflow
