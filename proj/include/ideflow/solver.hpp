#pragma once

#include <deque>
#include <functional>
#include <memory>
#include <unordered_map>
#include <vector>

#include "ideflow/edge_function.hpp"
#include "ideflow/lattice.hpp"
#include "ideflow/problem.hpp"
#include "ideflow/sparse.hpp"

namespace ideflow {

struct RunStats {
  double phase1_ms = 0;
  double phase2_ms = 0;
  long long propagations = 0;      // table-modifying Propagate calls
  long long jump_entries = 0;
  long long summary_entries = 0;
  long long sparse_cfg_count = 0;  // sparse CFGs built during the solve
  double sparse_cfg_ms = 0;        // construction time, included in phase1_ms

  double total_ms() const { return phase1_ms + phase2_ms; }
};

// One jump-function row at an exploded node (n, d2): the source fact d1 at
// the procedure start and the accumulated function. updates counts table
// writes; exceeding the client's chain height trips the termination guard.
struct JumpRow {
  SymbolId d1;
  EdgeFn fn;
  int updates = 0;
};

struct SummaryRow {
  SymbolId d5;  // fact at the return site
  EdgeFn fn;
};

// IDE tabulation: Phase I computes jump and summary functions over the
// exploded supergraph, Phase II evaluates them into values. In sparse mode,
// intraprocedural and call-to-return propagations jump along per-(proc,
// symbol) sparse CFGs; call seeding and exit handling stay dense, and
// value_at reconstructs skipped nodes from the nearest retained ones.
class Solver {
 public:
  explicit Solver(const Problem& problem, bool sparse = false);

  void run();

  // Value of d on entry to `node` (0 = start, i+1 = statement i, size+1 =
  // exit). Top when nothing reaches it.
  Value value_at(int proc, int node, SymbolId d) const;
  // Value of d immediately after statement `stmt`, by one-step transfer.
  Value value_after(int proc, int stmt, SymbolId d) const;

  const RunStats& stats() const { return stats_; }
  const Problem& problem() const { return *problem_; }
  bool sparse_mode() const { return cache_ != nullptr; }
  SparseCfgCache* cache() { return cache_.get(); }

  EdgeFn jump_fn(int proc, int node, SymbolId d1, SymbolId d2) const;
  EdgeFn summary_fn(int caller, int call_node, SymbolId d4, SymbolId d5) const;

  // Stored (non-top) Phase II values, for cross-solver comparison.
  void for_each_value(
      const std::function<void(int proc, int node, SymbolId d, const Value&)>&
          fn) const;
  // Stored path edges, for the graph export.
  void for_each_jump(
      const std::function<void(int proc, int node, SymbolId d1, SymbolId d2,
                               const EdgeFn&)>& fn) const;

 private:
  struct WorkItem {
    int proc;
    int node;
    SymbolId d1, d2;
  };

  int flat(int proc, int node) const { return offsets_[proc] + node; }
  bool retained_for(int proc, int node, SymbolId d) const;

  void propagate(int proc, int node, SymbolId d1, SymbolId d2,
                 const EdgeFn& f);
  void phase1();
  void handle_call(const WorkItem& w, const EdgeFn& f);
  void handle_exit(const WorkItem& w, const EdgeFn& f);
  void handle_intraproc(const WorkItem& w, const EdgeFn& f);
  void phase2();

  Value stored_value(int proc, int node, SymbolId d) const;
  Value resolve_skipped(int proc, int node, SymbolId d) const;
  Value transfer_after(int proc, int stmt, SymbolId d,
                       bool use_stored_only) const;

  const Problem* problem_;
  std::vector<int> offsets_;
  int total_nodes_ = 0;

  std::vector<std::unordered_map<SymbolId, std::vector<JumpRow>>> jump_;
  std::vector<std::unordered_map<SymbolId, std::vector<SummaryRow>>> summary_;
  std::vector<std::unordered_map<SymbolId, Value>> val_;
  std::deque<WorkItem> worklist_;
  std::unique_ptr<SparseCfgCache> cache_;
  RunStats stats_;
  bool ran_ = false;

  mutable std::unordered_map<long long, Value> resolve_memo_;
  std::vector<SymbolId> scratch_;
  std::vector<SymbolId> scratch2_;
  std::vector<int> scratch_nodes_;
};

}  // namespace ideflow
