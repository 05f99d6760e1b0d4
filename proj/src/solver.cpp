#include "ideflow/solver.hpp"

#include <chrono>
#include <string>

#include "ideflow/errors.hpp"

namespace ideflow {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

Solver::Solver(const Problem& problem, bool sparse) : problem_(&problem) {
  const Program& prog = problem.program();
  offsets_.reserve(prog.procs.size());
  for (const Procedure& p : prog.procs) {
    offsets_.push_back(total_nodes_);
    total_nodes_ += p.node_count();
  }
  jump_.resize(static_cast<size_t>(total_nodes_));
  summary_.resize(static_cast<size_t>(total_nodes_));
  val_.resize(static_cast<size_t>(total_nodes_));
  if (sparse) {
    cache_ = std::make_unique<SparseCfgCache>(problem);
  }
}

void Solver::run() {
  if (ran_) {
    return;
  }
  ran_ = true;
  auto t0 = Clock::now();
  phase1();
  stats_.phase1_ms = ms_since(t0);
  auto t1 = Clock::now();
  phase2();
  stats_.phase2_ms = ms_since(t1);
  for (const auto& m : jump_) {
    for (const auto& [d2, rows] : m) {
      stats_.jump_entries += static_cast<long long>(rows.size());
    }
  }
  for (const auto& m : summary_) {
    for (const auto& [d4, rows] : m) {
      stats_.summary_entries += static_cast<long long>(rows.size());
    }
  }
  // Frozen here: constructions triggered by later queries are not part of
  // the solve and must not skew the reported construction share.
  if (cache_) {
    stats_.sparse_cfg_count = cache_->build_count();
    stats_.sparse_cfg_ms = cache_->build_ms();
  }
}

bool Solver::retained_for(int proc, int node, SymbolId d) const {
  const Procedure& p = problem_->program().procs[static_cast<size_t>(proc)];
  if (node == p.start_node() || node == p.exit_node()) {
    return true;
  }
  if (!cache_) {
    return true;
  }
  return cache_->retained(proc, d, node);
}

void Solver::propagate(int proc, int node, SymbolId d1, SymbolId d2,
                       const EdgeFn& f) {
  auto& rows = jump_[static_cast<size_t>(flat(proc, node))][d2];
  JumpRow* row = nullptr;
  for (JumpRow& r : rows) {
    if (r.d1 == d1) {
      row = &r;
      break;
    }
  }
  if (row == nullptr) {
    EdgeFn met = meet_edge(EdgeFn::all_top(), f);
    if (met.is_top()) {
      return;
    }
    rows.push_back(JumpRow{d1, met, 1});
  } else {
    EdgeFn met = meet_edge(row->fn, f);
    if (met == row->fn) {
      return;
    }
    row->fn = met;
    ++row->updates;
    if (row->updates > problem_->chain_height()) {
      const Procedure& p =
          problem_->program().procs[static_cast<size_t>(proc)];
      throw SolverGuardError(
          "jump entry at " + p.name + ":" + std::to_string(node) +
          " lowered " + std::to_string(row->updates) +
          " times, past the chain height of " +
          std::to_string(problem_->chain_height()) +
          "; the edge-function family is not descending");
    }
  }
  ++stats_.propagations;
  worklist_.push_back(WorkItem{proc, node, d1, d2});
}

void Solver::phase1() {
  for (int e : problem_->supergraph().entries) {
    propagate(e, 0, SymbolTable::kLambda, SymbolTable::kLambda,
              EdgeFn::identity());
  }
  while (!worklist_.empty()) {
    WorkItem w = worklist_.front();
    worklist_.pop_front();
    // Re-read the row: it may have been lowered again since the enqueue.
    EdgeFn f = jump_fn(w.proc, w.node, w.d1, w.d2);
    const Procedure& p =
        problem_->program().procs[static_cast<size_t>(w.proc)];
    if (w.node == p.exit_node()) {
      handle_exit(w, f);
    } else if (p.is_stmt_node(w.node) &&
               problem_->supergraph().is_call_stmt(w.proc, w.node - 1)) {
      handle_call(w, f);
    } else {
      handle_intraproc(w, f);
    }
  }
}

void Solver::handle_call(const WorkItem& w, const EdgeFn& f) {
  const Supergraph& sg = problem_->supergraph();
  int cs = w.node - 1;
  int q = sg.callee(w.proc, cs);
  int r_node = sg.return_site(w.proc, cs);

  // Seed the callee: identity path edges at its start node.
  scratch_.clear();
  problem_->flow_call(w.proc, cs, w.d2, scratch_);
  for (size_t i = 0; i < scratch_.size(); ++i) {
    SymbolId d3 = scratch_[i];
    propagate(q, 0, d3, d3, EdgeFn::identity());
  }

  // Facts that bypass the callee along the call-to-return edge.
  scratch_.clear();
  problem_->flow_call_to_return(w.proc, cs, w.d2, scratch_);
  for (size_t i = 0; i < scratch_.size(); ++i) {
    SymbolId d3 = scratch_[i];
    EdgeFn fp =
        compose(f, problem_->edge_call_to_return(w.proc, cs, w.d2, d3));
    if (cache_) {
      cache_->next_use(w.proc, d3, w.node, scratch_nodes_);
      for (int t : scratch_nodes_) {
        propagate(w.proc, t, w.d1, d3, fp);
      }
    } else {
      propagate(w.proc, r_node, w.d1, d3, fp);
    }
  }

  // Apply summaries already computed for this call site.
  const auto& sm = summary_[static_cast<size_t>(flat(w.proc, w.node))];
  auto it = sm.find(w.d2);
  if (it != sm.end()) {
    for (const SummaryRow& row : it->second) {
      propagate(w.proc, r_node, w.d1, row.d5, compose(f, row.fn));
    }
  }
}

void Solver::handle_exit(const WorkItem& w, const EdgeFn& f) {
  const Supergraph& sg = problem_->supergraph();
  for (const auto& [c, cs] : sg.callers[static_cast<size_t>(w.proc)]) {
    int call_node = sg.proc(c).stmt_node(cs);
    int r_node = sg.return_site(c, cs);
    scratch_.clear();
    problem_->flow_call_inverse(c, cs, w.d1, scratch_);
    scratch2_.clear();
    problem_->flow_return(c, cs, w.d2, scratch2_);
    for (size_t i = 0; i < scratch_.size(); ++i) {
      SymbolId d4 = scratch_[i];
      EdgeFn f4 = problem_->edge_call(c, cs, d4, w.d1);
      for (size_t j = 0; j < scratch2_.size(); ++j) {
        SymbolId d5 = scratch2_[j];
        EdgeFn f5 = problem_->edge_return(c, cs, w.d2, d5);
        EdgeFn fsum = compose(compose(f4, f), f5);
        auto& rows = summary_[static_cast<size_t>(flat(c, call_node))][d4];
        SummaryRow* row = nullptr;
        for (SummaryRow& r : rows) {
          if (r.d5 == d5) {
            row = &r;
            break;
          }
        }
        EdgeFn old = row ? row->fn : EdgeFn::all_top();
        EdgeFn met = meet_edge(old, fsum);
        if (met == old) {
          continue;
        }
        if (row) {
          row->fn = met;
        } else {
          rows.push_back(SummaryRow{d5, met});
        }
        // Wake the callers: every tabulated path into (call, d4) now also
        // reaches (return site, d5) through the new summary.
        const auto& jm = jump_[static_cast<size_t>(flat(c, call_node))];
        auto jit = jm.find(d4);
        if (jit == jm.end()) {
          continue;
        }
        // The row vector may grow while we propagate; index, don't iterate.
        for (size_t k = 0; k < jit->second.size(); ++k) {
          JumpRow jr = jit->second[k];
          propagate(c, r_node, jr.d1, d5, compose(jr.fn, met));
        }
      }
    }
  }
}

void Solver::handle_intraproc(const WorkItem& w, const EdgeFn& f) {
  const Procedure& p = problem_->program().procs[static_cast<size_t>(w.proc)];
  scratch_.clear();
  problem_->flow_normal(w.proc, w.node, w.d2, scratch_);
  for (size_t i = 0; i < scratch_.size(); ++i) {
    SymbolId d3 = scratch_[i];
    EdgeFn fp = compose(f, problem_->edge_normal(w.proc, w.node, w.d2, d3));
    if (cache_) {
      cache_->next_use(w.proc, d3, w.node, scratch_nodes_);
      for (int t : scratch_nodes_) {
        propagate(w.proc, t, w.d1, d3, fp);
      }
    } else {
      for (int m : p.succ[static_cast<size_t>(w.node)]) {
        propagate(w.proc, m, w.d1, d3, fp);
      }
    }
  }
}

void Solver::phase2() {
  const Supergraph& sg = problem_->supergraph();
  size_t nprocs = problem_->program().procs.size();

  // Pass 1: fixpoint over procedure-start values, entry lambdas at top.
  std::deque<int> pq;
  std::vector<char> inq(nprocs, 0);
  for (int e : sg.entries) {
    if (!inq[static_cast<size_t>(e)]) {
      inq[static_cast<size_t>(e)] = 1;
      pq.push_back(e);
    }
  }
  while (!pq.empty()) {
    int p = pq.front();
    pq.pop_front();
    inq[static_cast<size_t>(p)] = 0;
    const Procedure& proc = problem_->program().procs[static_cast<size_t>(p)];
    for (int cs : sg.call_stmts[static_cast<size_t>(p)]) {
      int call_node = proc.stmt_node(cs);
      int q = sg.callee(p, cs);
      const auto& jm = jump_[static_cast<size_t>(flat(p, call_node))];
      for (const auto& [d2, rows] : jm) {
        Value v = Value::top();
        for (const JumpRow& row : rows) {
          v = meet_value(v, apply(row.fn, stored_value(p, 0, row.d1)));
        }
        scratch_.clear();
        problem_->flow_call(p, cs, d2, scratch_);
        for (SymbolId d3 : scratch_) {
          Value nv = apply(problem_->edge_call(p, cs, d2, d3), v);
          auto& slot = val_[static_cast<size_t>(flat(q, 0))];
          auto it = slot.find(d3);
          Value cur = it == slot.end() ? Value::top() : it->second;
          Value met = meet_value(cur, nv);
          if (met == cur) {
            continue;
          }
          if (it == slot.end()) {
            slot.emplace(d3, met);
          } else {
            it->second = met;
          }
          if (!inq[static_cast<size_t>(q)]) {
            inq[static_cast<size_t>(q)] = 1;
            pq.push_back(q);
          }
        }
      }
    }
  }

  // Pass 2: evaluate every jump row against its start value. In sparse mode
  // rows parked at skipped nodes by dense return-site deliveries carry only
  // part of the meet, so their values are not stored; value_at reconstructs
  // those nodes from retained ones instead.
  for (size_t p = 0; p < nprocs; ++p) {
    const Procedure& proc = problem_->program().procs[p];
    for (int n = 0; n < proc.node_count(); ++n) {
      const auto& jm = jump_[static_cast<size_t>(flat(static_cast<int>(p), n))];
      if (jm.empty()) {
        continue;
      }
      for (const auto& [d2, rows] : jm) {
        if (cache_ && !retained_for(static_cast<int>(p), n, d2)) {
          continue;
        }
        Value v = Value::top();
        for (const JumpRow& row : rows) {
          v = meet_value(
              v, apply(row.fn, stored_value(static_cast<int>(p), 0, row.d1)));
        }
        if (!(v == Value::top())) {
          val_[static_cast<size_t>(flat(static_cast<int>(p), n))][d2] = v;
        }
      }
    }
  }
}

Value Solver::stored_value(int proc, int node, SymbolId d) const {
  const auto& slot = val_[static_cast<size_t>(flat(proc, node))];
  auto it = slot.find(d);
  return it == slot.end() ? Value::top() : it->second;
}

Value Solver::value_at(int proc, int node, SymbolId d) const {
  if (!cache_ || retained_for(proc, node, d)) {
    return stored_value(proc, node, d);
  }
  return resolve_skipped(proc, node, d);
}

Value Solver::resolve_skipped(int proc, int node, SymbolId d) const {
  const Procedure& p = problem_->program().procs[static_cast<size_t>(proc)];
  auto key = [&](int n) {
    return (static_cast<long long>(flat(proc, n)) << 32) |
           static_cast<long long>(d);
  };
  auto hit = resolve_memo_.find(key(node));
  if (hit != resolve_memo_.end()) {
    return hit->second;
  }
  // Backward walk over the skipped region, which is acyclic: every CFG
  // cycle keeps a retained branch or goto. Retained predecessors contribute
  // their after-statement value; skipped ones pass d through their identity
  // row, plus whatever the statement generates into d from the tautological
  // fact. Generators are retained for lambda, so lambda's rows mark exactly
  // the reachable ones.
  auto gen_into = [&](int q) {
    if (problem_->supergraph().is_call_stmt(proc, q - 1)) {
      return Value::top();
    }
    const auto& jm = jump_[static_cast<size_t>(flat(proc, q))];
    auto lam = jm.find(SymbolTable::kLambda);
    if (lam == jm.end() || lam->second.empty()) {
      return Value::top();
    }
    std::vector<SymbolId> outs;
    problem_->flow_normal(proc, q, SymbolTable::kLambda, outs);
    for (SymbolId d3 : outs) {
      if (d3 == d) {
        return apply(problem_->edge_normal(proc, q, SymbolTable::kLambda, d),
                     stored_value(proc, q, SymbolTable::kLambda));
      }
    }
    return Value::top();
  };
  std::vector<int> stack;
  stack.push_back(node);
  while (!stack.empty()) {
    int x = stack.back();
    if (resolve_memo_.find(key(x)) != resolve_memo_.end()) {
      stack.pop_back();
      continue;
    }
    bool ready = true;
    for (int q : p.pred[static_cast<size_t>(x)]) {
      if (q != p.start_node() && !retained_for(proc, q, d) &&
          resolve_memo_.find(key(q)) == resolve_memo_.end()) {
        stack.push_back(q);
        ready = false;
      }
    }
    if (!ready) {
      continue;
    }
    Value v = Value::top();
    for (int q : p.pred[static_cast<size_t>(x)]) {
      if (q == p.start_node()) {
        v = meet_value(v, stored_value(proc, q, d));
      } else if (retained_for(proc, q, d)) {
        v = meet_value(v, transfer_after(proc, q - 1, d, true));
      } else {
        v = meet_value(v, meet_value(resolve_memo_.at(key(q)), gen_into(q)));
      }
    }
    resolve_memo_.emplace(key(x), v);
    stack.pop_back();
  }
  return resolve_memo_.at(key(node));
}

Value Solver::transfer_after(int proc, int stmt, SymbolId d,
                             bool use_stored_only) const {
  const Procedure& p = problem_->program().procs[static_cast<size_t>(proc)];
  int node = p.stmt_node(stmt);
  auto input = [&](SymbolId d2) {
    return use_stored_only ? stored_value(proc, node, d2)
                           : value_at(proc, node, d2);
  };
  // Local buffer: input() may re-enter this function through value_at when
  // it reconstructs a skipped predecessor.
  std::vector<SymbolId> outs;
  Value v = Value::top();
  if (problem_->supergraph().is_call_stmt(proc, stmt)) {
    // Meet of the bypass route and every summary row ending in d.
    SymbolId cands[2] = {d, SymbolTable::kLambda};
    for (int i = 0; i < (d == SymbolTable::kLambda ? 1 : 2); ++i) {
      SymbolId d2 = cands[i];
      outs.clear();
      problem_->flow_call_to_return(proc, stmt, d2, outs);
      for (SymbolId d3 : outs) {
        if (d3 == d) {
          v = meet_value(v, apply(problem_->edge_call_to_return(proc, stmt,
                                                                d2, d),
                                  input(d2)));
        }
      }
    }
    const auto& sm = summary_[static_cast<size_t>(flat(proc, node))];
    for (const auto& [d4, rows] : sm) {
      for (const SummaryRow& row : rows) {
        if (row.d5 == d) {
          v = meet_value(v, apply(row.fn, input(d4)));
        }
      }
    }
    return v;
  }
  const StmtRelevance& rel = problem_->relevance(proc, stmt);
  auto consider = [&](SymbolId d2) {
    outs.clear();
    problem_->flow_normal(proc, node, d2, outs);
    for (SymbolId d3 : outs) {
      if (d3 == d) {
        v = meet_value(
            v, apply(problem_->edge_normal(proc, node, d2, d), input(d2)));
        break;
      }
    }
  };
  consider(d);
  if (d != SymbolTable::kLambda) {
    consider(SymbolTable::kLambda);
  }
  for (SymbolId d2 : rel.flow_reads) {
    if (d2 != d && d2 != SymbolTable::kLambda) {
      consider(d2);
    }
  }
  return v;
}

Value Solver::value_after(int proc, int stmt, SymbolId d) const {
  return transfer_after(proc, stmt, d, false);
}

EdgeFn Solver::jump_fn(int proc, int node, SymbolId d1, SymbolId d2) const {
  const auto& jm = jump_[static_cast<size_t>(flat(proc, node))];
  auto it = jm.find(d2);
  if (it != jm.end()) {
    for (const JumpRow& row : it->second) {
      if (row.d1 == d1) {
        return row.fn;
      }
    }
  }
  return EdgeFn::all_top();
}

EdgeFn Solver::summary_fn(int caller, int call_node, SymbolId d4,
                          SymbolId d5) const {
  const auto& sm = summary_[static_cast<size_t>(flat(caller, call_node))];
  auto it = sm.find(d4);
  if (it != sm.end()) {
    for (const SummaryRow& row : it->second) {
      if (row.d5 == d5) {
        return row.fn;
      }
    }
  }
  return EdgeFn::all_top();
}

void Solver::for_each_value(
    const std::function<void(int, int, SymbolId, const Value&)>& fn) const {
  for (size_t p = 0; p < problem_->program().procs.size(); ++p) {
    const Procedure& proc = problem_->program().procs[p];
    for (int n = 0; n < proc.node_count(); ++n) {
      const auto& slot = val_[static_cast<size_t>(flat(static_cast<int>(p), n))];
      for (const auto& [d, v] : slot) {
        fn(static_cast<int>(p), n, d, v);
      }
    }
  }
}

void Solver::for_each_jump(
    const std::function<void(int, int, SymbolId, SymbolId, const EdgeFn&)>& fn)
    const {
  for (size_t p = 0; p < problem_->program().procs.size(); ++p) {
    const Procedure& proc = problem_->program().procs[p];
    for (int n = 0; n < proc.node_count(); ++n) {
      const auto& jm = jump_[static_cast<size_t>(flat(static_cast<int>(p), n))];
      for (const auto& [d2, rows] : jm) {
        for (const JumpRow& row : rows) {
          fn(static_cast<int>(p), n, row.d1, d2, row.fn);
        }
      }
    }
  }
}

}  // namespace ideflow
