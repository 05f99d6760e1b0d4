#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ideflow/ir.hpp"

namespace ideflow {

// Interprocedural view over a Program: call-site wiring plus entry points.
// Callee resolution is by name and unique; every call site has exactly one
// return-site node (the call statement's fallthrough successor).
struct Supergraph {
  const Program* program = nullptr;
  std::vector<int> entries;                     // proc indices, parse order
  std::vector<std::vector<int>> call_stmts;     // per proc: call stmt ids
  std::vector<std::vector<int>> callee_of;      // per proc: stmt id -> callee
                                                // proc index, -1 if not a call
  std::vector<std::vector<std::pair<int, int>>> callers;
                                                // per proc: (caller, call stmt)
  std::vector<bool> proc_reachable;             // from entries via calls

  const Procedure& proc(int idx) const { return program->procs[idx]; }
  bool is_call_stmt(int proc_idx, int stmt_id) const {
    return callee_of[proc_idx][stmt_id] >= 0;
  }
  int callee(int proc_idx, int stmt_id) const {
    return callee_of[proc_idx][stmt_id];
  }
  // Node id (in the caller's CFG) where control resumes after the call.
  int return_site(int proc_idx, int call_stmt) const {
    return program->procs[proc_idx].stmt_node(call_stmt + 1);
  }
  bool is_entry(int proc_idx) const;
};

// Throws AnalysisError on an unknown or duplicate entry name, or when
// `entries` is empty. Procedures unreachable from the entries are retained
// and flagged in proc_reachable.
Supergraph build_supergraph(const Program& program,
                            const std::vector<std::string>& entries);

}  // namespace ideflow
