#include "ideflow/supergraph.hpp"

#include <algorithm>
#include <deque>

#include "ideflow/errors.hpp"

namespace ideflow {

bool Supergraph::is_entry(int proc_idx) const {
  return std::find(entries.begin(), entries.end(), proc_idx) != entries.end();
}

Supergraph build_supergraph(const Program& program,
                            const std::vector<std::string>& entries) {
  if (entries.empty()) {
    throw AnalysisError("no entry procedures given");
  }
  Supergraph sg;
  sg.program = &program;
  size_t n = program.procs.size();
  sg.call_stmts.resize(n);
  sg.callee_of.resize(n);
  sg.callers.resize(n);

  for (size_t p = 0; p < n; ++p) {
    const Procedure& proc = program.procs[p];
    sg.callee_of[p].assign(proc.body.size(), -1);
    for (const Statement& s : proc.body) {
      if (s.op != Opcode::Call) continue;
      int callee = program.proc_index(s.callee);
      sg.call_stmts[p].push_back(s.id);
      sg.callee_of[p][s.id] = callee;
      sg.callers[callee].push_back({static_cast<int>(p), s.id});
    }
  }

  for (const std::string& name : entries) {
    int idx = program.proc_index(name);
    if (idx < 0) {
      throw AnalysisError("unknown entry procedure '" + name + "'");
    }
    if (std::find(sg.entries.begin(), sg.entries.end(), idx) !=
        sg.entries.end()) {
      throw AnalysisError("duplicate entry procedure '" + name + "'");
    }
    sg.entries.push_back(idx);
  }

  sg.proc_reachable.assign(n, false);
  std::deque<int> work;
  for (int e : sg.entries) {
    sg.proc_reachable[e] = true;
    work.push_back(e);
  }
  while (!work.empty()) {
    int p = work.front();
    work.pop_front();
    for (int stmt : sg.call_stmts[p]) {
      int q = sg.callee_of[p][stmt];
      if (!sg.proc_reachable[q]) {
        sg.proc_reachable[q] = true;
        work.push_back(q);
      }
    }
  }
  return sg;
}

}  // namespace ideflow
