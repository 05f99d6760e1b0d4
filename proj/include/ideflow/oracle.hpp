#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "ideflow/lattice.hpp"
#include "ideflow/problem.hpp"

namespace ideflow {

// Raised when a program is outside the interpreter's fragment: cyclic
// control flow, call nesting past the depth bound, or a path count past
// the budget.
class OracleUnsupported : public std::runtime_error {
 public:
  explicit OracleUnsupported(const std::string& msg)
      : std::runtime_error(msg) {}
};

// Ground truth by exhaustive concrete execution. Every path through the
// acyclic CFG is walked; branch conditions are never evaluated, both edges
// are always taken. Uninitialized storage reads as top, arithmetic on top
// stays top, and the value of each observable symbol is recorded on entry
// to every visited node, met across paths. Bottom therefore appears only
// where paths disagree.
struct OracleLimits {
  int max_call_depth = 64;
  long long max_paths = 1'000'000;
};

class Oracle {
 public:
  explicit Oracle(const Problem& problem, OracleLimits limits = {});

  // Interprets from each entry procedure with all-top arguments.
  void run();

  // Meet over all paths of d's value entering `node`; top when no path
  // observed it.
  Value value_at(int proc, int node, SymbolId d) const;

  long long paths() const { return paths_; }

 private:
  struct Frame;
  struct State;
  struct Outcome;

  void record(int proc, int node, const Frame& frame, const State& state);
  Value read_symbol(SymbolId d, int proc, const Frame& frame,
                    const State& state) const;
  void explore(int proc, int node, Frame frame, State state, int depth,
               std::vector<Outcome>& outcomes);
  std::vector<Outcome> run_proc(int proc, Frame frame, State state,
                                int depth);

  const Problem* problem_;
  OracleLimits limits_;
  // Symbols observed at nodes of each proc: its locals, heap symbols based
  // on its own locals, and statics. Foreign-based heap symbols have no
  // meaning in this proc's frame and are left unrecorded.
  std::vector<std::vector<SymbolId>> observed_;
  std::map<std::tuple<int, int, SymbolId>, Value> at_;
  long long paths_ = 0;
  bool ran_ = false;
};

}  // namespace ideflow
