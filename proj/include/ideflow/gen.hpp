#pragma once

#include <cstdint>

#include "ideflow/ir.hpp"

namespace ideflow {

// Knobs for the synthetic workload. rho is the fraction of statements that
// are decoys: single-use constant assignments to fresh locals, invisible to
// every other fact. The remainder update a per-procedure accumulator that
// also rides the call tree, so low rho means dense interaction and high rho
// means almost everything is skippable.
struct GenParams {
  int procs = 100;
  int stmts_per_proc = 50;
  double rho = 0.9;
  int depth = 5;                 // target call-tree depth
  double branch_density = 0.05;  // chance a decoy run hides behind a branch
  std::uint64_t seed = 1;
};

// Deterministic: equal params give a structurally equal program. The first
// procedure is "main", the only entry; every other procedure sits in a
// call tree under it whose fanout is chosen to honor `depth`. Control flow
// is acyclic (forward jumps only).
Program generate_program(const GenParams& params);

}  // namespace ideflow
