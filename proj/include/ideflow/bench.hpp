#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ideflow/ir.hpp"
#include "ideflow/solver.hpp"

namespace ideflow {

struct GenParams;

// Client factory: "lcp" or "taint". Throws AnalysisError on anything else.
std::unique_ptr<Problem> make_client(const std::string& name,
                                     const Supergraph& sg);

struct CorpusCase {
  std::string name;  // "Category/Stem"
  std::string path;
  Program program;
};

// Every .ir file under dir, recursively, sorted by name. Each case's entry
// procedure is "main". ParseError carries the offending file in its text.
std::vector<CorpusCase> load_corpus(const std::string& dir);

// One measured solve. wall_ms is the median of `repeats` fresh runs; the
// returned solver is the last run (results are deterministic across runs).
struct TimedRun {
  std::unique_ptr<Solver> solver;
  double wall_ms = 0;
};
TimedRun run_solver(const Problem& problem, bool sparse, int repeats = 3);

// "ok" when the expectation annotations of every procedure hold against
// value_after; otherwise a description of the first failure.
std::string check_expectations(const Solver& solver);

// Exhaustive equality: every (node, symbol in the proc's query universe)
// agrees between the two solvers. Suits small programs.
bool results_equal_full(const Solver& a, const Solver& b,
                        std::string* where = nullptr);
// Two-way spot equality over stored values only: everything a stored must
// match b at the same point, and vice versa. Suits generated programs,
// where the full product is too large.
bool results_equal_stored(const Solver& a, const Solver& b,
                          std::string* where = nullptr);

struct CaseRecord {
  std::string case_name;
  std::string mode;  // "dense", "sparse", or "verdict" (comparison row)
  double wall_ms = 0;
  long long propagations = 0;
  long long sparse_cfg_count = 0;
  double sparse_cfg_ms = 0;
  std::string verdict;  // "ok"/"equal" or a failure description
};

// Line-delimited JSON: one object per record, fixed keys
// {case, mode, wall_ms, propagations, sparse_cfg_count, sparse_cfg_ms,
// verdict}.
std::string records_to_json(const std::vector<CaseRecord>& records);

// Measures every corpus case. mode is "dense", "sparse", or "both".
// Per-run records carry the expectation-check verdict (lcp client only;
// taint has no expectation annotations to check). "both" appends one
// comparison record per case whose verdict is "equal" when the two
// solvers agree at every (node, universe symbol) point. all_ok reports
// whether every verdict came back "ok"/"equal".
std::vector<CaseRecord> bench_corpus(const std::string& dir,
                                     const std::string& client,
                                     const std::string& mode, int repeats,
                                     bool* all_ok);

// Measures one generated program; "both" appends a comparison record
// checking stored values in both directions.
std::vector<CaseRecord> bench_generated(const GenParams& params,
                                        const std::string& client,
                                        const std::string& mode, int repeats,
                                        bool* all_ok);

// Plot data for the rho sweep, two columns per row, tab separated. Writes
// propagation_ratio.dat (rho, dense propagations / sparse propagations) and
// speedup.dat (rho, dense wall / sparse wall) under dir.
void export_ratio_files(GenParams base, const std::vector<double>& rhos,
                        const std::string& client, int repeats,
                        const std::string& dir);

}  // namespace ideflow
