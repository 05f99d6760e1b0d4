#include "ideflow/bench.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "ideflow/clients.hpp"
#include "ideflow/errors.hpp"
#include "ideflow/gen.hpp"
#include "ideflow/parser.hpp"

namespace ideflow {

namespace fs = std::filesystem;

std::unique_ptr<Problem> make_client(const std::string& name,
                                     const Supergraph& sg) {
  if (name == "lcp") {
    return std::make_unique<LcpProblem>(sg);
  }
  if (name == "taint") {
    return std::make_unique<TaintProblem>(sg);
  }
  throw AnalysisError("unknown client '" + name + "' (expected lcp or taint)");
}

std::vector<CorpusCase> load_corpus(const std::string& dir) {
  std::vector<std::string> paths;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".ir") {
      paths.push_back(entry.path().string());
    }
  }
  std::sort(paths.begin(), paths.end());
  std::vector<CorpusCase> cases;
  cases.reserve(paths.size());
  for (const std::string& path : paths) {
    std::ifstream in(path);
    if (!in) {
      throw AnalysisError("cannot open " + path);
    }
    std::ostringstream text;
    text << in.rdbuf();
    CorpusCase c;
    c.path = path;
    c.name = fs::relative(path, dir).replace_extension("").generic_string();
    try {
      c.program = parse_program(text.str());
    } catch (const ParseError& e) {
      throw ParseError(path + ": " + e.what(), e.line(), e.col());
    }
    cases.push_back(std::move(c));
  }
  return cases;
}

TimedRun run_solver(const Problem& problem, bool sparse, int repeats) {
  if (repeats < 1) {
    repeats = 1;
  }
  std::vector<double> walls;
  walls.reserve(static_cast<size_t>(repeats));
  std::unique_ptr<Solver> last;
  for (int i = 0; i < repeats; ++i) {
    last = std::make_unique<Solver>(problem, sparse);
    last->run();
    walls.push_back(last->stats().total_ms());
  }
  std::sort(walls.begin(), walls.end());
  TimedRun out;
  out.wall_ms = walls[walls.size() / 2];
  out.solver = std::move(last);
  return out;
}

std::string check_expectations(const Solver& solver) {
  const Problem& problem = solver.problem();
  const Program& prog = problem.program();
  for (size_t p = 0; p < prog.procs.size(); ++p) {
    const Procedure& proc = prog.procs[p];
    for (const Expectation& e : proc.expectations) {
      SymbolId d = problem.resolve_spec(static_cast<int>(p), e.symbol);
      if (d == kNoSymbol) {
        return proc.name + " stmt " + std::to_string(e.stmt_id) +
               ": expectation names unknown symbol " + e.symbol.to_string();
      }
      Value want;
      switch (e.value.kind) {
        case ExpectedValue::Kind::Top: want = Value::top(); break;
        case ExpectedValue::Kind::Bottom: want = Value::bottom(); break;
        case ExpectedValue::Kind::Const:
          want = Value::constant(e.value.constant);
          break;
      }
      Value got = solver.value_after(static_cast<int>(p), e.stmt_id, d);
      if (!(got == want)) {
        return proc.name + " stmt " + std::to_string(e.stmt_id) + ": " +
               e.symbol.to_string() + " expected " + want.to_string() +
               ", got " + got.to_string();
      }
    }
  }
  return "ok";
}

namespace {

std::string point_name(const Problem& problem, int proc, int node,
                       SymbolId d) {
  const Procedure& p = problem.program().procs[static_cast<size_t>(proc)];
  return p.name + " node " + std::to_string(node) + " " +
         problem.symbols().get(d).to_string();
}

}  // namespace

bool results_equal_full(const Solver& a, const Solver& b,
                        std::string* where) {
  const Problem& problem = a.problem();
  const Program& prog = problem.program();
  for (size_t p = 0; p < prog.procs.size(); ++p) {
    std::vector<SymbolId> universe =
        problem.query_universe(static_cast<int>(p));
    int nodes = prog.procs[p].node_count();
    for (int n = 0; n < nodes; ++n) {
      for (SymbolId d : universe) {
        Value va = a.value_at(static_cast<int>(p), n, d);
        Value vb = b.value_at(static_cast<int>(p), n, d);
        if (!(va == vb)) {
          if (where) {
            *where = point_name(problem, static_cast<int>(p), n, d) + ": " +
                     va.to_string() + " vs " + vb.to_string();
          }
          return false;
        }
      }
    }
  }
  return true;
}

bool results_equal_stored(const Solver& a, const Solver& b,
                          std::string* where) {
  bool ok = true;
  auto check = [&](const Solver& from, const Solver& to) {
    from.for_each_value([&](int proc, int node, SymbolId d, const Value& v) {
      if (!ok) {
        return;
      }
      Value w = to.value_at(proc, node, d);
      if (!(w == v)) {
        ok = false;
        if (where) {
          *where = point_name(from.problem(), proc, node, d) + ": " +
                   v.to_string() + " vs " + w.to_string();
        }
      }
    });
  };
  check(a, b);
  check(b, a);
  return ok;
}

std::string records_to_json(const std::vector<CaseRecord>& records) {
  std::string out;
  for (const CaseRecord& r : records) {
    nlohmann::ordered_json row;
    row["case"] = r.case_name;
    row["mode"] = r.mode;
    row["wall_ms"] = r.wall_ms;
    row["propagations"] = r.propagations;
    row["sparse_cfg_count"] = r.sparse_cfg_count;
    row["sparse_cfg_ms"] = r.sparse_cfg_ms;
    row["verdict"] = r.verdict;
    out += row.dump();
    out += '\n';
  }
  return out;
}

namespace {

CaseRecord record_of(const std::string& name, const std::string& mode,
                     const TimedRun& run, std::string verdict) {
  CaseRecord r;
  r.case_name = name;
  r.mode = mode;
  r.wall_ms = run.wall_ms;
  r.propagations = run.solver->stats().propagations;
  r.sparse_cfg_count = run.solver->stats().sparse_cfg_count;
  r.sparse_cfg_ms = run.solver->stats().sparse_cfg_ms;
  r.verdict = std::move(verdict);
  return r;
}

CaseRecord verdict_record(const std::string& name, std::string verdict) {
  CaseRecord r;
  r.case_name = name;
  r.mode = "verdict";
  r.verdict = std::move(verdict);
  return r;
}

void require_mode(const std::string& mode) {
  if (mode != "dense" && mode != "sparse" && mode != "both") {
    throw AnalysisError("unknown mode '" + mode +
                        "' (expected dense, sparse, or both)");
  }
}

}  // namespace

std::vector<CaseRecord> bench_corpus(const std::string& dir,
                                     const std::string& client,
                                     const std::string& mode, int repeats,
                                     bool* all_ok) {
  require_mode(mode);
  std::vector<CaseRecord> records;
  bool ok = true;
  for (CorpusCase& c : load_corpus(dir)) {
    Supergraph sg = build_supergraph(c.program, {"main"});
    std::unique_ptr<Problem> problem = make_client(client, sg);
    TimedRun dense, sparse;
    if (mode != "sparse") {
      dense = run_solver(*problem, false, repeats);
    }
    if (mode != "dense") {
      sparse = run_solver(*problem, true, repeats);
    }

    // Expectation annotations state constant-propagation results; for other
    // clients only cross-solver agreement is checked.
    auto expect = [&](const TimedRun& run) {
      return client == "lcp" ? check_expectations(*run.solver)
                             : std::string("ok");
    };
    if (dense.solver) {
      std::string dv = expect(dense);
      ok = ok && dv == "ok";
      records.push_back(record_of(c.name, "dense", dense, std::move(dv)));
    }
    if (sparse.solver) {
      std::string sv = expect(sparse);
      ok = ok && sv == "ok";
      records.push_back(record_of(c.name, "sparse", sparse, std::move(sv)));
    }
    if (dense.solver && sparse.solver) {
      std::string diff;
      std::string verdict =
          results_equal_full(*dense.solver, *sparse.solver, &diff)
              ? "equal"
              : "differs at " + diff;
      ok = ok && verdict == "equal";
      records.push_back(verdict_record(c.name, std::move(verdict)));
    }
  }
  if (all_ok) {
    *all_ok = ok;
  }
  return records;
}

std::vector<CaseRecord> bench_generated(const GenParams& params,
                                        const std::string& client,
                                        const std::string& mode, int repeats,
                                        bool* all_ok) {
  require_mode(mode);
  Program prog = generate_program(params);
  Supergraph sg = build_supergraph(prog, {"main"});
  std::unique_ptr<Problem> problem = make_client(client, sg);
  TimedRun dense, sparse;
  if (mode != "sparse") {
    dense = run_solver(*problem, false, repeats);
  }
  if (mode != "dense") {
    sparse = run_solver(*problem, true, repeats);
  }

  std::ostringstream name;
  name << "gen(procs=" << params.procs << ",stmts=" << params.stmts_per_proc
       << ",rho=" << params.rho << ",depth=" << params.depth
       << ",density=" << params.branch_density << ",seed=" << params.seed
       << ")";
  bool ok = true;
  std::vector<CaseRecord> records;
  if (dense.solver) {
    records.push_back(record_of(name.str(), "dense", dense, "ok"));
  }
  if (sparse.solver) {
    records.push_back(record_of(name.str(), "sparse", sparse, "ok"));
  }
  if (dense.solver && sparse.solver) {
    std::string diff;
    std::string verdict =
        results_equal_stored(*dense.solver, *sparse.solver, &diff)
            ? "equal"
            : "differs at " + diff;
    ok = verdict == "equal";
    records.push_back(verdict_record(name.str(), std::move(verdict)));
  }
  if (all_ok) {
    *all_ok = ok;
  }
  return records;
}

void export_ratio_files(GenParams base, const std::vector<double>& rhos,
                        const std::string& client, int repeats,
                        const std::string& dir) {
  fs::create_directories(dir);
  std::ofstream prop(fs::path(dir) / "propagation_ratio.dat");
  std::ofstream speed(fs::path(dir) / "speedup.dat");
  if (!prop || !speed) {
    throw AnalysisError("cannot write plot data under " + dir);
  }
  for (double rho : rhos) {
    base.rho = rho;
    Program prog = generate_program(base);
    Supergraph sg = build_supergraph(prog, {"main"});
    std::unique_ptr<Problem> problem = make_client(client, sg);
    TimedRun dense = run_solver(*problem, false, repeats);
    TimedRun sparse = run_solver(*problem, true, repeats);
    double dp = static_cast<double>(dense.solver->stats().propagations);
    double sp = static_cast<double>(
        std::max<long long>(1, sparse.solver->stats().propagations));
    prop << rho << '\t' << dp / sp << '\n';
    speed << rho << '\t' << dense.wall_ms / std::max(sparse.wall_ms, 1e-6)
          << '\n';
  }
}

}  // namespace ideflow
