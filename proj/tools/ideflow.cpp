// Command-line front end: analyze IR files, measure the corpus or a
// generated workload, emit stress programs, and diff dense against sparse.
//
// Exit codes: 0 success, 1 parse error, 2 invalid input or parameters,
// 3 solver termination guard, 4 dense/sparse results differ.

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ideflow/bench.hpp"
#include "ideflow/errors.hpp"
#include "ideflow/gen.hpp"
#include "ideflow/parser.hpp"
#include "ideflow/sparse.hpp"

namespace {

using namespace ideflow;

namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw AnalysisError("cannot open " + path);
  }
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

// Query output prints values as T, B, or the constant itself.
std::string value_text(const Value& v) {
  if (v.is_top()) {
    return "T";
  }
  if (v.is_bottom()) {
    return "B";
  }
  return std::to_string(v.num);
}

std::string file_token(const std::string& text) {
  std::string out;
  for (char c : text) {
    out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  }
  return out;
}

struct Query {
  std::string proc;
  bool at_exit = false;
  int stmt = -1;
  std::string symbol;
};

// proc:stmt:symbol where stmt is a statement id or the keyword `exit`.
Query parse_query(const std::string& text) {
  size_t a = text.find(':');
  size_t b = a == std::string::npos ? a : text.find(':', a + 1);
  if (b == std::string::npos || text.find(':', b + 1) != std::string::npos) {
    throw AnalysisError("bad query '" + text + "' (want proc:stmt:symbol)");
  }
  Query q;
  q.proc = text.substr(0, a);
  std::string stmt = text.substr(a + 1, b - a - 1);
  q.symbol = text.substr(b + 1);
  if (q.proc.empty() || stmt.empty() || q.symbol.empty()) {
    throw AnalysisError("bad query '" + text + "' (want proc:stmt:symbol)");
  }
  if (stmt == "exit") {
    q.at_exit = true;
    return q;
  }
  size_t used = 0;
  try {
    q.stmt = std::stoi(stmt, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != stmt.size() || q.stmt < 0) {
    throw AnalysisError("bad query '" + text +
                        "': statement must be an id or `exit`");
  }
  return q;
}

SymbolId resolve_query_symbol(const Problem& problem, int proc,
                              const std::string& text) {
  SymbolSpec spec;
  try {
    spec = parse_symbol_spec_text(text);
  } catch (const ParseError& e) {
    throw AnalysisError("bad query symbol '" + text + "': " + e.what());
  }
  SymbolId d = problem.resolve_spec(proc, spec);
  if (d == kNoSymbol) {
    throw AnalysisError("unknown symbol '" + text + "' in query");
  }
  return d;
}

void print_stats(const char* label, const RunStats& s) {
  std::cerr << label << ": phase1_ms=" << s.phase1_ms
            << " phase2_ms=" << s.phase2_ms
            << " propagations=" << s.propagations
            << " jump_entries=" << s.jump_entries
            << " summary_entries=" << s.summary_entries
            << " sparse_cfg_count=" << s.sparse_cfg_count
            << " sparse_cfg_ms=" << s.sparse_cfg_ms << "\n";
}

struct AnalyzeOpts {
  std::string input;
  std::vector<std::string> entries{"main"};
  std::string client = "lcp";
  std::string mode = "sparse";
  std::vector<std::string> queries;
  bool all_exits = false;
  std::string format = "text";
  std::string dot_dir;
  bool stats = false;
};

int run_analyze(const AnalyzeOpts& o) {
  Program prog = parse_program(read_file(o.input));
  Supergraph sg = build_supergraph(prog, o.entries);
  std::unique_ptr<Problem> problem = make_client(o.client, sg);

  std::unique_ptr<Solver> dense, sparse;
  if (o.mode != "sparse") {
    dense = std::make_unique<Solver>(*problem, false);
    dense->run();
    if (o.stats) {
      print_stats("dense", dense->stats());
    }
  }
  if (o.mode != "dense") {
    sparse = std::make_unique<Solver>(*problem, true);
    sparse->run();
    if (o.stats) {
      print_stats("sparse", sparse->stats());
    }
  }
  if (dense && sparse) {
    std::string where;
    if (!results_equal_full(*dense, *sparse, &where)) {
      std::cerr << "dense and sparse disagree at " << where << "\n";
      return 4;
    }
  }
  Solver& solver = sparse ? *sparse : *dense;

  auto emit = [&](const std::string& proc, const std::string& stmt,
                  const std::string& symbol, const Value& v) {
    if (o.format == "records") {
      nlohmann::ordered_json row;
      row["proc"] = proc;
      row["stmt"] = stmt;
      row["symbol"] = symbol;
      row["value"] = value_text(v);
      std::cout << row.dump() << "\n";
    } else {
      std::cout << proc << " " << stmt << " " << symbol << " "
                << value_text(v) << "\n";
    }
  };

  std::vector<std::pair<int, SymbolId>> queried;
  for (const std::string& text : o.queries) {
    Query q = parse_query(text);
    int p = prog.proc_index(q.proc);
    if (p < 0) {
      throw AnalysisError("unknown procedure '" + q.proc + "' in query");
    }
    SymbolId d = resolve_query_symbol(*problem, p, q.symbol);
    const Procedure& proc = prog.procs[static_cast<size_t>(p)];
    Value v;
    if (q.at_exit) {
      v = solver.value_at(p, proc.exit_node(), d);
    } else {
      if (q.stmt >= static_cast<int>(proc.body.size())) {
        throw AnalysisError("procedure '" + q.proc + "' has no statement " +
                            std::to_string(q.stmt));
      }
      v = solver.value_after(p, q.stmt, d);
    }
    emit(q.proc, q.at_exit ? "exit" : std::to_string(q.stmt), q.symbol, v);
    queried.emplace_back(p, d);
  }

  if (o.all_exits) {
    for (size_t p = 0; p < prog.procs.size(); ++p) {
      if (!sg.proc_reachable[p]) {
        continue;
      }
      const Procedure& proc = prog.procs[p];
      for (SymbolId d : problem->query_universe(static_cast<int>(p))) {
        Value v = solver.value_at(static_cast<int>(p), proc.exit_node(), d);
        emit(proc.name, "exit", problem->symbols().get(d).to_string(), v);
      }
    }
  }

  if (!o.dot_dir.empty()) {
    fs::create_directories(o.dot_dir);
    std::ofstream pe(fs::path(o.dot_dir) / "path_edges.dot");
    if (!pe) {
      throw AnalysisError("cannot write under " + o.dot_dir);
    }
    pe << dot_path_edges(solver);
    if (solver.cache()) {
      std::sort(queried.begin(), queried.end());
      queried.erase(std::unique(queried.begin(), queried.end()),
                    queried.end());
      for (auto [p, d] : queried) {
        const SparseCfg& g = solver.cache()->get(p, d);
        std::string name =
            "sparse_cfg_" + file_token(prog.procs[static_cast<size_t>(p)].name) +
            "_" + file_token(problem->symbols().get(d).to_string()) + ".dot";
        std::ofstream out(fs::path(o.dot_dir) / name);
        out << dot_sparse_cfg(*problem, g, p, d);
      }
    }
  }
  return 0;
}

int run_bench(const std::string& corpus_dir, bool use_gen,
              const GenParams& params, const std::string& client,
              const std::string& mode, int repeats,
              const std::string& out_path, const std::string& plot_dir) {
  if (corpus_dir.empty() && !use_gen) {
    throw AnalysisError("bench needs one of --corpus or --gen");
  }
  bool all_ok = true;
  std::vector<CaseRecord> records =
      use_gen ? bench_generated(params, client, mode, repeats, &all_ok)
              : bench_corpus(corpus_dir, client, mode, repeats, &all_ok);
  std::string text = records_to_json(records);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) {
      throw AnalysisError("cannot write " + out_path);
    }
    out << text;
  }
  if (!plot_dir.empty()) {
    export_ratio_files(params, {0.0, 0.5, 0.9, 0.95, 0.99}, client, repeats,
                       plot_dir);
  }
  return all_ok ? 0 : 4;
}

int run_gen(const GenParams& params, const std::string& out_path) {
  Program prog = generate_program(params);
  long long stmts = 0;
  for (const Procedure& p : prog.procs) {
    stmts += static_cast<long long>(p.body.size());
  }
  std::string text = print_program(prog);
  if (out_path.empty()) {
    std::cout << text;
    std::cerr << "procedures " << prog.procs.size() << "\n"
              << "statements " << stmts << "\n";
  } else {
    std::ofstream out(out_path);
    if (!out) {
      throw AnalysisError("cannot write " + out_path);
    }
    out << text;
    std::cout << "procedures " << prog.procs.size() << "\n"
              << "statements " << stmts << "\n";
  }
  return 0;
}

int run_diff(const std::string& input, const std::vector<std::string>& entries,
             const std::string& client) {
  Program prog = parse_program(read_file(input));
  Supergraph sg = build_supergraph(prog, entries);
  std::unique_ptr<Problem> problem = make_client(client, sg);
  Solver dense(*problem, false);
  dense.run();
  Solver sparse(*problem, true);
  sparse.run();
  std::string where;
  if (!results_equal_full(dense, sparse, &where)) {
    std::cout << "results differ: " << where << "\n";
    return 4;
  }
  std::cout << "results identical\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dense and sparse IDE data-flow analysis over a textual IR"};
  app.require_subcommand(1);

  AnalyzeOpts an;
  CLI::App* analyze =
      app.add_subcommand("analyze", "solve one IR file and answer queries");
  analyze->add_option("--input", an.input, "IR file")->required();
  analyze->add_option("--entry", an.entries,
                      "entry procedures (default: main)");
  analyze->add_option("--client", an.client, "analysis client")
      ->check(CLI::IsMember({"lcp", "taint"}))
      ->capture_default_str();
  analyze->add_option("--mode", an.mode, "which solver answers")
      ->check(CLI::IsMember({"dense", "sparse", "both"}))
      ->capture_default_str();
  analyze->add_option(
      "--query", an.queries,
      "proc:stmt:symbol; stmt is an id (value after it runs) or `exit`");
  analyze->add_flag("--all-exits", an.all_exits,
                    "print every universe symbol at every reachable exit");
  analyze->add_option("--format", an.format, "output format")
      ->check(CLI::IsMember({"text", "records"}))
      ->capture_default_str();
  analyze->add_option("--dot-dir", an.dot_dir,
                      "write graphviz debug views into this directory");
  analyze->add_flag("--stats", an.stats, "print run statistics to stderr");

  std::string bench_corpus_dir, bench_out, bench_plot;
  std::string bench_client = "lcp", bench_mode = "both";
  bool bench_gen = false;
  int bench_repeats = 3;
  GenParams bench_params;
  CLI::App* bench =
      app.add_subcommand("bench", "measure solver runs and emit records");
  CLI::Option* copt =
      bench->add_option("--corpus", bench_corpus_dir, "directory of .ir cases");
  CLI::Option* gopt =
      bench->add_flag("--gen", bench_gen, "measure one generated program");
  copt->excludes(gopt);
  bench->add_option("--procs", bench_params.procs)->needs(gopt);
  bench->add_option("--stmts", bench_params.stmts_per_proc)->needs(gopt);
  bench->add_option("--rho", bench_params.rho)->needs(gopt);
  bench->add_option("--depth", bench_params.depth)->needs(gopt);
  bench->add_option("--density", bench_params.branch_density)->needs(gopt);
  bench->add_option("--seed", bench_params.seed)->needs(gopt);
  bench->add_option("--client", bench_client, "analysis client")
      ->check(CLI::IsMember({"lcp", "taint"}))
      ->capture_default_str();
  bench->add_option("--mode", bench_mode, "which solvers run")
      ->check(CLI::IsMember({"dense", "sparse", "both"}))
      ->capture_default_str();
  bench->add_option("--repeats", bench_repeats, "runs per measurement")
      ->capture_default_str();
  bench->add_option("--out", bench_out, "record file (default: stdout)");
  bench->add_option("--plot-dir", bench_plot,
                    "also sweep rho and write two-column ratio files")
      ->needs(gopt);

  GenParams gen_params;
  std::string gen_out;
  CLI::App* gen =
      app.add_subcommand("gen", "write a deterministic stress program");
  gen->add_option("--procs", gen_params.procs)->capture_default_str();
  gen->add_option("--stmts", gen_params.stmts_per_proc)->capture_default_str();
  gen->add_option("--rho", gen_params.rho, "fraction of decoy statements")
      ->capture_default_str();
  gen->add_option("--depth", gen_params.depth)->capture_default_str();
  gen->add_option("--density", gen_params.branch_density)
      ->capture_default_str();
  gen->add_option("--seed", gen_params.seed)->capture_default_str();
  gen->add_option("--out", gen_out, "IR file to write (default: stdout)");

  std::string diff_input, diff_client = "lcp";
  std::vector<std::string> diff_entries{"main"};
  CLI::App* diff = app.add_subcommand(
      "diff", "run both solvers and compare every result point");
  diff->add_option("--input", diff_input, "IR file")->required();
  diff->add_option("--entry", diff_entries, "entry procedures (default: main)");
  diff->add_option("--client", diff_client, "analysis client")
      ->check(CLI::IsMember({"lcp", "taint"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (analyze->parsed()) {
      return run_analyze(an);
    }
    if (bench->parsed()) {
      return run_bench(bench_corpus_dir, bench_gen, bench_params, bench_client,
                       bench_mode, bench_repeats, bench_out, bench_plot);
    }
    if (gen->parsed()) {
      return run_gen(gen_params, gen_out);
    }
    return run_diff(diff_input, diff_entries, diff_client);
  } catch (const ParseError& e) {
    std::cerr << "parse error at line " << e.line() << ", col " << e.col()
              << ": " << e.what() << "\n";
    return 1;
  } catch (const SolverGuardError& e) {
    std::cerr << "solver guard tripped: " << e.what() << "\n";
    return 3;
  } catch (const AnalysisError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
