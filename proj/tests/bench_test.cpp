#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

#include "ideflow/bench.hpp"
#include "ideflow/clients.hpp"
#include "ideflow/errors.hpp"
#include "ideflow/gen.hpp"
#include "ideflow/parser.hpp"
#include "ideflow/supergraph.hpp"

using namespace ideflow;

TEST_CASE("the corpus loads complete and categorized") {
  auto cases = load_corpus(CORPUS_DIR);
  CHECK(cases.size() >= 40);
  std::map<std::string, int> per_category;
  for (const auto& c : cases) {
    auto slash = c.name.find('/');
    REQUIRE(slash != std::string::npos);
    per_category[c.name.substr(0, slash)]++;
    CHECK(c.program.find_proc("main") != nullptr);
  }
  CHECK(per_category.size() == 7);
  for (const auto& [category, count] : per_category) {
    INFO(category);
    CHECK(count >= 4);
  }
  // Sorted by name, so categories arrive grouped.
  CHECK(std::is_sorted(cases.begin(), cases.end(),
                       [](const CorpusCase& a, const CorpusCase& b) {
                         return a.name < b.name;
                       }));
}

TEST_CASE("expectations are checked against the solve") {
  Program p = parse_program(
      "proc main() {\n"
      "  a = 3 // expect a = 3\n"
      "  a = a + 1 // expect a = 4\n"
      "  return a\n"
      "}\n");
  Supergraph sg = build_supergraph(p, {"main"});
  LcpProblem problem(sg);
  TimedRun run = run_solver(problem, false, 1);
  CHECK(check_expectations(*run.solver) == "ok");
  CHECK(run.wall_ms >= 0.0);

  Program wrong = parse_program(
      "proc main() {\n  a = 3 // expect a = 5\n  return a\n}\n");
  Supergraph sg2 = build_supergraph(wrong, {"main"});
  LcpProblem problem2(sg2);
  TimedRun run2 = run_solver(problem2, false, 1);
  CHECK(check_expectations(*run2.solver) != "ok");
}

TEST_CASE("records serialize as one json object per line") {
  std::vector<CaseRecord> records(2);
  records[0].case_name = "X/One";
  records[0].mode = "dense";
  records[0].wall_ms = 1.5;
  records[0].propagations = 10;
  records[0].verdict = "ok";
  records[1].case_name = "X/One";
  records[1].mode = "verdict";
  records[1].verdict = "equal";
  std::istringstream in(records_to_json(records));
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    auto row = nlohmann::json::parse(line);
    for (const char* key : {"case", "mode", "wall_ms", "propagations",
                            "sparse_cfg_count", "sparse_cfg_ms", "verdict"}) {
      INFO(key);
      CHECK(row.contains(key));
    }
    ++lines;
  }
  CHECK(lines == 2);
}

TEST_CASE("corpus measurement in both modes appends equal verdicts") {
  bool all_ok = false;
  auto records = bench_corpus(CORPUS_DIR, "lcp", "both", 1, &all_ok);
  CHECK(all_ok);
  auto cases = load_corpus(CORPUS_DIR);
  CHECK(records.size() == cases.size() * 3);
  int verdicts = 0;
  for (const auto& r : records) {
    if (r.mode == "verdict") {
      ++verdicts;
      CHECK(r.verdict == "equal");
    } else {
      CHECK(r.verdict == "ok");
      CHECK(r.wall_ms >= 0.0);
      CHECK(r.propagations > 0);
    }
    if (r.mode == "sparse") {
      CHECK(r.sparse_cfg_count > 0);
    }
    if (r.mode == "dense") {
      CHECK(r.sparse_cfg_count == 0);
    }
  }
  CHECK(verdicts == static_cast<int>(cases.size()));
}

TEST_CASE("single-mode measurement emits no verdict rows") {
  bool all_ok = false;
  auto records = bench_corpus(CORPUS_DIR, "taint", "sparse", 1, &all_ok);
  CHECK(all_ok);
  for (const auto& r : records) {
    CHECK(r.mode == "sparse");
    CHECK(r.verdict == "ok");
  }
}

TEST_CASE("generated programs are measured like corpus cases") {
  GenParams p;
  p.procs = 6;
  p.stmts_per_proc = 40;
  p.rho = 0.8;
  p.depth = 2;
  p.seed = 9;
  bool all_ok = false;
  auto records = bench_generated(p, "lcp", "both", 1, &all_ok);
  CHECK(all_ok);
  REQUIRE(records.size() == 3);
  CHECK(records[0].mode == "dense");
  CHECK(records[1].mode == "sparse");
  CHECK(records[2].mode == "verdict");
  CHECK(records[2].verdict == "equal");
  CHECK(records[1].propagations <= records[0].propagations);
}

TEST_CASE("unknown clients and modes are rejected") {
  CHECK_THROWS_AS(bench_corpus(CORPUS_DIR, "bogus", "both", 1, nullptr),
                  AnalysisError);
  GenParams p;
  CHECK_THROWS_AS(bench_generated(p, "lcp", "sideways", 1, nullptr),
                  AnalysisError);
}

TEST_CASE("ratio files cover the requested sweep") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "ideflow_ratio_test";
  fs::remove_all(dir);
  GenParams base;
  base.procs = 5;
  base.stmts_per_proc = 30;
  base.depth = 2;
  base.seed = 3;
  export_ratio_files(base, {0.0, 0.5, 0.9}, "lcp", 1, dir.string());

  for (const char* name : {"propagation_ratio.dat", "speedup.dat"}) {
    std::ifstream in(dir / name);
    REQUIRE(in.good());
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
      double rho = 0, ratio = 0;
      CHECK(std::sscanf(line.c_str(), "%lf\t%lf", &rho, &ratio) == 2);
      CHECK(ratio > 0);
      ++rows;
    }
    CHECK(rows == 3);
  }
  fs::remove_all(dir);
}
