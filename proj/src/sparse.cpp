#include "ideflow/sparse.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "ideflow/solver.hpp"

namespace ideflow {

bool is_identity_flow(const Problem& problem, int proc, int stmt, SymbolId d) {
  return problem.relevance(proc, stmt).flow_identity_for(d);
}

bool is_identity_transformer(const Problem& problem, int proc, int stmt,
                             SymbolId d) {
  return problem.relevance(proc, stmt).edge_identity_for(d);
}

bool sparse_retains(const Problem& problem, int proc, int stmt, SymbolId d) {
  const Statement& s = problem.program().procs[proc].body[stmt];
  switch (s.op) {
    // Control splits and joins stay so every cycle keeps a retained node
    // and next_at_or_after walks terminate.
    case Opcode::Branch:
    case Opcode::Goto:
      return true;
    // Exit transfers always matter: they feed summaries for every fact.
    case Opcode::Return:
      return true;
    case Opcode::Call:
      // Lambda spawns callee seeds here; heap facts cross into the callee
      // and back; locals matter when passed or (re)defined by the result.
      return d == SymbolTable::kLambda || problem.symbols().get(d).is_heap() ||
             problem.call_relevant(proc, stmt, d);
    default:
      break;
  }
  if (d == SymbolTable::kLambda) {
    return problem.relevance(proc, stmt).generator;
  }
  return !is_identity_flow(problem, proc, stmt, d) ||
         !is_identity_transformer(problem, proc, stmt, d);
}

namespace {

// Finishes a graph whose retained bits are set: counts them and resolves
// next_at_or_after with one backward pass. Valid because every skippable
// node falls through to node + 1 (only branches, gotos and returns leave
// the straight line, and those are always retained).
void finish_graph(SparseCfg& g) {
  g.retained_count = 0;
  int n = static_cast<int>(g.retained.size());
  g.next_at_or_after.resize(g.retained.size());
  int next = n - 1;  // the exit node, always retained
  for (int v = n - 1; v >= 0; --v) {
    if (g.retained[static_cast<size_t>(v)]) {
      ++g.retained_count;
      next = v;
    }
    g.next_at_or_after[static_cast<size_t>(v)] = next;
  }
}

}  // namespace

SparseCfgCache::SparseCfgCache(const Problem& problem) : problem_(&problem) {
  by_proc_.resize(problem.program().procs.size());
  materialized_.resize(problem.program().procs.size());
  index_.resize(problem.program().procs.size());
}

const SparseCfgCache::ProcIndex& SparseCfgCache::index_for(int proc) {
  ProcIndex& ix = index_[static_cast<size_t>(proc)];
  if (ix.built) {
    return ix;
  }
  auto t0 = std::chrono::steady_clock::now();
  const Procedure& p = problem_->program().procs[static_cast<size_t>(proc)];
  ix.base_local.retained.assign(static_cast<size_t>(p.node_count()), 0);
  ix.base_local.retained[static_cast<size_t>(p.start_node())] = 1;
  ix.base_local.retained[static_cast<size_t>(p.exit_node())] = 1;
  std::vector<std::pair<SymbolId, int>> mentions;
  for (int i = 0; i < static_cast<int>(p.body.size()); ++i) {
    int node = p.stmt_node(i);
    switch (p.body[static_cast<size_t>(i)].op) {
      case Opcode::Branch:
      case Opcode::Goto:
      case Opcode::Return:
        ix.base_local.retained[static_cast<size_t>(node)] = 1;
        continue;
      case Opcode::Call:
        ix.call_nodes.push_back(node);
        continue;
      default:
        break;
    }
    const StmtRelevance& rel = problem_->relevance(proc, i);
    if (rel.generator) {
      ix.gen_nodes.push_back(node);
    }
    for (SymbolId d : rel.flow_reads) mentions.emplace_back(d, node);
    for (SymbolId d : rel.flow_writes) mentions.emplace_back(d, node);
    for (SymbolId d : rel.edge_reads) mentions.emplace_back(d, node);
    for (SymbolId d : rel.edge_writes) mentions.emplace_back(d, node);
  }
  std::sort(mentions.begin(), mentions.end());
  mentions.erase(std::unique(mentions.begin(), mentions.end()),
                 mentions.end());
  ix.mention_syms.reserve(mentions.size());
  ix.mention_nodes.reserve(mentions.size());
  for (const auto& [d, node] : mentions) {
    ix.mention_syms.push_back(d);
    ix.mention_nodes.push_back(node);
  }
  finish_graph(ix.base_local);
  ix.base_heap.retained = ix.base_local.retained;
  for (int v : ix.call_nodes) {
    ix.base_heap.retained[static_cast<size_t>(v)] = 1;
  }
  finish_graph(ix.base_heap);
  ix.built = true;
  auto t1 = std::chrono::steady_clock::now();
  build_ms_ += std::chrono::duration<double, std::milli>(t1 - t0).count();
  return ix;
}

const SparseCfgCache::Served& SparseCfgCache::serve(int proc, SymbolId d) {
  auto& slot = by_proc_[static_cast<size_t>(proc)];
  auto it = slot.find(d);
  if (it != slot.end()) {
    return it->second;
  }
  const ProcIndex& ix = index_for(proc);
  Served s;
  if (d == SymbolTable::kLambda) {
    s.base = &ix.base_heap;
    s.extra = ix.gen_nodes;
  } else {
    auto lo = std::lower_bound(ix.mention_syms.begin(),
                               ix.mention_syms.end(), d);
    auto hi = std::upper_bound(lo, ix.mention_syms.end(), d);
    s.span_lo = ix.mention_nodes.data() + (lo - ix.mention_syms.begin());
    s.span_hi = ix.mention_nodes.data() + (hi - ix.mention_syms.begin());
    if (problem_->symbols().get(d).is_heap()) {
      s.base = &ix.base_heap;
    } else {
      s.base = &ix.base_local;
      for (int v : ix.call_nodes) {
        if (problem_->call_relevant(proc, v - 1, d)) {
          s.extra.push_back(v);
        }
      }
    }
  }
  ++build_count_;
  return slot.emplace(d, std::move(s)).first->second;
}

int SparseCfgCache::served_next(const Served& s, int v) {
  int best = s.base->next_at_or_after[static_cast<size_t>(v)];
  const int* p = std::lower_bound(s.span_lo, s.span_hi, v);
  if (p != s.span_hi && *p < best) {
    best = *p;
  }
  for (int c : s.extra) {
    if (c >= v) {
      if (c < best) {
        best = c;
      }
      break;
    }
  }
  return best;
}

const SparseCfg& SparseCfgCache::get(int proc, SymbolId d) {
  auto& mat = materialized_[static_cast<size_t>(proc)];
  auto it = mat.find(d);
  if (it != mat.end()) {
    return it->second;
  }
  const Served& s = serve(proc, d);
  auto t0 = std::chrono::steady_clock::now();
  SparseCfg g;
  g.retained = s.base->retained;
  for (const int* p = s.span_lo; p != s.span_hi; ++p) {
    g.retained[static_cast<size_t>(*p)] = 1;
  }
  for (int v : s.extra) {
    g.retained[static_cast<size_t>(v)] = 1;
  }
  finish_graph(g);
  auto t1 = std::chrono::steady_clock::now();
  build_ms_ += std::chrono::duration<double, std::milli>(t1 - t0).count();
  return mat.emplace(d, std::move(g)).first->second;
}

bool SparseCfgCache::has(int proc, SymbolId d) const {
  const auto& slot = by_proc_[static_cast<size_t>(proc)];
  return slot.find(d) != slot.end();
}

bool SparseCfgCache::retained(int proc, SymbolId d, int node) {
  const Served& s = serve(proc, d);
  return served_next(s, node) == node;
}

void SparseCfgCache::next_use(int proc, SymbolId d, int node,
                              std::vector<int>& out) {
  const Served& s = serve(proc, d);
  const Procedure& p = problem_->program().procs[static_cast<size_t>(proc)];
  out.clear();
  for (int m : p.succ[static_cast<size_t>(node)]) {
    int t = served_next(s, m);
    bool seen = false;
    for (int x : out) {
      if (x == t) {
        seen = true;
        break;
      }
    }
    if (!seen) {
      out.push_back(t);
    }
  }
}

int SparseCfgCache::first_at_or_after(int proc, SymbolId d, int node) {
  return served_next(serve(proc, d), node);
}

std::string dot_sparse_cfg(const Problem& problem, const SparseCfg& g,
                           int proc, SymbolId d) {
  const Procedure& p = problem.program().procs[static_cast<size_t>(proc)];
  std::ostringstream os;
  os << "digraph sparse_" << p.name << "_d" << d << " {\n";
  os << "  rankdir=TB;\n  node [shape=box, fontname=\"monospace\"];\n";
  for (int v = 0; v < p.node_count(); ++v) {
    if (!g.retained[static_cast<size_t>(v)]) {
      continue;
    }
    os << "  n" << v << " [label=\"";
    if (v == p.start_node()) {
      os << "start " << p.name;
    } else if (v == p.exit_node()) {
      os << "exit " << p.name;
    } else {
      const Statement& s = p.body[static_cast<size_t>(v - 1)];
      os << "#" << s.id << " " << opcode_name(s.op);
      if (!s.target.empty()) {
        os << " " << s.target;
      }
    }
    os << "\"];\n";
  }
  for (int v = 0; v < p.node_count(); ++v) {
    if (!g.retained[static_cast<size_t>(v)]) {
      continue;
    }
    for (int m : p.succ[static_cast<size_t>(v)]) {
      os << "  n" << v << " -> n" << g.next_at_or_after[static_cast<size_t>(m)]
         << ";\n";
    }
  }
  os << "}\n";
  return os.str();
}

std::string dot_path_edges(const Solver& solver) {
  const Program& prog = solver.problem().program();
  const SymbolTable& symtab = solver.problem().symbols();
  std::ostringstream os;
  os << "digraph path_edges {\n";
  os << "  rankdir=LR;\n  node [shape=ellipse, fontname=\"monospace\"];\n";
  solver.for_each_jump([&](int proc, int node, SymbolId d1, SymbolId d2,
                           const EdgeFn& fn) {
    const std::string& pname = prog.procs[static_cast<size_t>(proc)].name;
    os << "  \"" << pname << ":start:" << symtab.get(d1).to_string()
       << "\" -> \"" << pname << ":" << node << ":"
       << symtab.get(d2).to_string() << "\" [label=\"" << fn.to_string()
       << "\"];\n";
  });
  os << "}\n";
  return os.str();
}

}  // namespace ideflow
