#include "ideflow/gen.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "ideflow/errors.hpp"

namespace ideflow {

namespace {

// Smallest fanout whose tree of `depth` levels fits `procs` nodes.
int tree_fanout(int procs, int depth) {
  for (int b = 1; b <= procs; ++b) {
    long long reach = 1;
    long long layer = 1;
    for (int l = 1; l < depth && reach < procs; ++l) {
      layer *= b;
      reach += layer;
      if (reach >= procs) {
        break;
      }
    }
    if (reach >= procs) {
      return b;
    }
  }
  return procs;
}

struct ProcBuilder {
  Procedure proc;
  std::mt19937_64* rng;

  long long pick_const() {
    return static_cast<long long>((*rng)() % 100);
  }
  double pick_unit() {
    return static_cast<double>((*rng)() % 10000) / 10000.0;
  }

  int add(Statement s) {
    int id = static_cast<int>(proc.body.size());
    s.id = id;
    proc.body.push_back(std::move(s));
    return id;
  }
};

}  // namespace

Program generate_program(const GenParams& params) {
  if (params.procs < 1) {
    throw AnalysisError("generator: procs must be at least 1");
  }
  if (params.rho < 0.0 || params.rho > 1.0) {
    throw AnalysisError("generator: rho must be within [0, 1]");
  }
  if (params.depth < 1) {
    throw AnalysisError("generator: depth must be at least 1");
  }
  if (params.branch_density < 0.0 || params.branch_density > 1.0) {
    throw AnalysisError("generator: branch_density must be within [0, 1]");
  }
  int fanout = tree_fanout(params.procs, params.depth);
  // Budget: return + accumulator seed + calls + one branch block's overhead.
  int min_stmts = fanout + 5;
  if (params.stmts_per_proc < min_stmts) {
    throw AnalysisError("generator: stmts_per_proc must be at least " +
                        std::to_string(min_stmts) +
                        " for this procs/depth combination");
  }

  std::mt19937_64 rng(params.seed);
  Program prog;
  prog.procs.reserve(static_cast<size_t>(params.procs));

  for (int i = 0; i < params.procs; ++i) {
    ProcBuilder b;
    b.rng = &rng;
    b.proc.name = i == 0 ? "main" : "gen" + std::to_string(i);
    b.proc.params = {"p0"};

    std::vector<int> children;
    for (int c = i * fanout + 1;
         c <= i * fanout + fanout && c < params.procs; ++c) {
      children.push_back(c);
    }

    bool has_acc = params.rho < 1.0;
    int budget = params.stmts_per_proc - 1 -
                 static_cast<int>(children.size());  // return + calls
    if (has_acc) {
      Statement s;
      s.op = Opcode::ConstAssign;
      s.target = "acc";
      s.literal = b.pick_const();
      b.add(std::move(s));
      --budget;
    }

    int decoy = 0;
    int pending_branch_close = -1;  // statement id of the open branch
    while (budget > 0) {
      // Close an open branch block by landing its label.
      if (pending_branch_close >= 0 &&
          (b.pick_unit() < 0.4 || budget == 1)) {
        Statement nop;
        nop.op = Opcode::Nop;
        nop.label = "L" + std::to_string(b.proc.body.size());
        int at = b.add(std::move(nop));
        b.proc.body[static_cast<size_t>(pending_branch_close)].label =
            b.proc.body[static_cast<size_t>(at)].label;
        b.proc.body[static_cast<size_t>(pending_branch_close)].label_target =
            at;
        pending_branch_close = -1;
        --budget;
        continue;
      }
      if (pending_branch_close < 0 && budget >= 4 &&
          b.pick_unit() < params.branch_density) {
        Statement br;
        br.op = Opcode::Branch;
        br.cond = has_acc ? "acc" : "p0";
        pending_branch_close = b.add(std::move(br));
        --budget;
        continue;
      }
      // Branch arms hold only decoys, so both arms agree on every fact
      // that anything later reads.
      if (!has_acc || pending_branch_close >= 0 ||
          b.pick_unit() < params.rho) {
        Statement s;
        s.op = Opcode::ConstAssign;
        s.target = "d" + std::to_string(decoy++);
        s.literal = b.pick_const();
        b.add(std::move(s));
      } else {
        Statement s;
        s.op = Opcode::Binop;
        s.target = "acc";
        s.source = "acc";
        s.binop = '+';
        s.literal = 1;
        b.add(std::move(s));
      }
      --budget;
    }
    // budget == 1 forces the close above, so no branch stays open here.
    const std::string arg = has_acc ? "acc" : "p0";
    int rix = 0;
    for (int c : children) {
      Statement s;
      s.op = Opcode::Call;
      s.target = "r" + std::to_string(rix++);
      s.callee = "gen" + std::to_string(c);
      s.args = {arg};
      b.add(std::move(s));
    }

    Statement ret;
    ret.op = Opcode::Return;
    ret.source = arg;
    b.add(std::move(ret));

    std::vector<std::string> locals = b.proc.params;
    for (const Statement& s : b.proc.body) {
      if (!s.target.empty()) {
        locals.push_back(s.target);
      }
    }
    locals.push_back(arg);
    std::sort(locals.begin(), locals.end());
    locals.erase(std::unique(locals.begin(), locals.end()), locals.end());
    b.proc.locals = std::move(locals);

    build_cfg(b.proc);
    prog.procs.push_back(std::move(b.proc));
  }
  return prog;
}

}  // namespace ideflow
