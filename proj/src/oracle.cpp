#include "ideflow/oracle.hpp"

#include <optional>
#include <unordered_map>
#include <utility>

namespace ideflow {

namespace {

bool add_overflows(long long a, long long b, long long* out) {
  return __builtin_add_overflow(a, b, out);
}

bool mul_overflows(long long a, long long b, long long* out) {
  return __builtin_mul_overflow(a, b, out);
}

}  // namespace

struct Oracle::Frame {
  std::unordered_map<SymbolId, Value> env;  // integer-valued locals
  std::unordered_map<SymbolId, int> refs;   // object-valued locals
};

struct Oracle::State {
  // Path-local: each fork carries its own copy, so writes on one path never
  // leak into another.
  std::map<std::pair<int, std::string>, Value> heap;  // (object, member key)
  std::map<std::pair<std::string, std::string>, Value> statics;
  int next_object = 0;
};

struct Oracle::Outcome {
  Value ret = Value::top();
  std::optional<int> ret_ref;
  State state;
};

Oracle::Oracle(const Problem& problem, OracleLimits limits)
    : problem_(&problem), limits_(limits) {
  const Program& prog = problem.program();
  // Cyclic control flow is outside the fragment: a jump target at or before
  // the jump itself is a back edge.
  for (const Procedure& p : prog.procs) {
    for (size_t i = 0; i < p.body.size(); ++i) {
      const Statement& s = p.body[i];
      if ((s.op == Opcode::Branch || s.op == Opcode::Goto) &&
          s.label_target >= 0 &&
          s.label_target <= static_cast<int>(i)) {
        throw OracleUnsupported("loop in " + p.name + ": statement " +
                                std::to_string(s.id) + " jumps backward");
      }
    }
  }
  observed_.resize(prog.procs.size());
  const SymbolTable& symtab = problem.symbols();
  for (size_t p = 0; p < prog.procs.size(); ++p) {
    for (SymbolId d = 0; d < symtab.size(); ++d) {
      const Symbol& sym = symtab.get(d);
      bool own = sym.proc == static_cast<int>(p) &&
                 (sym.kind == Symbol::Kind::Local ||
                  sym.kind == Symbol::Kind::Field ||
                  sym.kind == Symbol::Kind::ArrayElem);
      if (own || sym.kind == Symbol::Kind::Static) {
        observed_[p].push_back(d);
      }
    }
  }
}

Value Oracle::read_symbol(SymbolId d, int proc, const Frame& frame,
                          const State& state) const {
  const Symbol& sym = problem_->symbols().get(d);
  switch (sym.kind) {
    case Symbol::Kind::Local: {
      auto it = frame.env.find(d);
      return it == frame.env.end() ? Value::top() : it->second;
    }
    case Symbol::Kind::Field:
    case Symbol::Kind::ArrayElem: {
      SymbolId base =
          problem_->symbols().find(Symbol::local(proc, sym.base));
      auto rit = frame.refs.find(base);
      if (rit == frame.refs.end()) {
        return Value::top();
      }
      std::string key = sym.kind == Symbol::Kind::Field
                            ? "f:" + sym.member
                            : "e:" + std::to_string(sym.index);
      auto hit = state.heap.find({rit->second, key});
      return hit == state.heap.end() ? Value::top() : hit->second;
    }
    case Symbol::Kind::Static: {
      auto it = state.statics.find({sym.base, sym.member});
      return it == state.statics.end() ? Value::top() : it->second;
    }
    default:
      return Value::top();
  }
}

void Oracle::record(int proc, int node, const Frame& frame,
                    const State& state) {
  for (SymbolId d : observed_[static_cast<size_t>(proc)]) {
    Value v = read_symbol(d, proc, frame, state);
    auto key = std::make_tuple(proc, node, d);
    auto it = at_.find(key);
    if (it == at_.end()) {
      at_.emplace(key, v);
    } else {
      it->second = meet_value(it->second, v);
    }
  }
}

Value Oracle::value_at(int proc, int node, SymbolId d) const {
  auto it = at_.find(std::make_tuple(proc, node, d));
  return it == at_.end() ? Value::top() : it->second;
}

void Oracle::explore(int proc, int node, Frame frame, State state, int depth,
                     std::vector<Outcome>& outcomes) {
  const Procedure& p = problem_->program().procs[static_cast<size_t>(proc)];
  // Straight-line runs iterate; forks (branches, call outcomes) recurse.
  while (true) {
    record(proc, node, frame, state);
    if (node == p.exit_node()) {
      if (++paths_ > limits_.max_paths) {
        throw OracleUnsupported("path budget exceeded");
      }
      Outcome out;
      auto rv = frame.env.find(problem_->symbols().find(Symbol::ret(proc)));
      if (rv != frame.env.end()) {
        out.ret = rv->second;
      }
      SymbolId rr = problem_->symbols().find(Symbol::ret(proc));
      auto rref = frame.refs.find(rr);
      if (rref != frame.refs.end()) {
        out.ret_ref = rref->second;
      }
      out.state = std::move(state);
      outcomes.push_back(std::move(out));
      return;
    }
    if (node == p.start_node()) {
      node = p.stmt_node(0);
      continue;
    }
    const Statement& s = p.body[static_cast<size_t>(node - 1)];
    const SymbolTable& symtab = problem_->symbols();
    auto local = [&](const std::string& name) {
      return symtab.find(Symbol::local(proc, name));
    };
    auto read_local = [&](const std::string& name) {
      auto it = frame.env.find(local(name));
      return it == frame.env.end() ? Value::top() : it->second;
    };
    auto write_int = [&](const std::string& name, const Value& v) {
      SymbolId t = local(name);
      frame.env[t] = v;
      frame.refs.erase(t);
    };
    switch (s.op) {
      case Opcode::ConstAssign:
        write_int(s.target, Value::constant(s.literal));
        break;
      case Opcode::LocalCopy: {
        SymbolId src = local(s.source);
        SymbolId tgt = local(s.target);
        auto vit = frame.env.find(src);
        if (vit != frame.env.end()) {
          frame.env[tgt] = vit->second;
        } else {
          frame.env.erase(tgt);
        }
        auto rit = frame.refs.find(src);
        if (rit != frame.refs.end()) {
          frame.refs[tgt] = rit->second;
        } else {
          frame.refs.erase(tgt);
        }
        break;
      }
      case Opcode::Binop: {
        Value v = read_local(s.source);
        if (v.is_const()) {
          long long out = 0;
          bool bad = false;
          switch (s.binop) {
            case '+': bad = add_overflows(v.num, s.literal, &out); break;
            case '-': bad = add_overflows(v.num, -s.literal, &out); break;
            case '*': bad = mul_overflows(v.num, s.literal, &out); break;
            case '/': out = v.num / s.literal; break;
            default: bad = true; break;
          }
          write_int(s.target, bad ? Value::bottom() : Value::constant(out));
        } else {
          write_int(s.target, v);
        }
        break;
      }
      case Opcode::New: {
        SymbolId t = local(s.target);
        frame.refs[t] = state.next_object++;
        frame.env.erase(t);
        break;
      }
      case Opcode::FieldLoad: {
        auto rit = frame.refs.find(local(s.source));
        Value v = Value::top();
        if (rit != frame.refs.end()) {
          auto hit = state.heap.find({rit->second, "f:" + s.field});
          if (hit != state.heap.end()) {
            v = hit->second;
          }
        }
        write_int(s.target, v);
        break;
      }
      case Opcode::FieldStore: {
        auto rit = frame.refs.find(local(s.target));
        if (rit != frame.refs.end()) {
          state.heap[{rit->second, "f:" + s.field}] = read_local(s.source);
        }
        break;
      }
      case Opcode::ArrayLoad: {
        auto rit = frame.refs.find(local(s.source));
        Value v = Value::top();
        if (rit != frame.refs.end()) {
          auto hit =
              state.heap.find({rit->second, "e:" + std::to_string(s.literal)});
          if (hit != state.heap.end()) {
            v = hit->second;
          }
        }
        write_int(s.target, v);
        break;
      }
      case Opcode::ArrayStore: {
        auto rit = frame.refs.find(local(s.target));
        if (rit != frame.refs.end()) {
          state.heap[{rit->second, "e:" + std::to_string(s.literal)}] =
              read_local(s.source);
        }
        break;
      }
      case Opcode::StaticLoad: {
        auto hit = state.statics.find({s.klass, s.field});
        write_int(s.target,
                  hit == state.statics.end() ? Value::top() : hit->second);
        break;
      }
      case Opcode::StaticStore:
        state.statics[{s.klass, s.field}] = read_local(s.source);
        break;
      case Opcode::Return: {
        SymbolId rr = symtab.find(Symbol::ret(proc));
        if (!s.source.empty()) {
          auto vit = frame.env.find(local(s.source));
          if (vit != frame.env.end()) {
            frame.env[rr] = vit->second;
          }
          auto rit = frame.refs.find(local(s.source));
          if (rit != frame.refs.end()) {
            frame.refs[rr] = rit->second;
          }
        }
        explore(proc, p.exit_node(), std::move(frame), std::move(state),
                depth, outcomes);
        return;
      }
      case Opcode::Branch: {
        const auto& succs = p.succ[static_cast<size_t>(node)];
        for (size_t i = 0; i + 1 < succs.size(); ++i) {
          explore(proc, succs[i], frame, state, depth, outcomes);
        }
        node = succs.back();
        continue;
      }
      case Opcode::Goto:
        node = p.succ[static_cast<size_t>(node)][0];
        continue;
      case Opcode::Call: {
        if (depth + 1 > limits_.max_call_depth) {
          throw OracleUnsupported("call depth past " +
                                  std::to_string(limits_.max_call_depth));
        }
        int q = problem_->supergraph().callee(proc, node - 1);
        const Procedure& callee =
            problem_->program().procs[static_cast<size_t>(q)];
        Frame cf;
        for (size_t i = 0; i < callee.params.size(); ++i) {
          SymbolId formal = symtab.find(Symbol::local(q, callee.params[i]));
          SymbolId actual = local(s.args[i]);
          auto vit = frame.env.find(actual);
          if (vit != frame.env.end()) {
            cf.env[formal] = vit->second;
          }
          auto rit = frame.refs.find(actual);
          if (rit != frame.refs.end()) {
            cf.refs[formal] = rit->second;
          }
        }
        std::vector<Outcome> outs =
            run_proc(q, std::move(cf), std::move(state), depth + 1);
        int r_node = node + 1;
        for (size_t i = 0; i < outs.size(); ++i) {
          Frame rf = i + 1 == outs.size() ? std::move(frame) : frame;
          if (!s.target.empty()) {
            SymbolId t = local(s.target);
            rf.env[t] = outs[i].ret;
            rf.refs.erase(t);
            if (outs[i].ret_ref) {
              rf.refs[t] = *outs[i].ret_ref;
              rf.env.erase(t);
            }
          }
          explore(proc, r_node, std::move(rf), std::move(outs[i].state),
                  depth, outcomes);
        }
        return;
      }
      case Opcode::Nop:
        break;
    }
    node = p.succ[static_cast<size_t>(node)][0];
  }
}

std::vector<Oracle::Outcome> Oracle::run_proc(int proc, Frame frame,
                                              State state, int depth) {
  std::vector<Outcome> outcomes;
  explore(proc, problem_->program().procs[static_cast<size_t>(proc)]
                    .start_node(),
          std::move(frame), std::move(state), depth, outcomes);
  return outcomes;
}

void Oracle::run() {
  if (ran_) {
    return;
  }
  ran_ = true;
  for (int e : problem_->supergraph().entries) {
    run_proc(e, Frame(), State(), 0);
  }
}

}  // namespace ideflow
