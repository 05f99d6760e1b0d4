#include "ideflow/alias.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace ideflow {

namespace {

std::string key_of(int proc, const std::string& name) {
  return std::to_string(proc) + "#" + name;
}

}  // namespace

int AliasInfo::local_id(int proc, const std::string& name) const {
  auto it = local_index_.find(key_of(proc, name));
  return it == local_index_.end() ? -1 : it->second;
}

std::vector<AliasInfo::LocalRef> AliasInfo::aliases_of(
    int proc, const std::string& local) const {
  std::set<int> ids;
  int self = local_id(proc, local);
  if (self >= 0) {
    ids.insert(self);
    for (int site : points_to_[self]) {
      ids.insert(site_locals_[site].begin(), site_locals_[site].end());
    }
  }
  std::vector<LocalRef> out;
  out.reserve(ids.size());
  for (int id : ids) out.push_back(local_refs_[id]);
  if (self < 0) out.push_back({proc, local});
  return out;
}

bool AliasInfo::may_alias(int proc_a, const std::string& a, int proc_b,
                          const std::string& b) const {
  if (proc_a == proc_b && a == b) return true;
  int ia = local_id(proc_a, a), ib = local_id(proc_b, b);
  if (ia < 0 || ib < 0) return false;
  const auto& pa = points_to_[ia];
  const auto& pb = points_to_[ib];
  size_t i = 0, j = 0;
  while (i < pa.size() && j < pb.size()) {
    if (pa[i] == pb[j]) return true;
    pa[i] < pb[j] ? ++i : ++j;
  }
  return false;
}

AliasInfo compute_aliases(const Program& prog) {
  AliasInfo info;
  for (size_t p = 0; p < prog.procs.size(); ++p) {
    for (const std::string& name : prog.procs[p].locals) {
      int id = static_cast<int>(info.local_refs_.size());
      info.local_index_[key_of(static_cast<int>(p), name)] = id;
      info.local_refs_.push_back({static_cast<int>(p), name});
    }
  }
  size_t num_locals = info.local_refs_.size();
  std::vector<std::set<int>> pts(num_locals);

  // Allocation sites in (proc, stmt) order.
  int num_sites = 0;
  std::vector<std::vector<int>> site_of(prog.procs.size());
  for (size_t p = 0; p < prog.procs.size(); ++p) {
    site_of[p].assign(prog.procs[p].body.size(), -1);
    for (const Statement& s : prog.procs[p].body) {
      if (s.op == Opcode::New) site_of[p][s.id] = num_sites++;
    }
  }

  std::map<std::pair<int, std::string>, std::set<int>> field_pts;  // site.f
  std::map<std::pair<int, long long>, std::set<int>> elem_pts;     // site[i]
  std::map<std::string, std::set<int>> static_pts;                 // C.f

  auto id_of = [&info](int proc, const std::string& name) {
    return info.local_index_.at(key_of(proc, name));
  };
  auto include = [](std::set<int>& dst, const std::set<int>& src) {
    size_t before = dst.size();
    dst.insert(src.begin(), src.end());
    return dst.size() != before;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t p = 0; p < prog.procs.size(); ++p) {
      const Procedure& proc = prog.procs[p];
      int pi = static_cast<int>(p);
      for (const Statement& s : proc.body) {
        switch (s.op) {
          case Opcode::New:
            changed |= pts[id_of(pi, s.target)].insert(site_of[p][s.id]).second;
            break;
          case Opcode::LocalCopy:
            changed |= include(pts[id_of(pi, s.target)], pts[id_of(pi, s.source)]);
            break;
          case Opcode::Call: {
            int q = prog.proc_index(s.callee);
            const Procedure& callee = prog.procs[q];
            size_t n = std::min(s.args.size(), callee.params.size());
            for (size_t i = 0; i < n; ++i) {
              changed |= include(pts[id_of(q, callee.params[i])],
                                 pts[id_of(pi, s.args[i])]);
            }
            if (!s.target.empty()) {
              for (const Statement& r : callee.body) {
                if (r.op == Opcode::Return && !r.source.empty()) {
                  changed |= include(pts[id_of(pi, s.target)],
                                     pts[id_of(q, r.source)]);
                }
              }
            }
            break;
          }
          case Opcode::FieldStore:
            for (int site : pts[id_of(pi, s.target)]) {
              changed |= include(field_pts[{site, s.field}],
                                 pts[id_of(pi, s.source)]);
            }
            break;
          case Opcode::FieldLoad:
            for (int site : pts[id_of(pi, s.source)]) {
              changed |= include(pts[id_of(pi, s.target)],
                                 field_pts[{site, s.field}]);
            }
            break;
          case Opcode::ArrayStore:
            for (int site : pts[id_of(pi, s.target)]) {
              changed |= include(elem_pts[{site, s.literal}],
                                 pts[id_of(pi, s.source)]);
            }
            break;
          case Opcode::ArrayLoad:
            for (int site : pts[id_of(pi, s.source)]) {
              changed |= include(pts[id_of(pi, s.target)],
                                 elem_pts[{site, s.literal}]);
            }
            break;
          case Opcode::StaticStore:
            changed |= include(static_pts[s.klass + "." + s.field],
                               pts[id_of(pi, s.source)]);
            break;
          case Opcode::StaticLoad:
            changed |= include(pts[id_of(pi, s.target)],
                               static_pts[s.klass + "." + s.field]);
            break;
          default:
            break;
        }
      }
    }
  }

  info.points_to_.resize(num_locals);
  info.site_locals_.resize(num_sites);
  for (size_t l = 0; l < num_locals; ++l) {
    info.points_to_[l].assign(pts[l].begin(), pts[l].end());
    for (int site : pts[l]) {
      info.site_locals_[site].push_back(static_cast<int>(l));
    }
  }
  return info;
}

}  // namespace ideflow
