#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "ideflow/ir.hpp"

namespace ideflow {

// Flow-insensitive, context-insensitive points-to over `new` allocation
// sites, closed under local copies, call argument/return bindings, and
// field/static/array-element store-load matching.
class AliasInfo {
 public:
  struct LocalRef {
    int proc;
    std::string name;
    bool operator==(const LocalRef&) const = default;
  };

  // Every local whose points-to set intersects the query's, the query local
  // itself always included. Sorted by (proc, name) for determinism.
  std::vector<LocalRef> aliases_of(int proc, const std::string& local) const;

  bool may_alias(int proc_a, const std::string& a, int proc_b,
                 const std::string& b) const;

 private:
  friend AliasInfo compute_aliases(const Program& prog);

  int local_id(int proc, const std::string& name) const;

  std::unordered_map<std::string, int> local_index_;  // "proc#name" -> id
  std::vector<LocalRef> local_refs_;
  std::vector<std::vector<int>> points_to_;   // per local: sorted site ids
  std::vector<std::vector<int>> site_locals_; // per site: sorted local ids
};

AliasInfo compute_aliases(const Program& prog);

}  // namespace ideflow
