#include <string>
#include <vector>

#include "doctest.h"
#include "ideflow/alias.hpp"
#include "ideflow/parser.hpp"

using namespace ideflow;

namespace {

std::vector<std::string> names(const std::vector<AliasInfo::LocalRef>& refs) {
  std::vector<std::string> out;
  for (const auto& r : refs) out.push_back(r.name);
  return out;
}

}  // namespace

TEST_CASE("copies share allocation sites, fresh news do not") {
  Program p = parse_program(
      "proc main() {\n"
      "  x = new\n"
      "  y = x\n"
      "  z = new\n"
      "  return\n"
      "}\n");
  AliasInfo ai = compute_aliases(p);
  CHECK(names(ai.aliases_of(0, "x")) == std::vector<std::string>{"x", "y"});
  CHECK(names(ai.aliases_of(0, "y")) == std::vector<std::string>{"x", "y"});
  CHECK(names(ai.aliases_of(0, "z")) == std::vector<std::string>{"z"});
  CHECK(ai.may_alias(0, "x", 0, "y"));
  CHECK(ai.may_alias(0, "y", 0, "x"));
  CHECK(!ai.may_alias(0, "x", 0, "z"));
}

TEST_CASE("aliases always include the query local") {
  Program p = parse_program("proc main() {\n  a = 1\n  return a\n}\n");
  AliasInfo ai = compute_aliases(p);
  auto self = ai.aliases_of(0, "a");
  REQUIRE(self.size() == 1);
  CHECK(self[0].name == "a");
  CHECK(ai.may_alias(0, "a", 0, "a"));
}

TEST_CASE("call arguments bind to formals across procedures") {
  Program p = parse_program(
      "proc touch(q) {\n"
      "  return\n"
      "}\n"
      "proc main() {\n"
      "  o = new\n"
      "  call touch(o)\n"
      "  return\n"
      "}\n");
  AliasInfo ai = compute_aliases(p);
  int touch = p.proc_index("touch");
  int main_ = p.proc_index("main");
  CHECK(ai.may_alias(main_, "o", touch, "q"));
  CHECK(!ai.may_alias(main_, "o", touch, "nosuch"));
}

TEST_CASE("returned objects flow into the call target") {
  Program p = parse_program(
      "proc make() {\n"
      "  m = new\n"
      "  return m\n"
      "}\n"
      "proc main() {\n"
      "  a = call make()\n"
      "  b = a\n"
      "  return\n"
      "}\n");
  AliasInfo ai = compute_aliases(p);
  int make = p.proc_index("make");
  int main_ = p.proc_index("main");
  CHECK(ai.may_alias(main_, "a", make, "m"));
  CHECK(ai.may_alias(main_, "b", make, "m"));
  CHECK(ai.may_alias(main_, "a", main_, "b"));
}

TEST_CASE("field store and load connect through the heap") {
  Program p = parse_program(
      "proc main() {\n"
      "  o = new\n"
      "  q = new\n"
      "  o.f = q\n"
      "  r = o.f\n"
      "  s = o.g\n"
      "  return\n"
      "}\n");
  AliasInfo ai = compute_aliases(p);
  CHECK(ai.may_alias(0, "r", 0, "q"));
  // A different field name does not match the store.
  CHECK(!ai.may_alias(0, "s", 0, "q"));
}

TEST_CASE("alias sets are sorted for determinism") {
  Program p = parse_program(
      "proc main() {\n"
      "  c = new\n"
      "  a = c\n"
      "  b = c\n"
      "  return\n"
      "}\n");
  AliasInfo ai = compute_aliases(p);
  CHECK(names(ai.aliases_of(0, "c")) ==
        std::vector<std::string>{"a", "b", "c"});
}
