#pragma once

#include <stdexcept>
#include <string>

#include "ideflow/ir.hpp"

namespace ideflow {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line, int col);
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_, col_;
};

// Parses the textual IR. Appends an implicit `return` to any procedure whose
// body does not end in one, resolves labels and callees, collects locals,
// attaches `// expect` annotations, and builds each procedure's CFG.
// Throws ParseError on malformed input, unknown callees, duplicate procedure
// names, duplicate or unresolved labels, and division by a zero literal.
Program parse_program(const std::string& text);

// Parses a standalone symbol reference: "x", "o.f", "@C.g", or "a[2]".
SymbolSpec parse_symbol_spec_text(const std::string& text);

}  // namespace ideflow
