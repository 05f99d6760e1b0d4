#pragma once

#include <stdexcept>
#include <string>

namespace ideflow {

// Invalid user input surfaced past parsing: unknown entry points, unknown
// query targets, malformed generator parameters.
class AnalysisError : public std::runtime_error {
 public:
  explicit AnalysisError(const std::string& msg) : std::runtime_error(msg) {}
};

// Termination guard tripped: a single jump-table entry was lowered more times
// than the edge-function family's chain height allows. Indicates a broken
// meet/compose, never expected on well-formed problems.
class SolverGuardError : public std::runtime_error {
 public:
  explicit SolverGuardError(const std::string& msg)
      : std::runtime_error(msg) {}
};

}  // namespace ideflow
