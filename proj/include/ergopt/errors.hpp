#pragma once

#include <stdexcept>
#include <string>

namespace ergopt {

// Bad inputs: malformed points, mismatched representations, invalid config.
struct ValidationError : std::invalid_argument {
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// An iteration that did not reach its tolerance. Solvers normally report
// non-convergence as data; this is thrown only where a converged input is a
// hard precondition.
struct NotConverged : std::runtime_error {
  explicit NotConverged(const std::string& what) : std::runtime_error(what) {}
};

// A shift word too short to answer the question asked of it.
struct TruncationError : std::runtime_error {
  explicit TruncationError(const std::string& what) : std::runtime_error(what) {}
};

// Enumeration or refinement request beyond the configured budget.
struct BudgetExceeded : std::runtime_error {
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

// exp() would overflow on the unstabilized operator path.
struct OverflowGuard : std::runtime_error {
  explicit OverflowGuard(const std::string& what) : std::runtime_error(what) {}
};

// Perturbation constants failed a feasibility condition.
struct InfeasibleConstants : std::runtime_error {
  explicit InfeasibleConstants(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ergopt
