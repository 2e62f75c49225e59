#ifndef RPKEP_ILP_HPP
#define RPKEP_ILP_HPP

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "rpkep/exchange.hpp"

namespace rpkep::ilp {

/// Row of the single-level reformulation: sum of w^i_e x_e over exchanges
/// touching U must reach rhs.
struct CoverageConstraint {
  AgentId agent = 0;
  std::vector<VertexId> touching_set;  // sorted subset of V^i
  Weight rhs = 0;
};

/// Pins an agent's internal value: sum of w^i_e x_e over E^i equals rhs.
struct InternalEqConstraint {
  AgentId agent = 0;
  Weight rhs = 0;
};

/// Generic linear row over exchange variables; used internally by the
/// mechanisms (e.g. to pin the social value during a lexicographic solve).
struct LinearConstraint {
  enum class Sense { ge, eq };
  std::vector<std::pair<ExchangeId, Weight>> terms;  // coefficients must be >= 0
  Weight rhs = 0;
  Sense sense = Sense::ge;
};

struct PackingProblem {
  const Pool* pool = nullptr;
  std::map<ExchangeId, Weight> objective;  // missing ids count as coefficient 0
  std::vector<ExchangeId> forbidden;       // forces x_e = 0
  std::vector<CoverageConstraint> coverage_constraints;
  std::vector<InternalEqConstraint> internal_eq_constraints;
  std::vector<LinearConstraint> extra_constraints;

  /// Restricts the variable set; unset means all pool exchanges participate.
  std::optional<std::vector<ExchangeId>> restrict_to;

  /// Optional known-feasible assignment used to prime the incumbent so bound
  /// pruning is active from the first node.  Ignored if it is not feasible
  /// for this problem.  Does not affect which optimum is returned.
  std::optional<std::vector<ExchangeId>> warm_start;
};

enum class SolveStatus { optimal, infeasible };

struct SolveResult {
  SolveStatus status = SolveStatus::infeasible;
  std::vector<ExchangeId> assignment;  // sorted; lexicographically smallest optimum
  Weight objective_value = 0;
  std::int64_t node_count = 0;
};

class SolveTimeout : public std::runtime_error {
 public:
  SolveTimeout() : std::runtime_error("solve deadline exceeded") {}
};

using Deadline = std::optional<std::chrono::steady_clock::time_point>;

/// Exact branch-and-bound solve. Deterministic: among all optima of the fixed
/// branching order the lexicographically smallest chosen id-set is returned.
/// Throws SolveTimeout if a deadline is given and exceeded.
SolveResult solve_exact(const PackingProblem& p, Deadline deadline = std::nullopt);

}  // namespace rpkep::ilp

#endif
