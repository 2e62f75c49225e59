#ifndef RPKEP_MECHANISMS_HPP
#define RPKEP_MECHANISMS_HPP

#include <optional>
#include <vector>

#include "rpkep/ilp.hpp"

namespace rpkep::mech {

/// A separated (or seeded) subset rejection cut: exchanges touching `subset`
/// must give the agent at least `rhs` value.
struct SubsetRejectionConstraint {
  AgentId agent = 0;
  std::vector<VertexId> subset;  // sorted, nonempty
  Weight rhs = 0;
  enum class Origin { separated, seeded } origin = Origin::separated;
};

struct RowGenReport {
  int iterations = 0;
  int constraints_added = 0;
  double master_time_s = 0.0;
  double separation_time_s = 0.0;
  Weight final_value = 0;
  bool tiebreak_used = false;
  bool rejection_proof_certified = false;
};

/// Maximum social value over all vertex-disjoint exchange sets.
Solution solve_social_optimum(const Pool& pool, ilp::Deadline deadline = std::nullopt);

/// Maximum value to `agent` of a kidney exchange solution on G[U], U a subset
/// of the agent's vertices. beta of the empty set is 0.
Weight beta(const Pool& pool, AgentId agent, const std::vector<VertexId>& subset,
            ilp::Deadline deadline = std::nullopt);

struct MaxIntResult {
  Solution solution;
  RowGenReport report;
};

/// Maximizes social value subject to every agent's internal value equalling
/// beta(V^i). Always feasible.
MaxIntResult solve_maxint(const Pool& pool, ilp::Deadline deadline = std::nullopt);

struct RejectionWitness {
  AgentId agent = 0;
  std::vector<ExchangeId> strategy;  // optimal rejection response
  std::vector<VertexId> subset;      // derived violated subset U^i
  Weight rkep_value = 0;
};

/// True iff no agent's best rejection response strictly beats its value under
/// X. On failure the witness carries the first violating agent (smallest id).
std::pair<bool, std::optional<RejectionWitness>> is_rejection_proof(
    const Pool& pool, const Solution& x, ilp::Deadline deadline = std::nullopt);

/// One maximum-violation constraint per agent whose best response strictly
/// beats its value under X. Empty result iff X is rejection-proof.
std::vector<SubsetRejectionConstraint> separate_violations(const Pool& pool, const Solution& x,
                                                           ilp::Deadline deadline = std::nullopt);

enum class Tiebreak { off, lexicographic, weighted };
enum class SeedConstraints { none, full_pool };

struct MaxRpOptions {
  Tiebreak tiebreak = Tiebreak::lexicographic;
  SeedConstraints seed_constraints = SeedConstraints::none;
  ilp::Deadline deadline;
};

struct MaxRpResult {
  Solution solution;
  RowGenReport report;
  std::vector<SubsetRejectionConstraint> constraints;  // final pool
};

/// Row generation for the maximum-value rejection-proof solution.
MaxRpResult solve_maxrp(const Pool& pool, const MaxRpOptions& opts = {});

enum class MechanismId { social, maxint, maxrp };

/// Dispatch by mechanism id; maxrp runs with default options.
Solution run_mechanism(const Pool& pool, MechanismId mechanism,
                       ilp::Deadline deadline = std::nullopt);

}  // namespace rpkep::mech

#endif
