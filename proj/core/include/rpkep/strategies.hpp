#ifndef RPKEP_STRATEGIES_HPP
#define RPKEP_STRATEGIES_HPP

#include <map>
#include <set>
#include <vector>

#include "rpkep/mechanisms.hpp"

namespace rpkep::strat {

/// Agent-side answer to a proposed solution: kept shared exchanges from the
/// proposal plus an internal selection, jointly vertex-disjoint.
struct RejectionStrategy {
  AgentId agent = 0;
  std::vector<ExchangeId> kept_shared;       // subset of X intersect E^0
  std::vector<ExchangeId> internal_selected; // subset of E^i
  std::vector<ExchangeId> all() const;
};

struct RkepResult {
  Weight value = 0;
  RejectionStrategy strategy;
};

/// Exact best response of `agent` to proposal X (shared exchanges outside X
/// are forbidden). value >= w^i(X) always, since accepting is feasible.
RkepResult solve_rkep(const Pool& pool, const Solution& x, AgentId agent,
                      ilp::Deadline deadline = std::nullopt);

/// Vertices covered by the agent's deterministic internal optimum.
std::vector<VertexId> greedy_withholding(const Pool& pool, AgentId agent);

struct WithholdingProfile {
  std::map<AgentId, std::vector<VertexId>> withheld;  // W^i subset of V^i
};

struct GameOutcome {
  Solution final_solution;                  // on the full pool
  std::map<AgentId, Weight> per_agent_value;
  std::map<AgentId, Weight> baseline_value; // full-cooperation reference
  Weight total_value = 0;
};

/// Withholding game: agents reveal V^i \ W^i, the mechanism runs on the
/// revealed subgraph, then each agent patches internally on its withheld plus
/// revealed-but-unmatched vertices.
GameOutcome play_withholding_game(const Pool& pool, const WithholdingProfile& profile,
                                  mech::MechanismId mechanism,
                                  ilp::Deadline deadline = std::nullopt);

/// Rejection game: the mechanism proposes on the full graph, responders play
/// their RKEP optimum (accepting on ties), everyone else accepts; an exchange
/// survives iff every touching agent selected it.
GameOutcome play_rejection_game(const Pool& pool, mech::MechanismId mechanism,
                                const std::set<AgentId>& responders,
                                ilp::Deadline deadline = std::nullopt);

class OracleCapExceeded : public std::runtime_error {
 public:
  explicit OracleCapExceeded(int count, int cap);
};

/// Test oracle: enumerates all vertex-disjoint exchange subsets, filters by
/// is_rejection_proof, and returns a maximum (ties to the lexicographically
/// smallest id set). Throws OracleCapExceeded if the pool is too large.
std::pair<Weight, Solution> brute_force_max_rejection_proof(const Pool& pool, int cap = 20);

}  // namespace rpkep::strat

#endif
