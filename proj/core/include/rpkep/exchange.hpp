#ifndef RPKEP_EXCHANGE_HPP
#define RPKEP_EXCHANGE_HPP

#include <map>
#include <optional>
#include <vector>

#include "rpkep/instance.hpp"

namespace rpkep {

enum class ExchangeKind { cycle, chain };

/// A cycle through pair vertices or an agent-internal chain from an NDD.
/// Cycles are canonicalized to start at their minimum vertex id.
struct Exchange {
  ExchangeId id = -1;
  ExchangeKind kind = ExchangeKind::cycle;
  std::vector<VertexId> vertex_seq;
  std::optional<AgentId> owner;  // nullopt = shared between agents
  Weight w = 0;                  // social value
  std::map<AgentId, Weight> w_by_agent;

  Weight agent_value(AgentId a) const {
    auto it = w_by_agent.find(a);
    return it == w_by_agent.end() ? 0 : it->second;
  }
  bool internal_to(AgentId a) const { return owner && *owner == a; }
};

/// Enumerates every simple cycle of length <= K through pair vertices plus
/// every 1..L arc path inside a single agent's subgraph starting at an NDD.
/// Output order is lexicographic by canonical vertex sequence; ids are dense.
std::vector<Exchange> enumerate_exchanges(const Instance& inst);

struct Solution {
  std::vector<ExchangeId> exchange_ids;  // sorted
  std::vector<VertexId> covered;         // sorted
  Weight value = 0;
  std::map<AgentId, Weight> agent_values;

  Weight agent_value(AgentId a) const {
    auto it = agent_values.find(a);
    return it == agent_values.end() ? 0 : it->second;
  }
  bool selects(ExchangeId e) const;
};

/// Instance plus its enumeration and the indexes the solvers need.
class Pool {
 public:
  explicit Pool(Instance inst);

  const Instance& instance() const { return inst_; }
  const std::vector<Exchange>& exchanges() const { return exchanges_; }
  int num_exchanges() const { return static_cast<int>(exchanges_.size()); }
  const Exchange& exchange(ExchangeId e) const { return exchanges_[e]; }

  /// Exchanges touching vertex v.
  const std::vector<ExchangeId>& touching(VertexId v) const { return by_vertex_[v]; }
  /// Internal exchanges of an agent (empty for unknown agents).
  const std::vector<ExchangeId>& internal_exchanges(AgentId a) const;
  /// Shared exchanges, i.e. those spanning multiple agents.
  const std::vector<ExchangeId>& shared_exchanges() const { return shared_; }
  /// Exchanges with at least one vertex of agent a (internal + shared).
  const std::vector<ExchangeId>& touching_agent(AgentId a) const;

  /// Looks up an exchange by canonical vertex sequence; -1 if absent.
  ExchangeId find(const std::vector<VertexId>& canonical_seq) const;

 private:
  Instance inst_;
  std::vector<Exchange> exchanges_;
  std::vector<std::vector<ExchangeId>> by_vertex_;
  std::map<AgentId, std::vector<ExchangeId>> internal_;
  std::map<AgentId, std::vector<ExchangeId>> touching_agent_;
  std::vector<ExchangeId> shared_;
  std::map<std::vector<VertexId>, ExchangeId> by_seq_;
};

class OverlapError : public std::runtime_error {
 public:
  OverlapError(VertexId v, ExchangeId a, ExchangeId b);
  VertexId vertex;
};

/// Builds a Solution from exchange ids; throws OverlapError naming the first
/// conflicting vertex if the set is not vertex-disjoint.
Solution evaluate(const Pool& pool, const std::vector<ExchangeId>& exchange_ids);

}  // namespace rpkep

#endif
