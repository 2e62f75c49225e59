#ifndef RPKEP_INSTANCE_HPP
#define RPKEP_INSTANCE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace rpkep {

using VertexId = int;
using AgentId = int;
using ExchangeId = int;

// Weights are kept as scaled integers; Instance::weight_scale is the common
// denominator for the whole instance. Unit-mode instances have scale 1.
using Weight = std::int64_t;

enum class VertexKind { pair, ndd };
enum class WeightMode { unit, scored };

struct VertexRecord {
  VertexId id = 0;
  AgentId agent = 0;
  VertexKind kind = VertexKind::pair;
  Weight social_weight = 0;
  Weight agent_weight = 0;
};

/// One invariant breach found while validating a raw instance description.
struct Violation {
  std::string code;    // machine readable, e.g. "self_loop"
  std::string detail;  // human readable locus / explanation
};

/// Unvalidated instance description, as parsed from a file or built in code.
struct InstanceDraft {
  std::vector<VertexRecord> vertices;
  std::vector<std::pair<VertexId, VertexId>> arcs;
  int max_cycle_len = 3;  // K, counted in vertices
  int max_chain_len = 0;  // L, counted in arcs
  WeightMode weight_mode = WeightMode::unit;
  Weight weight_scale = 1;
};

class Instance {
 public:
  /// Validates and normalizes a draft. Returns either the instance or the
  /// full list of violations, each with a distinct code.
  static std::variant<Instance, std::vector<Violation>> create(InstanceDraft draft);

  /// As create(), but throws InvalidInstance on any violation.
  static Instance create_or_throw(InstanceDraft draft);

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  const std::vector<VertexRecord>& vertices() const { return vertices_; }
  const VertexRecord& vertex(VertexId v) const { return vertices_[v]; }
  const std::vector<std::pair<VertexId, VertexId>>& arcs() const { return arcs_; }
  const std::vector<AgentId>& agents() const { return agents_; }
  int num_agents() const { return static_cast<int>(agents_.size()); }
  int max_cycle_len() const { return max_cycle_len_; }
  int max_chain_len() const { return max_chain_len_; }
  WeightMode weight_mode() const { return weight_mode_; }
  Weight weight_scale() const { return weight_scale_; }

  bool has_arc(VertexId from, VertexId to) const;
  const std::vector<VertexId>& successors(VertexId v) const { return succ_[v]; }
  const std::vector<VertexId>& agent_vertices(AgentId a) const;

  /// Vertex-induced subinstance. Vertices are renumbered densely in the order
  /// of `keep`; the returned map gives new-id -> old-id.
  std::pair<Instance, std::vector<VertexId>> induced(const std::vector<VertexId>& keep) const;

 private:
  Instance() = default;

  std::vector<VertexRecord> vertices_;
  std::vector<std::pair<VertexId, VertexId>> arcs_;  // sorted, unique
  std::vector<AgentId> agents_;                      // sorted, unique
  std::vector<std::vector<VertexId>> succ_;
  std::vector<std::vector<VertexId>> by_agent_;  // indexed by agent position
  std::vector<int> agent_index_;                 // agent id -> position in agents_
  int max_cycle_len_ = 3;
  int max_chain_len_ = 0;
  WeightMode weight_mode_ = WeightMode::unit;
  Weight weight_scale_ = 1;
};

class InvalidInstance : public std::runtime_error {
 public:
  explicit InvalidInstance(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// Validation only; empty result means the draft is a valid instance.
std::vector<Violation> validate_instance(const InstanceDraft& draft);

}  // namespace rpkep

#endif
