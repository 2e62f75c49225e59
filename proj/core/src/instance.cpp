#include "rpkep/instance.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace rpkep {

namespace {

std::string describe(const Violation& v) { return v.code + ": " + v.detail; }

}  // namespace

InvalidInstance::InvalidInstance(std::vector<Violation> violations)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "invalid instance:";
        for (const auto& v : violations) os << " [" << describe(v) << "]";
        return os.str();
      }()),
      violations_(std::move(violations)) {}

std::vector<Violation> validate_instance(const InstanceDraft& draft) {
  std::vector<Violation> out;
  const int n = static_cast<int>(draft.vertices.size());

  std::set<VertexId> seen_ids;
  for (const auto& v : draft.vertices) {
    if (v.id < 0 || v.id >= n) {
      out.push_back({"vertex_id_out_of_range",
                     "vertex id " + std::to_string(v.id) + " not in 0.." + std::to_string(n - 1)});
    } else if (!seen_ids.insert(v.id).second) {
      out.push_back({"duplicate_vertex_id", "vertex id " + std::to_string(v.id)});
    }
    if (v.agent < 0)
      out.push_back({"bad_agent_id", "vertex " + std::to_string(v.id) + " has negative agent id"});
    if (v.social_weight < 0 || v.agent_weight < 0)
      out.push_back({"negative_weight", "vertex " + std::to_string(v.id)});
    if (draft.weight_mode == WeightMode::unit) {
      const Weight expect = v.kind == VertexKind::pair ? draft.weight_scale : 0;
      if (v.social_weight != expect || v.agent_weight != expect)
        out.push_back({"bad_unit_weight",
                       "vertex " + std::to_string(v.id) + " must have weight " +
                           std::to_string(expect) + " in unit mode"});
    }
  }

  std::set<std::pair<VertexId, VertexId>> seen_arcs;
  for (const auto& [from, to] : draft.arcs) {
    const std::string arc = "(" + std::to_string(from) + "," + std::to_string(to) + ")";
    if (from < 0 || from >= n || to < 0 || to >= n ||
        seen_ids.count(from) == 0 || seen_ids.count(to) == 0) {
      out.push_back({"dangling_arc", "arc " + arc + " references missing vertex"});
      continue;
    }
    if (from == to) {
      out.push_back({"self_loop", "arc " + arc});
      continue;
    }
    if (!seen_arcs.insert({from, to}).second)
      out.push_back({"duplicate_arc", "arc " + arc});
  }

  if (draft.max_cycle_len < 2)
    out.push_back({"bad_cycle_cap", "K = " + std::to_string(draft.max_cycle_len) + ", need K >= 2"});
  if (draft.max_chain_len < 0)
    out.push_back({"bad_chain_cap", "L = " + std::to_string(draft.max_chain_len) + ", need L >= 0"});
  if (draft.weight_scale < 1)
    out.push_back({"bad_weight_scale", "scale " + std::to_string(draft.weight_scale)});
  return out;
}

std::variant<Instance, std::vector<Violation>> Instance::create(InstanceDraft draft) {
  auto violations = validate_instance(draft);
  if (!violations.empty()) return violations;

  Instance inst;
  inst.vertices_ = std::move(draft.vertices);
  std::sort(inst.vertices_.begin(), inst.vertices_.end(),
            [](const VertexRecord& a, const VertexRecord& b) { return a.id < b.id; });
  inst.arcs_ = std::move(draft.arcs);
  std::sort(inst.arcs_.begin(), inst.arcs_.end());
  inst.max_cycle_len_ = draft.max_cycle_len;
  inst.max_chain_len_ = draft.max_chain_len;
  inst.weight_mode_ = draft.weight_mode;
  inst.weight_scale_ = draft.weight_scale;

  const int n = inst.num_vertices();
  inst.succ_.assign(n, {});
  for (const auto& [from, to] : inst.arcs_) inst.succ_[from].push_back(to);

  std::set<AgentId> agent_set;
  for (const auto& v : inst.vertices_) agent_set.insert(v.agent);
  inst.agents_.assign(agent_set.begin(), agent_set.end());
  const AgentId max_agent = inst.agents_.empty() ? -1 : inst.agents_.back();
  inst.agent_index_.assign(max_agent + 1, -1);
  for (int i = 0; i < static_cast<int>(inst.agents_.size()); ++i)
    inst.agent_index_[inst.agents_[i]] = i;
  inst.by_agent_.assign(inst.agents_.size(), {});
  for (const auto& v : inst.vertices_)
    inst.by_agent_[inst.agent_index_[v.agent]].push_back(v.id);

  return inst;
}

Instance Instance::create_or_throw(InstanceDraft draft) {
  auto result = create(std::move(draft));
  if (auto* inst = std::get_if<Instance>(&result)) return std::move(*inst);
  throw InvalidInstance(std::get<std::vector<Violation>>(std::move(result)));
}

bool Instance::has_arc(VertexId from, VertexId to) const {
  return std::binary_search(arcs_.begin(), arcs_.end(), std::make_pair(from, to));
}

const std::vector<VertexId>& Instance::agent_vertices(AgentId a) const {
  static const std::vector<VertexId> empty;
  if (a < 0 || a >= static_cast<AgentId>(agent_index_.size()) || agent_index_[a] < 0) return empty;
  return by_agent_[agent_index_[a]];
}

std::pair<Instance, std::vector<VertexId>> Instance::induced(
    const std::vector<VertexId>& keep) const {
  std::vector<VertexId> new_to_old(keep.begin(), keep.end());
  std::sort(new_to_old.begin(), new_to_old.end());
  new_to_old.erase(std::unique(new_to_old.begin(), new_to_old.end()), new_to_old.end());

  std::vector<int> old_to_new(num_vertices(), -1);
  for (int i = 0; i < static_cast<int>(new_to_old.size()); ++i) old_to_new[new_to_old[i]] = i;

  InstanceDraft draft;
  draft.max_cycle_len = max_cycle_len_;
  draft.max_chain_len = max_chain_len_;
  draft.weight_mode = weight_mode_;
  draft.weight_scale = weight_scale_;
  for (VertexId old_id : new_to_old) {
    VertexRecord rec = vertices_[old_id];
    rec.id = old_to_new[old_id];
    draft.vertices.push_back(rec);
  }
  for (const auto& [from, to] : arcs_)
    if (old_to_new[from] >= 0 && old_to_new[to] >= 0)
      draft.arcs.emplace_back(old_to_new[from], old_to_new[to]);

  return {create_or_throw(std::move(draft)), std::move(new_to_old)};
}

}  // namespace rpkep
