#include "rpkep/exchange.hpp"

#include <algorithm>

namespace rpkep {

namespace {

void fill_weights(const Instance& inst, Exchange& e) {
  e.w = 0;
  e.w_by_agent.clear();
  std::optional<AgentId> owner;
  bool shared = false;
  for (VertexId v : e.vertex_seq) {
    const VertexRecord& rec = inst.vertex(v);
    if (rec.kind == VertexKind::pair) {
      e.w += rec.social_weight;
      e.w_by_agent[rec.agent] += rec.agent_weight;
    }
    if (!owner)
      owner = rec.agent;
    else if (*owner != rec.agent)
      shared = true;
  }
  e.owner = shared ? std::nullopt : owner;
}

// Cycles are found by bounded DFS from each pair vertex s, visiting only
// vertices with id > s, so each cycle is produced exactly once in canonical
// (minimum-id-first) form.
void find_cycles(const Instance& inst, std::vector<Exchange>& out) {
  const int k = inst.max_cycle_len();
  std::vector<VertexId> path;
  std::vector<char> on_path(inst.num_vertices(), 0);

  auto dfs = [&](auto&& self, VertexId start, VertexId v) -> void {
    for (VertexId next : inst.successors(v)) {
      if (next == start && path.size() >= 2) {
        Exchange e;
        e.kind = ExchangeKind::cycle;
        e.vertex_seq = path;
        out.push_back(std::move(e));
      }
      if (next <= start || on_path[next]) continue;
      if (inst.vertex(next).kind != VertexKind::pair) continue;
      if (static_cast<int>(path.size()) >= k) continue;
      path.push_back(next);
      on_path[next] = 1;
      self(self, start, next);
      on_path[next] = 0;
      path.pop_back();
    }
  };

  for (VertexId s = 0; s < inst.num_vertices(); ++s) {
    if (inst.vertex(s).kind != VertexKind::pair) continue;
    path.assign(1, s);
    on_path[s] = 1;
    dfs(dfs, s, s);
    on_path[s] = 0;
  }
}

void find_chains(const Instance& inst, std::vector<Exchange>& out) {
  const int max_arcs = inst.max_chain_len();
  if (max_arcs == 0) return;
  std::vector<VertexId> path;
  std::vector<char> on_path(inst.num_vertices(), 0);

  auto dfs = [&](auto&& self, AgentId agent, VertexId v) -> void {
    if (static_cast<int>(path.size()) > 1) {
      Exchange e;
      e.kind = ExchangeKind::chain;
      e.vertex_seq = path;
      out.push_back(std::move(e));
    }
    if (static_cast<int>(path.size()) > max_arcs) return;
    for (VertexId next : inst.successors(v)) {
      if (on_path[next]) continue;
      const VertexRecord& rec = inst.vertex(next);
      if (rec.kind != VertexKind::pair || rec.agent != agent) continue;
      path.push_back(next);
      on_path[next] = 1;
      self(self, agent, next);
      on_path[next] = 0;
      path.pop_back();
    }
  };

  for (VertexId s = 0; s < inst.num_vertices(); ++s) {
    if (inst.vertex(s).kind != VertexKind::ndd) continue;
    path.assign(1, s);
    on_path[s] = 1;
    dfs(dfs, inst.vertex(s).agent, s);
    on_path[s] = 0;
  }
}

}  // namespace

std::vector<Exchange> enumerate_exchanges(const Instance& inst) {
  std::vector<Exchange> out;
  find_cycles(inst, out);
  find_chains(inst, out);
  std::sort(out.begin(), out.end(),
            [](const Exchange& a, const Exchange& b) { return a.vertex_seq < b.vertex_seq; });
  for (int i = 0; i < static_cast<int>(out.size()); ++i) {
    out[i].id = i;
    fill_weights(inst, out[i]);
  }
  return out;
}

bool Solution::selects(ExchangeId e) const {
  return std::binary_search(exchange_ids.begin(), exchange_ids.end(), e);
}

Pool::Pool(Instance inst) : inst_(std::move(inst)) {
  exchanges_ = enumerate_exchanges(inst_);
  by_vertex_.assign(inst_.num_vertices(), {});
  for (const Exchange& e : exchanges_) {
    by_seq_[e.vertex_seq] = e.id;
    for (VertexId v : e.vertex_seq) by_vertex_[v].push_back(e.id);
    if (e.owner)
      internal_[*e.owner].push_back(e.id);
    else
      shared_.push_back(e.id);
    for (const auto& [agent, value] : e.w_by_agent) touching_agent_[agent].push_back(e.id);
  }
}

const std::vector<ExchangeId>& Pool::internal_exchanges(AgentId a) const {
  static const std::vector<ExchangeId> empty;
  auto it = internal_.find(a);
  return it == internal_.end() ? empty : it->second;
}

const std::vector<ExchangeId>& Pool::touching_agent(AgentId a) const {
  static const std::vector<ExchangeId> empty;
  auto it = touching_agent_.find(a);
  return it == touching_agent_.end() ? empty : it->second;
}

ExchangeId Pool::find(const std::vector<VertexId>& canonical_seq) const {
  auto it = by_seq_.find(canonical_seq);
  return it == by_seq_.end() ? -1 : it->second;
}

OverlapError::OverlapError(VertexId v, ExchangeId a, ExchangeId b)
    : std::runtime_error("vertex " + std::to_string(v) + " is covered by exchanges " +
                         std::to_string(a) + " and " + std::to_string(b)),
      vertex(v) {}

Solution evaluate(const Pool& pool, const std::vector<ExchangeId>& exchange_ids) {
  Solution sol;
  sol.exchange_ids = exchange_ids;
  std::sort(sol.exchange_ids.begin(), sol.exchange_ids.end());
  sol.exchange_ids.erase(std::unique(sol.exchange_ids.begin(), sol.exchange_ids.end()),
                         sol.exchange_ids.end());

  std::vector<ExchangeId> covered_by(pool.instance().num_vertices(), -1);
  for (ExchangeId id : sol.exchange_ids) {
    if (id < 0 || id >= pool.num_exchanges())
      throw std::out_of_range("unknown exchange id " + std::to_string(id));
    const Exchange& e = pool.exchange(id);
    for (VertexId v : e.vertex_seq) {
      if (covered_by[v] >= 0) throw OverlapError(v, covered_by[v], id);
      covered_by[v] = id;
      sol.covered.push_back(v);
    }
    sol.value += e.w;
    for (const auto& [agent, value] : e.w_by_agent) sol.agent_values[agent] += value;
  }
  std::sort(sol.covered.begin(), sol.covered.end());
  return sol;
}

}  // namespace rpkep
