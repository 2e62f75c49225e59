// Shared instance builders and independent brute-force oracles for the test
// suite. The oracles deliberately avoid the library's solver internals so they
// can catch bugs in them.
#ifndef RPKEP_TESTS_FIXTURES_HPP
#define RPKEP_TESTS_FIXTURES_HPP

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "rpkep/exchange.hpp"
#include "rpkep/instance.hpp"

namespace fixtures {

using namespace rpkep;

inline VertexRecord pair_vertex(VertexId id, AgentId agent, Weight w = 1, Weight wi = 1) {
  return {id, agent, VertexKind::pair, w, wi};
}

inline VertexRecord ndd_vertex(VertexId id, AgentId agent) {
  return {id, agent, VertexKind::ndd, 0, 0};
}

/// Single-agent pool with one NDD feeding a small pair graph:
///   ndd 0 -> 1, 1 -> 2, 1 -> 3, 1 -> 5, 2 <-> 4, 3 <-> 4, 5 <-> 4; K=3, L=2.
/// Exactly 7 exchanges: cycles (2,4), (3,4), (4,5); chains (0,1), (0,1,2),
/// (0,1,3), (0,1,5). Social optimum 4.
inline Instance chain_demo() {
  InstanceDraft d;
  d.vertices.push_back(ndd_vertex(0, 0));
  for (VertexId v = 1; v <= 5; ++v) d.vertices.push_back(pair_vertex(v, 0));
  d.arcs = {{0, 1}, {1, 2}, {1, 3}, {1, 5}, {2, 4}, {4, 2}, {3, 4}, {4, 3}, {5, 4}, {4, 5}};
  d.max_cycle_len = 3;
  d.max_chain_len = 2;
  return Instance::create_or_throw(std::move(d));
}

/// Two-agent pool where the social optimum is not rejection-proof:
/// agent 0 (vertices 0=b, 1=c), agent 1 (2=a, 3..6 = four pairs);
/// 3-cycles (2,3,4) and (1,5,6), 2-cycle (0,1); K=3, L=0.
/// Social optimum 6 = {(2,3,4), (1,5,6)}; best rejection-proof value 5 via
/// {(0,1), (2,3,4)} (agent 0 would reject (1,5,6) and keep (0,1) worth 2).
inline Instance rejection_demo() {
  InstanceDraft d;
  d.vertices.push_back(pair_vertex(0, 0));  // b
  d.vertices.push_back(pair_vertex(1, 0));  // c
  for (VertexId v = 2; v <= 6; ++v) d.vertices.push_back(pair_vertex(v, 1));
  d.arcs = {{2, 3}, {3, 4}, {4, 2}, {1, 5}, {5, 6}, {6, 1}, {0, 1}, {1, 0}};
  d.max_cycle_len = 3;
  d.max_chain_len = 0;
  return Instance::create_or_throw(std::move(d));
}

/// Two agents sharing a 2-cycle: agent 0 owns pairs 0 <-> 1, agent 1 owns
/// pair 2, with 1 <-> 2 shared; K=3. Both maximal solutions have value 2, but
/// only {(0,1)} is rejection-proof ({(1,2)} gets rejected by agent 0).
inline Instance withholding_demo() {
  InstanceDraft d;
  d.vertices = {pair_vertex(0, 0), pair_vertex(1, 0), pair_vertex(2, 1)};
  d.arcs = {{0, 1}, {1, 0}, {1, 2}, {2, 1}};
  d.max_cycle_len = 3;
  d.max_chain_len = 0;
  return Instance::create_or_throw(std::move(d));
}

/// All simple cycles (length 2..K, pairs only, min-id first) and agent-internal
/// NDD chains (1..L arcs) found by naive path enumeration over the arc list.
/// Independent of enumerate_exchanges.
inline std::vector<std::vector<VertexId>> naive_exchange_seqs(const Instance& inst) {
  std::vector<std::vector<VertexId>> out;
  const int n = inst.num_vertices();
  // Cycles: extend simple paths from each start s using only vertices > s.
  for (VertexId s = 0; s < n; ++s) {
    if (inst.vertex(s).kind != VertexKind::pair) continue;
    std::vector<std::vector<VertexId>> stack{{s}};
    while (!stack.empty()) {
      std::vector<VertexId> path = stack.back();
      stack.pop_back();
      const VertexId tail = path.back();
      for (VertexId next = 0; next < n; ++next) {
        if (!inst.has_arc(tail, next)) continue;
        if (next == s && path.size() >= 2) out.push_back(path);
        if (next <= s || inst.vertex(next).kind != VertexKind::pair) continue;
        if (std::find(path.begin(), path.end(), next) != path.end()) continue;
        if (static_cast<int>(path.size()) >= inst.max_cycle_len()) continue;
        std::vector<VertexId> longer = path;
        longer.push_back(next);
        stack.push_back(std::move(longer));
      }
    }
  }
  // Chains: paths from each NDD through pairs of the same agent.
  for (VertexId s = 0; s < n; ++s) {
    if (inst.vertex(s).kind != VertexKind::ndd) continue;
    std::vector<std::vector<VertexId>> stack{{s}};
    while (!stack.empty()) {
      std::vector<VertexId> path = stack.back();
      stack.pop_back();
      if (path.size() >= 2) out.push_back(path);
      if (static_cast<int>(path.size()) > inst.max_chain_len()) continue;
      const VertexId tail = path.back();
      for (VertexId next = 0; next < n; ++next) {
        if (!inst.has_arc(tail, next)) continue;
        if (inst.vertex(next).kind != VertexKind::pair) continue;
        if (inst.vertex(next).agent != inst.vertex(s).agent) continue;
        if (std::find(path.begin(), path.end(), next) != path.end()) continue;
        std::vector<VertexId> longer = path;
        longer.push_back(next);
        stack.push_back(std::move(longer));
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Exhaustive maximum-weight vertex-disjoint packing over an explicit variable
/// set; 2^E subset walk, feasibility by pairwise vertex overlap. Returns the
/// best value and the lexicographically smallest optimal id set.
inline std::pair<Weight, std::vector<ExchangeId>> naive_packing(
    const Pool& pool, const std::vector<ExchangeId>& vars,
    const std::map<ExchangeId, Weight>& objective) {
  const int m = static_cast<int>(vars.size());
  Weight best = -1;
  std::vector<ExchangeId> best_set;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    std::set<VertexId> used;
    Weight value = 0;
    bool ok = true;
    std::vector<ExchangeId> chosen;
    for (int j = 0; j < m && ok; ++j) {
      if (!(mask >> j & 1)) continue;
      const Exchange& e = pool.exchange(vars[j]);
      for (VertexId v : e.vertex_seq)
        if (!used.insert(v).second) ok = false;
      if (!ok) break;
      auto it = objective.find(vars[j]);
      value += it == objective.end() ? 0 : it->second;
      chosen.push_back(vars[j]);
    }
    if (!ok) continue;
    std::sort(chosen.begin(), chosen.end());
    if (value > best || (value == best && chosen < best_set)) {
      best = value;
      best_set = chosen;
    }
  }
  return {best, best_set};
}

}  // namespace fixtures

#endif
