#include "rpkep/strategies.hpp"

#include <algorithm>
#include <functional>

namespace rpkep::strat {

std::vector<ExchangeId> RejectionStrategy::all() const {
  std::vector<ExchangeId> out = kept_shared;
  out.insert(out.end(), internal_selected.begin(), internal_selected.end());
  std::sort(out.begin(), out.end());
  return out;
}

RkepResult solve_rkep(const Pool& pool, const Solution& x, AgentId agent,
                      ilp::Deadline deadline) {
  ilp::PackingProblem p;
  p.pool = &pool;
  std::vector<ExchangeId> vars;
  for (ExchangeId e : pool.touching_agent(agent)) {
    const Exchange& ex = pool.exchange(e);
    const bool shared = !ex.owner.has_value();
    if (shared && !x.selects(e)) continue;  // (1c): shared outside X forbidden
    vars.push_back(e);
    p.objective[e] = ex.agent_value(agent);
  }
  p.restrict_to = std::move(vars);
  const ilp::SolveResult res = ilp::solve_exact(p, deadline);

  RkepResult out;
  out.value = res.objective_value;
  out.strategy.agent = agent;
  for (ExchangeId e : res.assignment) {
    if (pool.exchange(e).owner)
      out.strategy.internal_selected.push_back(e);
    else
      out.strategy.kept_shared.push_back(e);
  }
  return out;
}

std::vector<VertexId> greedy_withholding(const Pool& pool, AgentId agent) {
  ilp::PackingProblem p;
  p.pool = &pool;
  std::vector<ExchangeId> vars = pool.internal_exchanges(agent);
  for (ExchangeId e : vars) p.objective[e] = pool.exchange(e).agent_value(agent);
  p.restrict_to = std::move(vars);
  const ilp::SolveResult res = ilp::solve_exact(p);

  std::vector<VertexId> covered;
  for (ExchangeId e : res.assignment)
    for (VertexId v : pool.exchange(e).vertex_seq) covered.push_back(v);
  std::sort(covered.begin(), covered.end());
  return covered;
}

namespace {

// Maps a solution on an induced subinstance back to full-pool exchange ids.
std::vector<ExchangeId> map_back(const Pool& full, const Pool& sub,
                                 const std::vector<VertexId>& new_to_old,
                                 const std::vector<ExchangeId>& ids) {
  std::vector<ExchangeId> out;
  for (ExchangeId e : ids) {
    std::vector<VertexId> seq;
    for (VertexId v : sub.exchange(e).vertex_seq) seq.push_back(new_to_old[v]);
    if (sub.exchange(e).kind == ExchangeKind::cycle)
      std::rotate(seq.begin(), std::min_element(seq.begin(), seq.end()), seq.end());
    const ExchangeId mapped = full.find(seq);
    if (mapped < 0) throw std::logic_error("sub-pool exchange missing from the full pool");
    out.push_back(mapped);
  }
  return out;
}

// Agent's internal optimum restricted to a vertex subset, as full-pool ids.
std::vector<ExchangeId> internal_patch(const Pool& pool, AgentId agent,
                                       const std::vector<VertexId>& allowed,
                                       ilp::Deadline deadline) {
  std::vector<char> ok(pool.instance().num_vertices(), 0);
  for (VertexId v : allowed) ok[v] = 1;
  ilp::PackingProblem p;
  p.pool = &pool;
  std::vector<ExchangeId> vars;
  for (ExchangeId e : pool.internal_exchanges(agent)) {
    const Exchange& ex = pool.exchange(e);
    if (std::all_of(ex.vertex_seq.begin(), ex.vertex_seq.end(),
                    [&](VertexId v) { return ok[v]; })) {
      vars.push_back(e);
      p.objective[e] = ex.agent_value(agent);
    }
  }
  p.restrict_to = std::move(vars);
  return ilp::solve_exact(p, deadline).assignment;
}

}  // namespace

GameOutcome play_withholding_game(const Pool& pool, const WithholdingProfile& profile,
                                  mech::MechanismId mechanism, ilp::Deadline deadline) {
  const Instance& inst = pool.instance();
  std::vector<char> withheld(inst.num_vertices(), 0);
  for (const auto& [agent, w] : profile.withheld)
    for (VertexId v : w) {
      if (inst.vertex(v).agent != agent)
        throw std::invalid_argument("withheld vertex outside the agent's pool");
      withheld[v] = 1;
    }

  std::vector<VertexId> revealed;
  for (VertexId v = 0; v < inst.num_vertices(); ++v)
    if (!withheld[v]) revealed.push_back(v);

  auto [sub_inst, new_to_old] = inst.induced(revealed);
  Pool sub_pool(std::move(sub_inst));
  const Solution sub_x = mech::run_mechanism(sub_pool, mechanism, deadline);
  std::vector<ExchangeId> selected = map_back(pool, sub_pool, new_to_old, sub_x.exchange_ids);

  std::vector<char> matched(inst.num_vertices(), 0);
  for (ExchangeId e : selected)
    for (VertexId v : pool.exchange(e).vertex_seq) matched[v] = 1;

  // Step 3: each agent patches internally on W^i plus its revealed-but-
  // unmatched vertices.
  for (AgentId a : inst.agents()) {
    std::vector<VertexId> usable;
    for (VertexId v : inst.agent_vertices(a))
      if (withheld[v] || !matched[v]) usable.push_back(v);
    auto patch = internal_patch(pool, a, usable, deadline);
    selected.insert(selected.end(), patch.begin(), patch.end());
  }

  GameOutcome out;
  out.final_solution = evaluate(pool, selected);
  out.total_value = out.final_solution.value;
  const Solution baseline = mech::run_mechanism(pool, mechanism, deadline);
  for (AgentId a : inst.agents()) {
    out.per_agent_value[a] = out.final_solution.agent_value(a);
    out.baseline_value[a] = baseline.agent_value(a);
  }
  return out;
}

GameOutcome play_rejection_game(const Pool& pool, mech::MechanismId mechanism,
                                const std::set<AgentId>& responders, ilp::Deadline deadline) {
  const Instance& inst = pool.instance();
  const Solution proposed = mech::run_mechanism(pool, mechanism, deadline);

  // Accept-on-tie: a responder deviates only on a strict improvement.
  std::map<AgentId, std::vector<ExchangeId>> strategy;
  for (AgentId a : inst.agents()) {
    std::vector<ExchangeId> accept;
    for (ExchangeId e : proposed.exchange_ids)
      if (std::any_of(pool.exchange(e).vertex_seq.begin(), pool.exchange(e).vertex_seq.end(),
                      [&](VertexId v) { return inst.vertex(v).agent == a; }))
        accept.push_back(e);
    if (responders.count(a)) {
      const RkepResult best = solve_rkep(pool, proposed, a, deadline);
      if (best.value > proposed.agent_value(a)) {
        strategy[a] = best.strategy.all();
        continue;
      }
    }
    strategy[a] = std::move(accept);
  }

  // An exchange survives iff every touching agent selected it.
  std::vector<ExchangeId> survivors;
  std::set<ExchangeId> considered;
  for (const auto& [agent, ids] : strategy)
    for (ExchangeId e : ids) considered.insert(e);
  for (ExchangeId e : considered) {
    bool keep = true;
    std::set<AgentId> touching;
    for (VertexId v : pool.exchange(e).vertex_seq) touching.insert(inst.vertex(v).agent);
    for (AgentId a : touching) {
      const auto& ids = strategy[a];
      if (!std::binary_search(ids.begin(), ids.end(), e)) {
        keep = false;
        break;
      }
    }
    if (keep) survivors.push_back(e);
  }

  GameOutcome out;
  out.final_solution = evaluate(pool, survivors);
  out.total_value = out.final_solution.value;
  for (AgentId a : inst.agents()) {
    out.per_agent_value[a] = out.final_solution.agent_value(a);
    out.baseline_value[a] = proposed.agent_value(a);
  }
  return out;
}

OracleCapExceeded::OracleCapExceeded(int count, int cap)
    : std::runtime_error("pool has " + std::to_string(count) +
                         " exchanges, oracle cap is " + std::to_string(cap)) {}

std::pair<Weight, Solution> brute_force_max_rejection_proof(const Pool& pool, int cap) {
  if (pool.num_exchanges() > cap) throw OracleCapExceeded(pool.num_exchanges(), cap);

  // Enumerate every vertex-disjoint subset, then test candidates for
  // rejection-proofness in (value desc, lex asc) order so the expensive RKEP
  // checks stop at the first hit.
  std::vector<std::vector<ExchangeId>> subsets;
  std::vector<Weight> values;
  std::vector<ExchangeId> current;
  std::vector<char> covered(pool.instance().num_vertices(), 0);
  Weight cur_value = 0;

  std::function<void(ExchangeId)> enumerate = [&](ExchangeId from) {
    subsets.push_back(current);
    values.push_back(cur_value);
    for (ExchangeId e = from; e < pool.num_exchanges(); ++e) {
      const Exchange& ex = pool.exchange(e);
      if (std::any_of(ex.vertex_seq.begin(), ex.vertex_seq.end(),
                      [&](VertexId v) { return covered[v] != 0; }))
        continue;
      for (VertexId v : ex.vertex_seq) covered[v] = 1;
      current.push_back(e);
      cur_value += ex.w;
      enumerate(e + 1);
      cur_value -= ex.w;
      current.pop_back();
      for (VertexId v : ex.vertex_seq) covered[v] = 0;
    }
  };
  enumerate(0);

  std::vector<int> order(subsets.size());
  for (int i = 0; i < static_cast<int>(order.size()); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return subsets[a] < subsets[b];
  });

  for (int idx : order) {
    Solution sol = evaluate(pool, subsets[idx]);
    if (mech::is_rejection_proof(pool, sol).first) return {sol.value, std::move(sol)};
  }
  throw std::logic_error("unreachable: the empty solution set was not enumerated");
}

}  // namespace rpkep::strat
