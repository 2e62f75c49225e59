#include "rpkep/mechanisms.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <stdexcept>

#include "rpkep/strategies.hpp"

namespace rpkep::mech {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::map<ExchangeId, Weight> social_objective(const Pool& pool) {
  std::map<ExchangeId, Weight> obj;
  for (const Exchange& e : pool.exchanges()) obj[e.id] = e.w;
  return obj;
}

// t1: agent value of internal exchanges only (the internal preference
// tiebreaker).
std::map<ExchangeId, Weight> internal_objective(const Pool& pool) {
  std::map<ExchangeId, Weight> obj;
  for (const Exchange& e : pool.exchanges())
    if (e.owner) obj[e.id] = e.agent_value(*e.owner);
  return obj;
}

Solution assignment_solution(const Pool& pool, const ilp::SolveResult& res) {
  if (res.status != ilp::SolveStatus::optimal)
    throw std::logic_error("expected a feasible packing problem");
  return evaluate(pool, res.assignment);
}

// Master problem of the row-generation loop: packing + current subset
// rejection constraints, with the requested tiebreak handling.
ilp::SolveResult solve_master(const Pool& pool,
                              const std::vector<SubsetRejectionConstraint>& cuts,
                              Tiebreak tiebreak, ilp::Deadline deadline,
                              const std::vector<ExchangeId>* hint = nullptr) {
  ilp::PackingProblem p;
  p.pool = &pool;
  p.objective = social_objective(pool);
  for (const auto& cut : cuts)
    p.coverage_constraints.push_back({cut.agent, cut.subset, cut.rhs});
  if (hint) p.warm_start = *hint;

  if (tiebreak == Tiebreak::off) return ilp::solve_exact(p, deadline);

  if (tiebreak == Tiebreak::weighted) {
    // Big-Z weighted combination; Z exceeds any achievable t1 value.
    Weight z = 1;
    for (const VertexRecord& v : pool.instance().vertices())
      if (v.kind == VertexKind::pair) z += v.agent_weight;
    const auto internal = internal_objective(pool);
    for (auto& [e, coeff] : p.objective) {
      coeff *= z;
      auto it = internal.find(e);
      if (it != internal.end()) coeff += it->second;
    }
    ilp::SolveResult res = ilp::solve_exact(p, deadline);
    if (res.status == ilp::SolveStatus::optimal) {
      res.objective_value = 0;
      for (ExchangeId e : res.assignment) res.objective_value += pool.exchange(e).w;
    }
    return res;
  }

  // Lexicographic: optimize social value, then optimize t1 among social
  // optima.  The pin uses a >= row rather than an equality: the social
  // value can never exceed its optimum, so >= is equivalent, and >= rows
  // participate in the suffix-sum infeasibility pruning of the search.
  const auto tm0 = std::chrono::steady_clock::now();
  ilp::SolveResult first = ilp::solve_exact(p, deadline);
  const auto tm1 = std::chrono::steady_clock::now();
  if (first.status != ilp::SolveStatus::optimal) return first;

  ilp::PackingProblem second = p;
  second.objective = internal_objective(pool);
  ilp::LinearConstraint pin;
  pin.sense = ilp::LinearConstraint::Sense::ge;
  pin.rhs = first.objective_value;
  for (const Exchange& e : pool.exchanges())
    if (e.w != 0) pin.terms.emplace_back(e.id, e.w);
  second.extra_constraints.push_back(pin);
  second.warm_start = first.assignment;

  ilp::SolveResult res = ilp::solve_exact(second, deadline);
  if (std::getenv("RPKEP_ILP_DEBUG")) {
    const auto tm2 = std::chrono::steady_clock::now();
    std::fprintf(stderr, "[master] cuts=%zu first=%.2fs (val %lld) pinned=%.2fs (t1 %lld)\n",
                 cuts.size(), std::chrono::duration<double>(tm1 - tm0).count(),
                 static_cast<long long>(first.objective_value),
                 std::chrono::duration<double>(tm2 - tm1).count(),
                 static_cast<long long>(res.objective_value));
  }
  res.node_count += first.node_count;
  res.objective_value = first.objective_value;
  return res;
}

}  // namespace

Solution solve_social_optimum(const Pool& pool, ilp::Deadline deadline) {
  ilp::PackingProblem p;
  p.pool = &pool;
  p.objective = social_objective(pool);
  return assignment_solution(pool, ilp::solve_exact(p, deadline));
}

Weight beta(const Pool& pool, AgentId agent, const std::vector<VertexId>& subset,
            ilp::Deadline deadline) {
  if (subset.empty()) return 0;
  std::vector<char> in_u(pool.instance().num_vertices(), 0);
  for (VertexId v : subset) {
    if (pool.instance().vertex(v).agent != agent)
      throw std::invalid_argument("beta subset must lie inside the agent's vertex set");
    in_u[v] = 1;
  }
  ilp::PackingProblem p;
  p.pool = &pool;
  std::vector<ExchangeId> vars;
  for (ExchangeId e : pool.internal_exchanges(agent)) {
    const Exchange& ex = pool.exchange(e);
    if (std::all_of(ex.vertex_seq.begin(), ex.vertex_seq.end(),
                    [&](VertexId v) { return in_u[v]; })) {
      vars.push_back(e);
      p.objective[e] = ex.agent_value(agent);
    }
  }
  p.restrict_to = std::move(vars);
  return ilp::solve_exact(p, deadline).objective_value;
}

MaxIntResult solve_maxint(const Pool& pool, ilp::Deadline deadline) {
  const auto t0 = Clock::now();
  // Any feasible solution gives agent i at most beta(V^i) internally, and the
  // union of the per-agent internal optima achieves every bound at once. The
  // constraint "internal value of every agent equals its optimum" is therefore
  // equivalent to lexicographically maximizing total internal value before
  // social value, which folds into one objective with a big multiplier.
  Weight social_sum = 0;
  for (const Exchange& e : pool.exchanges()) social_sum += e.w;
  const Weight big = social_sum + 1;
  ilp::PackingProblem p;
  p.pool = &pool;
  for (const Exchange& e : pool.exchanges()) {
    Weight internal = 0;
    if (e.owner) internal = e.agent_value(*e.owner);
    p.objective[e.id] = big * internal + e.w;
  }
  MaxIntResult out;
  out.solution = assignment_solution(pool, ilp::solve_exact(p, deadline));
  // Record the implied per-agent pins for reporting parity with the row form.
  std::vector<ilp::InternalEqConstraint> pins;
  for (AgentId a : pool.instance().agents())
    pins.push_back({a, beta(pool, a, pool.instance().agent_vertices(a), deadline)});
  p.internal_eq_constraints = std::move(pins);
  out.report.iterations = 1;
  out.report.constraints_added = static_cast<int>(p.internal_eq_constraints.size());
  out.report.master_time_s = seconds_since(t0);
  out.report.final_value = out.solution.value;
  const auto cert0 = Clock::now();
  out.report.rejection_proof_certified = is_rejection_proof(pool, out.solution, deadline).first;
  out.report.separation_time_s = seconds_since(cert0);
  return out;
}

std::pair<bool, std::optional<RejectionWitness>> is_rejection_proof(const Pool& pool,
                                                                   const Solution& x,
                                                                   ilp::Deadline deadline) {
  for (AgentId a : pool.instance().agents()) {
    const strat::RkepResult best = strat::solve_rkep(pool, x, a, deadline);
    if (best.value <= x.agent_value(a)) continue;
    RejectionWitness w;
    w.agent = a;
    w.strategy = best.strategy.all();
    w.rkep_value = best.value;
    // U^i: vertices of the agent in response exchanges absent from X.
    std::set<VertexId> u;
    for (ExchangeId e : w.strategy) {
      if (x.selects(e)) continue;
      for (VertexId v : pool.exchange(e).vertex_seq)
        if (pool.instance().vertex(v).agent == a) u.insert(v);
    }
    w.subset.assign(u.begin(), u.end());
    return {false, std::move(w)};
  }
  return {true, std::nullopt};
}

std::vector<SubsetRejectionConstraint> separate_violations(const Pool& pool, const Solution& x,
                                                           ilp::Deadline deadline) {
  std::vector<SubsetRejectionConstraint> cuts;
  for (AgentId a : pool.instance().agents()) {
    const strat::RkepResult best = strat::solve_rkep(pool, x, a, deadline);
    if (best.value <= x.agent_value(a)) continue;

    std::set<VertexId> u;
    Weight cheap_rhs = 0;  // the response value realized inside U
    for (ExchangeId e : best.strategy.all()) {
      if (x.selects(e)) continue;
      for (VertexId v : pool.exchange(e).vertex_seq)
        if (pool.instance().vertex(v).agent == a) u.insert(v);
      cheap_rhs += pool.exchange(e).agent_value(a);
    }
    SubsetRejectionConstraint cut;
    cut.agent = a;
    cut.subset.assign(u.begin(), u.end());
    cut.origin = SubsetRejectionConstraint::Origin::separated;
    cut.rhs = beta(pool, a, cut.subset, deadline);
    if (cut.rhs < cheap_rhs)
      throw std::logic_error("separation: exact beta below realized response value");

    // The emitted cut must be violated by X.
    Weight lhs = 0;
    std::vector<char> in_u(pool.instance().num_vertices(), 0);
    for (VertexId v : cut.subset) in_u[v] = 1;
    for (ExchangeId e : x.exchange_ids) {
      const Exchange& ex = pool.exchange(e);
      if (std::any_of(ex.vertex_seq.begin(), ex.vertex_seq.end(),
                      [&](VertexId v) { return in_u[v]; }))
        lhs += ex.agent_value(a);
    }
    if (lhs >= cut.rhs)
      throw std::logic_error("separation produced a constraint not violated by the solution");
    cuts.push_back(std::move(cut));
  }
  return cuts;
}

MaxRpResult solve_maxrp(const Pool& pool, const MaxRpOptions& opts) {
  MaxRpResult out;
  out.report.tiebreak_used = opts.tiebreak != Tiebreak::off;

  std::set<std::pair<AgentId, std::vector<VertexId>>> keys;
  if (opts.seed_constraints == SeedConstraints::full_pool) {
    for (AgentId a : pool.instance().agents()) {
      SubsetRejectionConstraint cut;
      cut.agent = a;
      cut.subset = pool.instance().agent_vertices(a);
      std::sort(cut.subset.begin(), cut.subset.end());
      if (cut.subset.empty()) continue;
      cut.rhs = beta(pool, a, cut.subset, opts.deadline);
      keys.insert({cut.agent, cut.subset});
      out.constraints.push_back(std::move(cut));
      ++out.report.constraints_added;
    }
  }

  // An internal-optimum plan is always rejection-proof, so it satisfies every
  // subset rejection constraint the loop can ever add; it seeds each master
  // with a feasible incumbent.
  const std::vector<ExchangeId> feasible_hint =
      solve_maxint(pool, opts.deadline).solution.exchange_ids;

  while (true) {
    ++out.report.iterations;
    const auto m0 = Clock::now();
    ilp::SolveResult master = solve_master(pool, out.constraints, opts.tiebreak, opts.deadline,
                                           &feasible_hint);
    out.report.master_time_s += seconds_since(m0);
    out.solution = assignment_solution(pool, master);

    const auto s0 = Clock::now();
    std::vector<SubsetRejectionConstraint> cuts =
        separate_violations(pool, out.solution, opts.deadline);
    out.report.separation_time_s += seconds_since(s0);
    if (cuts.empty()) break;
    for (auto& cut : cuts) {
      if (!keys.insert({cut.agent, cut.subset}).second)
        throw std::logic_error("separation re-derived an already present constraint");
      out.constraints.push_back(std::move(cut));
      ++out.report.constraints_added;
    }
  }

  out.report.final_value = out.solution.value;
  out.report.rejection_proof_certified =
      is_rejection_proof(pool, out.solution, opts.deadline).first;
  if (!out.report.rejection_proof_certified)
    throw std::logic_error("row generation terminated on a non-rejection-proof solution");
  return out;
}

Solution run_mechanism(const Pool& pool, MechanismId mechanism, ilp::Deadline deadline) {
  switch (mechanism) {
    case MechanismId::social:
      return solve_social_optimum(pool, deadline);
    case MechanismId::maxint:
      return solve_maxint(pool, deadline).solution;
    case MechanismId::maxrp: {
      MaxRpOptions opts;
      opts.deadline = deadline;
      return solve_maxrp(pool, opts).solution;
    }
  }
  throw std::logic_error("unknown mechanism");
}

}  // namespace rpkep::mech
