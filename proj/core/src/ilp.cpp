#include "rpkep/ilp.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <optional>

namespace rpkep::ilp {

namespace {

constexpr Weight kNegInf = std::numeric_limits<Weight>::min() / 4;

// Common denominator for the per-vertex fractional bound; covers all exchange
// sizes up to 16 vertices.
constexpr Weight kRatioDen = 720720;

struct Row {
  std::vector<std::pair<int, Weight>> terms;  // (var position, coeff >= 0)
  Weight rhs = 0;
  bool eq = false;
};

struct Problem {
  const Pool* pool;
  std::vector<ExchangeId> vars;  // position -> exchange id, ascending
  std::vector<Weight> obj;
  std::vector<Row> rows;
  std::vector<std::vector<std::pair<int, Weight>>> var_rows;  // per position
  std::vector<std::vector<int>> vertex_vars;  // vertex -> positions, greedy order
  bool any_negative_obj = false;
};

struct SearchState {
  std::vector<int> covered;     // vertex -> cover count (0/1)
  std::vector<Weight> row_cur;  // per row, contribution of chosen vars
  Weight cur_obj = 0;
  std::int64_t nodes = 0;
  Deadline deadline;
};

void check_deadline(SearchState& st) {
  if ((st.nodes & 0x1fff) != 0) return;
  if (st.deadline && std::chrono::steady_clock::now() > *st.deadline) throw SolveTimeout();
  if ((st.nodes & 0xffffff) == 0 && std::getenv("RPKEP_ILP_DEBUG"))
    std::fprintf(stderr, "[ilp] ...%lld nodes\n", static_cast<long long>(st.nodes));
}

Problem lower(const PackingProblem& p) {
  Problem prob;
  prob.pool = p.pool;
  const Pool& pool = *p.pool;

  std::vector<char> excluded(pool.num_exchanges(), 0);
  for (ExchangeId e : p.forbidden) excluded[e] = 1;
  if (p.restrict_to) {
    std::vector<char> keep(pool.num_exchanges(), 0);
    for (ExchangeId e : *p.restrict_to) keep[e] = 1;
    for (ExchangeId e = 0; e < pool.num_exchanges(); ++e)
      if (!keep[e]) excluded[e] = 1;
  }
  for (ExchangeId e = 0; e < pool.num_exchanges(); ++e)
    if (!excluded[e]) prob.vars.push_back(e);

  auto objective_of = [&](ExchangeId e) {
    auto it = p.objective.find(e);
    return it == p.objective.end() ? Weight{0} : it->second;
  };
  prob.obj.resize(prob.vars.size());
  std::vector<int> pos_of(pool.num_exchanges(), -1);
  for (int i = 0; i < static_cast<int>(prob.vars.size()); ++i) {
    prob.obj[i] = objective_of(prob.vars[i]);
    if (prob.obj[i] < 0) prob.any_negative_obj = true;
    pos_of[prob.vars[i]] = i;
  }

  auto add_row = [&](std::vector<std::pair<ExchangeId, Weight>> terms, Weight rhs, bool eq) {
    Row row;
    row.rhs = rhs;
    row.eq = eq;
    for (const auto& [e, coeff] : terms) {
      assert(coeff >= 0);
      if (coeff == 0) continue;
      if (pos_of[e] >= 0) row.terms.emplace_back(pos_of[e], coeff);
    }
    std::sort(row.terms.begin(), row.terms.end());
    prob.rows.push_back(std::move(row));
  };

  for (const auto& cc : p.coverage_constraints) {
    std::vector<char> in_u(pool.instance().num_vertices(), 0);
    for (VertexId v : cc.touching_set) in_u[v] = 1;
    std::vector<std::pair<ExchangeId, Weight>> terms;
    for (ExchangeId e = 0; e < pool.num_exchanges(); ++e) {
      const Exchange& ex = pool.exchange(e);
      if (std::any_of(ex.vertex_seq.begin(), ex.vertex_seq.end(),
                      [&](VertexId v) { return in_u[v]; }))
        terms.emplace_back(e, ex.agent_value(cc.agent));
    }
    add_row(std::move(terms), cc.rhs, /*eq=*/false);
  }
  for (const auto& ec : p.internal_eq_constraints) {
    std::vector<std::pair<ExchangeId, Weight>> terms;
    for (ExchangeId e : pool.internal_exchanges(ec.agent))
      terms.emplace_back(e, pool.exchange(e).agent_value(ec.agent));
    add_row(std::move(terms), ec.rhs, /*eq=*/true);
  }
  for (const auto& lc : p.extra_constraints)
    add_row(lc.terms, lc.rhs, lc.sense == LinearConstraint::Sense::eq);

  const int m = static_cast<int>(prob.vars.size());
  prob.var_rows.assign(m, {});
  for (int r = 0; r < static_cast<int>(prob.rows.size()); ++r)
    for (const auto& [posn, coeff] : prob.rows[r].terms) prob.var_rows[posn].emplace_back(r, coeff);

  prob.vertex_vars.assign(pool.instance().num_vertices(), {});
  for (int j = 0; j < m; ++j)
    for (VertexId v : pool.exchange(prob.vars[j]).vertex_seq) prob.vertex_vars[v].push_back(j);
  // Within a vertex, try high-objective (then high-weight) exchanges first so
  // the depth-first descent behaves like a greedy construction.
  for (auto& lst : prob.vertex_vars) {
    std::stable_sort(lst.begin(), lst.end(), [&](int a, int b) {
      const auto ka = std::make_pair(prob.obj[a], pool.exchange(prob.vars[a]).w);
      const auto kb = std::make_pair(prob.obj[b], pool.exchange(prob.vars[b]).w);
      return ka > kb;
    });
  }
  return prob;
}

bool rows_satisfied(const Problem& prob, const SearchState& st) {
  for (int r = 0; r < static_cast<int>(prob.rows.size()); ++r) {
    if (st.row_cur[r] < prob.rows[r].rhs) return false;
    if (prob.rows[r].eq && st.row_cur[r] != prob.rows[r].rhs) return false;
  }
  return true;
}

void apply(const Problem& prob, SearchState& st, int posn, int delta) {
  const Exchange& ex = prob.pool->exchange(prob.vars[posn]);
  for (VertexId v : ex.vertex_seq) st.covered[v] += delta;
  for (const auto& [r, coeff] : prob.var_rows[posn]) st.row_cur[r] += delta * coeff;
  st.cur_obj += delta * prob.obj[posn];
}

// Branch-and-bound over vertices: at each node pick the most constrained
// vertex that can still be covered and branch over the exchanges covering it,
// plus the decision to leave it uncovered.  Leaving a vertex uncovered
// immediately removes its contribution from the fractional bound, which keeps
// the search tractable on dense pools whose bound is otherwise flat.
struct Search {
  const Problem& prob;
  SearchState& st;
  const std::vector<char>* banned = nullptr;  // per position, may be null
  std::vector<char> skipped;                  // per vertex: decided uncovered
  std::vector<Weight> vertex_contrib;
  std::vector<VertexId> touched;
  Weight best = kNegInf;
  bool found = false;
  bool done = false;
  std::optional<Weight> stop_at;  // stop as soon as best reaches this value
  std::vector<int> chosen, best_set;

  std::vector<int> uf;            // scratch union-find over vertices
  std::vector<Weight> comp_direct, comp_frac;
  std::vector<int> comp_roots, avail_scratch;
  std::vector<Weight> mix_coeff;  // per position, scratch for row mixing
  std::vector<int> mix_pos;

  Search(const Problem& p, SearchState& s) : prob(p), st(s) {
    const int n = p.pool->instance().num_vertices();
    skipped.assign(n, 0);
    vertex_contrib.assign(n, 0);
    uf.assign(n, 0);
    comp_direct.assign(n, 0);
    comp_frac.assign(n, 0);
    mix_coeff.assign(prob.vars.size(), 0);
  }

  int find(int v) {
    while (uf[v] != v) {
      uf[v] = uf[uf[v]];
      v = uf[v];
    }
    return v;
  }

  bool available(int posn) const {
    if (banned && (*banned)[posn]) return false;
    const Exchange& ex = prob.pool->exchange(prob.vars[posn]);
    for (VertexId v : ex.vertex_seq)
      if (st.covered[v] != 0 || skipped[v] != 0) return false;
    return true;
  }

  // Admissible bound on the objective still collectable.  Within each
  // connected component of the available exchanges (connected through shared
  // free vertices), the remaining objective is capped both by the sum of
  // positive coefficients and by a per-vertex fractional cap obj_e / |V(e)|;
  // the bound sums the smaller cap per component, which is much tighter than
  // taking a single global minimum when slack is spread across components.
  Weight bound() {
    std::iota(uf.begin(), uf.end(), 0);
    touched.clear();
    avail_scratch.clear();
    for (int j = 0; j < static_cast<int>(prob.vars.size()); ++j) {
      if (prob.obj[j] <= 0) continue;
      if (!available(j)) continue;
      avail_scratch.push_back(j);
      const Exchange& ex = prob.pool->exchange(prob.vars[j]);
      const Weight ratio = prob.obj[j] * (kRatioDen / static_cast<Weight>(ex.vertex_seq.size()));
      const int root = find(ex.vertex_seq.front());
      for (VertexId v : ex.vertex_seq) {
        uf[find(v)] = root;
        if (vertex_contrib[v] == 0) touched.push_back(v);
        vertex_contrib[v] = std::max(vertex_contrib[v], ratio);
      }
    }
    comp_roots.clear();
    for (int j : avail_scratch) {
      const int r = find(prob.pool->exchange(prob.vars[j]).vertex_seq.front());
      if (comp_direct[r] == 0) comp_roots.push_back(r);
      comp_direct[r] += prob.obj[j];
    }
    for (VertexId v : touched) {
      comp_frac[find(v)] += vertex_contrib[v];
      vertex_contrib[v] = 0;
    }
    Weight total = 0;
    for (int r : comp_roots) {
      total += std::min(comp_direct[r], comp_frac[r] / kRatioDen);
      comp_direct[r] = 0;
      comp_frac[r] = 0;
    }

    // Lagrangian tightening against unsatisfied rows: a feasible completion
    // must still add at least rhs - cur to each row, so for any row
    // obj <= cap(obj + row coeffs) - (rhs - cur) is also admissible.  This
    // captures objectives that compete with a row for the same vertices.
    if (!prob.any_negative_obj) {
      const int num_rows = static_cast<int>(prob.rows.size());
      for (int r = 0; r < num_rows; ++r) {
        const Weight need = prob.rows[r].rhs - st.row_cur[r];
        if (need <= 0) continue;
        mix_pos.clear();
        for (const auto& [posn, coeff] : prob.rows[r].terms) {
          if (mix_coeff[posn] == 0) mix_pos.push_back(posn);
          mix_coeff[posn] += coeff;
        }
        Weight direct = 0;
        touched.clear();
        auto account = [&](int posn, Weight mixed) {
          direct += mixed;
          const Exchange& ex = prob.pool->exchange(prob.vars[posn]);
          const Weight ratio = mixed * (kRatioDen / static_cast<Weight>(ex.vertex_seq.size()));
          for (VertexId v : ex.vertex_seq) {
            if (vertex_contrib[v] == 0) touched.push_back(v);
            vertex_contrib[v] = std::max(vertex_contrib[v], ratio);
          }
        };
        for (int j : avail_scratch) account(j, prob.obj[j] + mix_coeff[j]);
        // Row members that carry no objective are still usable to meet the
        // rows; include them so the mixed cap stays admissible.
        for (int posn : mix_pos) {
          if (prob.obj[posn] > 0) continue;  // already in avail_scratch
          if (!available(posn)) continue;
          account(posn, mix_coeff[posn]);
        }
        Weight frac = 0;
        for (VertexId v : touched) {
          frac += vertex_contrib[v];
          vertex_contrib[v] = 0;
        }
        total = std::min(total, std::min(direct, frac / kRatioDen) - need);
        for (int posn : mix_pos) mix_coeff[posn] = 0;
      }
    }
    return total;
  }

  // Feasibility pruning: a row can no longer reach its rhs, or an equality
  // row has already overshot.  Row potential is capped by the coefficient sum
  // of available members and by the per-vertex fractional relaxation.
  bool rows_viable() {
    for (int r = 0; r < static_cast<int>(prob.rows.size()); ++r) {
      const Row& row = prob.rows[r];
      const Weight cur = st.row_cur[r];
      if (row.eq && cur > row.rhs) return false;
      if (cur >= row.rhs) continue;
      Weight direct = 0;
      touched.clear();
      for (const auto& [posn, coeff] : row.terms) {
        if (!available(posn)) continue;
        direct += coeff;
        const Exchange& ex = prob.pool->exchange(prob.vars[posn]);
        const Weight ratio = coeff * (kRatioDen / static_cast<Weight>(ex.vertex_seq.size()));
        for (VertexId v : ex.vertex_seq) {
          if (vertex_contrib[v] == 0) touched.push_back(v);
          vertex_contrib[v] = std::max(vertex_contrib[v], ratio);
        }
      }
      Weight frac = 0;
      for (VertexId v : touched) {
        frac += vertex_contrib[v];
        vertex_contrib[v] = 0;
      }
      if (cur + std::min(direct, frac / kRatioDen) < row.rhs) return false;
    }
    return true;
  }

  int availability_count(VertexId v, int cap) const {
    int cnt = 0;
    for (int j : prob.vertex_vars[v]) {
      if (available(j)) ++cnt;
      if (cnt >= cap) break;
    }
    return cnt;
  }

  // Most constrained coverable vertex, ties to the smallest id.  While some
  // row is still short of its rhs, branch inside that row's support so the
  // decisions that determine row feasibility are made near the top of the
  // tree, where the row viability pruning can still cut whole subtrees.
  int pick_vertex() {
    for (int r = 0; r < static_cast<int>(prob.rows.size()); ++r) {
      if (st.row_cur[r] >= prob.rows[r].rhs) continue;
      int best_v = -1;
      int best_cnt = std::numeric_limits<int>::max();
      for (const auto& [posn, coeff] : prob.rows[r].terms) {
        if (!available(posn)) continue;
        for (VertexId v : prob.pool->exchange(prob.vars[posn]).vertex_seq) {
          if (st.covered[v] != 0 || skipped[v] != 0) continue;
          const int cnt = availability_count(v, best_cnt);
          if (cnt > 0 && cnt < best_cnt) {
            best_cnt = cnt;
            best_v = v;
          }
        }
        if (best_cnt == 1) break;
      }
      if (best_v >= 0) return best_v;
    }
    int best_v = -1;
    int best_cnt = std::numeric_limits<int>::max();
    for (VertexId v = 0; v < static_cast<VertexId>(prob.vertex_vars.size()); ++v) {
      if (st.covered[v] != 0 || skipped[v] != 0) continue;
      const int cnt = availability_count(v, best_cnt);
      if (cnt > 0 && cnt < best_cnt) {
        best_cnt = cnt;
        best_v = v;
        if (cnt == 1) break;
      }
    }
    return best_v;
  }

  void leaf() {
    if (!rows_satisfied(prob, st)) return;
    found = true;
    if (st.cur_obj > best) {
      best = st.cur_obj;
      best_set = chosen;
      if (stop_at && best >= *stop_at) done = true;
    }
  }

  void run() {
    if (done) return;
    ++st.nodes;
    check_deadline(st);
    if (!rows_viable()) return;
    if (found) {
      const Weight ub = st.cur_obj + bound();
      if (ub <= best) return;
      if (stop_at && ub < *stop_at) return;
    }
    const int v = pick_vertex();
    if (v < 0) {
      leaf();
      return;
    }
    for (int j : prob.vertex_vars[v]) {
      if (!available(j)) continue;
      apply(prob, st, j, +1);
      chosen.push_back(j);
      run();
      chosen.pop_back();
      apply(prob, st, j, -1);
      if (done) return;
    }
    skipped[v] = 1;
    run();
    skipped[v] = 0;
  }
};

}  // namespace

SolveResult solve_exact(const PackingProblem& p, Deadline deadline) {
  assert(p.pool != nullptr);
  if (deadline && std::chrono::steady_clock::now() > *deadline) throw SolveTimeout();
  SolveResult result;
  const bool debug = std::getenv("RPKEP_ILP_DEBUG") != nullptr;

  Problem prob = lower(p);
  const int m = static_cast<int>(prob.vars.size());
  const int n = p.pool->instance().num_vertices();

  // Phase 1: optimal objective value (with a witness assignment).
  SearchState st1;
  st1.covered.assign(n, 0);
  st1.row_cur.assign(prob.rows.size(), 0);
  st1.deadline = deadline;
  Search phase1(prob, st1);
  if (prob.rows.empty()) {
    // Pure packing: prime the incumbent with a greedy pass over exchanges in
    // decreasing objective (then weight) order.
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      const auto ka = std::make_pair(prob.obj[a], p.pool->exchange(prob.vars[a]).w);
      const auto kb = std::make_pair(prob.obj[b], p.pool->exchange(prob.vars[b]).w);
      return ka > kb;
    });
    Weight greedy = 0;
    std::vector<int> greedy_set;
    std::vector<char> used(n, 0);
    for (int j : order) {
      if (prob.obj[j] <= 0) continue;
      const Exchange& ex = p.pool->exchange(prob.vars[j]);
      if (std::any_of(ex.vertex_seq.begin(), ex.vertex_seq.end(),
                      [&](VertexId v) { return used[v] != 0; }))
        continue;
      for (VertexId v : ex.vertex_seq) used[v] = 1;
      greedy += prob.obj[j];
      greedy_set.push_back(j);
    }
    phase1.found = true;
    if (greedy >= 0) {
      phase1.best = greedy;
      phase1.best_set = std::move(greedy_set);
    } else {
      phase1.best = 0;
      phase1.best_set.clear();
    }
  }
  if (p.warm_start) {
    // Replay the hint through the search state; if it is feasible here, its
    // objective value primes the incumbent.
    std::vector<int> pos_of(p.pool->num_exchanges(), -1);
    for (int i = 0; i < m; ++i) pos_of[prob.vars[i]] = i;
    std::vector<int> positions;
    bool usable = true;
    for (ExchangeId e : *p.warm_start) {
      if (e >= p.pool->num_exchanges() || pos_of[e] < 0) {
        usable = false;
        break;
      }
      positions.push_back(pos_of[e]);
    }
    if (usable) {
      int applied = 0;
      for (int posn : positions) {
        const Exchange& ex = p.pool->exchange(prob.vars[posn]);
        const bool free = std::none_of(ex.vertex_seq.begin(), ex.vertex_seq.end(),
                                       [&](VertexId v) { return st1.covered[v] != 0; });
        if (!free) {
          usable = false;
          break;
        }
        apply(prob, st1, posn, +1);
        ++applied;
      }
      if (usable && rows_satisfied(prob, st1) &&
          (!phase1.found || st1.cur_obj > phase1.best)) {
        phase1.found = true;
        phase1.best = st1.cur_obj;
        phase1.best_set = positions;
      }
      for (int i = applied - 1; i >= 0; --i) apply(prob, st1, positions[i], -1);
    }
  }
  const auto t_p1 = std::chrono::steady_clock::now();
  phase1.run();
  if (debug)
    std::fprintf(stderr, "[ilp] phase1 vars=%d rows=%zu nodes=%lld time=%.2fs best=%lld\n", m,
                 prob.rows.size(), static_cast<long long>(st1.nodes),
                 std::chrono::duration<double>(std::chrono::steady_clock::now() - t_p1).count(),
                 static_cast<long long>(phase1.best));
  result.node_count += st1.nodes;
  if (!phase1.found) {
    result.status = SolveStatus::infeasible;
    return result;
  }
  const Weight opt = phase1.best;

  // Phase 2: the lexicographically smallest optimal assignment, built by
  // fixing variables in id order.  A variable is kept when some completion
  // that respects all previous decisions still reaches the optimal value;
  // the witness assignment from the last successful check lets consecutive
  // keeps skip the re-solve.
  SearchState stf;
  stf.covered.assign(n, 0);
  stf.row_cur.assign(prob.rows.size(), 0);
  stf.deadline = deadline;
  std::vector<char> banned(m, 0);
  std::vector<char> in_witness(m, 0);
  for (int posn : phase1.best_set) in_witness[posn] = 1;
  bool have_witness = phase1.best == opt;
  std::vector<int> fixed;
  const auto t_p2 = std::chrono::steady_clock::now();
  for (int j = 0; j < m; ++j) {
    const Exchange& ex = p.pool->exchange(prob.vars[j]);
    const bool free = std::none_of(ex.vertex_seq.begin(), ex.vertex_seq.end(),
                                   [&](VertexId v) { return stf.covered[v] != 0; });
    if (!free) continue;
    if (!prob.any_negative_obj && stf.cur_obj == opt && rows_satisfied(prob, stf)) {
      // The fixed set already realizes the optimum; a remaining variable can
      // join only if it adds no objective and keeps every equality row exact.
      if (prob.obj[j] != 0) continue;
      bool ok = true;
      for (const auto& [r, coeff] : prob.var_rows[j])
        if (prob.rows[r].eq && stf.row_cur[r] + coeff > prob.rows[r].rhs) ok = false;
      if (!ok) continue;
      apply(prob, stf, j, +1);
      fixed.push_back(j);
      continue;
    }
    if (have_witness && in_witness[j]) {
      apply(prob, stf, j, +1);
      fixed.push_back(j);
      continue;
    }
    // Re-solve with j forced in; succeed iff the optimum is still reachable.
    apply(prob, stf, j, +1);
    SearchState sts = stf;
    sts.nodes = 0;
    Search test(prob, sts);
    test.banned = &banned;
    test.found = true;
    test.best = opt - 1;
    test.stop_at = opt;
    test.run();
    result.node_count += sts.nodes;
    if (test.best >= opt) {
      fixed.push_back(j);
      std::fill(in_witness.begin(), in_witness.end(), 0);
      for (int posn : fixed) in_witness[posn] = 1;
      for (int posn : test.best_set) in_witness[posn] = 1;
      have_witness = true;
    } else {
      apply(prob, stf, j, -1);
      banned[j] = 1;
    }
  }
  if (debug)
    std::fprintf(stderr, "[ilp] phase2 time=%.2fs\n",
                 std::chrono::duration<double>(std::chrono::steady_clock::now() - t_p2).count());
  assert(stf.cur_obj == opt && rows_satisfied(prob, stf));

  result.status = SolveStatus::optimal;
  result.objective_value = opt;
  for (int posn : fixed) result.assignment.push_back(prob.vars[posn]);
  std::sort(result.assignment.begin(), result.assignment.end());
  return result;
}

}  // namespace rpkep::ilp
