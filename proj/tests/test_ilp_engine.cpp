#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>

#include "fixtures.hpp"
#include "rpkep/generators.hpp"
#include "rpkep/ilp.hpp"

using namespace rpkep;
using fixtures::naive_packing;

namespace {

std::map<ExchangeId, Weight> social_objective(const Pool& pool) {
  std::map<ExchangeId, Weight> obj;
  for (const Exchange& e : pool.exchanges()) obj[e.id] = e.w;
  return obj;
}

}  // namespace

TEST_CASE("unconstrained packing matches the exhaustive subset oracle") {
  for (std::uint64_t seed = 100; seed < 140; ++seed) {
    gen::DensityParams p;
    p.agent_pool_sizes = {3, 3};
    p.arc_prob = 0.5;
    const Pool pool(gen::generate_density(p, seed));
    if (pool.num_exchanges() > 14) continue;  // keep the 2^E oracle cheap
    std::vector<ExchangeId> vars;
    for (int e = 0; e < pool.num_exchanges(); ++e) vars.push_back(e);
    const auto [oracle_value, oracle_set] = naive_packing(pool, vars, social_objective(pool));

    ilp::PackingProblem problem;
    problem.pool = &pool;
    problem.objective = social_objective(pool);
    const ilp::SolveResult result = ilp::solve_exact(problem);
    CAPTURE(seed);
    REQUIRE(result.status == ilp::SolveStatus::optimal);
    CHECK(result.objective_value == oracle_value);
    CHECK(result.assignment == oracle_set);
  }
}

TEST_CASE("forbidden and restricted variable sets are honoured") {
  Pool pool(fixtures::rejection_demo());
  const ExchangeId bc = pool.find({0, 1});
  const ExchangeId cross = pool.find({1, 5, 6});
  const ExchangeId blue = pool.find({2, 3, 4});

  ilp::PackingProblem problem;
  problem.pool = &pool;
  problem.objective = social_objective(pool);
  SUBCASE("baseline optimum uses the shared 3-cycle") {
    const auto r = ilp::solve_exact(problem);
    CHECK(r.objective_value == 6);
    CHECK(r.assignment == std::vector<ExchangeId>{cross, blue});
  }
  SUBCASE("forbidding the shared cycle forces the 2-cycle") {
    problem.forbidden = {cross};
    const auto r = ilp::solve_exact(problem);
    CHECK(r.objective_value == 5);
    CHECK(r.assignment == std::vector<ExchangeId>{bc, blue});
  }
  SUBCASE("restriction to one variable") {
    problem.restrict_to = std::vector<ExchangeId>{bc};
    const auto r = ilp::solve_exact(problem);
    CHECK(r.objective_value == 2);
    CHECK(r.assignment == std::vector<ExchangeId>{bc});
  }
}

TEST_CASE("coverage rows force value toward a vertex subset") {
  Pool pool(fixtures::rejection_demo());
  ilp::PackingProblem problem;
  problem.pool = &pool;
  problem.objective = social_objective(pool);
  // Agent 0 must collect at least 2 from exchanges touching {0, 1}: only the
  // internal 2-cycle achieves that, which kicks out the shared 3-cycle.
  problem.coverage_constraints.push_back({0, {0, 1}, 2});
  const auto r = ilp::solve_exact(problem);
  CHECK(r.objective_value == 5);
  CHECK(r.assignment == std::vector<ExchangeId>{pool.find({0, 1}), pool.find({2, 3, 4})});
}

TEST_CASE("internal equality rows pin an agent's internal value") {
  Pool pool(fixtures::rejection_demo());
  ilp::PackingProblem problem;
  problem.pool = &pool;
  problem.objective = social_objective(pool);
  SUBCASE("feasible pin") {
    problem.internal_eq_constraints.push_back({0, 2});
    const auto r = ilp::solve_exact(problem);
    REQUIRE(r.status == ilp::SolveStatus::optimal);
    CHECK(r.objective_value == 5);
  }
  SUBCASE("unreachable pin is infeasible") {
    problem.internal_eq_constraints.push_back({0, 7});
    CHECK(ilp::solve_exact(problem).status == ilp::SolveStatus::infeasible);
  }
}

TEST_CASE("generic linear rows support equality pinning") {
  Pool pool(fixtures::rejection_demo());
  ilp::PackingProblem problem;
  problem.pool = &pool;
  problem.objective = social_objective(pool);
  ilp::LinearConstraint pin;
  for (const Exchange& e : pool.exchanges()) pin.terms.push_back({e.id, e.w});
  pin.rhs = 5;
  pin.sense = ilp::LinearConstraint::Sense::eq;
  problem.extra_constraints.push_back(pin);
  const auto r = ilp::solve_exact(problem);
  REQUIRE(r.status == ilp::SolveStatus::optimal);
  CHECK(r.objective_value == 5);
}

TEST_CASE("repeated solves are bit-for-bit identical") {
  gen::DensityParams p;
  p.agent_pool_sizes = {6, 6};
  p.arc_prob = 0.35;
  const Pool pool(gen::generate_density(p, 2024));
  ilp::PackingProblem problem;
  problem.pool = &pool;
  problem.objective = social_objective(pool);
  const auto first = ilp::solve_exact(problem);
  const auto second = ilp::solve_exact(problem);
  CHECK(first.objective_value == second.objective_value);
  CHECK(first.assignment == second.assignment);
  CHECK(first.node_count == second.node_count);
}

TEST_CASE("an expired deadline raises a timeout") {
  gen::DensityParams p;
  p.agent_pool_sizes = {10, 10};
  p.arc_prob = 0.6;
  const Pool pool(gen::generate_density(p, 9));
  ilp::PackingProblem problem;
  problem.pool = &pool;
  problem.objective = social_objective(pool);
  const auto past = std::chrono::steady_clock::now() - std::chrono::seconds(1);
  CHECK_THROWS_AS(ilp::solve_exact(problem, past), ilp::SolveTimeout);
}
