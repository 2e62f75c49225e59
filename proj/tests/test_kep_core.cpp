#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "rpkep/generators.hpp"

using namespace rpkep;
using fixtures::chain_demo;
using fixtures::naive_exchange_seqs;
using fixtures::pair_vertex;
using fixtures::rejection_demo;

TEST_CASE("validation reports every violation with a distinct code") {
  InstanceDraft d;
  d.vertices = {pair_vertex(0, 0), pair_vertex(0, 0), pair_vertex(7, -1)};
  d.arcs = {{0, 0}, {0, 9}};
  d.max_cycle_len = 1;
  d.max_chain_len = -1;
  const auto violations = validate_instance(d);
  std::set<std::string> codes;
  for (const Violation& v : violations) codes.insert(v.code);
  CHECK(codes.count("duplicate_vertex_id") == 1);
  CHECK(codes.count("vertex_id_out_of_range") == 1);
  CHECK(codes.count("bad_agent_id") == 1);
  CHECK(codes.count("self_loop") == 1);
  CHECK(codes.count("dangling_arc") == 1);
  CHECK(codes.count("bad_cycle_cap") == 1);
  CHECK(codes.count("bad_chain_cap") == 1);
  CHECK(std::holds_alternative<std::vector<Violation>>(Instance::create(d)));
  CHECK_THROWS_AS(Instance::create_or_throw(d), InvalidInstance);
}

TEST_CASE("negative and non-unit weights are rejected") {
  InstanceDraft d;
  d.vertices = {pair_vertex(0, 0, -1, 1), pair_vertex(1, 0, 1, 3)};
  d.arcs = {{0, 1}, {1, 0}};
  const auto violations = validate_instance(d);
  std::set<std::string> codes;
  for (const Violation& v : violations) codes.insert(v.code);
  CHECK(codes.count("negative_weight") == 1);
  CHECK(codes.count("bad_unit_weight") == 1);
}

TEST_CASE("a valid draft produces a normalized instance") {
  Instance inst = chain_demo();
  CHECK(inst.num_vertices() == 6);
  CHECK(inst.num_agents() == 1);
  CHECK(inst.has_arc(0, 1));
  CHECK_FALSE(inst.has_arc(1, 0));
  CHECK(inst.agent_vertices(0).size() == 6);
  CHECK(std::is_sorted(inst.arcs().begin(), inst.arcs().end()));
}

TEST_CASE("enumeration finds exactly the documented chain-demo exchanges") {
  Pool pool(chain_demo());
  REQUIRE(pool.num_exchanges() == 7);
  const std::vector<std::vector<VertexId>> expected = {
      {0, 1}, {0, 1, 2}, {0, 1, 3}, {0, 1, 5}, {2, 4}, {3, 4}, {4, 5}};
  for (const auto& seq : expected) {
    const ExchangeId id = pool.find(seq);
    CAPTURE(seq);
    CHECK(id >= 0);
  }
  // Unit mode: a chain's value counts its pairs, never the non-directed donor.
  CHECK(pool.exchange(pool.find({0, 1})).w == 1);
  CHECK(pool.exchange(pool.find({0, 1, 2})).w == 2);
  CHECK(pool.exchange(pool.find({2, 4})).w == 2);
}

TEST_CASE("cycles are canonicalized to start at the minimum vertex id") {
  Pool pool(rejection_demo());
  CHECK(pool.find({2, 3, 4}) >= 0);
  CHECK(pool.find({3, 4, 2}) == -1);
  CHECK(pool.find({4, 2, 3}) == -1);
  for (const Exchange& e : pool.exchanges())
    if (e.kind == ExchangeKind::cycle)
      CHECK(e.vertex_seq.front() == *std::min_element(e.vertex_seq.begin(), e.vertex_seq.end()));
}

TEST_CASE("exchange ids are dense and ordered by canonical vertex sequence") {
  Pool pool(chain_demo());
  for (int i = 0; i + 1 < pool.num_exchanges(); ++i) {
    CHECK(pool.exchange(i).id == i);
    CHECK(pool.exchange(i).vertex_seq < pool.exchange(i + 1).vertex_seq);
  }
}

TEST_CASE("enumeration matches a naive path oracle on random small graphs") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    gen::DensityParams p;
    p.agent_pool_sizes = {4, 4};
    p.arc_prob = 0.4;
    p.ndds_per_agent = 1;
    p.max_cycle_len = 3;
    p.max_chain_len = 2;
    const Instance inst = gen::generate_density(p, seed);
    const Pool pool(inst);
    const auto expected = naive_exchange_seqs(inst);
    CAPTURE(seed);
    REQUIRE(pool.num_exchanges() == static_cast<int>(expected.size()));
    for (const auto& seq : expected) {
      // The oracle emits cycles in arbitrary rotation; canonicalize.
      std::vector<VertexId> canonical = seq;
      if (inst.vertex(seq.front()).kind == VertexKind::pair) {
        const auto min_it = std::min_element(canonical.begin(), canonical.end());
        std::rotate(canonical.begin(), min_it, canonical.end());
      }
      CHECK(pool.find(canonical) >= 0);
    }
  }
}

TEST_CASE("longer cycle caps admit longer cycles") {
  InstanceDraft d;
  for (VertexId v = 0; v < 4; ++v) d.vertices.push_back(pair_vertex(v, 0));
  d.arcs = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
  d.max_cycle_len = 3;
  CHECK(Pool(Instance::create_or_throw(d)).num_exchanges() == 0);
  d.max_cycle_len = 4;
  Pool pool(Instance::create_or_throw(d));
  REQUIRE(pool.num_exchanges() == 1);
  CHECK(pool.exchange(0).vertex_seq == std::vector<VertexId>{0, 1, 2, 3});
}

TEST_CASE("ownership splits exchanges into internal and shared") {
  Pool pool(rejection_demo());
  // (0,1) is internal to agent 0; (2,3,4) internal to agent 1; (1,5,6) shared.
  const ExchangeId bc = pool.find({0, 1});
  const ExchangeId blue = pool.find({2, 3, 4});
  const ExchangeId cross = pool.find({1, 5, 6});
  REQUIRE(bc >= 0);
  REQUIRE(blue >= 0);
  REQUIRE(cross >= 0);
  CHECK(pool.exchange(bc).internal_to(0));
  CHECK(pool.exchange(blue).internal_to(1));
  CHECK_FALSE(pool.exchange(cross).owner.has_value());
  CHECK(pool.shared_exchanges() == std::vector<ExchangeId>{cross});
  CHECK(pool.exchange(cross).agent_value(0) == 1);  // vertex 1 only
  CHECK(pool.exchange(cross).agent_value(1) == 2);  // vertices 5, 6
}

TEST_CASE("evaluate builds totals and rejects overlapping selections") {
  Pool pool(rejection_demo());
  const Solution s = evaluate(pool, {pool.find({0, 1}), pool.find({2, 3, 4})});
  CHECK(s.value == 5);
  CHECK(s.agent_value(0) == 2);
  CHECK(s.agent_value(1) == 3);
  CHECK(s.covered == std::vector<VertexId>{0, 1, 2, 3, 4});
  CHECK(s.selects(pool.find({0, 1})));
  CHECK_FALSE(s.selects(pool.find({1, 5, 6})));
  CHECK_THROWS_AS(evaluate(pool, {pool.find({0, 1}), pool.find({1, 5, 6})}), OverlapError);
  CHECK_THROWS_AS(evaluate(pool, {999}), std::out_of_range);
}

TEST_CASE("induced subinstances renumber densely and keep arcs") {
  const Instance inst = rejection_demo();
  const auto [sub, new_to_old] = inst.induced({1, 5, 6});
  CHECK(sub.num_vertices() == 3);
  CHECK(new_to_old == std::vector<VertexId>{1, 5, 6});
  CHECK(sub.has_arc(0, 1));  // 1 -> 5
  CHECK(sub.has_arc(1, 2));  // 5 -> 6
  CHECK(sub.has_arc(2, 0));  // 6 -> 1
  CHECK_FALSE(sub.has_arc(0, 2));
  Pool sub_pool{sub};
  CHECK(sub_pool.num_exchanges() == 1);
}
