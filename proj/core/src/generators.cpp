#include "rpkep/generators.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace rpkep::gen {

namespace {

// Platform-independent uniform in [0, 1): std distributions are not portable
// across standard libraries, raw engine output is.
double next_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int pick_category(std::mt19937_64& rng, const std::vector<double>& probs) {
  const double u = next_unit(rng);
  double acc = 0.0;
  for (int i = 0; i < static_cast<int>(probs.size()); ++i) {
    acc += probs[i];
    if (u < acc) return i;
  }
  return static_cast<int>(probs.size()) - 1;
}

enum BloodType { kO = 0, kA = 1, kB = 2, kAB = 3 };

bool abo_compatible(int donor, int recipient) {
  if (donor == kO) return true;
  if (donor == kAB) return recipient == kAB;
  return recipient == donor || recipient == kAB;
}

struct Layout {
  InstanceDraft draft;
  std::vector<VertexId> pairs;  // in id order
};

Layout layout_vertices(const std::vector<int>& pool_sizes, int ndds_per_agent, int k, int l) {
  Layout out;
  out.draft.max_cycle_len = k;
  out.draft.max_chain_len = l;
  VertexId next = 0;
  for (AgentId a = 0; a < static_cast<AgentId>(pool_sizes.size()); ++a) {
    for (int i = 0; i < pool_sizes[a]; ++i) {
      out.draft.vertices.push_back({next, a, VertexKind::pair, 1, 1});
      out.pairs.push_back(next);
      ++next;
    }
    for (int i = 0; i < ndds_per_agent; ++i)
      out.draft.vertices.push_back({next++, a, VertexKind::ndd, 0, 0});
  }
  return out;
}

}  // namespace

Instance generate_density(const DensityParams& params, std::uint64_t seed) {
  if (params.arc_prob < 0.0 || params.arc_prob > 1.0)
    throw std::invalid_argument("arc_prob must lie in [0, 1]");
  Layout layout = layout_vertices(params.agent_pool_sizes, params.ndds_per_agent,
                                  params.max_cycle_len, params.max_chain_len);
  std::mt19937_64 rng(seed);
  const int n = static_cast<int>(layout.draft.vertices.size());
  std::vector<char> is_pair(n, 0);
  for (VertexId v : layout.pairs) is_pair[v] = 1;
  for (VertexId u = 0; u < n; ++u)
    for (VertexId v = 0; v < n; ++v) {
      if (u == v || !is_pair[v]) continue;
      if (next_unit(rng) < params.arc_prob) layout.draft.arcs.emplace_back(u, v);
    }
  return Instance::create_or_throw(std::move(layout.draft));
}

SaidmanConfig SaidmanConfig::from_json(const nlohmann::json& doc) {
  SaidmanConfig cfg;
  if (doc.contains("blood_type_freqs")) {
    const auto& freqs = doc.at("blood_type_freqs");
    cfg.blood_type_freqs = {freqs.at("O").get<double>(), freqs.at("A").get<double>(),
                            freqs.at("B").get<double>(), freqs.at("AB").get<double>()};
  }
  if (doc.contains("pra_tiers")) {
    cfg.pra_tiers.clear();
    for (const auto& tier : doc.at("pra_tiers"))
      cfg.pra_tiers.push_back({tier.at("prob").get<double>(), tier.at("pra").get<double>()});
  }
  if (doc.contains("agent_pool_sizes"))
    cfg.agent_pool_sizes = doc.at("agent_pool_sizes").get<std::vector<int>>();
  if (doc.contains("ndds_per_agent")) cfg.ndds_per_agent = doc.at("ndds_per_agent").get<int>();
  if (doc.contains("K")) cfg.max_cycle_len = doc.at("K").get<int>();
  if (doc.contains("L")) cfg.max_chain_len = doc.at("L").get<int>();
  return cfg;
}

nlohmann::ordered_json SaidmanConfig::to_json() const {
  nlohmann::ordered_json doc;
  doc["blood_type_freqs"] = {{"O", blood_type_freqs[0]},
                             {"A", blood_type_freqs[1]},
                             {"B", blood_type_freqs[2]},
                             {"AB", blood_type_freqs[3]}};
  doc["pra_tiers"] = nlohmann::ordered_json::array();
  for (const PraTier& tier : pra_tiers)
    doc["pra_tiers"].push_back({{"prob", tier.prob}, {"pra", tier.pra}});
  doc["agent_pool_sizes"] = agent_pool_sizes;
  doc["ndds_per_agent"] = ndds_per_agent;
  doc["K"] = max_cycle_len;
  doc["L"] = max_chain_len;
  return doc;
}

Instance generate_saidman_like(const SaidmanConfig& config, std::uint64_t seed) {
  double freq_sum = 0.0;
  for (double f : config.blood_type_freqs) freq_sum += f;
  double tier_sum = 0.0;
  for (const PraTier& tier : config.pra_tiers) tier_sum += tier.prob;
  if (std::abs(freq_sum - 1.0) > 1e-9 || std::abs(tier_sum - 1.0) > 1e-9)
    throw std::invalid_argument("generator config probabilities must sum to 1");

  Layout layout = layout_vertices(config.agent_pool_sizes, config.ndds_per_agent,
                                  config.max_cycle_len, config.max_chain_len);
  std::mt19937_64 rng(seed);
  const int n = static_cast<int>(layout.draft.vertices.size());
  std::vector<int> donor_type(n), recipient_type(n, -1);
  std::vector<double> pra(n, 0.0);

  std::vector<double> tier_probs;
  for (const PraTier& tier : config.pra_tiers) tier_probs.push_back(tier.prob);

  for (const VertexRecord& rec : layout.draft.vertices) {
    donor_type[rec.id] = pick_category(rng, config.blood_type_freqs);
    if (rec.kind == VertexKind::pair) {
      recipient_type[rec.id] = pick_category(rng, config.blood_type_freqs);
      pra[rec.id] = config.pra_tiers[pick_category(rng, tier_probs)].pra;
    }
  }
  for (VertexId u = 0; u < n; ++u)
    for (VertexId v = 0; v < n; ++v) {
      if (u == v || recipient_type[v] < 0) continue;
      const double draw = next_unit(rng);
      if (abo_compatible(donor_type[u], recipient_type[v]) && draw > pra[v])
        layout.draft.arcs.emplace_back(u, v);
    }
  return Instance::create_or_throw(std::move(layout.draft));
}

}  // namespace rpkep::gen
