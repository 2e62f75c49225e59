#ifndef RPKEP_GENERATORS_HPP
#define RPKEP_GENERATORS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "rpkep/instance.hpp"

namespace rpkep::gen {

struct DensityParams {
  std::vector<int> agent_pool_sizes;  // pairs per agent
  double arc_prob = 0.5;
  int ndds_per_agent = 0;
  int max_cycle_len = 3;
  int max_chain_len = 0;
};

/// Erdos-Renyi style compatibility graph: every pair-to-pair and ndd-to-pair
/// arc appears independently with probability arc_prob. Deterministic under
/// seed (the RNG stream does not depend on the platform's distributions).
Instance generate_density(const DensityParams& params, std::uint64_t seed);

struct PraTier {
  double prob = 1.0;  // probability of drawing this tier
  double pra = 0.0;   // panel reactive antibody level in [0, 1]
};

struct SaidmanConfig {
  // Blood type frequencies, indexed O, A, B, AB; must sum to 1.
  std::vector<double> blood_type_freqs{0.4814, 0.3373, 0.1428, 0.0385};
  std::vector<PraTier> pra_tiers{{0.7019, 0.05}, {0.2, 0.45}, {0.0981, 0.90}};
  std::vector<int> agent_pool_sizes;  // pairs per agent
  int ndds_per_agent = 0;
  int max_cycle_len = 3;
  int max_chain_len = 0;

  static SaidmanConfig from_json(const nlohmann::json& doc);
  nlohmann::ordered_json to_json() const;
};

/// Saidman-style stand-in generator: blood types and recipient sensitization
/// drawn from the config, arc (u, v) present iff donor(u) is ABO-compatible
/// with recipient(v) and a uniform draw exceeds the recipient's PRA.
Instance generate_saidman_like(const SaidmanConfig& config, std::uint64_t seed);

}  // namespace rpkep::gen

#endif
