#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rpkep/generators.hpp"
#include "rpkep/strategies.hpp"

namespace rpkep {

/// One batch of instances sharing a generator configuration.
struct InstanceSet {
  std::string name;
  std::string generator;  // "density", "saidman" or "files"
  int count = 0;
  std::uint64_t seed_base = 0;
  std::vector<std::string> files;  // instance paths (generator == "files")
  // Density settings (used when generator == "density").
  gen::DensityParams density;
  // Saidman settings (used when generator == "saidman").
  gen::SaidmanConfig saidman;
};

/// Top-level experiment description, normally loaded from JSON.
struct ExperimentSpec {
  std::vector<InstanceSet> sets;
  mech::MechanismId mechanism = mech::MechanismId::maxrp;
  mech::Tiebreak tiebreak = mech::Tiebreak::lexicographic;
  mech::SeedConstraints seed_constraints = mech::SeedConstraints::none;
  double time_limit_s = 0.0;  // 0 disables the per-instance deadline
  int threads = 1;
  bool report_timings = true;  // false zeroes the wall-clock columns for
                               // byte-identical reruns
};

ExperimentSpec experiment_spec_from_json(const std::string& text);

/// Fairness and solver metrics for a single instance.
struct InstanceMetrics {
  // Strategic-behaviour ratios under the social-optimum mechanism. The
  // deviating agent for WA/RA is drawn uniformly per instance from the seed.
  double wa = 1.0;  // deviator value after greedy withholding / cooperative value
  double ra = 1.0;  // deviator value after its best rejection response / cooperative value
  double wt = 1.0;  // total value when all agents withhold greedily / social optimum
  double rt = 1.0;  // total value when all agents play rejections / social optimum
  double wa_under_mechanism = 1.0;  // one-agent withholding under the configured
                                    // mechanism: total value / truthful total
  // Quality of the rejection-proof mechanisms against the social optimum.
  double maxrp_ratio = 1.0;
  double maxint_ratio = 1.0;
  double all_withhold_ratio = 1.0;  // every agent keeps its internal optimum
  // Row-generation effort (zero unless mechanism == maxrp).
  int iterations = 0;
  int constraints_added = 0;
  double total_time_s = 0.0;
  double master_time_s = 0.0;
  bool solved = true;  // false when the per-instance deadline fired
};

InstanceMetrics compute_metrics(const Instance& instance, mech::MechanismId mechanism,
                                const mech::MaxRpOptions& options, std::uint64_t seed,
                                ilp::Deadline deadline);

/// Aggregated row of the CSV report: means over the solved instances of a set.
struct ReportRow {
  std::string instance_set;
  double wa = 0, ra = 0, wt = 0, rt = 0;
  double maxrp_ratio = 0, maxint_ratio = 0, all_withhold_ratio = 0;
  double iterations = 0, constraints_added = 0;
  double total_time_s = 0, master_time_s = 0;
  int instances_solved = 0;
};

struct ExperimentReport {
  std::vector<ReportRow> rows;
  std::vector<std::vector<InstanceMetrics>> per_instance;  // parallel to rows
};

/// Runs every set in the spec. Honours spec.threads and the RPKEP_TIME_LIMIT_S
/// environment override.
ExperimentReport run_experiment(const ExperimentSpec& spec);

std::string report_to_csv(const ExperimentReport& report);
std::string report_to_json(const ExperimentReport& report, const ExperimentSpec& spec);

}  // namespace rpkep
