#include "rpkep/experiment.hpp"

#include <atomic>
#include <random>
#include <set>
#include <chrono>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "rpkep/instance_io.hpp"

namespace rpkep {

using nlohmann::json;

namespace {

mech::MechanismId mechanism_from_string(const std::string& s) {
  if (s == "social") return mech::MechanismId::social;
  if (s == "maxint") return mech::MechanismId::maxint;
  if (s == "maxrp") return mech::MechanismId::maxrp;
  throw std::invalid_argument("unknown mechanism: " + s);
}

mech::Tiebreak tiebreak_from_string(const std::string& s) {
  if (s == "off") return mech::Tiebreak::off;
  if (s == "lexicographic") return mech::Tiebreak::lexicographic;
  if (s == "weighted") return mech::Tiebreak::weighted;
  throw std::invalid_argument("unknown tiebreak: " + s);
}

mech::SeedConstraints seed_constraints_from_string(const std::string& s) {
  if (s == "none") return mech::SeedConstraints::none;
  if (s == "full_pool") return mech::SeedConstraints::full_pool;
  throw std::invalid_argument("unknown seed_constraints: " + s);
}

double safe_ratio(double num, double den) { return den > 0 ? num / den : 1.0; }

}  // namespace

ExperimentSpec experiment_spec_from_json(const std::string& text) {
  const json doc = json::parse(text);
  ExperimentSpec spec;
  if (doc.contains("mechanism"))
    spec.mechanism = mechanism_from_string(doc.at("mechanism").get<std::string>());
  if (doc.contains("tiebreak"))
    spec.tiebreak = tiebreak_from_string(doc.at("tiebreak").get<std::string>());
  if (doc.contains("seed_constraints"))
    spec.seed_constraints =
        seed_constraints_from_string(doc.at("seed_constraints").get<std::string>());
  if (doc.contains("time_limit_s")) spec.time_limit_s = doc.at("time_limit_s").get<double>();
  if (doc.contains("threads")) spec.threads = doc.at("threads").get<int>();
  if (doc.contains("parallelism")) spec.threads = doc.at("parallelism").get<int>();
  if (doc.contains("report_timings")) spec.report_timings = doc.at("report_timings").get<bool>();
  if (spec.threads < 1) throw std::invalid_argument("threads must be >= 1");

  for (const json& set_doc : doc.at("sets")) {
    InstanceSet set;
    set.name = set_doc.at("name").get<std::string>();
    set.generator = set_doc.at("generator").get<std::string>();
    if (set_doc.contains("count")) set.count = set_doc.at("count").get<int>();
    if (set_doc.contains("replications")) set.count = set_doc.at("replications").get<int>();
    if (set_doc.contains("seed_base")) set.seed_base = set_doc.at("seed_base").get<std::uint64_t>();
    const json& params = set_doc.contains("params") ? set_doc.at("params") : json::object();
    if (set.generator == "density") {
      set.density.agent_pool_sizes = params.at("agent_pool_sizes").get<std::vector<int>>();
      if (params.contains("arc_prob")) set.density.arc_prob = params.at("arc_prob").get<double>();
      if (params.contains("ndds_per_agent"))
        set.density.ndds_per_agent = params.at("ndds_per_agent").get<int>();
      if (params.contains("K")) set.density.max_cycle_len = params.at("K").get<int>();
      if (params.contains("L")) set.density.max_chain_len = params.at("L").get<int>();
    } else if (set.generator == "saidman") {
      set.saidman = gen::SaidmanConfig::from_json(params);
    } else if (set.generator == "files") {
      set.files = set_doc.at("files").get<std::vector<std::string>>();
      set.count = static_cast<int>(set.files.size());
    } else {
      throw std::invalid_argument("unknown generator: " + set.generator);
    }
    if (set.count < 1) throw std::invalid_argument("set count must be >= 1");
    spec.sets.push_back(std::move(set));
  }
  return spec;
}

InstanceMetrics compute_metrics(const Instance& instance, mech::MechanismId mechanism,
                                const mech::MaxRpOptions& options, std::uint64_t seed,
                                ilp::Deadline deadline) {
  const auto started = std::chrono::steady_clock::now();
  InstanceMetrics m;
  try {
    Pool pool(instance);

    const Solution social = mech::solve_social_optimum(pool, deadline);
    const mech::MaxIntResult maxint = mech::solve_maxint(pool, deadline);
    mech::MaxRpOptions opts = options;
    opts.deadline = deadline;
    const mech::MaxRpResult maxrp = mech::solve_maxrp(pool, opts);

    Weight all_withhold = 0;
    for (AgentId a : instance.agents())
      all_withhold += mech::beta(pool, a, instance.agent_vertices(a), deadline);

    const double social_value = static_cast<double>(social.value);
    m.maxrp_ratio = safe_ratio(static_cast<double>(maxrp.solution.value), social_value);
    m.maxint_ratio = safe_ratio(static_cast<double>(maxint.solution.value), social_value);
    m.all_withhold_ratio = safe_ratio(static_cast<double>(all_withhold), social_value);
    m.iterations = maxrp.report.iterations;
    m.constraints_added = maxrp.report.constraints_added;
    m.master_time_s = maxrp.report.master_time_s;

    // One deviating agent per instance, drawn uniformly from the seed (the
    // raw engine output is portable, unlike the standard distributions).
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    const auto& agents = instance.agents();
    const AgentId deviator =
        agents.empty() ? 0 : agents[static_cast<std::size_t>(rng() % agents.size())];

    // WA / RA: the deviator's own payoff against full cooperation, under the
    // social-optimum mechanism.
    strat::WithholdingProfile one_agent;
    one_agent.withheld[deviator] = strat::greedy_withholding(pool, deviator);
    const strat::GameOutcome one_withhold =
        strat::play_withholding_game(pool, one_agent, mech::MechanismId::social, deadline);
    m.wa = safe_ratio(static_cast<double>(one_withhold.per_agent_value.at(deviator)),
                      static_cast<double>(one_withhold.baseline_value.at(deviator)));
    const strat::GameOutcome one_reject =
        strat::play_rejection_game(pool, mech::MechanismId::social, {deviator}, deadline);
    m.ra = safe_ratio(static_cast<double>(one_reject.per_agent_value.at(deviator)),
                      static_cast<double>(one_reject.baseline_value.at(deviator)));

    // WT / RT: everyone plays; totals against the social optimum.
    strat::WithholdingProfile everyone;
    for (AgentId a : agents) everyone.withheld[a] = strat::greedy_withholding(pool, a);
    const strat::GameOutcome all_withhold_game =
        strat::play_withholding_game(pool, everyone, mech::MechanismId::social, deadline);
    m.wt = safe_ratio(static_cast<double>(all_withhold_game.total_value), social_value);
    std::set<AgentId> everyone_responds(agents.begin(), agents.end());
    const strat::GameOutcome all_reject_game =
        strat::play_rejection_game(pool, mech::MechanismId::social, everyone_responds, deadline);
    m.rt = safe_ratio(static_cast<double>(all_reject_game.total_value), social_value);

    // Same one-agent withholding, but under the configured mechanism: total
    // value against the truthful total.
    const strat::GameOutcome under_mech =
        strat::play_withholding_game(pool, one_agent, mechanism, deadline);
    Weight truthful_total = 0;
    for (const auto& entry : under_mech.baseline_value) truthful_total += entry.second;
    m.wa_under_mechanism = safe_ratio(static_cast<double>(under_mech.total_value),
                                      static_cast<double>(truthful_total));
  } catch (const ilp::SolveTimeout&) {
    m = InstanceMetrics{};
    m.solved = false;
  }
  m.total_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return m;
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
  double time_limit_s = spec.time_limit_s;
  if (const char* env = std::getenv("RPKEP_TIME_LIMIT_S")) time_limit_s = std::atof(env);

  mech::MaxRpOptions options;
  options.tiebreak = spec.tiebreak;
  options.seed_constraints = spec.seed_constraints;

  ExperimentReport report;
  for (const InstanceSet& set : spec.sets) {
    std::vector<Instance> instances;
    instances.reserve(set.count);
    for (int i = 0; i < set.count; ++i) {
      const std::uint64_t seed = set.seed_base + static_cast<std::uint64_t>(i);
      if (set.generator == "density")
        instances.push_back(gen::generate_density(set.density, seed));
      else if (set.generator == "saidman")
        instances.push_back(gen::generate_saidman_like(set.saidman, seed));
      else
        instances.push_back(io::read_instance(set.files[static_cast<std::size_t>(i)]));
    }

    std::vector<InstanceMetrics> metrics(instances.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next.fetch_add(1); i < instances.size(); i = next.fetch_add(1)) {
        ilp::Deadline deadline;
        if (time_limit_s > 0)
          deadline = std::chrono::steady_clock::now() +
                     std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                         std::chrono::duration<double>(time_limit_s));
        metrics[i] = compute_metrics(instances[i], spec.mechanism, options,
                                     set.seed_base + static_cast<std::uint64_t>(i), deadline);
      }
    };
    const int threads = std::min<int>(spec.threads, static_cast<int>(instances.size()));
    if (threads <= 1) {
      worker();
    } else {
      std::vector<std::thread> crew;
      for (int t = 0; t < threads; ++t) crew.emplace_back(worker);
      for (std::thread& t : crew) t.join();
    }

    if (!spec.report_timings) {
      for (InstanceMetrics& m : metrics) m.total_time_s = m.master_time_s = 0.0;
    }

    ReportRow row;
    row.instance_set = set.name;
    for (const InstanceMetrics& m : metrics) {
      if (!m.solved) continue;
      ++row.instances_solved;
      row.wa += m.wa;
      row.ra += m.ra;
      row.wt += m.wt;
      row.rt += m.rt;
      row.maxrp_ratio += m.maxrp_ratio;
      row.maxint_ratio += m.maxint_ratio;
      row.all_withhold_ratio += m.all_withhold_ratio;
      row.iterations += m.iterations;
      row.constraints_added += m.constraints_added;
      row.total_time_s += m.total_time_s;
      row.master_time_s += m.master_time_s;
    }
    if (row.instances_solved > 0) {
      const double n = row.instances_solved;
      row.wa /= n;
      row.ra /= n;
      row.wt /= n;
      row.rt /= n;
      row.maxrp_ratio /= n;
      row.maxint_ratio /= n;
      row.all_withhold_ratio /= n;
      row.iterations /= n;
      row.constraints_added /= n;
      row.total_time_s /= n;
      row.master_time_s /= n;
    }
    report.rows.push_back(std::move(row));
    report.per_instance.push_back(std::move(metrics));
  }
  return report;
}

std::string report_to_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(6);
  out << "instance_set,WA,RA,WT,RT,maxrp_ratio,maxint_ratio,all_withhold_ratio,"
         "iterations,constraints_added,total_time_s,master_time_s,instances_solved\n";
  for (const ReportRow& r : report.rows) {
    out << r.instance_set << ',' << r.wa << ',' << r.ra << ',' << r.wt << ',' << r.rt << ','
        << r.maxrp_ratio << ',' << r.maxint_ratio << ',' << r.all_withhold_ratio << ','
        << r.iterations << ',' << r.constraints_added << ',' << r.total_time_s << ','
        << r.master_time_s << ',' << r.instances_solved << '\n';
  }
  return out.str();
}

std::string report_to_json(const ExperimentReport& report, const ExperimentSpec& spec) {
  nlohmann::ordered_json doc;
  doc["mechanism"] = spec.mechanism == mech::MechanismId::social   ? "social"
                     : spec.mechanism == mech::MechanismId::maxint ? "maxint"
                                                                   : "maxrp";
  doc["sets"] = nlohmann::ordered_json::array();
  for (std::size_t s = 0; s < report.rows.size(); ++s) {
    const ReportRow& row = report.rows[s];
    nlohmann::ordered_json set_doc;
    set_doc["name"] = row.instance_set;
    set_doc["instances_solved"] = row.instances_solved;
    set_doc["means"] = {{"WA", row.wa},
                        {"RA", row.ra},
                        {"WT", row.wt},
                        {"RT", row.rt},
                        {"maxrp_ratio", row.maxrp_ratio},
                        {"maxint_ratio", row.maxint_ratio},
                        {"all_withhold_ratio", row.all_withhold_ratio},
                        {"iterations", row.iterations},
                        {"constraints_added", row.constraints_added}};
    set_doc["instances"] = nlohmann::ordered_json::array();
    for (const InstanceMetrics& m : report.per_instance[s]) {
      set_doc["instances"].push_back({{"solved", m.solved},
                                      {"WA", m.wa},
                                      {"RA", m.ra},
                                      {"WT", m.wt},
                                      {"RT", m.rt},
                                      {"WA_under_mechanism", m.wa_under_mechanism},
                                      {"maxrp_ratio", m.maxrp_ratio},
                                      {"maxint_ratio", m.maxint_ratio},
                                      {"all_withhold_ratio", m.all_withhold_ratio},
                                      {"iterations", m.iterations},
                                      {"constraints_added", m.constraints_added},
                                      {"total_time_s", m.total_time_s},
                                      {"master_time_s", m.master_time_s}});
    }
    doc["sets"].push_back(std::move(set_doc));
  }
  return doc.dump(2) + "\n";
}

}  // namespace rpkep
