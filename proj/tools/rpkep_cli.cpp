// Command-line front end for the rejection-proof kidney exchange toolkit.
//
// Subcommands:
//   generate    write a random instance (density or saidman generator)
//   solve       run a mechanism on an instance file
//   simulate    play the withholding or rejection game
//   experiment  run a batch experiment spec and emit CSV / JSON reports
//   reduce      build the satisfiability-to-exchange hardness instance
//   oracle      brute-force maximum rejection-proof value (small instances)
//
// Errors are reported as a single JSON object on stderr with a nonzero exit.

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rpkep/experiment.hpp"
#include "rpkep/instance_io.hpp"
#include "rpkep/sat_reduction.hpp"

using nlohmann::json;
using nlohmann::ordered_json;
using namespace rpkep;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spill(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out << text;
}

mech::MechanismId parse_mechanism(const std::string& s) {
  if (s == "social") return mech::MechanismId::social;
  if (s == "maxint") return mech::MechanismId::maxint;
  if (s == "maxrp") return mech::MechanismId::maxrp;
  throw CLI::ValidationError("--mechanism", "expected social, maxint or maxrp");
}

ordered_json solution_to_json(const Pool& pool, const Solution& solution) {
  ordered_json doc;
  doc["value"] = solution.value;
  doc["exchanges"] = ordered_json::array();
  for (ExchangeId id : solution.exchange_ids) {
    const Exchange& e = pool.exchanges()[id];
    ordered_json entry;
    entry["id"] = id;
    entry["kind"] = e.kind == ExchangeKind::cycle ? "cycle" : "chain";
    entry["vertices"] = e.vertex_seq;
    entry["weight"] = e.w;
    if (e.owner) entry["owner"] = *e.owner;
    doc["exchanges"].push_back(std::move(entry));
  }
  doc["agent_values"] = ordered_json::object();
  for (const auto& [agent, value] : solution.agent_values)
    doc["agent_values"][std::to_string(agent)] = value;
  return doc;
}

int run(int argc, char** argv) {
  CLI::App app{"Exact mechanisms for multi-agent kidney exchange"};
  app.require_subcommand(1);

  // --- generate ---
  auto* cmd_gen = app.add_subcommand("generate", "Write a random instance to a JSON file");
  std::string gen_kind = "density", gen_out, gen_config;
  std::uint64_t gen_seed = 0;
  std::vector<int> gen_pools;
  double gen_arc_prob = 0.5;
  int gen_ndds = 0, gen_k = 3, gen_l = 0;
  cmd_gen->add_option("--generator", gen_kind, "density or saidman")->capture_default_str();
  cmd_gen->add_option("--out", gen_out, "output instance path")->required();
  cmd_gen->add_option("--seed", gen_seed, "RNG seed")->capture_default_str();
  cmd_gen->add_option("--agents", gen_pools, "pairs per agent, e.g. --agents 10 10")->required();
  cmd_gen->add_option("--arc-prob", gen_arc_prob, "density arc probability")->capture_default_str();
  cmd_gen->add_option("--ndds", gen_ndds, "non-directed donors per agent")->capture_default_str();
  cmd_gen->add_option("-K,--max-cycle", gen_k, "cycle length cap")->capture_default_str();
  cmd_gen->add_option("-L,--max-chain", gen_l, "chain arc cap")->capture_default_str();
  cmd_gen->add_option("--config", gen_config, "saidman config JSON (blood types, PRA tiers)");

  // --- solve ---
  auto* cmd_solve = app.add_subcommand("solve", "Run a mechanism on an instance");
  std::string solve_in, solve_mechanism = "maxrp", solve_tiebreak = "lexicographic";
  std::string solve_seed_constraints = "none", solve_out;
  double solve_time_limit = 0.0;
  cmd_solve->add_option("--in", solve_in, "instance path")->required();
  cmd_solve->add_option("--mechanism", solve_mechanism, "social, maxint or maxrp")
      ->capture_default_str();
  cmd_solve->add_option("--tiebreak", solve_tiebreak, "off, lexicographic or weighted")
      ->capture_default_str();
  cmd_solve->add_option("--seed-constraints", solve_seed_constraints, "none or full_pool")
      ->capture_default_str();
  cmd_solve->add_option("--time-limit", solve_time_limit, "seconds, 0 = none")
      ->capture_default_str();
  cmd_solve->add_option("--out", solve_out, "write the solution JSON here instead of stdout");

  // --- simulate ---
  auto* cmd_sim = app.add_subcommand("simulate", "Play a strategic game on an instance");
  std::string sim_in, sim_game = "withhold", sim_mechanism = "maxrp";
  std::vector<int> sim_responders;
  std::vector<int> sim_withholders;
  cmd_sim->add_option("--in", sim_in, "instance path")->required();
  cmd_sim->add_option("--game", sim_game, "withhold or reject")->capture_default_str();
  cmd_sim->add_option("--mechanism", sim_mechanism, "social, maxint or maxrp")
      ->capture_default_str();
  cmd_sim->add_option("--responders", sim_responders, "agents playing best-response rejections");
  cmd_sim->add_option("--withholders", sim_withholders, "agents withholding greedily");

  // --- experiment ---
  auto* cmd_exp = app.add_subcommand("experiment", "Run a batch experiment spec");
  std::string exp_spec, exp_csv, exp_json;
  cmd_exp->add_option("--spec", exp_spec, "experiment spec JSON path")->required();
  cmd_exp->add_option("--csv", exp_csv, "CSV report path (default stdout)");
  cmd_exp->add_option("--json", exp_json, "detailed JSON report path");

  // --- reduce ---
  auto* cmd_red = app.add_subcommand("reduce", "Build the hardness instance from a formula");
  std::string red_formula, red_out;
  bool red_decide = false;
  cmd_red->add_option("--formula", red_formula, "formula file path")->required();
  cmd_red->add_option("--out", red_out, "output instance path");
  cmd_red->add_flag("--decide", red_decide,
                    "also brute-force the adversarial question (small formulas)");

  // --- oracle ---
  auto* cmd_oracle = app.add_subcommand("oracle", "Brute-force maximum rejection-proof value");
  std::string oracle_in;
  int oracle_cap = 20;
  cmd_oracle->add_option("--in", oracle_in, "instance path")->required();
  cmd_oracle->add_option("--cap", oracle_cap, "maximum exchange count")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (*cmd_gen) {
    Instance inst = [&] {
      if (gen_kind == "density") {
        gen::DensityParams p;
        p.agent_pool_sizes = gen_pools;
        p.arc_prob = gen_arc_prob;
        p.ndds_per_agent = gen_ndds;
        p.max_cycle_len = gen_k;
        p.max_chain_len = gen_l;
        return gen::generate_density(p, gen_seed);
      }
      if (gen_kind != "saidman")
        throw CLI::ValidationError("--generator", "expected density or saidman");
      gen::SaidmanConfig cfg;
      if (!gen_config.empty()) cfg = gen::SaidmanConfig::from_json(json::parse(slurp(gen_config)));
      cfg.agent_pool_sizes = gen_pools;
      cfg.ndds_per_agent = gen_ndds;
      cfg.max_cycle_len = gen_k;
      cfg.max_chain_len = gen_l;
      return gen::generate_saidman_like(cfg, gen_seed);
    }();
    io::write_instance(inst, gen_out);
    return 0;
  }

  if (*cmd_solve) {
    const Instance inst = io::read_instance(solve_in);
    Pool pool(inst);
    ilp::Deadline deadline;
    if (solve_time_limit > 0)
      deadline = std::chrono::steady_clock::now() +
                 std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                     std::chrono::duration<double>(solve_time_limit));
    const mech::MechanismId mechanism = parse_mechanism(solve_mechanism);
    ordered_json doc;
    if (mechanism == mech::MechanismId::maxrp) {
      mech::MaxRpOptions opts;
      if (solve_tiebreak == "off")
        opts.tiebreak = mech::Tiebreak::off;
      else if (solve_tiebreak == "lexicographic")
        opts.tiebreak = mech::Tiebreak::lexicographic;
      else if (solve_tiebreak == "weighted")
        opts.tiebreak = mech::Tiebreak::weighted;
      else
        throw CLI::ValidationError("--tiebreak", "expected off, lexicographic or weighted");
      if (solve_seed_constraints == "full_pool")
        opts.seed_constraints = mech::SeedConstraints::full_pool;
      else if (solve_seed_constraints != "none")
        throw CLI::ValidationError("--seed-constraints", "expected none or full_pool");
      opts.deadline = deadline;
      const mech::MaxRpResult result = mech::solve_maxrp(pool, opts);
      doc = solution_to_json(pool, result.solution);
      doc["row_generation"] = {{"iterations", result.report.iterations},
                               {"constraints_added", result.report.constraints_added},
                               {"rejection_proof_certified", result.report.rejection_proof_certified}};
    } else {
      doc = solution_to_json(pool, mech::run_mechanism(pool, mechanism, deadline));
    }
    const std::string text = doc.dump(2) + "\n";
    if (solve_out.empty())
      std::cout << text;
    else
      spill(solve_out, text);
    return 0;
  }

  if (*cmd_sim) {
    const Instance inst = io::read_instance(sim_in);
    Pool pool(inst);
    const mech::MechanismId mechanism = parse_mechanism(sim_mechanism);
    strat::GameOutcome outcome;
    if (sim_game == "withhold") {
      strat::WithholdingProfile profile;
      for (int a : sim_withholders) profile.withheld[a] = strat::greedy_withholding(pool, a);
      outcome = strat::play_withholding_game(pool, profile, mechanism);
    } else if (sim_game == "reject") {
      std::set<AgentId> responders(sim_responders.begin(), sim_responders.end());
      outcome = strat::play_rejection_game(pool, mechanism, responders);
    } else {
      throw CLI::ValidationError("--game", "expected withhold or reject");
    }
    ordered_json doc;
    doc["final"] = solution_to_json(pool, outcome.final_solution);
    doc["total_value"] = outcome.total_value;
    doc["per_agent_value"] = ordered_json::object();
    doc["baseline_value"] = ordered_json::object();
    for (const auto& [agent, value] : outcome.per_agent_value)
      doc["per_agent_value"][std::to_string(agent)] = value;
    for (const auto& [agent, value] : outcome.baseline_value)
      doc["baseline_value"][std::to_string(agent)] = value;
    std::cout << doc.dump(2) << "\n";
    return 0;
  }

  if (*cmd_exp) {
    const ExperimentSpec spec = experiment_spec_from_json(slurp(exp_spec));
    const ExperimentReport report = run_experiment(spec);
    const std::string csv = report_to_csv(report);
    if (exp_csv.empty())
      std::cout << csv;
    else
      spill(exp_csv, csv);
    if (!exp_json.empty()) spill(exp_json, report_to_json(report, spec));
    return 0;
  }

  if (*cmd_red) {
    std::istringstream formula_text(slurp(red_formula));
    const sat::TwoTwoSatFormula formula = sat::parse_formula(formula_text);
    const sat::ReductionResult result = sat::build_sat_reduction(formula);
    ordered_json doc;
    doc["target"] = result.target;
    doc["num_vertices"] = static_cast<int>(result.instance.vertices().size());
    if (red_decide) doc["adversarial_yes"] = sat::adversarial_sat_brute(formula);
    if (!red_out.empty()) io::write_instance(result.instance, red_out);
    std::cout << doc.dump(2) << "\n";
    return 0;
  }

  if (*cmd_oracle) {
    const Instance inst = io::read_instance(oracle_in);
    Pool pool(inst);
    const auto [value, solution] = strat::brute_force_max_rejection_proof(pool, oracle_cap);
    ordered_json doc = solution_to_json(pool, solution);
    doc["rejection_proof_optimum"] = value;
    std::cout << doc.dump(2) << "\n";
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const io::SchemaError& e) {
    json err{{"error", "schema"}, {"locus", e.locus}, {"code", e.code}, {"detail", e.what()}};
    std::cerr << err.dump() << "\n";
    return 2;
  } catch (const ilp::SolveTimeout& e) {
    json err{{"error", "timeout"}, {"detail", e.what()}};
    std::cerr << err.dump() << "\n";
    return 3;
  } catch (const std::exception& e) {
    json err{{"error", "runtime"}, {"detail", e.what()}};
    std::cerr << err.dump() << "\n";
    return 1;
  }
}
