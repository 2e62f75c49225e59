#include "rpkep/sat_reduction.hpp"

#include <algorithm>
#include <istream>
#include <sstream>

namespace rpkep::sat {

namespace {

std::string var_name(const TwoTwoSatFormula& formula, int var) {
  return formula.is_x_var(var) ? "x" + std::to_string(var)
                               : "y" + std::to_string(var - formula.num_x);
}

}  // namespace

void validate_formula(const TwoTwoSatFormula& formula) {
  if (formula.num_x < 0 || formula.num_y < 0)
    throw FormulaError("variable counts must be nonnegative");
  std::vector<int> pos(formula.num_vars() + 1, 0), neg(formula.num_vars() + 1, 0);
  for (const auto& clause : formula.clauses) {
    if (clause.empty()) throw FormulaError("empty clause");
    for (int lit : clause) {
      const int var = std::abs(lit);
      if (var < 1 || var > formula.num_vars())
        throw FormulaError("literal " + std::to_string(lit) + " out of range");
      ++(lit > 0 ? pos : neg)[var];
    }
  }
  for (int var = 1; var <= formula.num_vars(); ++var)
    if (pos[var] != 2 || neg[var] != 2)
      throw FormulaError("variable " + var_name(formula, var) +
                         " must occur exactly twice per polarity (has " +
                         std::to_string(pos[var]) + "+/" + std::to_string(neg[var]) + "-)");
}

TwoTwoSatFormula parse_formula(std::istream& in) {
  TwoTwoSatFormula formula;
  bool have_x = false, have_y = false;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "c" || first[0] == '#') continue;
    if (first == "x" || first == "y") {
      int count = 0;
      if (!(ls >> count) || count < 0) throw FormulaError("bad section header: " + line);
      (first == "x" ? formula.num_x : formula.num_y) = count;
      (first == "x" ? have_x : have_y) = true;
      continue;
    }
    if (!have_x || !have_y)
      throw FormulaError("clause before the x/y variable sections: " + line);
    std::vector<int> clause;
    int lit = 0;
    std::istringstream cs(line);
    while (cs >> lit) {
      if (lit == 0) break;
      clause.push_back(lit);
    }
    if (cs.fail() && !cs.eof()) throw FormulaError("bad clause line: " + line);
    formula.clauses.push_back(std::move(clause));
  }
  validate_formula(formula);
  return formula;
}

TwoTwoSatFormula parse_formula_text(const std::string& text) {
  std::istringstream in(text);
  return parse_formula(in);
}

bool adversarial_sat_brute(const TwoTwoSatFormula& formula) {
  validate_formula(formula);
  if (formula.num_vars() > 16) throw FormulaError("brute force capped at 16 variables");

  auto satisfied = [&](std::uint32_t assignment) {
    for (const auto& clause : formula.clauses) {
      bool sat = false;
      for (int lit : clause) {
        const bool value = (assignment >> (std::abs(lit) - 1)) & 1;
        if ((lit > 0) == value) {
          sat = true;
          break;
        }
      }
      if (!sat) return false;
    }
    return true;
  };

  for (std::uint32_t tx = 0; tx < (1u << formula.num_x); ++tx) {
    bool all_unsatisfied = true;
    for (std::uint32_t ty = 0; ty < (1u << formula.num_y); ++ty) {
      const std::uint32_t assignment = tx | (ty << formula.num_x);
      if (satisfied(assignment)) {
        all_unsatisfied = false;
        break;
      }
    }
    if (all_unsatisfied) return true;
  }
  return false;
}

ReductionResult build_sat_reduction(const TwoTwoSatFormula& formula) {
  validate_formula(formula);

  const AgentId green_agent = 0;
  const AgentId blue_agent = 1;
  std::map<std::string, VertexId> names;
  InstanceDraft draft;
  draft.max_cycle_len = 3;
  draft.max_chain_len = 0;

  auto add_vertex = [&](const std::string& name, AgentId agent) {
    const VertexId id = static_cast<VertexId>(draft.vertices.size());
    draft.vertices.push_back({id, agent, VertexKind::pair, 1, 1});
    names[name] = id;
    return id;
  };
  auto vertex = [&](const std::string& name) { return names.at(name); };
  auto add_arc = [&](VertexId from, VertexId to) { draft.arcs.emplace_back(from, to); };

  const char* senses[2] = {"t", "f"};

  // Variable gadgets. x-gadgets put the hub and sense vertices on the green
  // agent; y-gadgets are entirely blue.
  for (int var = 1; var <= formula.num_vars(); ++var) {
    const std::string z = var_name(formula, var);
    const AgentId hub_agent = formula.is_x_var(var) ? green_agent : blue_agent;
    add_vertex(z + "_0", hub_agent);
    for (const char* psi : senses)
      for (int i = 1; i <= 2; ++i)
        add_vertex(z + "_" + psi + "_" + std::to_string(i), hub_agent);
    for (int i = 1; i <= 2; ++i) add_vertex("alpha_" + z + "_" + std::to_string(i), blue_agent);
    for (const char* psi : senses)
      for (int i = 1; i <= 2; ++i)
        add_vertex("gamma_" + z + "_" + psi + "_" + std::to_string(i), blue_agent);

    for (const char* psi : senses) {
      add_arc(vertex(z + "_0"), vertex(z + "_" + psi + "_1"));
      add_arc(vertex(z + "_" + psi + "_1"), vertex(z + "_" + psi + "_2"));
      add_arc(vertex(z + "_" + psi + "_2"), vertex(z + "_0"));
      for (int i = 1; i <= 2; ++i) {
        const std::string zi = z + "_" + psi + "_" + std::to_string(i);
        const std::string alpha = "alpha_" + z + "_" + std::to_string(i);
        const std::string gamma = "gamma_" + z + "_" + psi + "_" + std::to_string(i);
        add_arc(vertex(zi), vertex(alpha));
        add_arc(vertex(alpha), vertex(gamma));
        add_arc(vertex(gamma), vertex(zi));
      }
    }
  }

  // Clause gadgets.
  const int num_clauses = static_cast<int>(formula.clauses.size());
  for (int c = 1; c <= num_clauses; ++c) {
    const std::string cname = "c" + std::to_string(c);
    for (int i = 1; i <= 3; ++i) add_vertex(cname + "_g_" + std::to_string(i), green_agent);
    add_vertex("delta_" + cname, blue_agent);
    for (int i = 1; i <= 4; ++i) add_vertex(cname + "_b_" + std::to_string(i), blue_agent);

    add_arc(vertex(cname + "_g_1"), vertex(cname + "_g_2"));
    add_arc(vertex(cname + "_g_2"), vertex(cname + "_g_3"));
    add_arc(vertex(cname + "_g_3"), vertex(cname + "_g_1"));
    add_arc(vertex("delta_" + cname), vertex(cname + "_g_1"));
    add_arc(vertex(cname + "_g_1"), vertex("delta_" + cname));
    add_arc(vertex(cname + "_g_2"), vertex(cname + "_b_1"));
    add_arc(vertex(cname + "_b_1"), vertex(cname + "_b_2"));
    add_arc(vertex(cname + "_b_2"), vertex(cname + "_g_2"));
    add_arc(vertex(cname + "_g_3"), vertex(cname + "_b_3"));
    add_arc(vertex(cname + "_b_3"), vertex(cname + "_b_4"));
    add_arc(vertex(cname + "_b_4"), vertex(cname + "_g_3"));
  }

  // (gamma, delta)-cycles: the i-th occurrence of each literal links its
  // variable gadget to the clause containing it, in clause-list order.
  std::vector<int> pos_seen(formula.num_vars() + 1, 0), neg_seen(formula.num_vars() + 1, 0);
  for (int c = 1; c <= num_clauses; ++c) {
    for (int lit : formula.clauses[c - 1]) {
      const int var = std::abs(lit);
      const bool positive = lit > 0;
      const int occurrence = ++(positive ? pos_seen : neg_seen)[var];
      const std::string gamma = "gamma_" + var_name(formula, var) + "_" +
                                (positive ? "t" : "f") + "_" + std::to_string(occurrence);
      const std::string delta = "delta_c" + std::to_string(c);
      add_arc(vertex(gamma), vertex(delta));
      add_arc(vertex(delta), vertex(gamma));
    }
  }

  const Weight target = 9 * static_cast<Weight>(formula.num_x) +
                        9 * static_cast<Weight>(formula.num_y) +
                        5 * static_cast<Weight>(num_clauses) + 3;
  return ReductionResult{Instance::create_or_throw(std::move(draft)), target, green_agent,
                         blue_agent, std::move(names)};
}

}  // namespace rpkep::sat
