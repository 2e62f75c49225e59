#ifndef RPKEP_SAT_REDUCTION_HPP
#define RPKEP_SAT_REDUCTION_HPP

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "rpkep/instance.hpp"

namespace rpkep::sat {

/// CNF formula over existential (x) and universal (y) variables where every
/// variable occurs exactly twice negated and twice unnegated.
struct TwoTwoSatFormula {
  int num_x = 0;
  int num_y = 0;
  // Literals are +v / -v with v in 1..num_x+num_y; x variables come first.
  std::vector<std::vector<int>> clauses;

  int num_vars() const { return num_x + num_y; }
  bool is_x_var(int var) const { return var >= 1 && var <= num_x; }
};

class FormulaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws FormulaError unless every variable occurs exactly twice per polarity.
void validate_formula(const TwoTwoSatFormula& formula);

/// Text format: comment lines start with 'c'; then "x <count>", "y <count>",
/// then one clause per line as signed variable indices (trailing 0 optional).
TwoTwoSatFormula parse_formula(std::istream& in);
TwoTwoSatFormula parse_formula_text(const std::string& text);

/// Exhaustive check of "exists theta_X such that for all theta_Y the formula
/// is unsatisfied". Throws FormulaError beyond 16 variables.
bool adversarial_sat_brute(const TwoTwoSatFormula& formula);

struct ReductionResult {
  Instance instance;          // two agents, K=3, L=0, unit weights
  Weight target = 0;          // t = 9|X| + 9|Y| + 5|C| + 3
  AgentId green_agent = 0;
  AgentId blue_agent = 1;
  std::map<std::string, VertexId> vertex_by_name;  // e.g. "x1_t_1", "delta_c3"
};

/// Builds the two-agent instance encoding the adversarial satisfiability
/// question: a rejection-proof solution covering >= target vertices exists
/// iff the formula is a YES instance.
ReductionResult build_sat_reduction(const TwoTwoSatFormula& formula);

}  // namespace rpkep::sat

#endif
