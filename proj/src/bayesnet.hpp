#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ast.hpp"
#include "rational.hpp"
#include "term.hpp"

namespace plog {

// Finite Bayesian network with exact rational CPTs.
struct BayesNet {
  struct Variable {
    std::string name;
    std::vector<Term> domain;
    std::vector<std::string> parents;
    // rows keyed by the parent assignment (values listed in parents order)
    std::map<std::vector<Term>, std::map<Term, Rational>> cpt;
  };
  std::vector<Variable> variables;

  const Variable& var(const std::string& name) const;
  std::vector<std::string> names() const;
};

// Partial assignment; also called an intervention.
using Assignment = std::map<std::string, Term>;

// Validates: DAG, declared parents, full CPT coverage, rows summing to 1.
// JSON shape: {"variables":[{"name":..,"domain":[..],"parents":[..],
//   "cpt":[{"given":{parent:value,..},"dist":{value:prob,..}},..]},..]}
// with probabilities as strings ("0.8", "4/5") or numbers.
BayesNet bayes_net_from_json(const std::string& json_text);
std::string bayes_net_to_json(const BayesNet& b);

// One sort per variable domain, a random selection per variable, and a
// pr-atom per CPT entry conditioned on the parent assignment.
Program net_to_plog(const BayesNet& b);

// Pearl's truncated product: probability of a total assignment after the
// intervention r fixes some variables; zero off the intervention.
Rational interventional_prob(const BayesNet& b, const Assignment& r, const Assignment& total);

// All assignments / interventions over the variables.
std::vector<Assignment> all_assignments(const BayesNet& b);
std::vector<Assignment> all_interventions(const BayesNet& b);

struct CbnCheck {
  bool ok = true;
  std::vector<std::string> mismatches;  // assignment, both probabilities
};

// For every total assignment, the truncated product equals the probability of
// the conjunction under net_to_plog(b) extended with do(r). Exact equality.
CbnCheck check_cbn_theorem(const BayesNet& b, const Assignment& r);

// Table-defined interventional distribution: intervention -> measure over
// total assignments.
struct InterventionalTable {
  std::vector<std::string> var_names;
  std::map<std::string, std::vector<Term>> domains;
  std::map<std::string, std::map<std::string, Rational>> rows;  // keyed by rendered forms

  static std::string intervention_key(const Assignment& r);
  static std::string assignment_key(const Assignment& a);
};

struct CompatibilityResult {
  bool compatible = true;
  std::vector<std::string> failures;  // every violated condition, with both sides
};

// Pearl's three causal-network conditions for a DAG against a table-defined
// interventional distribution.
CompatibilityResult cbn_compatible(const InterventionalTable& table,
                                   const std::map<std::string, std::vector<std::string>>& parents);

// The interventional table induced by a network (rows for every intervention).
InterventionalTable table_of_net(const BayesNet& b);

}  // namespace plog
