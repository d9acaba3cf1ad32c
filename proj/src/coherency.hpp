#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ground.hpp"
#include "worlds.hpp"

namespace plog {

// ---------------------------------------------------------------------------
// Dependency relations over ground literals and attribute terms
// ---------------------------------------------------------------------------

struct DependencyGraph {
  std::vector<AttrTerm> terms;                  // node list, sorted
  std::map<AttrTerm, std::set<AttrTerm>> imm;   // immediate dependencies
  std::map<AttrTerm, std::set<AttrTerm>> reach; // reflexive-transitive closure

  bool depends(const AttrTerm& a, const AttrTerm& b) const;
};

// Literal-level dependency machinery shared by levelings and structures.
class Dependencies {
 public:
  explicit Dependencies(const GroundProgram& gp);

  const DependencyGraph& graph() const { return graph_; }

  // attribute terms reachable (reflexively) from a given literal
  const std::set<AttrTerm>& literal_reach(const GroundLiteral& l) const;
  // union over all literals of an attribute term
  std::set<AttrTerm> term_reach(const AttrTerm& at) const;

  // literals of the statement, for induced-structure membership
  std::vector<GroundLiteral> statement_literals(const GSelection& s) const;

  const GroundProgram& ground() const { return *gp_; }

 private:
  size_t lit_id(const GroundLiteral& l) const;
  const GroundProgram* gp_;
  std::vector<GroundLiteral> lits_;             // normalized literal universe
  std::map<std::string, size_t> lit_index_;
  std::vector<std::set<size_t>> edges_;         // lit -> lits it depends on
  std::vector<std::set<AttrTerm>> reach_;       // memoized closure
  DependencyGraph graph_;
};

// ---------------------------------------------------------------------------
// Strict probabilistic levelings and the induced structure
// ---------------------------------------------------------------------------

struct Leveling {
  std::map<AttrTerm, int> rank;
  std::vector<AttrTerm> random_order;  // random attribute terms by rank
};

struct LevelingResult {
  std::optional<Leveling> leveling;
  std::string failure;  // violated-clause certificate when absent
};

LevelingResult find_leveling(const GroundProgram& gp, const Dependencies& deps);

// Checks the four defining clauses of a strict probabilistic leveling;
// returns an empty string when they hold.
std::string check_leveling_clauses(const GroundProgram& gp, const Dependencies& deps,
                                   const Leveling& lev);

struct InducedStructure {
  std::vector<AttrTerm> random_order;           // a_1 .. a_n
  std::vector<std::vector<int>> stmt_indices;   // Pi_1 .. Pi_{n+1}: ground stmt ids
  std::vector<Program> programs;                // materialized Pi_i
};

// Ground statement ids: rules, then selections, then observations, then
// actions, in their GroundProgram order (pr-atoms are not part of the logical
// structure).
InducedStructure induced_structure(const GroundProgram& gp, const Dependencies& deps,
                                   const Leveling& lev);

// ---------------------------------------------------------------------------
// Causal order (bottom-up construction check)
// ---------------------------------------------------------------------------

struct CausalOrderResult {
  bool ordered = false;
  int failed_clause = 0;       // 1, 2 or 3
  std::string certificate;     // witnessing world / atom / count
};

CausalOrderResult is_causally_ordered(const GroundProgram& gp, const InducedStructure& st);

// ---------------------------------------------------------------------------
// Scenarios and unitary rules
// ---------------------------------------------------------------------------

struct Scenario {
  size_t selection;                 // index into gp.selections
  std::vector<size_t> worlds;       // member world indices
  std::vector<Term> range;          // possible values shared by the members
  std::vector<size_t> active_pr;    // indices into gp.pr_atoms
};

std::vector<Scenario> scenarios(Engine& engine, size_t selection_index);

struct ScenarioVerdict {
  Scenario scenario;
  int clause = 0;       // 1 or 2 of the unitary definition; 0 = fails both
  Rational sum;         // assigned probability mass in the scenario
};

struct UnitaryResult {
  bool unitary = false;
  std::vector<ScenarioVerdict> report;  // per selection rule, per scenario
};

UnitaryResult is_unitary(Engine& engine);

// ---------------------------------------------------------------------------
// Semantic coherency (the definition, checked directly)
// ---------------------------------------------------------------------------

struct PrCheck {
  std::string pr_atom;
  std::string status;  // "holds" | "fails" | "inapplicable" | "uncheckable"
  std::string detail;  // computed value on failure; reason when uncheckable
};

struct SemanticCoherency {
  bool consistent = false;
  bool measure_defined = false;
  std::string measure_note;     // why the measure is undefined, when it is
  bool coherent = false;        // all checkable pr-atoms hold
  bool has_uncheckable = false;
  std::vector<PrCheck> checks;
};

SemanticCoherency semantic_coherency(const Program& p, GroundOptions opts = {});

// ---------------------------------------------------------------------------
// Tableaux (level-order expansion for causally ordered programs)
// ---------------------------------------------------------------------------

struct TableauNode {
  int parent = -1;
  std::optional<GroundAtom> label;  // root carries none
  Rational arc;                     // label of the arc from the parent
  Rational path_value;
  std::vector<int> children;
};

struct Tableau {
  std::vector<TableauNode> nodes;  // node 0 is the root
  std::vector<int> leaves;

  Rational leaf_sum(int node) const;  // sum of leaf path values under a node
  std::string text() const;           // indented rendering
  std::string dot() const;
};

Tableau build_tableau(const GroundProgram& gp, const InducedStructure& st,
                      GroundOptions opts = {});

// Leaf paths as literal sets plus their path values, for cross-checking
// against the world table.
std::vector<std::pair<std::vector<GroundAtom>, Rational>> tableau_leaf_paths(const Tableau& t);

// ---------------------------------------------------------------------------
// The overall verdict
// ---------------------------------------------------------------------------

enum class CoherencyVerdict { CoherentByTheorem, Unknown, IncoherentWitness };

struct CoherencyReport {
  CoherencyVerdict verdict;
  LevelingResult leveling;                  // over the observation/action-free core
  std::optional<CausalOrderResult> ordered;
  std::optional<UnitaryResult> unitary;
  SemanticCoherency semantic;               // always populated on fallback
  bool semantic_ran = false;
  std::string summary;
};

// Strips observations and actions, tries the sufficiency theorem (leveling,
// causal order, unitary), and falls back to the semantic definition.
CoherencyReport coherency_verdict(const Program& p, GroundOptions opts = {});

// Observation/action-free core of a program.
Program strip_observations_actions(const Program& p);

}  // namespace plog
