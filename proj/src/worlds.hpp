#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ast.hpp"
#include "ground.hpp"
#include "parser.hpp"
#include "translate.hpp"

namespace plog {

enum class TruthValue { Satisfied, Falsified, Undefined };

struct PossibleAtomInfo {
  Term rule_name;  // generating rule
  Rational prob;
  bool assigned = false;  // true: from a pr-atom; false: default (indifference)
};

struct PossibleWorld {
  asp::Model model;
  // every atom a(t)=y possible in this world, with its causal probability
  std::map<GroundAtom, PossibleAtomInfo> possible;
};

struct WorldTable {
  std::vector<Rational> mu_hat;
  Rational total;           // sum of unnormalized measures
  std::vector<Rational> mu; // defined iff total > 0
};

struct ConditionViolation {
  int condition;  // 1, 2 or 3
  std::string message;
  int witness_world = -1;
};

// Ground ASP formula; built from parsed query text against a signature.
struct GroundFormula {
  Formula::Kind kind = Formula::Kind::Lit;
  bool verum = false;  // empty conjunction; satisfied everywhere
  GroundExtLit lit;
  std::shared_ptr<GroundFormula> lhs, rhs;

  std::string str() const;
};

GroundFormula ground_formula(const Formula& f, const Signature& sig);
GroundFormula formula_lit(GroundLiteral l);                       // single-literal formula
GroundFormula formula_conj(const std::vector<GroundExtLit>& ls);  // conjunction; empty = true

// One program's full possible-world analysis: grounding, translation, answer
// sets, per-atom causal probabilities, conditions, measures, probabilities.
// Everything is computed lazily and cached; the object is single-threaded.
class Engine {
 public:
  explicit Engine(Program p, GroundOptions opts = {});

  const Program& program() const { return program_; }
  const GroundProgram& ground() const { return ground_; }
  const TauOutput& tau() const { return tau_; }
  const Signature& sig() const { return ground_.sig; }

  // Answer sets of tau(P); empty programs are Inconsistent.
  const std::vector<PossibleWorld>& worlds();
  bool is_consistent();  // at least one possible world

  // Meta-level Conditions 1-3; reports rather than throws.
  const std::vector<ConditionViolation>& condition_violations();

  // Unnormalized and normalized measures. Enforces Conditions 1-3 and rejects
  // assigned probability mass over 1; no nonzero world -> ProbabilityUndefined.
  const WorldTable& table();

  Rational causal_probability(size_t world, const GroundAtom& atom);

  TruthValue truth(const PossibleWorld& w, const GroundFormula& f) const;
  Rational prob(const GroundFormula& f);
  Rational prob_text(const std::string& formula_text);

  DeclEnv decl_env() const;

 private:
  void annotate(PossibleWorld& w);

  Program program_;
  GroundProgram ground_;
  TauOutput tau_;
  std::optional<std::vector<PossibleWorld>> worlds_;
  std::optional<std::vector<ConditionViolation>> violations_;
  std::optional<WorldTable> table_;
};

}  // namespace plog
