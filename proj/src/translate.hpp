#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "asp.hpp"
#include "ground.hpp"

namespace plog {

// Atom universe of tau(P). Boolean attributes are encoded relationally: the
// single atom a(t) stands for a(t)=true and its classical negation for
// a(t)=false, which is how the worked translations render them.
struct TauAtom {
  enum class Kind { SortFact, Attr, Intervene, Obs, Do };
  Kind kind{};
  std::string sort;     // SortFact
  Term sort_member;     // SortFact
  AttrTerm at;          // Attr/Intervene/Obs/Do
  Term value;           // Attr (non-boolean), Obs, Do
  bool obs_neg = false; // Obs: classical polarity of the observed literal

  int cmp(const TauAtom& o) const;
  friend bool operator<(const TauAtom& a, const TauAtom& b) { return a.cmp(b) < 0; }
  std::string render() const;  // lparse-like, '-' for classical negation
};

struct TauOutput {
  asp::Program prog;
  std::vector<TauAtom> atoms;                 // atom id -> info
  std::vector<AttrTerm> attr_terms;           // occurring attribute terms, sorted
  std::map<AttrTerm, std::uint32_t> intervene_ids;

  // Kernel literal for a Sigma-literal; nullopt when the attribute term does
  // not occur in the program (such a literal is in no possible world).
  std::optional<asp::Lit> lit_of(const GroundLiteral& l, const Signature& sig) const;
  std::optional<asp::Lit> atom_lit(const AttrTerm& at, const Term& value,
                                   const Signature& sig) const;

  bool sat_lit(const asp::Model& m, const GroundLiteral& l, const Signature& sig) const;
  bool sat_ext_lit(const asp::Model& m, const GroundExtLit& e, const Signature& sig) const;
  bool sat_body(const asp::Model& m, const std::vector<GroundExtLit>& body,
                const Signature& sig) const;

  bool has_intervene(const asp::Model& m, const AttrTerm& at) const;

  // Concise Sigma view of a model: a positive literal for every valued
  // attribute term, negative literals only for terms without a value.
  std::vector<GroundLiteral> sigma_view(const asp::Model& m, const Signature& sig) const;

  // Value of an attribute term in the model, if any.
  std::optional<Term> value_in(const asp::Model& m, const AttrTerm& at,
                               const Signature& sig) const;

  std::string dump() const;  // whole program, one rule per line
  std::string render_rule(const asp::Rule& r) const;

 private:
  friend TauOutput translate(const GroundProgram& gp);
  std::map<std::string, std::map<std::vector<Term>, std::map<Term, std::uint32_t>>> attr_index_;
  std::map<std::string, std::uint32_t> obs_index_;  // rendered literal -> obs atom
  std::map<std::string, std::uint32_t> do_index_;   // rendered atom -> do atom
};

// The mapping tau: sort facts, rewritten regular rules, functionality rules,
// intervene/do axioms, random-selection disjunctions with dynamic-range
// constraints, the obs/do facts, and the obs constraints. Purely syntactic:
// pr-atoms never influence the output.
TauOutput translate(const GroundProgram& gp);

}  // namespace plog
