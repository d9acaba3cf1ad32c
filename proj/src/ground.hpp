#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ast.hpp"
#include "rational.hpp"
#include "term.hpp"

namespace plog {

// ---------------------------------------------------------------------------
// Ground statement forms
// ---------------------------------------------------------------------------

struct GroundAtom {
  std::string attr;
  std::vector<Term> args;
  Term value;

  int cmp(const GroundAtom& o) const;
  friend bool operator==(const GroundAtom& a, const GroundAtom& b) { return a.cmp(b) == 0; }
  friend bool operator<(const GroundAtom& a, const GroundAtom& b) { return a.cmp(b) < 0; }
  std::string str() const;
};

struct GroundLiteral {
  bool neg = false;
  GroundAtom atom;

  int cmp(const GroundLiteral& o) const;
  friend bool operator==(const GroundLiteral& a, const GroundLiteral& b) { return a.cmp(b) == 0; }
  friend bool operator<(const GroundLiteral& a, const GroundLiteral& b) { return a.cmp(b) < 0; }
  std::string str() const;
};

struct GroundExtLit {
  bool default_neg = false;
  GroundLiteral lit;
  std::string str() const;
};

// Attribute term a(t1,...,tn)
struct AttrTerm {
  std::string attr;
  std::vector<Term> args;

  int cmp(const AttrTerm& o) const;
  friend bool operator==(const AttrTerm& a, const AttrTerm& b) { return a.cmp(b) == 0; }
  friend bool operator<(const AttrTerm& a, const AttrTerm& b) { return a.cmp(b) < 0; }
  std::string str() const;
};

inline AttrTerm attr_term_of(const GroundAtom& a) { return AttrTerm{a.attr, a.args}; }

struct GRule {
  std::optional<GroundLiteral> head;
  std::vector<GroundExtLit> body;
  int src_stmt = -1;
};

struct GSelection {
  Term name;                              // synthesized when not written
  bool name_explicit = false;
  AttrTerm attr_term;
  std::optional<std::string> range_pred;  // dynamic range {X : p(X)}
  std::vector<GroundExtLit> body;
  int src_stmt = -1;

  std::string display_name() const;
};

struct GPrAtom {
  Term rule_name;  // resolved: explicit or the unique selection's name
  GroundAtom head;
  std::vector<GroundExtLit> body;
  Rational value;
  int src_stmt = -1;
  std::string str() const;
};

struct GObs {
  GroundLiteral lit;
  int src_stmt = -1;
};

struct GDo {
  GroundAtom atom;
  int src_stmt = -1;
};

// ---------------------------------------------------------------------------
// Resolved signature
// ---------------------------------------------------------------------------

struct Signature {
  // sort name -> members in declared order (duplicates removed); "boolean" is
  // predefined as {true,false}
  std::map<std::string, std::vector<Term>> sorts;
  std::map<std::string, AttrDecl> attrs;

  const std::vector<Term>& members(const std::string& sort) const;
  bool sort_has(const std::string& sort, const Term& t) const;
  const AttrDecl& attr(const std::string& name) const;
  bool is_boolean(const std::string& attr_name) const;
  const std::vector<Term>& range_of(const std::string& attr_name) const;
};

struct GroundOptions {
  std::uint64_t max_ground_statements = 1'000'000;
};

struct GroundProgram {
  Signature sig;
  std::vector<Statement> declarations;  // deduplicated SortDecl/AttrDecl statements
  std::vector<GRule> rules;
  std::vector<GSelection> selections;
  std::vector<GPrAtom> pr_atoms;
  std::vector<GObs> observations;
  std::vector<GDo> actions;

  // Variable-free Program equivalent (same statement order: declarations first,
  // then ground statements in source order).
  Program to_program() const;
};

// Resolves the signature (evaluating defining-program sorts with the ASP
// kernel), instantiates every statement, evaluates builtins away, checks
// well-sortedness, and resolves pr-atom rule names. Idempotent on ground input.
GroundProgram ground_program(const Program& p, const GroundOptions& opts = {});

// Standalone builtin evaluation: op in {+,-,*,mod,=,!=,<,<=,>,>=} over integer
// terms; comparisons yield the boolean objects true/false.
Term builtin_eval(const std::string& op, const std::vector<Term>& args);

// AST forms of ground statements (used to materialize derived sub-programs).
Statement to_statement(const GRule& r);
Statement to_statement(const GSelection& s);
Statement to_statement(const GPrAtom& p);
Statement to_statement(const GObs& o);
Statement to_statement(const GDo& d);
LiteralExpr to_literal_expr(const GroundLiteral& l);
AtomExpr to_atom_expr(const GroundAtom& a);

}  // namespace plog
