#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "rational.hpp"
#include "term.hpp"

namespace plog {

// ---------------------------------------------------------------------------
// Term expressions (possibly non-ground): variables, constants, constructor
// terms, and integer arithmetic. Arithmetic appears only inside builtin
// comparisons and is evaluated away during grounding.
// ---------------------------------------------------------------------------

enum class ArithOp { Add, Sub, Mul, Mod };
enum class CmpOp { Eq, Neq, Lt, Le, Gt, Ge };

struct TermExpr;
using TermExprPtr = std::shared_ptr<const TermExpr>;

struct TermExpr {
  struct Var {
    std::string name;
  };
  struct Const {
    Term value;
  };
  struct Compound {
    std::string functor;
    std::vector<TermExprPtr> args;
  };
  struct Arith {
    ArithOp op;
    TermExprPtr lhs, rhs;
  };
  std::variant<Var, Const, Compound, Arith> node;

  static TermExprPtr var(std::string n) { return make(Var{std::move(n)}); }
  static TermExprPtr constant(Term t) { return make(Const{std::move(t)}); }
  static TermExprPtr compound(std::string f, std::vector<TermExprPtr> a) {
    return make(Compound{std::move(f), std::move(a)});
  }
  static TermExprPtr arith(ArithOp op, TermExprPtr l, TermExprPtr r) {
    return make(Arith{op, std::move(l), std::move(r)});
  }

  bool is_var() const { return std::holds_alternative<Var>(node); }
  bool is_const() const { return std::holds_alternative<Const>(node); }
  bool is_arith() const { return std::holds_alternative<Arith>(node); }

  template <class T>
  static TermExprPtr make(T&& n) {
    auto e = std::make_shared<TermExpr>();
    e->node = std::forward<T>(n);
    return e;
  }
};

std::string term_expr_str(const TermExprPtr& e);
void collect_vars(const TermExprPtr& e, std::vector<std::string>& out);

// ---------------------------------------------------------------------------
// Literals and rule bodies
// ---------------------------------------------------------------------------

// a(t1,...,tn) = v. Boolean attributes use v = true/false; the surface sugar
// `a`, `~a`, `a<>y` is resolved by the parser.
struct AtomExpr {
  std::string attr;
  std::vector<TermExprPtr> args;
  TermExprPtr value;
};

struct LiteralExpr {
  bool neg = false;  // classical negation
  AtomExpr atom;
};

struct ExtLiteralExpr {
  bool default_neg = false;  // `not l`
  LiteralExpr lit;
};

struct BuiltinExpr {
  CmpOp op;
  TermExprPtr lhs, rhs;
};

using BodyElem = std::variant<ExtLiteralExpr, BuiltinExpr>;
using Body = std::vector<BodyElem>;

// ---------------------------------------------------------------------------
// Statements
// ---------------------------------------------------------------------------

struct IntRange {
  std::int64_t lo, hi;
};
using SortElem = std::variant<Term, IntRange>;

// Rule of a sort-defining program: plain predicates over constants/variables,
// default negation and builtins allowed, no classical negation.
struct DefAtom {
  std::string pred;
  std::vector<TermExprPtr> args;
};
struct DefBodyElem {
  bool is_builtin = false;
  bool default_neg = false;
  DefAtom atom;
  BuiltinExpr builtin;
};
struct DefRule {
  DefAtom head;
  std::vector<DefBodyElem> body;
};

struct SortDecl {
  std::string name;
  // exactly one of:
  std::vector<SortElem> enumeration;                 // c = {a, b, 1..5, f(x,y)}.
  std::optional<std::vector<std::string>> product;   // c = {f(S1,...,Sk)} comprehension sorts
  std::string product_functor;
  std::optional<std::vector<DefRule>> def_program;   // c = program { ... }.
};

struct AttrDecl {
  std::string name;
  std::vector<std::string> param_sorts;
  std::string range_sort;
};

// #domain c(X).
struct DomainDecl {
  std::string sort;
  std::string var;
};

struct RegularRule {
  std::optional<LiteralExpr> head;  // empty = constraint
  Body body;
};

struct DynRange {
  std::string var;   // bound variable
  std::string pred;  // unary boolean attribute
};

struct RandomSelection {
  std::optional<TermExprPtr> name;  // [r]; omitted only for an attribute term's unique rule
  std::string attr;
  std::vector<TermExprPtr> args;
  std::optional<DynRange> range;
  Body body;
};

struct PrAtom {
  std::optional<TermExprPtr> rule_name;
  AtomExpr head;
  Body body;
  Rational value;
};

struct Observation {
  LiteralExpr lit;
};

struct DoAction {
  AtomExpr atom;  // positive a(t)=y
};

using Statement = std::variant<SortDecl, AttrDecl, DomainDecl, RegularRule, RandomSelection,
                               PrAtom, Observation, DoAction>;

struct Program {
  std::vector<Statement> stmts;

  Program merged(const Program& other) const {
    Program p = *this;
    p.stmts.insert(p.stmts.end(), other.stmts.begin(), other.stmts.end());
    return p;
  }
};

// Canonical printer: one statement per line; parse(print(parse(t))) == parse(t).
std::string print_statement(const Statement& s);
std::string print_program(const Program& p);

std::string atom_expr_str(const AtomExpr& a);
std::string literal_expr_str(const LiteralExpr& l);
std::string body_str(const Body& b);

}  // namespace plog
