#pragma once

#include <map>
#include <memory>
#include <string>

#include "ast.hpp"

namespace plog {

// Declarations visible while parsing. Seeding it with an existing program's
// declarations lets update files and inline query text reference base
// attributes.
struct DeclEnv {
  std::map<std::string, AttrDecl> attrs;
  std::map<std::string, bool> sorts;  // name -> declared (value unused)

  bool has_sort(const std::string& n) const { return n == "boolean" || sorts.count(n) > 0; }
  const AttrDecl* attr(const std::string& n) const {
    auto it = attrs.find(n);
    return it == attrs.end() ? nullptr : &it->second;
  }
  void absorb(const Program& p);
};

// ASP formula for queries: extended literals combined with & and |.
struct Formula {
  enum class Kind { Lit, And, Or };
  Kind kind = Kind::Lit;
  ExtLiteralExpr lit;
  std::shared_ptr<Formula> lhs, rhs;
};

Program parse_program(const std::string& text, const DeclEnv* env = nullptr);
LiteralExpr parse_literal_text(const std::string& text, const DeclEnv& env);
AtomExpr parse_atom_text(const std::string& text, const DeclEnv& env);  // accepts ~a sugar for a=false
Formula parse_formula_text(const std::string& text, const DeclEnv& env);
Statement parse_statement_text(const std::string& text, const DeclEnv& env);

std::string formula_str(const Formula& f);

}  // namespace plog
