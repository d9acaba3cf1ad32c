#pragma once

#include <variant>
#include <vector>

#include "ast.hpp"
#include "worlds.hpp"

namespace plog {

// An update is new knowledge added to a program by union: observations,
// deliberate actions, or arbitrary statements (declarations, rules, random
// selections, pr-atoms).
struct ObsUpdate {
  std::vector<LiteralExpr> literals;
};
struct DoUpdate {
  std::vector<AtomExpr> atoms;
};
struct StatementUpdate {
  std::vector<Statement> stmts;
};
using Update = std::variant<ObsUpdate, DoUpdate, StatementUpdate>;

// Statement-level union; the result is a new immutable program. Inconsistent
// redeclarations surface as DuplicateDeclaration when the result is grounded;
// coherency of the result is the caller's concern.
Program apply_update(const Program& t, const Update& u);

Program with_observations(const Program& t, const std::vector<GroundLiteral>& literals);
Program do_update(const Program& t, const std::vector<GroundAtom>& atoms);

// Classical conditional probability P(f | b) computed as the probability of f
// under t extended with obs(b).
Rational conditional_prob(const Program& t, const GroundFormula& f,
                          const std::vector<GroundLiteral>& b, GroundOptions opts = {});

}  // namespace plog
