#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace plog::asp {

// Ground disjunctive ASP over a dense literal universe. A literal is an atom
// index shifted left with the low bit carrying classical negation, so the
// contrary literal is lit ^ 1. Atom naming lives with whoever built the
// program (see translate.hpp); the kernel never looks at names.
using Lit = std::uint32_t;

inline Lit pos_lit(std::uint32_t atom) { return atom << 1; }
inline Lit neg_lit(std::uint32_t atom) { return (atom << 1) | 1; }
inline Lit contrary(Lit l) { return l ^ 1; }
inline std::uint32_t atom_of(Lit l) { return l >> 1; }
inline bool is_neg(Lit l) { return l & 1; }

struct Rule {
  std::vector<Lit> head;  // empty = constraint
  std::vector<Lit> pos;   // body literals
  std::vector<Lit> neg;   // body literals under default negation
};

struct Program {
  std::uint32_t num_atoms = 0;
  std::vector<Rule> rules;

  std::uint32_t num_lits() const { return num_atoms * 2; }
};

// Consistent set of literals, sorted ascending. Consistency (no atom together
// with its contrary) is an invariant the kernel maintains and checks.
using Model = std::vector<Lit>;

bool is_consistent(const Model& m);
bool model_contains(const Model& m, Lit l);

// True iff s satisfies the rule: body satisfied implies some head literal in s.
bool satisfies(const Model& s, const Rule& r);
bool satisfies_all(const Model& s, const Program& p);

// Reduct: drop rules whose negative body intersects s, strip default
// negation from the rest.
Program reduct(const Program& p, const Model& s);

// Definition check: s satisfies reduct(p,s) and no strict subset does.
bool is_answer_set(const Program& p, const Model& s);

struct EnumerateOptions {
  std::uint64_t node_budget = 50'000'000;
};

// All answer sets, deterministically ordered (sorted as literal sequences).
// Backtracking over head-literal truth assignments with propagation; every
// total candidate is verified with reduct + minimality, so no head-cycle-free
// assumption is needed.
std::vector<Model> enumerate_answer_sets(const Program& p, const EnumerateOptions& opts = {});

// Independent oracle: exhaustive iteration over all consistent subsets of the
// literals occurring in p, filtered by is_answer_set. Refuses universes over
// max_universe_lits occurring literals.
std::vector<Model> oracle_answer_sets(const Program& p, std::size_t max_universe_lits = 20);

}  // namespace plog::asp
