#include <doctest.h>

#include <random>
#include <set>

#include "asp.hpp"
#include "errors.hpp"

using namespace plog;
using namespace plog::asp;

namespace {

// tiny builder: atoms named 0..n-1, literal helpers
Lit P(std::uint32_t a) { return pos_lit(a); }
Lit N(std::uint32_t a) { return neg_lit(a); }

Rule rule(std::vector<Lit> head, std::vector<Lit> pos = {}, std::vector<Lit> neg = {}) {
  return Rule{std::move(head), std::move(pos), std::move(neg)};
}

Program prog(std::uint32_t atoms, std::vector<Rule> rules) {
  Program p;
  p.num_atoms = atoms;
  p.rules = std::move(rules);
  return p;
}

Model sorted(std::vector<Lit> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("satisfies") {
  // p <- q with s={p}: body unsatisfied
  Rule r = rule({P(0)}, {P(1)});
  CHECK(satisfies({P(0)}, r));
  CHECK_FALSE(satisfies({P(1)}, r));
  // s={p(a)} satisfies "p(a) or p(b)."
  Rule d = rule({P(0), P(1)});
  CHECK(satisfies({P(0)}, d));
  // constraints are satisfied iff the body is not
  Rule c = rule({}, {P(0)});
  CHECK_FALSE(satisfies({P(0)}, c));
  CHECK(satisfies({P(1)}, c));
}

TEST_CASE("reduct") {
  // {p <- not q} wrt {p}: keep, strip negation
  Program p = prog(2, {rule({P(0)}, {}, {P(1)})});
  Program r1 = reduct(p, {P(0)});
  REQUIRE(r1.rules.size() == 1);
  CHECK(r1.rules[0].neg.empty());
  CHECK(r1.rules[0].head == std::vector<Lit>{P(0)});
  // wrt {q}: rule deleted
  Program r2 = reduct(p, {P(1)});
  CHECK(r2.rules.empty());
}

TEST_CASE("is_answer_set on the introduction program") {
  // atoms: 0 p(a), 1 p(b), 2 p(c), 3 q(c)
  Program p1 = prog(4, {
                           rule({P(0)}),
                           rule({N(1)}),
                           rule({P(3)}, {}, {P(2), N(2)}),
                           rule({N(3)}, {P(2)}),
                           rule({N(3)}, {N(2)}),
                       });
  CHECK(is_answer_set(p1, sorted({P(0), N(1), P(3)})));
  CHECK_FALSE(is_answer_set(p1, sorted({P(0), N(1)})));  // rule 3 fires unsatisfied
  auto sets = enumerate_answer_sets(p1);
  REQUIRE(sets.size() == 1);
  CHECK(sets[0] == sorted({P(0), N(1), P(3)}));

  // adding the awareness axiom p(c) or -p(c) gives two answer sets
  Program p2 = p1;
  p2.rules.push_back(rule({P(2), N(2)}));
  auto sets2 = enumerate_answer_sets(p2);
  REQUIRE(sets2.size() == 2);
  CHECK(sets2[0] == sorted({P(0), N(1), P(2), N(3)}));
  CHECK(sets2[1] == sorted({P(0), N(1), N(2), N(3)}));
}

TEST_CASE("minimality rejects oversized disjunctive models") {
  Program p = prog(2, {rule({P(0), P(1)})});
  CHECK(is_answer_set(p, {P(0)}));
  CHECK(is_answer_set(p, {P(1)}));
  CHECK_FALSE(is_answer_set(p, sorted({P(0), P(1)})));
  auto sets = enumerate_answer_sets(p);
  REQUIRE(sets.size() == 2);
}

TEST_CASE("default negation") {
  // p(a) <- not p(b).
  Program p = prog(2, {rule({P(0)}, {}, {P(1)})});
  auto sets = enumerate_answer_sets(p);
  REQUIRE(sets.size() == 1);
  CHECK(sets[0] == Model{P(0)});
}

TEST_CASE("constraints alone have no answer sets") {
  // <- not p.
  Program p = prog(1, {rule({}, {}, {P(0)})});
  CHECK(enumerate_answer_sets(p).empty());
  CHECK(oracle_answer_sets(p).empty());
  // {-l <- not l} with the same constraint: still none
  Program q = prog(1, {rule({N(0)}, {}, {P(0)}), rule({}, {}, {P(0)})});
  CHECK(enumerate_answer_sets(q).empty());
  CHECK(oracle_answer_sets(q).empty());
}

TEST_CASE("oracle matches on the worked examples") {
  Program d = prog(2, {rule({P(0), P(1)})});
  CHECK(oracle_answer_sets(d) == enumerate_answer_sets(d));
  Program n = prog(2, {rule({P(0)}, {}, {P(1)})});
  CHECK(oracle_answer_sets(n) == enumerate_answer_sets(n));
}

TEST_CASE("oracle refuses large universes") {
  std::vector<Rule> rules;
  for (std::uint32_t i = 0; i < 21; ++i) rules.push_back(rule({P(i)}));
  Program p = prog(21, rules);
  CHECK_THROWS_AS(oracle_answer_sets(p), Error);  // 21 occurring literals
}

namespace {

Program random_program(std::mt19937& rng, int max_atoms = 6) {
  std::uniform_int_distribution<int> atoms_d(1, max_atoms);
  int n = atoms_d(rng);
  std::uniform_int_distribution<int> rules_d(1, 7);
  std::uniform_int_distribution<int> len_d(0, 2);
  std::uniform_int_distribution<int> atom_d(0, n - 1);
  std::uniform_int_distribution<int> sign_d(0, 1);
  auto lit = [&]() { return sign_d(rng) ? N(atom_d(rng)) : P(atom_d(rng)); };
  Program p;
  p.num_atoms = n;
  int m = rules_d(rng);
  for (int i = 0; i < m; ++i) {
    Rule r;
    int h = len_d(rng);
    for (int k = 0; k < h; ++k) r.head.push_back(lit());
    int b = len_d(rng);
    for (int k = 0; k < b; ++k) r.pos.push_back(lit());
    int g = len_d(rng);
    for (int k = 0; k < g; ++k) r.neg.push_back(lit());
    p.rules.push_back(std::move(r));
  }
  return p;
}

}  // namespace

TEST_CASE("property: enumerate equals oracle on random programs") {
  std::mt19937 rng(20240901);
  for (int i = 0; i < 500; ++i) {
    Program p = random_program(rng);
    auto fast = enumerate_answer_sets(p);
    auto slow = oracle_answer_sets(p);
    REQUIRE_MESSAGE(fast == slow, "iteration " << i);
  }
}

TEST_CASE("property: constraint monotonicity") {
  // X is an answer set of P u C iff X is an answer set of P satisfying C
  std::mt19937 rng(7771234);
  std::uniform_int_distribution<int> nconstr_d(1, 3);
  for (int i = 0; i < 200; ++i) {
    Program p = random_program(rng);
    Program pc = p;
    std::uniform_int_distribution<int> atom_d(0, p.num_atoms - 1);
    std::uniform_int_distribution<int> sign_d(0, 1);
    std::uniform_int_distribution<int> len_d(0, 2);
    std::vector<Rule> constraints;
    int nc = nconstr_d(rng);
    for (int k = 0; k < nc; ++k) {
      Rule c;
      int b = 1 + len_d(rng);
      for (int j = 0; j < b; ++j)
        (sign_d(rng) ? c.neg : c.pos)
            .push_back(sign_d(rng) ? N(atom_d(rng)) : P(atom_d(rng)));
      constraints.push_back(c);
      pc.rules.push_back(c);
    }
    auto with = enumerate_answer_sets(pc);
    std::vector<Model> expected;
    for (const auto& s : enumerate_answer_sets(p)) {
      bool ok = true;
      for (const auto& c : constraints)
        if (!satisfies(s, c)) ok = false;
      if (ok) expected.push_back(s);
    }
    REQUIRE_MESSAGE(with == expected, "iteration " << i);
  }
}

TEST_CASE("property: anti-chain, rule satisfaction, supportedness") {
  std::mt19937 rng(99120);
  for (int i = 0; i < 200; ++i) {
    Program p = random_program(rng);
    auto sets = enumerate_answer_sets(p);
    for (size_t a = 0; a < sets.size(); ++a) {
      // every rule satisfied
      for (const auto& r : p.rules) REQUIRE(satisfies(sets[a], r));
      // supportedness: every literal has a firing rule where it is the only
      // satisfied head literal
      for (Lit l : sets[a]) {
        bool supported = false;
        for (const auto& r : p.rules) {
          bool body = true;
          for (Lit b : r.pos)
            if (!model_contains(sets[a], b)) body = false;
          for (Lit b : r.neg)
            if (model_contains(sets[a], b)) body = false;
          if (!body) continue;
          std::set<Lit> heads_in;
          for (Lit h : r.head)
            if (model_contains(sets[a], h)) heads_in.insert(h);
          if (heads_in.size() == 1 && *heads_in.begin() == l) {
            supported = true;
            break;
          }
        }
        REQUIRE(supported);
      }
      // no answer set strictly contains another
      for (size_t b = 0; b < sets.size(); ++b) {
        if (a == b) continue;
        bool strict_subset = sets[a].size() < sets[b].size() &&
                             std::includes(sets[b].begin(), sets[b].end(), sets[a].begin(),
                                           sets[a].end());
        REQUIRE_FALSE(strict_subset);
      }
    }
  }
}
