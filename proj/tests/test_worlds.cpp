#include <doctest.h>

#include "errors.hpp"
#include "helpers.hpp"
#include "updates.hpp"
#include "worlds.hpp"

using namespace plog;

namespace {

GroundLiteral glit(Engine& e, const std::string& text) {
  DeclEnv env = e.decl_env();
  Formula f = parse_formula_text(text, env);
  REQUIRE(f.kind == Formula::Kind::Lit);
  GroundFormula g = ground_formula(f, e.sig());
  return g.lit.lit;
}

// index of the unique world satisfying all given literals
size_t world_where(Engine& e, const std::vector<std::string>& lits) {
  const auto& ws = e.worlds();
  std::vector<size_t> hits;
  for (size_t i = 0; i < ws.size(); ++i) {
    bool all = true;
    for (const auto& t : lits) {
      GroundLiteral l = glit(e, t);
      if (!e.tau().sat_lit(ws[i].model, l, e.sig())) all = false;
    }
    if (all) hits.push_back(i);
  }
  REQUIRE(hits.size() == 1);
  return hits[0];
}

GroundAtom gatom(Engine& e, const std::string& text) {
  GroundLiteral l = glit(e, text);
  REQUIRE(!l.neg);
  return l.atom;
}

}  // namespace

TEST_CASE("dice: 36 worlds with the published measures") {
  Engine e(load_fixture("dice.plog"));
  CHECK(e.worlds().size() == 36);

  const auto& t = e.table();
  CHECK(t.total == Rational(1));
  for (size_t i = 0; i < e.worlds().size(); ++i) {
    bool six = e.tau().sat_lit(e.worlds()[i].model, glit(e, "roll(d1)=6"), e.sig());
    CHECK(t.mu_hat[i] == (six ? Rational(1, 24) : Rational(1, 40)));
  }
  CHECK(e.prob_text("roll(d1)=6") == Rational(1, 4));
  CHECK(e.prob_text("roll(d1)=6 & even(d2)") == Rational(1, 8));

  // causal probabilities in any world with owner(d1)=mike (Example-7 values)
  size_t w = world_where(e, {"roll(d1)=6", "roll(d2)=3"});
  CHECK(e.causal_probability(w, gatom(e, "roll(d1)=6")) == Rational(1, 4));
  CHECK(e.causal_probability(w, gatom(e, "roll(d1)=2")) == Rational(3, 20));
  CHECK(e.causal_probability(w, gatom(e, "roll(d2)=5")) == Rational(1, 6));
}

TEST_CASE("dice with one pr-atom: defaults fill in by indifference") {
  Engine e(load_fixture("dice_defaults.plog"));
  size_t w = world_where(e, {"roll(d1)=6", "roll(d2)=3"});
  for (int i = 1; i <= 5; ++i)
    CHECK(e.causal_probability(w, gatom(e, "roll(d1)=" + std::to_string(i))) ==
          Rational(3, 20));
  CHECK(e.causal_probability(w, gatom(e, "roll(d1)=6")) == Rational(1, 4));
  for (int i = 1; i <= 6; ++i)
    CHECK(e.causal_probability(w, gatom(e, "roll(d2)=" + std::to_string(i))) == Rational(1, 6));
}

TEST_CASE("guns: four worlds, death at 11/36") {
  Engine e(load_fixture("guns.plog"));
  CHECK(e.worlds().size() == 4);
  const auto& t = e.table();
  CHECK(e.prob_text("is_dead") == Rational(11, 36));
  size_t w4 = world_where(e, {"~fatal(1)", "~fatal(2)"});
  CHECK(t.mu[w4] == Rational(25, 36));
  CHECK(e.prob_text("fatal(1)") == Rational(1, 6));
}

TEST_CASE("guns with a defective first gun") {
  Engine e(load_fixture("guns_defect.plog"));
  // 1 - 49/60 * 5/6 exactly; the story quotes it rounded to 0.32
  CHECK(e.prob_text("is_dead") == Rational(23, 72));
}

TEST_CASE("roulette: rigging gives slot zero probability 1/2") {
  Engine e(load_fixture("roulette.plog"));
  CHECK(e.worlds().size() == 38);
  CHECK(e.prob_text("falls_in=zero") == Rational(1, 2));
  CHECK(e.prob_text("falls_in=17") == Rational(1, 74));
  CHECK(e.prob_text("rigged") == Rational(1));
}

TEST_CASE("conditions: collapsed guns violates unique selection") {
  Engine e(load_fixture("guns_collapsed.plog"));
  const auto& v = e.condition_violations();
  REQUIRE(!v.empty());
  CHECK(v[0].condition == 1);
  CHECK_THROWS_AS(e.table(), Error);
}

TEST_CASE("conditions: double-assigned roulette violates unique assignment") {
  Engine e(load_fixture("roulette_bad.plog"));
  const auto& v = e.condition_violations();
  REQUIRE(!v.empty());
  CHECK(v[0].condition == 2);
}

TEST_CASE("conditions: dice program is clean") {
  Engine e(load_fixture("dice.plog"));
  CHECK(e.condition_violations().empty());
}

TEST_CASE("monty: twelve worlds and the published defaults") {
  Engine e(load_fixture("monty.plog"));
  CHECK(e.worlds().size() == 12);
  size_t w1 = world_where(e, {"selected=1", "prize=1", "open=2"});
  CHECK(e.causal_probability(w1, gatom(e, "open=2")) == Rational(1, 2));
  CHECK(e.causal_probability(w1, gatom(e, "open=3")) == Rational(1, 2));
  CHECK(e.causal_probability(w1, gatom(e, "selected=1")) == Rational(1, 3));
  CHECK(e.causal_probability(w1, gatom(e, "prize=2")) == Rational(1, 3));
  size_t w4 = world_where(e, {"selected=1", "prize=3", "open=2"});
  CHECK(e.causal_probability(w4, gatom(e, "open=2")) == Rational(1));
  // open=1 is not possible in w4 (can_open(1) fails there)
  CHECK_THROWS_AS(e.causal_probability(w4, gatom(e, "open=1")), Error);
}

TEST_CASE("causal probability 1: worlds of measure zero stay possible") {
  Engine e(parse_program("a : boolean. random(a). pr(a) = 1."));
  REQUIRE(e.worlds().size() == 2);
  const auto& t = e.table();
  size_t w1 = world_where(e, {"a"});
  size_t w2 = world_where(e, {"~a"});
  CHECK(t.mu_hat[w1] == Rational(1));
  CHECK(t.mu_hat[w2] == Rational(0));
  CHECK(t.mu[w1] == Rational(1));
  CHECK(e.prob_text("a") == Rational(1));
}

TEST_CASE("no random attributes: the single world has measure one") {
  Engine e(load_fixture("intro_p1.plog"));
  REQUIRE(e.worlds().size() == 1);
  CHECK(e.table().mu[0] == Rational(1));
  CHECK(e.prob_text("q(c)") == Rational(1));
  CHECK(e.prob_text("p(c) | ~p(c)") == Rational(0));  // undefined in the world
  CHECK(e.prob_text("p(c) | not p(c)") == Rational(1));
}

TEST_CASE("three-valued truth") {
  Engine e(load_fixture("intro_p1.plog"));
  const auto& w = e.worlds()[0];
  DeclEnv env = e.decl_env();
  auto truth_of = [&](const std::string& s) {
    return e.truth(w, ground_formula(parse_formula_text(s, env), e.sig()));
  };
  CHECK(truth_of("p(c) | ~p(c)") == TruthValue::Undefined);
  CHECK(truth_of("p(c) | not p(c)") == TruthValue::Satisfied);
  CHECK(truth_of("q(c)") == TruthValue::Satisfied);
  CHECK(truth_of("~q(c)") == TruthValue::Falsified);
  CHECK(truth_of("p(a) & q(c)") == TruthValue::Satisfied);
  CHECK(truth_of("p(b)") == TruthValue::Falsified);
}

TEST_CASE("declaring p random completes the worlds") {
  Engine e(load_fixture("intro_p2.plog"));
  CHECK(e.worlds().size() == 2);
  CHECK(e.prob_text("p(c) | ~p(c)") == Rational(1));
}

TEST_CASE("the abnormal default example") {
  Program base = load_fixture("abnormal.plog");
  CHECK(prob_of(base, "a=1") == Rational(1));
  Program upd = extend(base, "abnormal.");
  CHECK(prob_of(upd, "a=1") == Rational(1, 3));
}

TEST_CASE("inconsistent programs are reported as such") {
  Engine e(parse_program("p : boolean. p. ~p."));
  try {
    e.worlds();
    FAIL("expected Inconsistent");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::Inconsistent);
  }
}

TEST_CASE("all-zero measures leave probability undefined") {
  Engine e(parse_program("a : boolean. random(a). pr(a) = 1. obs(~a)."));
  CHECK(e.worlds().size() == 1);
  try {
    e.table();
    FAIL("expected ProbabilityUndefined");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::ProbabilityUndefined);
  }
}

TEST_CASE("assigned mass over 1 with a default needed is rejected") {
  Engine e(parse_program("a : {1,2,3}. random(a). pr(a=1) = 3/5. pr(a=2) = 3/5."));
  try {
    e.table();
    FAIL("expected ConditionViolation");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::ConditionViolation);
  }
}

TEST_CASE("kolmogorov properties on the corpus") {
  for (const char* name : {"dice.plog", "guns.plog", "roulette.plog", "monty.plog",
                           "monty_biased.plog", "rat.plog", "simpson.plog", "squirrel.plog",
                           "intro_p1.plog", "intro_p2.plog", "valves.plog"}) {
    Engine e(load_fixture(name));
    const auto& t = e.table();
    Rational sum(0);
    for (const auto& m : t.mu) {
      CHECK(m >= Rational(0));
      sum += m;
    }
    CHECK_MESSAGE(sum == Rational(1), name);

    // P(not l) = 1 - P(l) for literals over every occurring attribute term
    for (const auto& at : e.tau().attr_terms) {
      bool boolean = e.sig().is_boolean(at.attr);
      const auto& values = boolean ? boolean_values() : e.sig().range_of(at.attr);
      for (const auto& y : values) {
        GroundLiteral l{false, GroundAtom{at.attr, at.args, y}};
        GroundFormula fl = formula_lit(l);
        GroundFormula fnl;
        fnl.lit = GroundExtLit{true, l};
        CHECK(e.prob(fnl) == Rational(1) - e.prob(fl));
      }
    }
  }
}

TEST_CASE("complete worlds make l or ~l certain") {
  Engine e(load_fixture("rat.plog"));
  CHECK(e.prob_text("death | ~death") == Rational(1));
  CHECK(e.prob_text("arsenic | ~arsenic") == Rational(1));
}

TEST_CASE("rat: the four worlds and their measures") {
  Engine e(load_fixture("rat.plog"));
  REQUIRE(e.worlds().size() == 4);
  const auto& t = e.table();
  CHECK(t.mu_hat[world_where(e, {"arsenic", "death"})] == rat("0.32"));
  CHECK(t.mu_hat[world_where(e, {"arsenic", "~death"})] == rat("0.08"));
  CHECK(t.mu_hat[world_where(e, {"~arsenic", "death"})] == rat("0.06"));
  CHECK(t.mu_hat[world_where(e, {"~arsenic", "~death"})] == rat("0.54"));
  CHECK(e.prob_text("arsenic") == Rational(2, 5));
  CHECK(e.prob_text("death") == Rational(19, 50));
}

TEST_CASE("simpson: the eight base measures") {
  Engine e(load_fixture("simpson.plog"));
  REQUIRE(e.worlds().size() == 8);
  const auto& t = e.table();
  CHECK(t.total == Rational(1));
  CHECK(t.mu[world_where(e, {"male", "recover", "drug"})] == rat("0.225"));
  CHECK(t.mu[world_where(e, {"male", "recover", "~drug"})] == rat("0.0875"));
  CHECK(t.mu[world_where(e, {"male", "~recover", "drug"})] == rat("0.15"));
  CHECK(t.mu[world_where(e, {"male", "~recover", "~drug"})] == rat("0.0375"));
  CHECK(t.mu[world_where(e, {"~male", "recover", "drug"})] == rat("0.025"));
  CHECK(t.mu[world_where(e, {"~male", "recover", "~drug"})] == rat("0.1125"));
  CHECK(t.mu[world_where(e, {"~male", "~recover", "drug"})] == rat("0.1"));
  CHECK(t.mu[world_where(e, {"~male", "~recover", "~drug"})] == rat("0.2625"));
  // classical conditionals read straight off the tables
  CHECK(conditional_prob(e.program(), ground_formula(parse_formula_text("recover", e.decl_env()), e.sig()),
                         {glit(e, "drug")}) == Rational(1, 2));
}

TEST_CASE("squirrel: day one") {
  Program base = load_fixture("squirrel.plog");
  Program day1 = extend(base, "do(look(1)=p1).");
  Engine e(day1);
  REQUIRE(e.worlds().size() == 3);
  const auto& t = e.table();
  CHECK(t.mu[world_where(e, {"hidden_in=p1", "found(p1,1)"})] == rat("0.16"));
  CHECK(t.mu[world_where(e, {"hidden_in=p1", "~found(p1,1)"})] == rat("0.64"));
  CHECK(t.mu[world_where(e, {"hidden_in=p2", "~found(p1,1)"})] == rat("0.2"));
  CHECK(e.prob_text("hidden_in=p1") == Rational(4, 5));
  CHECK(e.prob_text("found(p1,1)") == Rational(4, 25));
}

TEST_CASE("valves: independent faults multiply") {
  Engine e(load_fixture("valves.plog"));
  REQUIRE(e.worlds().size() == 4);
  CHECK(e.prob_text("pressurized(jet)") == Rational(49, 50) * Rational(49, 50));
  CHECK(e.prob_text("~pressurized(jet)") == Rational(1) - Rational(2401, 2500));
}

TEST_CASE("world table is identical across runs") {
  auto snapshot = [] {
    Engine e(load_fixture("monty.plog"));
    std::string s;
    const auto& t = e.table();
    for (size_t i = 0; i < e.worlds().size(); ++i) {
      for (const auto& l : e.tau().sigma_view(e.worlds()[i].model, e.sig())) s += l.str() + " ";
      s += "| " + t.mu_hat[i].str() + " " + t.mu[i].str() + "\n";
    }
    return s;
  };
  CHECK(snapshot() == snapshot());
}

TEST_CASE("assigned values over a fully covered fixed range sum to one") {
  // For each selection rule and each fixed pr-atom body B2: whenever the
  // pr-atoms with body B2 cover the whole range, their values must sum to 1
  // unless P(rule body and B2) is zero.
  for (const char* name : {"dice.plog", "rat.plog", "simpson.plog", "monty_biased.plog",
                           "roulette.plog", "guns.plog", "squirrel.plog"}) {
    Engine e(load_fixture(name));
    const GroundProgram& gp = e.ground();
    for (const auto& s : gp.selections) {
      if (s.range_pred) continue;  // fixed ranges only
      std::map<std::string, std::vector<const GPrAtom*>> by_body;
      for (const auto& q : gp.pr_atoms) {
        if (!(q.rule_name == s.name) || !(attr_term_of(q.head) == s.attr_term)) continue;
        std::string key;
        for (const auto& b : q.body) key += b.str() + ";";
        by_body[key].push_back(&q);
      }
      bool boolean = e.sig().is_boolean(s.attr_term.attr);
      const auto& range = boolean ? boolean_values() : e.sig().range_of(s.attr_term.attr);
      for (const auto& [key, group] : by_body) {
        std::set<std::string> covered;
        Rational sum(0);
        for (const auto* q : group) {
          covered.insert(q->head.value.str());
          sum += q->value;
        }
        bool full = true;
        for (const auto& y : range)
          if (!covered.count(y.str())) full = false;
        if (!full) continue;
        std::vector<GroundExtLit> cond = s.body;
        cond.insert(cond.end(), group[0]->body.begin(), group[0]->body.end());
        Rational pcond = e.prob(formula_conj(cond));
        bool ok = pcond.is_zero() || sum == Rational(1);
        CHECK_MESSAGE(ok, name << ": rule " << s.display_name() << " body group " << key
                               << " sums to " << sum.str());
      }
    }
  }
}

TEST_CASE("queries over a declared but unused attribute") {
  Engine e(parse_program("a : boolean. q : boolean. random(a)."));
  CHECK(e.prob_text("q") == Rational(0));
  CHECK(e.prob_text("not q") == Rational(1));
  CHECK(e.prob_text("q | ~q") == Rational(0));
}

TEST_CASE("the empty program has one empty world of measure one") {
  Engine e(parse_program(""));
  CHECK(e.worlds().size() == 1);
  CHECK(e.table().mu[0] == Rational(1));
}
