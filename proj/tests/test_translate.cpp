#include <doctest.h>

#include "ground.hpp"
#include "helpers.hpp"
#include "translate.hpp"

using namespace plog;

TEST_CASE("boolean random attribute translates to the seven listed rules") {
  Program p = parse_program("a : boolean. random(a). pr(a) = 1.");
  GroundProgram g = ground_program(p);
  TauOutput tau = translate(g);
  std::string dump = tau.dump();
  REQUIRE(tau.prog.rules.size() == 7);  // pr-atoms contribute nothing
  CHECK(dump.find("intervene(a) :- do(a).") != std::string::npos);
  CHECK(dump.find("intervene(a) :- do(-a).") != std::string::npos);
  CHECK(dump.find("a | -a :- not intervene(a).") != std::string::npos);
  CHECK(dump.find(":- obs(a), not a.") != std::string::npos);
  CHECK(dump.find(":- obs(-a), not -a.") != std::string::npos);
  CHECK(dump.find("a :- do(a).") != std::string::npos);
  CHECK(dump.find("-a :- do(-a).") != std::string::npos);
}

TEST_CASE("dice translation carries functionality and obs axioms") {
  TauOutput tau = translate(ground_program(load_fixture("dice.plog")));
  std::string dump = tau.dump();
  CHECK(dump.find("-roll(d1,1) :- roll(d1,2).") != std::string::npos);
  CHECK(dump.find(":- obs(roll(d1,6)), not roll(d1,6).") != std::string::npos);
  CHECK(dump.find(":- obs(-roll(d1,6)), not -roll(d1,6).") != std::string::npos);
  CHECK(dump.find("roll(d1,1) | roll(d1,2) | roll(d1,3) | roll(d1,4) | roll(d1,5) | "
                  "roll(d1,6) :- not intervene(roll(d1)).") != std::string::npos);
  CHECK(dump.find("dice(d1).") != std::string::npos);
  CHECK(dump.find("owner(d1,mike).") != std::string::npos);
}

TEST_CASE("dynamic range contributes the blocking constraint") {
  TauOutput tau = translate(ground_program(load_fixture("monty.plog")));
  std::string dump = tau.dump();
  // disjunction over the full static range plus one constraint per value
  CHECK(dump.find("open(1) | open(2) | open(3) :- not intervene(open).") != std::string::npos);
  CHECK(dump.find(":- open(1), not can_open(1), not intervene(open).") != std::string::npos);
  CHECK(dump.find(":- open(2), not can_open(2), not intervene(open).") != std::string::npos);
  CHECK(dump.find(":- open(3), not can_open(3), not intervene(open).") != std::string::npos);
}

TEST_CASE("translation is purely syntactic in the pr-atoms") {
  Program with_pr = load_fixture("monty_biased.plog");
  Program without = load_fixture("monty.plog");
  CHECK(translate(ground_program(with_pr)).dump() == translate(ground_program(without)).dump());
}

TEST_CASE("do facts force their atom and the intervene flag") {
  Program p = parse_program("a : boolean. random(a). do(a).");
  TauOutput tau = translate(ground_program(p));
  auto models = asp::enumerate_answer_sets(tau.prog);
  REQUIRE(models.size() == 1);
  GroundProgram g = ground_program(p);
  CHECK(tau.sat_lit(models[0], GroundLiteral{false, GroundAtom{"a", {}, term_true()}}, g.sig));
  CHECK(tau.has_intervene(models[0], AttrTerm{"a", {}}));
}
