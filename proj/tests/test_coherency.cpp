#include <doctest.h>

#include <map>

#include "coherency.hpp"
#include "helpers.hpp"

using namespace plog;

namespace {

AttrTerm at0(const std::string& name) { return AttrTerm{name, {}}; }
AttrTerm at1(const std::string& name, const Term& arg) { return AttrTerm{name, {arg}}; }

struct Analysis {
  GroundProgram gp;
  Dependencies deps;
  explicit Analysis(const Program& p) : gp(ground_program(p)), deps(gp) {}
};

}  // namespace

TEST_CASE("monty dependency graph") {
  Analysis a(load_fixture("monty_biased.plog"));
  const DependencyGraph& g = a.deps.graph();
  // open depends on itself, prize and selected; the latter two only on themselves
  CHECK(g.depends(at0("open"), at0("open")));
  CHECK(g.depends(at0("open"), at0("prize")));
  CHECK(g.depends(at0("open"), at0("selected")));
  CHECK(g.depends(at0("open"), at1("can_open", Term::integer(2))));
  CHECK_FALSE(g.depends(at0("prize"), at0("open")));
  CHECK_FALSE(g.depends(at0("prize"), at0("selected")));
  CHECK_FALSE(g.depends(at0("selected"), at0("prize")));
  CHECK(g.depends(at1("can_open", Term::integer(1)), at0("selected")));
  CHECK(g.depends(at1("can_open", Term::integer(1)), at0("prize")));
}

TEST_CASE("empty program has an empty graph") {
  Analysis a(parse_program(""));
  CHECK(a.deps.graph().terms.empty());
}

TEST_CASE("guns dependency: death depends on both triggers") {
  Analysis a(load_fixture("guns.plog"));
  CHECK(a.deps.graph().depends(at0("is_dead"), at1("fatal", Term::integer(1))));
  CHECK(a.deps.graph().depends(at0("is_dead"), at1("fatal", Term::integer(2))));
  CHECK_FALSE(a.deps.graph().depends(at1("fatal", Term::integer(1)), at0("is_dead")));
}

TEST_CASE("monty leveling matches the published witness") {
  Analysis a(load_fixture("monty_biased.plog"));
  LevelingResult r = find_leveling(a.gp, a.deps);
  REQUIRE(r.leveling.has_value());
  const Leveling& lev = *r.leveling;
  CHECK(lev.rank.at(at0("prize")) == 0);
  CHECK(lev.rank.at(at0("selected")) == 1);
  CHECK(lev.rank.at(at0("open")) == 2);
  for (int d = 1; d <= 3; ++d)
    CHECK(lev.rank.at(at1("can_open", Term::integer(d))) == 1);
  CHECK(check_leveling_clauses(a.gp, a.deps, lev).empty());

  // and clause 4 is independently checkable against the dependency graph
  for (const auto& [t, r1] : lev.rank) {
    bool random = false;
    for (const auto& s : a.gp.selections)
      if (s.attr_term == t) random = true;
    if (random) continue;
    for (const auto& [u, r2] : lev.rank) {
      bool urandom = false;
      for (const auto& s : a.gp.selections)
        if (s.attr_term == u) urandom = true;
      if (urandom && a.deps.graph().depends(t, u)) CHECK(r1 >= r2);
    }
  }
}

TEST_CASE("single random attribute levels trivially") {
  Analysis a(parse_program("a : boolean. random(a)."));
  LevelingResult r = find_leveling(a.gp, a.deps);
  REQUIRE(r.leveling.has_value());
  CHECK(r.leveling->rank.at(at0("a")) == 0);
}

TEST_CASE("monty induced structure") {
  Program p = load_fixture("monty_biased.plog");
  Analysis a(p);
  LevelingResult r = find_leveling(a.gp, a.deps);
  REQUIRE(r.leveling.has_value());
  InducedStructure st = induced_structure(a.gp, a.deps, *r.leveling);
  REQUIRE(st.programs.size() == 4);
  // statement ids: 0-8 ground rules (3 closed-world rules x 3 doors),
  // 9 random(prize), 10 random(selected), 11 random(open)
  CHECK(st.stmt_indices[0] == std::vector<int>{});
  CHECK(st.stmt_indices[1] == std::vector<int>{9});
  CHECK(st.stmt_indices[2] == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  CHECK(st.stmt_indices[3] == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11});
}

TEST_CASE("monty is causally ordered") {
  Program p = load_fixture("monty_biased.plog");
  Analysis a(p);
  auto lev = find_leveling(a.gp, a.deps);
  REQUIRE(lev.leveling.has_value());
  InducedStructure st = induced_structure(a.gp, a.deps, *lev.leveling);
  CausalOrderResult res = is_causally_ordered(a.gp, st);
  CHECK(res.ordered);
}

TEST_CASE("a random attribute constrained by a fact is not causally ordered") {
  Program p = parse_program("a : boolean. random(a). a.");
  Analysis a(p);
  auto lev = find_leveling(a.gp, a.deps);
  REQUIRE(lev.leveling.has_value());
  InducedStructure st = induced_structure(a.gp, a.deps, *lev.leveling);
  CausalOrderResult res = is_causally_ordered(a.gp, st);
  CHECK_FALSE(res.ordered);
  CHECK(res.failed_clause == 2);
}

TEST_CASE("downstream nondeterminism breaks clause 2") {
  Program p = parse_program(
      "a, b : boolean. random(a). b :- not ~b, a. ~b :- not b, a.");
  Analysis a(p);
  auto lev = find_leveling(a.gp, a.deps);
  REQUIRE(lev.leveling.has_value());
  InducedStructure st = induced_structure(a.gp, a.deps, *lev.leveling);
  CausalOrderResult res = is_causally_ordered(a.gp, st);
  CHECK_FALSE(res.ordered);
  CHECK(res.failed_clause == 2);
}

TEST_CASE("an inactive level without a unique continuation breaks clause 3") {
  // (the active branch b=false also collapses here; inactive cases are
  // examined first so the reported clause matches the natural diagnosis)
  Program p = parse_program(
      "a, b : boolean. c : boolean. random(a). random(b) :- a. "
      "~b :- ~a. c :- ~b. ~c.");
  Analysis a(p);
  auto lev = find_leveling(a.gp, a.deps);
  REQUIRE(lev.leveling.has_value());
  InducedStructure st = induced_structure(a.gp, a.deps, *lev.leveling);
  CausalOrderResult res = is_causally_ordered(a.gp, st);
  CHECK_FALSE(res.ordered);
  CHECK(res.failed_clause == 3);
  CHECK(res.certificate.find("~a") != std::string::npos);
}

TEST_CASE("rat scenarios") {
  Engine e(load_fixture("rat.plog"));
  const GroundProgram& gp = e.ground();
  size_t arsenic_rule = 0, death_rule = 0;
  for (size_t i = 0; i < gp.selections.size(); ++i) {
    if (gp.selections[i].attr_term == at0("arsenic")) arsenic_rule = i;
    if (gp.selections[i].attr_term == at0("death")) death_rule = i;
  }
  // all four worlds are probabilistically equivalent for the arsenic rule
  auto s1 = scenarios(e, arsenic_rule);
  REQUIRE(s1.size() == 1);
  CHECK(s1[0].worlds.size() == 4);
  CHECK(s1[0].active_pr.size() == 1);
  // the death rule splits on whether arsenic holds
  auto s2 = scenarios(e, death_rule);
  REQUIRE(s2.size() == 2);
  CHECK(s2[0].worlds.size() == 2);
  CHECK(s2[1].worlds.size() == 2);
  for (const auto& sc : s2) {
    REQUIRE(sc.active_pr.size() == 1);
    CHECK(sc.range.size() == 2);
    // the scenario of worlds satisfying arsenic activates exactly
    // pr(death |c arsenic) = 0.8
    bool worlds_have_arsenic = e.tau().sat_lit(
        e.worlds()[sc.worlds[0]].model,
        GroundLiteral{false, GroundAtom{"arsenic", {}, term_true()}}, e.sig());
    const GPrAtom& active = gp.pr_atoms[sc.active_pr[0]];
    REQUIRE(active.body.size() == 1);
    bool body_is_arsenic = !active.body[0].lit.neg &&
                           active.body[0].lit.atom.value == term_true();
    CHECK(worlds_have_arsenic == body_is_arsenic);
    CHECK(active.value == (worlds_have_arsenic ? rat("0.8") : rat("0.1")));
  }
}

TEST_CASE("rat is unitary by partial coverage") {
  Engine e(load_fixture("rat.plog"));
  UnitaryResult u = is_unitary(e);
  CHECK(u.unitary);
  for (const auto& v : u.report) CHECK(v.clause == 2);
}

TEST_CASE("full coverage must sum to one") {
  // three values, three pr-atoms of 1/2 each: not unitary
  Engine bad(parse_program("a : {0,1,2}. random(a). pr(a=0)=1/2. pr(a=1)=1/2. pr(a=2)=1/2."));
  UnitaryResult u = is_unitary(bad);
  CHECK_FALSE(u.unitary);
  REQUIRE(u.report.size() == 1);
  CHECK(u.report[0].clause == 0);
  CHECK(u.report[0].sum == Rational(3, 2));

  Engine good(parse_program("a : {0,1}. random(a). pr(a=0)=1/4. pr(a=1)=3/4."));
  UnitaryResult g = is_unitary(good);
  CHECK(g.unitary);
  REQUIRE(g.report.size() == 1);
  CHECK(g.report[0].clause == 1);
  CHECK(g.report[0].sum == Rational(1));
}

TEST_CASE("coherency verdicts on the worked programs") {
  CoherencyReport monty = coherency_verdict(load_fixture("monty_biased.plog"));
  CHECK(monty.verdict == CoherencyVerdict::CoherentByTheorem);
  CoherencyReport rat = coherency_verdict(load_fixture("rat.plog"));
  CHECK(rat.verdict == CoherencyVerdict::CoherentByTheorem);
  CoherencyReport simpson = coherency_verdict(load_fixture("simpson.plog"));
  CHECK(simpson.verdict == CoherencyVerdict::CoherentByTheorem);

  // pr(a)=1/2 against a fact: P(a)=1, not 1/2
  CoherencyReport pi5 = coherency_verdict(parse_program(
      "a : boolean. random(a). a. pr(a) = 1/2."));
  CHECK(pi5.verdict == CoherencyVerdict::IncoherentWitness);
  CHECK(pi5.summary.find("1/2") != std::string::npos);

  // three equal halves: P(a=0)=1/3, not 1/2
  CoherencyReport pi6 = coherency_verdict(parse_program(
      "a : {0,1,2}. random(a). pr(a=0)=1/2. pr(a=1)=1/2. pr(a=2)=1/2."));
  CHECK(pi6.verdict == CoherencyVerdict::IncoherentWitness);
  CHECK(pi6.summary.find("1/3") != std::string::npos);

  // consistent but not causally ordered, no pr-atoms: unknown with a clean
  // semantic result
  CoherencyReport prime = coherency_verdict(parse_program(
      "a, b : boolean. random(a). b :- not ~b, a. ~b :- not b, a."));
  CHECK(prime.verdict == CoherencyVerdict::Unknown);
  CHECK(prime.semantic_ran);
  CHECK(prime.semantic.coherent);
}

TEST_CASE("semantic coherency agrees with the theorem path on the corpus") {
  for (const char* name : {"rat.plog", "monty_biased.plog", "simpson.plog", "dice.plog"}) {
    SemanticCoherency s = semantic_coherency(load_fixture(name));
    CHECK_MESSAGE(s.coherent, name);
    CHECK_FALSE(s.has_uncheckable);
  }
}

TEST_CASE("pr-free consistent programs are vacuously coherent") {
  SemanticCoherency s = semantic_coherency(load_fixture("intro_p1.plog"));
  CHECK(s.coherent);
  CHECK(s.checks.empty());
}

TEST_CASE("dice tableau: two levels, 36 leaves") {
  Program p = load_fixture("dice.plog");
  Analysis a(p);
  auto lev = find_leveling(a.gp, a.deps);
  REQUIRE(lev.leveling.has_value());
  InducedStructure st = induced_structure(a.gp, a.deps, *lev.leveling);
  REQUIRE(is_causally_ordered(a.gp, st).ordered);
  Tableau t = build_tableau(a.gp, st);
  CHECK(t.leaves.size() == 36);
  // root has six children (first die), each with six children
  CHECK(t.nodes[0].children.size() == 6);
  for (int c : t.nodes[0].children) CHECK(t.nodes[c].children.size() == 6);
  // the leaf-sum property of unitary trees, at the root and below every node
  for (size_t i = 0; i < t.nodes.size(); ++i)
    CHECK(t.leaf_sum(static_cast<int>(i)) == t.nodes[i].path_value);
}

TEST_CASE("tableau leaf paths match the world table") {
  for (const char* name : {"dice.plog", "rat.plog", "monty_biased.plog", "monty.plog",
                           "simpson.plog", "guns.plog", "squirrel.plog"}) {
    Program p = load_fixture(name);
    Analysis a(p);
    auto lev = find_leveling(a.gp, a.deps);
    REQUIRE_MESSAGE(lev.leveling.has_value(), name);
    InducedStructure st = induced_structure(a.gp, a.deps, *lev.leveling);
    CausalOrderResult ord = is_causally_ordered(a.gp, st);
    REQUIRE_MESSAGE(ord.ordered, name << ": " << ord.certificate);
    Tableau t = build_tableau(a.gp, st);

    Engine e(p);
    const auto& tbl = e.table();
    const auto& ws = e.worlds();
    auto paths = tableau_leaf_paths(t);
    REQUIRE_MESSAGE(paths.size() == ws.size(), name);
    std::vector<bool> used(ws.size(), false);
    for (const auto& [atoms, pv] : paths) {
      // the unique world containing the leaf path
      int found = -1;
      for (size_t wi = 0; wi < ws.size(); ++wi) {
        bool all = true;
        for (const auto& atom : atoms)
          if (!e.tau().sat_lit(ws[wi].model, GroundLiteral{false, atom}, e.sig())) all = false;
        if (all) {
          REQUIRE_MESSAGE(found == -1, name << ": leaf path contained in two worlds");
          found = static_cast<int>(wi);
        }
      }
      REQUIRE_MESSAGE(found >= 0, name << ": leaf path matches no world");
      CHECK_FALSE(used[found]);
      used[found] = true;
      CHECK_MESSAGE(pv == tbl.mu[found], name << ": path value differs from the measure");
    }
  }
}

TEST_CASE("verdict on observation-extended programs") {
  Program p = extend(load_fixture("monty_biased.plog"),
                     "obs(selected=1). obs(open=2). obs(prize<>2).");
  CoherencyReport rep = coherency_verdict(p);
  CHECK(rep.verdict == CoherencyVerdict::CoherentByTheorem);
}

TEST_CASE("verdict on an inconsistent program") {
  CoherencyReport rep = coherency_verdict(parse_program("p : boolean. p. ~p."));
  CHECK(rep.verdict == CoherencyVerdict::IncoherentWitness);
  CHECK(rep.summary.find("no possible worlds") != std::string::npos);
}
