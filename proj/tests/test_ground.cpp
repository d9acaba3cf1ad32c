#include <doctest.h>

#include "errors.hpp"
#include "ground.hpp"
#include "helpers.hpp"

using namespace plog;

TEST_CASE("builtin evaluation") {
  CHECK(builtin_eval("mod", {Term::integer(4), Term::integer(2)}) == Term::integer(0));
  CHECK(builtin_eval("+", {Term::integer(1), Term::integer(1)}) == Term::integer(2));
  CHECK(builtin_eval("<", {Term::integer(3), Term::integer(5)}) == term_true());
  CHECK(builtin_eval("=", {Term::integer(3), Term::integer(3)}) == term_true());
  try {
    builtin_eval("+", {Term::symbol("mike"), Term::integer(1)});
    FAIL("expected TypeMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TypeMismatch);
  }
}

TEST_CASE("false builtin condition drops the instance") {
  Program p = parse_program(
      "score = {1,2,3,4,5,6}. ok : boolean. pick : score. ok :- pick=Y, Y mod 2 = 0.");
  GroundProgram g = ground_program(p);
  // 6 substitutions for Y; the odd ones evaluate to false and vanish
  CHECK(g.rules.size() == 3);
}

TEST_CASE("even-rule instances over two dice") {
  GroundProgram g = ground_program(load_fixture("dice.plog"));
  int even_rules = 0;
  for (const auto& r : g.rules)
    if (r.head && r.head->atom.attr == "even" && !r.head->neg) ++even_rules;
  // 2 dice x 3 even scores survive the builtin filter (12 substitutions)
  CHECK(even_rules == 6);
}

TEST_CASE("monty closed-world rules ground to nine instances") {
  // hand enumeration: rules 3-5 each range over three doors
  GroundProgram g = ground_program(load_fixture("monty.plog"));
  int can_open_rules = 0;
  for (const auto& r : g.rules)
    if (r.head && r.head->atom.attr == "can_open") ++can_open_rules;
  CHECK(can_open_rules == 9);
}

TEST_CASE("product rule for instance counts without builtins") {
  Program p = parse_program(
      "dice = {d1,d2}. person = {mike,john}. likes : dice * person -> boolean. likes(D,P).");
  GroundProgram g = ground_program(p);
  CHECK(g.rules.size() == 4);  // 2 x 2
}

TEST_CASE("roulette slot sort has 38 members") {
  GroundProgram g = ground_program(load_fixture("roulette.plog"));
  CHECK(g.sig.members("slot").size() == 38);
}

TEST_CASE("grounding is deterministic and idempotent") {
  Program p = load_fixture("dice.plog");
  GroundProgram g1 = ground_program(p);
  GroundProgram g2 = ground_program(p);
  CHECK(print_program(g1.to_program()) == print_program(g2.to_program()));
  // idempotent: grounding the ground program changes nothing
  GroundProgram g3 = ground_program(g1.to_program());
  CHECK(print_program(g3.to_program()) == print_program(g1.to_program()));
}

TEST_CASE("ground literals are well-sorted") {
  GroundProgram g = ground_program(load_fixture("dice.plog"));
  for (const auto& r : g.rules) {
    if (!r.head) continue;
    const AttrDecl& d = g.sig.attr(r.head->atom.attr);
    CHECK(g.sig.sort_has(d.range_sort, r.head->atom.value));
    for (size_t i = 0; i < r.head->atom.args.size(); ++i)
      CHECK(g.sig.sort_has(d.param_sorts[i], r.head->atom.args[i]));
  }
}

TEST_CASE("grounding cap") {
  Program p = parse_program("n = {1..60}. big : n * n * n -> boolean. big(X,Y,Z).");
  GroundOptions opts;
  opts.max_ground_statements = 1000;
  try {
    ground_program(p, opts);
    FAIL("expected BudgetExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BudgetExceeded);
  }
}

TEST_CASE("defining-program sorts are evaluated with the kernel") {
  Program p = parse_program(
      "c = program { c(1). c(X+1) :- c(X), X < 5. }. a : c. random(a).");
  GroundProgram g = ground_program(p);
  CHECK(g.sig.members("c").size() == 5);

  // non-unique answer set: two stable models
  Program bad = parse_program(
      "c = program { c(1) :- not d(1). d(1) :- not c(1). }. a : c. random(a).");
  try {
    ground_program(bad);
    FAIL("expected UnboundedSort");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnboundedSort);
  }

  // divergent: universe keeps growing
  Program diverge = parse_program("c = program { c(1). c(X+1) :- c(X). }. a : c. random(a).");
  try {
    ground_program(diverge);
    FAIL("expected UnboundedSort");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnboundedSort);
  }
}

TEST_CASE("#domain gives builtin-only variables a sort") {
  Program p = parse_program(
      "score = {1,2,3,4,5,6}. found_even : boolean. #domain score(Y). "
      "found_even :- Y mod 2 = 0.");
  GroundProgram g = ground_program(p);
  CHECK(g.rules.size() == 3);  // even substitutions survive
  Program bad = parse_program("found_even : boolean. found_even :- Y mod 2 = 0.");
  try {
    ground_program(bad);
    FAIL("expected SortError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Sort);
  }
}

TEST_CASE("inconsistent redeclaration is a duplicate-declaration error") {
  Program a = parse_program("dice = {d1,d2}. fair : dice -> boolean.");
  Program b = parse_program("dice = {d1,d2,d3}.");
  try {
    ground_program(a.merged(b));
    FAIL("expected DuplicateDeclaration");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DuplicateDeclaration);
  }
  // identical redeclaration merges fine
  Program c = parse_program("dice = {d1,d2}.");
  CHECK(ground_program(a.merged(c)).sig.members("dice").size() == 2);
}

TEST_CASE("constructor terms live in product sorts") {
  GroundProgram g = ground_program(load_fixture("valves.plog"));
  CHECK(g.sig.members("seg").size() == 2);
  CHECK(g.sig.members("seg")[0].is_compound());
}

TEST_CASE("unnamed selection must be unique for its attribute term") {
  Program p = parse_program(
      "a : boolean. b : boolean. random(a) :- b. random(a) :- not b.");
  try {
    ground_program(p);
    FAIL("expected SortError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Sort);
  }
}

TEST_CASE("value outside the attribute range is a sort error") {
  try {
    ground_program(parse_program("score = {1,2,3}. pick : score. pick = 7."));
    FAIL("expected SortError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Sort);
  }
}
