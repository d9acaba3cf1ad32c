#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "ast.hpp"
#include "parser.hpp"
#include "worlds.hpp"

#ifndef PLOG_FIXTURE_DIR
#define PLOG_FIXTURE_DIR "tests/fixtures"
#endif

inline std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(PLOG_FIXTURE_DIR) + "/" + name);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline plog::Program load_fixture(const std::string& name) {
  return plog::parse_program(read_fixture(name));
}

// Parse extra statements in the context of an existing program and merge.
inline plog::Program extend(const plog::Program& base, const std::string& text) {
  plog::DeclEnv env;
  env.absorb(base);
  return base.merged(plog::parse_program(text, &env));
}

inline plog::Rational prob_of(const plog::Program& p, const std::string& formula) {
  plog::Engine e(p);
  return e.prob_text(formula);
}

inline plog::Rational rat(const std::string& s) { return plog::Rational::parse(s); }
