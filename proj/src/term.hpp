#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace plog {

// A ground term: integer, symbolic constant, or constructor term f(t1,...,tn).
// Value type with structural ordering (integers before symbols before compounds,
// integers compared numerically) so that sorted containers are deterministic.
class Term {
 public:
  Term() : rep_(std::int64_t{0}) {}
  static Term integer(std::int64_t v) { return Term(Rep(v)); }
  static Term symbol(std::string name) { return Term(Rep(std::move(name))); }
  static Term compound(std::string functor, std::vector<Term> args);

  bool is_integer() const { return std::holds_alternative<std::int64_t>(rep_); }
  bool is_symbol() const { return std::holds_alternative<std::string>(rep_); }
  bool is_compound() const { return std::holds_alternative<Compound>(rep_); }

  std::int64_t as_integer() const { return std::get<std::int64_t>(rep_); }
  const std::string& as_symbol() const { return std::get<std::string>(rep_); }
  const std::string& functor() const { return std::get<Compound>(rep_).functor; }
  const std::vector<Term>& args() const { return std::get<Compound>(rep_).args; }

  std::string str() const;

  friend bool operator==(const Term& a, const Term& b) { return a.cmp(b) == 0; }
  friend bool operator!=(const Term& a, const Term& b) { return a.cmp(b) != 0; }
  friend bool operator<(const Term& a, const Term& b) { return a.cmp(b) < 0; }

  int cmp(const Term& o) const;

 private:
  struct Compound {
    std::string functor;
    std::vector<Term> args;
  };
  using Rep = std::variant<std::int64_t, std::string, Compound>;
  explicit Term(Rep rep) : rep_(std::move(rep)) {}
  Rep rep_;
};

// true/false objects of the predefined boolean sort.
Term term_true();
Term term_false();
const std::vector<Term>& boolean_values();

}  // namespace plog
