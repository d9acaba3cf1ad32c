#include "term.hpp"

namespace plog {

Term Term::compound(std::string functor, std::vector<Term> args) {
  return Term(Rep(Compound{std::move(functor), std::move(args)}));
}

std::string Term::str() const {
  if (is_integer()) return std::to_string(as_integer());
  if (is_symbol()) return as_symbol();
  std::string out = functor() + "(";
  const auto& as = args();
  for (size_t i = 0; i < as.size(); ++i) {
    if (i) out += ",";
    out += as[i].str();
  }
  return out + ")";
}

int Term::cmp(const Term& o) const {
  size_t ka = rep_.index(), kb = o.rep_.index();
  if (ka != kb) return ka < kb ? -1 : 1;
  switch (ka) {
    case 0: {
      auto a = as_integer(), b = o.as_integer();
      return a == b ? 0 : (a < b ? -1 : 1);
    }
    case 1:
      return as_symbol().compare(o.as_symbol());
    default: {
      int c = functor().compare(o.functor());
      if (c) return c < 0 ? -1 : 1;
      const auto& xs = args();
      const auto& ys = o.args();
      if (xs.size() != ys.size()) return xs.size() < ys.size() ? -1 : 1;
      for (size_t i = 0; i < xs.size(); ++i)
        if (int ci = xs[i].cmp(ys[i])) return ci;
      return 0;
    }
  }
}

Term term_true() { return Term::symbol("true"); }
Term term_false() { return Term::symbol("false"); }

const std::vector<Term>& boolean_values() {
  static const std::vector<Term> v{term_true(), term_false()};
  return v;
}

}  // namespace plog
