#include "updates.hpp"

namespace plog {

Program apply_update(const Program& t, const Update& u) {
  Program out = t;
  if (auto* obs = std::get_if<ObsUpdate>(&u)) {
    for (const auto& l : obs->literals) out.stmts.push_back(Observation{l});
  } else if (auto* act = std::get_if<DoUpdate>(&u)) {
    for (const auto& a : act->atoms) out.stmts.push_back(DoAction{a});
  } else {
    for (const auto& s : std::get<StatementUpdate>(u).stmts) out.stmts.push_back(s);
  }
  return out;
}

Program with_observations(const Program& t, const std::vector<GroundLiteral>& literals) {
  ObsUpdate u;
  for (const auto& l : literals) u.literals.push_back(to_literal_expr(l));
  return apply_update(t, u);
}

Program do_update(const Program& t, const std::vector<GroundAtom>& atoms) {
  DoUpdate u;
  for (const auto& a : atoms) u.atoms.push_back(to_atom_expr(a));
  return apply_update(t, u);
}

Rational conditional_prob(const Program& t, const GroundFormula& f,
                          const std::vector<GroundLiteral>& b, GroundOptions opts) {
  Engine engine(with_observations(t, b), opts);
  return engine.prob(f);
}

}  // namespace plog
