#include "worlds.hpp"

#include <algorithm>
#include <sstream>

#include "errors.hpp"

namespace plog {

// --- formulas ---------------------------------------------------------------

std::string GroundFormula::str() const {
  if (verum) return "true";
  switch (kind) {
    case Formula::Kind::Lit:
      return lit.str();
    case Formula::Kind::And:
      return "(" + lhs->str() + " & " + rhs->str() + ")";
    case Formula::Kind::Or:
      return "(" + lhs->str() + " | " + rhs->str() + ")";
  }
  return "?";
}

static GroundLiteral ground_literal_expr(const LiteralExpr& l, const Signature& sig) {
  GroundLiteral out;
  out.neg = l.neg;
  out.atom.attr = l.atom.attr;
  const AttrDecl& d = sig.attr(l.atom.attr);
  auto eval = [&](const TermExprPtr& e) -> Term {
    std::vector<std::string> vars;
    collect_vars(e, vars);
    if (!vars.empty())
      fail(ErrorCode::Sort, "queries must be ground; variable '" + vars[0] + "' found");
    if (e->is_const()) return std::get<TermExpr::Const>(e->node).value;
    fail(ErrorCode::Sort, "unexpected term in query literal");
  };
  for (size_t i = 0; i < l.atom.args.size(); ++i) {
    Term t = eval(l.atom.args[i]);
    if (!sig.sort_has(d.param_sorts[i], t))
      fail(ErrorCode::Sort, "'" + t.str() + "' is not in sort '" + d.param_sorts[i] + "'");
    out.atom.args.push_back(std::move(t));
  }
  out.atom.value = eval(l.atom.value);
  if (!sig.sort_has(d.range_sort, out.atom.value))
    fail(ErrorCode::Sort, "'" + out.atom.value.str() + "' is not in the range of '" +
                              l.atom.attr + "'");
  return out;
}

GroundFormula ground_formula(const Formula& f, const Signature& sig) {
  GroundFormula g;
  g.kind = f.kind;
  if (f.kind == Formula::Kind::Lit) {
    g.lit.default_neg = f.lit.default_neg;
    g.lit.lit = ground_literal_expr(f.lit.lit, sig);
  } else {
    g.lhs = std::make_shared<GroundFormula>(ground_formula(*f.lhs, sig));
    g.rhs = std::make_shared<GroundFormula>(ground_formula(*f.rhs, sig));
  }
  return g;
}

GroundFormula formula_lit(GroundLiteral l) {
  GroundFormula g;
  g.lit.lit = std::move(l);
  return g;
}

GroundFormula formula_conj(const std::vector<GroundExtLit>& ls) {
  if (ls.empty()) {
    GroundFormula g;
    g.verum = true;
    return g;
  }
  GroundFormula g;
  g.lit = ls[0];
  for (size_t i = 1; i < ls.size(); ++i) {
    GroundFormula parent;
    parent.kind = Formula::Kind::And;
    parent.lhs = std::make_shared<GroundFormula>(std::move(g));
    GroundFormula r;
    r.lit = ls[i];
    parent.rhs = std::make_shared<GroundFormula>(std::move(r));
    g = std::move(parent);
  }
  return g;
}

// --- engine -----------------------------------------------------------------

Engine::Engine(Program p, GroundOptions opts)
    : program_(std::move(p)), ground_(ground_program(program_, opts)), tau_(translate(ground_)) {}

DeclEnv Engine::decl_env() const {
  DeclEnv env;
  env.absorb(program_);
  return env;
}

const std::vector<PossibleWorld>& Engine::worlds() {
  if (!worlds_) {
    std::vector<PossibleWorld> ws;
    for (auto& m : asp::enumerate_answer_sets(tau_.prog)) {
      PossibleWorld w;
      w.model = std::move(m);
      annotate(w);
      ws.push_back(std::move(w));
    }
    worlds_ = std::move(ws);
  }
  if (worlds_->empty())
    fail(ErrorCode::Inconsistent, "program has no possible worlds");
  return *worlds_;
}

bool Engine::is_consistent() {
  try {
    worlds();
    return true;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Inconsistent) return false;
    throw;
  }
}

// Possible atoms and their causal probabilities. An atom is possible in W via
// a selection rule whose body W satisfies (and whose dynamic range admits the
// value); a term fixed by a deliberate action is not considered random.
void Engine::annotate(PossibleWorld& w) {
  const Signature& sig = ground_.sig;
  struct Active {
    const GSelection* sel;
    std::vector<Term> values;
  };
  std::map<AttrTerm, Active> active;
  for (const auto& s : ground_.selections) {
    if (tau_.has_intervene(w.model, s.attr_term)) continue;
    if (!tau_.sat_body(w.model, s.body, sig)) continue;
    std::vector<Term> values;
    bool boolean = sig.is_boolean(s.attr_term.attr);
    const std::vector<Term>& range = boolean ? boolean_values() : sig.range_of(s.attr_term.attr);
    for (const Term& y : range) {
      if (s.range_pred) {
        const AttrDecl& pd = sig.attr(*s.range_pred);
        if (!sig.sort_has(pd.param_sorts[0], y)) continue;
        GroundLiteral py{false, GroundAtom{*s.range_pred, {y}, term_true()}};
        if (!tau_.sat_lit(w.model, py, sig)) continue;
      }
      values.push_back(y);
    }
    // Condition 1 guarantees a unique active rule; keep the first and let
    // condition_violations() report any clash.
    active.emplace(s.attr_term, Active{&s, std::move(values)});
  }

  for (auto& [at, a] : active) {
    // assigned probabilities from pr-atoms indexing the generating rule
    std::map<Term, Rational> assigned;
    for (const auto& pr : ground_.pr_atoms) {
      if (!(attr_term_of(pr.head) == at)) continue;
      if (!(pr.rule_name == a.sel->name)) continue;
      if (!tau_.sat_body(w.model, pr.body, sig)) continue;
      bool possible_value =
          std::find(a.values.begin(), a.values.end(), pr.head.value) != a.values.end();
      if (!possible_value) continue;  // Condition 3 violation; reported separately
      assigned.emplace(pr.head.value, pr.value);  // Condition 2: at most one applies
    }
    Rational alpha(0);
    for (auto& [y, v] : assigned) alpha += v;
    size_t beta = a.values.size() - assigned.size();
    std::optional<Rational> def;
    if (beta > 0) {
      if (alpha > Rational(1))
        fail(ErrorCode::ConditionViolation,
             "assigned probabilities for " + at.str() + " sum to " + alpha.str() +
                 " > 1, leaving a negative default");
      def = (Rational(1) - alpha) / Rational(static_cast<long>(beta));
    }
    for (const Term& y : a.values) {
      PossibleAtomInfo info;
      info.rule_name = a.sel->name;
      auto it = assigned.find(y);
      if (it != assigned.end()) {
        info.prob = it->second;
        info.assigned = true;
      } else {
        if (!def)
          fail(ErrorCode::Internal, "default probability undefined for " + at.str());
        info.prob = *def;
        info.assigned = false;
      }
      w.possible.emplace(GroundAtom{at.attr, at.args, y}, std::move(info));
    }
  }
}

const std::vector<ConditionViolation>& Engine::condition_violations() {
  if (violations_) return *violations_;
  std::vector<ConditionViolation> out;
  const Signature& sig = ground_.sig;

  std::vector<PossibleWorld>* ws = nullptr;
  if (is_consistent()) ws = &*worlds_;

  if (ws) {
    // Condition 1: no world activates two selection rules for one term
    for (size_t i = 0; i < ground_.selections.size(); ++i) {
      for (size_t j = i + 1; j < ground_.selections.size(); ++j) {
        const auto& s1 = ground_.selections[i];
        const auto& s2 = ground_.selections[j];
        if (!(s1.attr_term == s2.attr_term)) continue;
        for (size_t k = 0; k < ws->size(); ++k) {
          const auto& m = (*ws)[k].model;
          if (tau_.sat_body(m, s1.body, sig) && tau_.sat_body(m, s2.body, sig)) {
            out.push_back({1,
                           "selection rules " + s1.display_name() + " and " + s2.display_name() +
                               " for " + s1.attr_term.str() +
                               " are both active in a possible world",
                           static_cast<int>(k)});
            break;
          }
        }
      }
    }
    // Condition 2: no world activates two different pr-atoms for one head atom
    for (size_t i = 0; i < ground_.pr_atoms.size(); ++i) {
      for (size_t j = i + 1; j < ground_.pr_atoms.size(); ++j) {
        const auto& p1 = ground_.pr_atoms[i];
        const auto& p2 = ground_.pr_atoms[j];
        if (!(p1.head == p2.head) || !(p1.rule_name == p2.rule_name)) continue;
        if (p1.str() == p2.str()) continue;  // literal duplicate, same information
        for (const auto& s : ground_.selections) {
          if (!(s.name == p1.rule_name) || !(s.attr_term == attr_term_of(p1.head))) continue;
          for (size_t k = 0; k < ws->size(); ++k) {
            const auto& m = (*ws)[k].model;
            if (tau_.sat_body(m, s.body, sig) && tau_.sat_body(m, p1.body, sig) &&
                tau_.sat_body(m, p2.body, sig)) {
              out.push_back({2,
                             "pr-atoms " + p1.str() + " and " + p2.str() +
                                 " both apply in a possible world",
                             static_cast<int>(k)});
              j = ground_.pr_atoms.size();  // one witness per pair is enough
              break;
            }
          }
          if (j == ground_.pr_atoms.size()) break;
        }
      }
    }
    // Condition 3: probabilities only for values inside the dynamic range
    for (const auto& pr : ground_.pr_atoms) {
      for (const auto& s : ground_.selections) {
        if (!(s.name == pr.rule_name) || !(s.attr_term == attr_term_of(pr.head))) continue;
        if (!s.range_pred) continue;
        const AttrDecl& pd = sig.attr(*s.range_pred);
        for (size_t k = 0; k < ws->size(); ++k) {
          const auto& m = (*ws)[k].model;
          if (!tau_.sat_body(m, s.body, sig) || !tau_.sat_body(m, pr.body, sig)) continue;
          if (tau_.has_intervene(m, s.attr_term)) continue;
          bool in_range = sig.sort_has(pd.param_sorts[0], pr.head.value) &&
                          tau_.sat_lit(m,
                                       GroundLiteral{false, GroundAtom{*s.range_pred,
                                                                       {pr.head.value},
                                                                       term_true()}},
                                       sig);
          if (!in_range) {
            out.push_back({3,
                           "pr-atom " + pr.str() + " assigns probability outside the dynamic "
                                                   "range of " +
                               s.display_name() + " in a possible world",
                           static_cast<int>(k)});
            break;
          }
        }
      }
    }
  }
  violations_ = std::move(out);
  return *violations_;
}

const WorldTable& Engine::table() {
  if (table_) return *table_;
  const auto& ws = worlds();
  const auto& viol = condition_violations();
  if (!viol.empty()) {
    std::string msg = "program violates Condition " + std::to_string(viol[0].condition) + ": " +
                      viol[0].message;
    fail(ErrorCode::ConditionViolation, msg);
  }
  WorldTable t;
  t.total = Rational(0);
  for (const auto& w : ws) {
    Rational m(1);
    for (const auto& [atom, info] : w.possible) {
      auto kl = tau_.atom_lit(attr_term_of(atom), atom.value, ground_.sig);
      if (kl && asp::model_contains(w.model, *kl)) m *= info.prob;
    }
    t.mu_hat.push_back(m);
    t.total += m;
  }
  if (t.total.is_zero())
    fail(ErrorCode::ProbabilityUndefined,
         "no possible world has nonzero unnormalized probability");
  for (const auto& m : t.mu_hat) t.mu.push_back(m / t.total);
  table_ = std::move(t);
  return *table_;
}

Rational Engine::causal_probability(size_t world, const GroundAtom& atom) {
  const auto& ws = worlds();
  if (world >= ws.size()) fail(ErrorCode::Internal, "world index out of range");
  auto it = ws[world].possible.find(atom);
  if (it == ws[world].possible.end())
    fail(ErrorCode::Internal, "atom " + atom.str() + " is not possible in world " +
                                  std::to_string(world));
  return it->second.prob;
}

TruthValue Engine::truth(const PossibleWorld& w, const GroundFormula& f) const {
  if (f.verum) return TruthValue::Satisfied;
  switch (f.kind) {
    case Formula::Kind::Lit: {
      const auto& e = f.lit;
      bool holds = tau_.sat_lit(w.model, e.lit, ground_.sig);
      if (!e.default_neg) {
        if (holds) return TruthValue::Satisfied;
        GroundLiteral contrary{!e.lit.neg, e.lit.atom};
        if (tau_.sat_lit(w.model, contrary, ground_.sig)) return TruthValue::Falsified;
        return TruthValue::Undefined;
      }
      // not l: satisfied iff l not in W, falsified iff l in W
      return holds ? TruthValue::Falsified : TruthValue::Satisfied;
    }
    case Formula::Kind::And: {
      TruthValue a = truth(w, *f.lhs), b = truth(w, *f.rhs);
      if (a == TruthValue::Satisfied && b == TruthValue::Satisfied) return TruthValue::Satisfied;
      if (a == TruthValue::Falsified || b == TruthValue::Falsified) return TruthValue::Falsified;
      return TruthValue::Undefined;
    }
    case Formula::Kind::Or: {
      TruthValue a = truth(w, *f.lhs), b = truth(w, *f.rhs);
      if (a == TruthValue::Satisfied || b == TruthValue::Satisfied) return TruthValue::Satisfied;
      if (a == TruthValue::Falsified && b == TruthValue::Falsified) return TruthValue::Falsified;
      return TruthValue::Undefined;
    }
  }
  return TruthValue::Undefined;
}

Rational Engine::prob(const GroundFormula& f) {
  const auto& t = table();
  const auto& ws = *worlds_;
  Rational sum(0);
  for (size_t i = 0; i < ws.size(); ++i)
    if (truth(ws[i], f) == TruthValue::Satisfied) sum += t.mu[i];
  return sum;
}

Rational Engine::prob_text(const std::string& formula_text) {
  DeclEnv env = decl_env();
  Formula f = parse_formula_text(formula_text, env);
  return prob(ground_formula(f, ground_.sig));
}

}  // namespace plog
