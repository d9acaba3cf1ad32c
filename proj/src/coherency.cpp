#include "coherency.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "errors.hpp"
#include "updates.hpp"

namespace plog {

// --- dependency relations ----------------------------------------------------

bool DependencyGraph::depends(const AttrTerm& a, const AttrTerm& b) const {
  auto it = reach.find(a);
  return it != reach.end() && it->second.count(b) > 0;
}

namespace {

GroundLiteral normalize_lit(const Signature& sig, const GroundLiteral& l) {
  if (sig.is_boolean(l.atom.attr) && l.atom.value == term_false()) {
    GroundAtom a = l.atom;
    a.value = term_true();
    return GroundLiteral{!l.neg, a};
  }
  return l;
}

}  // namespace

Dependencies::Dependencies(const GroundProgram& gp) : gp_(&gp) {
  const Signature& sig = gp.sig;

  // occurring attribute terms, including pr-atom heads and bodies
  std::set<AttrTerm> occ;
  auto note = [&](const GroundLiteral& l) { occ.insert(attr_term_of(l.atom)); };
  for (const auto& r : gp.rules) {
    if (r.head) note(*r.head);
    for (const auto& e : r.body) note(e.lit);
  }
  for (const auto& s : gp.selections) {
    occ.insert(s.attr_term);
    for (const auto& e : s.body) note(e.lit);
    if (s.range_pred) {
      const AttrDecl& pd = sig.attr(*s.range_pred);
      for (const Term& y : sig.range_of(s.attr_term.attr))
        if (sig.sort_has(pd.param_sorts[0], y)) occ.insert(AttrTerm{*s.range_pred, {y}});
    }
  }
  for (const auto& q : gp.pr_atoms) {
    occ.insert(attr_term_of(q.head));
    for (const auto& e : q.body) note(e.lit);
  }
  for (const auto& o : gp.observations) note(o.lit);
  for (const auto& d : gp.actions) occ.insert(attr_term_of(d.atom));

  graph_.terms.assign(occ.begin(), occ.end());

  // literal universe: both polarities of every value of every occurring term
  for (const AttrTerm& at : graph_.terms) {
    bool boolean = sig.is_boolean(at.attr);
    const auto& values = boolean ? std::vector<Term>{term_true()} : sig.range_of(at.attr);
    for (const Term& y : values) {
      for (bool neg : {false, true}) {
        GroundLiteral l{neg, GroundAtom{at.attr, at.args, y}};
        lit_index_[l.str()] = lits_.size();
        lits_.push_back(l);
      }
    }
  }
  edges_.resize(lits_.size());

  auto head_to_body = [&](const GroundLiteral& head,
                          const std::vector<GroundLiteral>& body) {
    size_t h = lit_id(head);
    for (const auto& b : body) edges_[h].insert(lit_id(b));
  };

  for (const auto& r : gp.rules) {
    if (!r.head) continue;
    std::vector<GroundLiteral> body;
    for (const auto& e : r.body) body.push_back(e.lit);
    head_to_body(*r.head, body);
  }
  for (const auto& s : gp.selections) {
    std::vector<GroundLiteral> body;
    for (const auto& e : s.body) body.push_back(e.lit);
    if (s.range_pred) {
      const AttrDecl& pd = sig.attr(*s.range_pred);
      for (const Term& y : sig.range_of(s.attr_term.attr))
        if (sig.sort_has(pd.param_sorts[0], y))
          body.push_back(GroundLiteral{false, GroundAtom{*s.range_pred, {y}, term_true()}});
    }
    bool boolean = sig.is_boolean(s.attr_term.attr);
    const auto& values = boolean ? boolean_values() : sig.range_of(s.attr_term.attr);
    for (const Term& y : values)
      head_to_body(GroundLiteral{false, GroundAtom{s.attr_term.attr, s.attr_term.args, y}},
                   body);
  }
  for (const auto& q : gp.pr_atoms) {
    std::vector<GroundLiteral> body;
    for (const auto& e : q.body) body.push_back(e.lit);
    head_to_body(GroundLiteral{false, q.head}, body);
  }

  // reflexive-transitive closure onto attribute terms, by fixpoint
  reach_.assign(lits_.size(), {});
  for (size_t i = 0; i < lits_.size(); ++i)
    reach_[i].insert(attr_term_of(lits_[i].atom));
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < lits_.size(); ++i)
      for (size_t j : edges_[i])
        for (const AttrTerm& t : reach_[j])
          if (reach_[i].insert(t).second) changed = true;
  }

  for (size_t i = 0; i < lits_.size(); ++i) {
    AttrTerm from = attr_term_of(lits_[i].atom);
    for (size_t j : edges_[i]) graph_.imm[from].insert(attr_term_of(lits_[j].atom));
    graph_.reach[from].insert(reach_[i].begin(), reach_[i].end());
  }
  for (const AttrTerm& t : graph_.terms) graph_.reach[t].insert(t);
}

size_t Dependencies::lit_id(const GroundLiteral& l) const {
  GroundLiteral n = normalize_lit(gp_->sig, l);
  auto it = lit_index_.find(n.str());
  if (it == lit_index_.end()) fail(ErrorCode::Internal, "literal outside universe: " + n.str());
  return it->second;
}

const std::set<AttrTerm>& Dependencies::literal_reach(const GroundLiteral& l) const {
  return reach_[lit_id(l)];
}

std::set<AttrTerm> Dependencies::term_reach(const AttrTerm& at) const {
  auto it = graph_.reach.find(at);
  if (it == graph_.reach.end()) return {at};
  return it->second;
}

std::vector<GroundLiteral> Dependencies::statement_literals(const GSelection& s) const {
  const Signature& sig = gp_->sig;
  std::vector<GroundLiteral> out;
  bool boolean = sig.is_boolean(s.attr_term.attr);
  const auto& values = boolean ? boolean_values() : sig.range_of(s.attr_term.attr);
  for (const Term& y : values)
    out.push_back(GroundLiteral{false, GroundAtom{s.attr_term.attr, s.attr_term.args, y}});
  if (s.range_pred) {
    const AttrDecl& pd = sig.attr(*s.range_pred);
    for (const Term& y : sig.range_of(s.attr_term.attr))
      if (sig.sort_has(pd.param_sorts[0], y))
        out.push_back(GroundLiteral{false, GroundAtom{*s.range_pred, {y}, term_true()}});
  }
  for (const auto& e : s.body) out.push_back(e.lit);
  return out;
}

// --- levelings -----------------------------------------------------------------

LevelingResult find_leveling(const GroundProgram& gp, const Dependencies& deps) {
  std::vector<AttrTerm> random_terms;
  {
    std::set<AttrTerm> r;
    for (const auto& s : gp.selections) r.insert(s.attr_term);
    random_terms.assign(r.begin(), r.end());
  }
  std::set<AttrTerm> random_set(random_terms.begin(), random_terms.end());

  // precedence: every random term reachable from a selection's body or
  // dynamic-range atoms (or a pr-atom's body) must rank strictly below the
  // rule's own attribute term
  std::map<AttrTerm, std::set<AttrTerm>> before;  // A -> {R : R must precede A}
  auto add_sources = [&](const AttrTerm& a, const std::vector<GroundLiteral>& sources) {
    for (const auto& l : sources)
      for (const AttrTerm& t : deps.literal_reach(l))
        if (random_set.count(t) && !(t == a)) before[a].insert(t);
  };
  for (const auto& s : gp.selections) {
    std::vector<GroundLiteral> sources;
    for (const auto& e : s.body) sources.push_back(e.lit);
    if (s.range_pred) {
      const AttrDecl& pd = gp.sig.attr(*s.range_pred);
      for (const Term& y : gp.sig.range_of(s.attr_term.attr))
        if (gp.sig.sort_has(pd.param_sorts[0], y))
          sources.push_back(GroundLiteral{false, GroundAtom{*s.range_pred, {y}, term_true()}});
    }
    add_sources(s.attr_term, sources);
  }
  for (const auto& q : gp.pr_atoms) {
    std::vector<GroundLiteral> sources;
    for (const auto& e : q.body) sources.push_back(e.lit);
    add_sources(attr_term_of(q.head), sources);
  }

  // stable topological order (lexicographic among the ready terms)
  Leveling lev;
  std::set<AttrTerm> placed;
  while (placed.size() < random_terms.size()) {
    bool advanced = false;
    for (const AttrTerm& a : random_terms) {
      if (placed.count(a)) continue;
      bool ready = true;
      for (const AttrTerm& b : before[a])
        if (!placed.count(b)) ready = false;
      if (!ready) continue;
      lev.rank[a] = static_cast<int>(lev.random_order.size());
      lev.random_order.push_back(a);
      placed.insert(a);
      advanced = true;
      break;
    }
    if (!advanced) {
      std::string cyc = "no strict probabilistic leveling: cyclic precedence among {";
      bool first = true;
      for (const AttrTerm& a : random_terms)
        if (!placed.count(a)) {
          if (!first) cyc += ", ";
          cyc += a.str();
          first = false;
        }
      cyc += "} (clauses 1-3 cannot all hold)";
      return LevelingResult{std::nullopt, cyc};
    }
  }

  // non-random terms: minimal rank satisfying clause 4
  for (const AttrTerm& t : deps.graph().terms) {
    if (random_set.count(t)) continue;
    int r = 0;
    for (const AttrTerm& d : deps.term_reach(t))
      if (random_set.count(d)) r = std::max(r, lev.rank.at(d));
    lev.rank[t] = r;
  }

  std::string bad = check_leveling_clauses(gp, deps, lev);
  if (!bad.empty()) return LevelingResult{std::nullopt, bad};
  return LevelingResult{lev, ""};
}

std::string check_leveling_clauses(const GroundProgram& gp, const Dependencies& deps,
                                   const Leveling& lev) {
  std::set<AttrTerm> random_set;
  for (const auto& s : gp.selections) random_set.insert(s.attr_term);

  auto rank_of = [&](const AttrTerm& t) -> int {
    auto it = lev.rank.find(t);
    return it == lev.rank.end() ? 0 : it->second;
  };

  // clause 1: distinct ranks for random attribute terms
  std::map<int, AttrTerm> seen;
  for (const AttrTerm& t : random_set) {
    auto [it, fresh] = seen.emplace(rank_of(t), t);
    if (!fresh)
      return "clause 1: random terms " + it->second.str() + " and " + t.str() +
             " share rank " + std::to_string(rank_of(t));
  }
  // clauses 2-3: a rule's attribute term ranks at least its conditions
  for (const auto& s : gp.selections) {
    int lhs = rank_of(s.attr_term);
    for (const auto& l : deps.statement_literals(s)) {
      AttrTerm t = attr_term_of(l.atom);
      if (t == s.attr_term) continue;
      if (rank_of(t) > lhs)
        return "clause 2: selection " + s.display_name() + " ranks below " + t.str();
    }
  }
  for (const auto& q : gp.pr_atoms) {
    int lhs = rank_of(attr_term_of(q.head));
    for (const auto& e : q.body)
      if (rank_of(attr_term_of(e.lit.atom)) > lhs)
        return "clause 3: pr-atom " + q.str() + " ranks below its body";
  }
  // clause 4: non-random terms rank at least the random terms they depend on
  for (const AttrTerm& t : deps.graph().terms) {
    if (random_set.count(t)) continue;
    for (const AttrTerm& d : deps.term_reach(t))
      if (random_set.count(d) && rank_of(t) < rank_of(d))
        return "clause 4: " + t.str() + " depends on " + d.str() + " but ranks below it";
  }
  return "";
}

// --- induced structure -----------------------------------------------------------

InducedStructure induced_structure(const GroundProgram& gp, const Dependencies& deps,
                                   const Leveling& lev) {
  InducedStructure st;
  st.random_order = lev.random_order;
  size_t n = st.random_order.size();

  auto lit_in_Li = [&](const GroundLiteral& l, size_t i) {
    // L_i: literals that do not depend on a_j for j >= i (1-based)
    const auto& reach = deps.literal_reach(l);
    for (size_t j = i - 1; j < n; ++j)
      if (reach.count(st.random_order[j])) return false;
    return true;
  };

  // ground statement ids: rules | selections | observations | actions
  struct Entry {
    std::vector<GroundLiteral> lits;
    Statement stmt;
  };
  std::vector<Entry> entries;
  for (const auto& r : gp.rules) {
    Entry e;
    if (r.head) e.lits.push_back(*r.head);
    for (const auto& b : r.body) e.lits.push_back(b.lit);
    e.stmt = to_statement(r);
    entries.push_back(std::move(e));
  }
  for (const auto& s : gp.selections)
    entries.push_back(Entry{deps.statement_literals(s), to_statement(s)});
  for (const auto& o : gp.observations) entries.push_back(Entry{{o.lit}, to_statement(o)});
  for (const auto& d : gp.actions)
    entries.push_back(Entry{{GroundLiteral{false, d.atom}}, to_statement(d)});

  for (size_t i = 1; i <= n + 1; ++i) {
    std::vector<int> ids;
    Program pi;
    pi.stmts = gp.declarations;
    for (size_t k = 0; k < entries.size(); ++k) {
      bool ok = true;
      for (const auto& l : entries[k].lits)
        if (!lit_in_Li(l, i)) ok = false;
      if (ok) {
        ids.push_back(static_cast<int>(k));
        pi.stmts.push_back(entries[k].stmt);
      }
    }
    st.stmt_indices.push_back(std::move(ids));
    st.programs.push_back(std::move(pi));
  }
  return st;
}

// --- causal order ------------------------------------------------------------------

namespace {

size_t world_count(const Program& p, GroundOptions opts = {}) {
  Engine e(p, opts);
  try {
    return e.worlds().size();
  } catch (const Error& err) {
    if (err.code() == ErrorCode::Inconsistent) return 0;
    throw;
  }
}

std::string world_str(Engine& e, const PossibleWorld& w) {
  std::string out = "{";
  bool first = true;
  for (const auto& l : e.tau().sigma_view(w.model, e.sig())) {
    if (!first) out += ", ";
    out += l.str();
    first = false;
  }
  return out + "}";
}

// Values possible in a world with respect to the next-level program, per the
// possible-outcome definition.
std::vector<Term> possible_values(Engine& level_engine, const PossibleWorld& w,
                                  const GroundProgram& gp, const AttrTerm& at,
                                  const std::vector<int>& next_stmts,
                                  const std::vector<const GSelection*>& sel_of_stmt) {
  const Signature& sig = gp.sig;
  std::vector<Term> out;
  for (int sid : next_stmts) {
    const GSelection* s = sel_of_stmt[sid];
    if (!s || !(s->attr_term == at)) continue;
    if (!level_engine.tau().sat_body(w.model, s->body, sig)) continue;
    bool boolean = sig.is_boolean(at.attr);
    const auto& range = boolean ? boolean_values() : sig.range_of(at.attr);
    for (const Term& y : range) {
      if (s->range_pred) {
        const AttrDecl& pd = sig.attr(*s->range_pred);
        if (!sig.sort_has(pd.param_sorts[0], y)) continue;
        GroundLiteral py{false, GroundAtom{*s->range_pred, {y}, term_true()}};
        if (!level_engine.tau().sat_lit(w.model, py, sig)) continue;
      }
      if (std::find(out.begin(), out.end(), y) == out.end()) out.push_back(y);
    }
  }
  return out;
}

Program with_world_facts(const Program& base, Engine& e, const PossibleWorld& w) {
  Program out = base;
  for (const auto& l : e.tau().sigma_view(w.model, e.sig()))
    out.stmts.push_back(RegularRule{to_literal_expr(l), {}});
  return out;
}

}  // namespace

CausalOrderResult is_causally_ordered(const GroundProgram& gp, const InducedStructure& st) {
  size_t n = st.random_order.size();

  // map global statement ids to selections for the possible-value scan
  std::vector<const GSelection*> sel_of_stmt;
  for (size_t i = 0; i < gp.rules.size(); ++i) sel_of_stmt.push_back(nullptr);
  for (const auto& s : gp.selections) sel_of_stmt.push_back(&s);
  for (size_t i = 0; i < gp.observations.size() + gp.actions.size(); ++i)
    sel_of_stmt.push_back(nullptr);

  if (world_count(st.programs[0]) != 1)
    return {false, 1, "the bottom program has " +
                          std::to_string(world_count(st.programs[0])) +
                          " possible worlds (exactly one required)"};

  for (size_t i = 0; i < n; ++i) {
    const AttrTerm& a = st.random_order[i];
    Engine level(st.programs[i]);
    std::vector<const PossibleWorld*> ws;
    try {
      for (const auto& w : level.worlds()) ws.push_back(&w);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::Inconsistent) throw;
    }
    std::vector<std::pair<const PossibleWorld*, std::vector<Term>>> active;
    for (const PossibleWorld* w : ws) {
      std::vector<Term> values =
          possible_values(level, *w, gp, a, st.stmt_indices[i + 1], sel_of_stmt);
      if (values.empty()) {
        size_t c = world_count(with_world_facts(st.programs[i + 1], level, *w));
        if (c != 1)
          return {false, 3,
                  a.str() + " is inactive in " + world_str(level, *w) + " yet the extension has " +
                      std::to_string(c) + " possible worlds"};
        continue;
      }
      active.push_back({w, std::move(values)});
    }
    for (const auto& [w, values] : active) {
      for (const Term& y : values) {
        Program ext = with_world_facts(st.programs[i + 1], level, *w);
        ext.stmts.push_back(
            Observation{to_literal_expr(GroundLiteral{false, GroundAtom{a.attr, a.args, y}})});
        size_t c = world_count(ext);
        if (c != 1)
          return {false, 2,
                  "outcome " + GroundAtom{a.attr, a.args, y}.str() + " of world " +
                      world_str(level, *w) + " leads to " + std::to_string(c) +
                      " possible worlds (exactly one required)"};
      }
    }
  }
  return {true, 0, ""};
}

// --- scenarios and unitary rules ------------------------------------------------------

std::vector<Scenario> scenarios(Engine& engine, size_t selection_index) {
  const GroundProgram& gp = engine.ground();
  const Signature& sig = gp.sig;
  const GSelection& s = gp.selections[selection_index];
  std::vector<size_t> indexing;  // pr-atoms indexing this rule name
  for (size_t i = 0; i < gp.pr_atoms.size(); ++i)
    if (gp.pr_atoms[i].rule_name == s.name && attr_term_of(gp.pr_atoms[i].head) == s.attr_term)
      indexing.push_back(i);

  bool boolean = sig.is_boolean(s.attr_term.attr);
  const auto& range = boolean ? boolean_values() : sig.range_of(s.attr_term.attr);

  std::map<std::string, Scenario> buckets;
  const auto& ws = engine.worlds();
  for (size_t wi = 0; wi < ws.size(); ++wi) {
    const auto& m = ws[wi].model;
    if (!engine.tau().sat_body(m, s.body, sig)) continue;  // premise K
    std::string key;
    std::vector<Term> vals;
    for (const Term& y : range) {
      bool in;
      if (s.range_pred) {
        const AttrDecl& pd = sig.attr(*s.range_pred);
        in = sig.sort_has(pd.param_sorts[0], y) &&
             engine.tau().sat_lit(m, GroundLiteral{false, GroundAtom{*s.range_pred, {y}, term_true()}},
                                  sig);
      } else {
        in = true;
      }
      key += in ? '1' : '0';
      if (in) vals.push_back(y);
    }
    key += '|';
    std::vector<size_t> active;
    for (size_t qi : indexing) {
      bool sat = engine.tau().sat_body(m, gp.pr_atoms[qi].body, sig);
      key += sat ? '1' : '0';
      if (sat) active.push_back(qi);
    }
    auto [it, fresh] = buckets.emplace(key, Scenario{});
    if (fresh) {
      it->second.selection = selection_index;
      it->second.range = std::move(vals);
      it->second.active_pr = std::move(active);
    }
    it->second.worlds.push_back(wi);
  }
  std::vector<Scenario> out;
  for (auto& [k, sc] : buckets) out.push_back(std::move(sc));
  return out;
}

UnitaryResult is_unitary(Engine& engine) {
  const GroundProgram& gp = engine.ground();
  UnitaryResult res;
  res.unitary = true;
  for (size_t si = 0; si < gp.selections.size(); ++si) {
    for (Scenario& sc : scenarios(engine, si)) {
      ScenarioVerdict v;
      v.sum = Rational(0);
      std::set<std::string> covered;
      for (size_t qi : sc.active_pr) {
        v.sum += gp.pr_atoms[qi].value;
        covered.insert(gp.pr_atoms[qi].head.value.str());
      }
      bool full = true;
      for (const Term& y : sc.range)
        if (!covered.count(y.str())) full = false;
      if (full && v.sum == Rational(1))
        v.clause = 1;
      else if (!full && v.sum <= Rational(1))
        v.clause = 2;
      else
        v.clause = 0;
      if (v.clause == 0) res.unitary = false;
      v.scenario = std::move(sc);
      res.report.push_back(std::move(v));
    }
  }
  return res;
}

// --- semantic coherency ------------------------------------------------------------------

Program strip_observations_actions(const Program& p) {
  Program out;
  for (const auto& s : p.stmts)
    if (!std::holds_alternative<Observation>(s) && !std::holds_alternative<DoAction>(s))
      out.stmts.push_back(s);
  return out;
}

SemanticCoherency semantic_coherency(const Program& p, GroundOptions opts) {
  SemanticCoherency out;
  Engine full(p, opts);
  out.consistent = full.is_consistent();
  if (out.consistent) {
    try {
      full.table();
      out.measure_defined = true;
    } catch (const Error& e) {
      out.measure_defined = false;
      out.measure_note = e.what();
    }
  } else {
    out.measure_note = "the program has no possible worlds";
  }

  Program core = strip_observations_actions(p);
  Engine prime(core, opts);
  const GroundProgram& gp = prime.ground();

  bool any_fail = false;
  for (const auto& s : gp.selections) {
    for (const auto& q : gp.pr_atoms) {
      if (!(q.rule_name == s.name) || !(attr_term_of(q.head) == s.attr_term)) continue;
      PrCheck chk;
      chk.pr_atom = q.str() + " via " + s.display_name();
      std::vector<GroundExtLit> bk = q.body;
      bk.insert(bk.end(), s.body.begin(), s.body.end());
      bool has_not = false;
      for (const auto& e : bk)
        if (e.default_neg) has_not = true;
      if (has_not) {
        chk.status = "uncheckable";
        chk.detail = "premise or body contains default negation, which obs cannot express";
        out.has_uncheckable = true;
        out.checks.push_back(std::move(chk));
        continue;
      }
      Rational pbk;
      try {
        pbk = prime.prob(formula_conj(bk));
      } catch (const Error& e) {
        chk.status = "uncheckable";
        chk.detail = std::string("core program: ") + e.what();
        out.has_uncheckable = true;
        out.checks.push_back(std::move(chk));
        continue;
      }
      if (pbk.is_zero()) {
        chk.status = "inapplicable";
        chk.detail = "P(body and premise) = 0";
        out.checks.push_back(std::move(chk));
        continue;
      }
      std::vector<GroundLiteral> obs;
      for (const auto& e : bk) obs.push_back(e.lit);
      Rational got;
      try {
        got = conditional_prob(core, formula_lit(GroundLiteral{false, q.head}), obs, opts);
      } catch (const Error& e) {
        chk.status = "fails";
        chk.detail = std::string("conditional undefined: ") + e.what();
        any_fail = true;
        out.checks.push_back(std::move(chk));
        continue;
      }
      if (got == q.value) {
        chk.status = "holds";
      } else {
        chk.status = "fails";
        chk.detail = "conditional probability is " + got.str() + ", pr-atom says " +
                     q.value.str();
        any_fail = true;
      }
      out.checks.push_back(std::move(chk));
    }
  }
  out.coherent = out.consistent && out.measure_defined && !any_fail;
  return out;
}

// --- tableaux ---------------------------------------------------------------------------

namespace {

// Compatibility and guarantee queries against one level program's worlds.
class LevelOracle {
 public:
  explicit LevelOracle(const Program& p, GroundOptions opts) : engine_(p, opts) {
    try {
      for (const auto& w : engine_.worlds()) models_.push_back(&w);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Inconsistent) throw;
    }
  }

  bool holds(const PossibleWorld& w, const GroundAtom& a) const {
    return engine_.tau().sat_lit(w.model, GroundLiteral{false, a}, engine_.sig());
  }

  bool path_in(const PossibleWorld& w, const std::vector<GroundAtom>& path) const {
    for (const auto& a : path)
      if (!holds(w, a)) return false;
    return true;
  }

  bool compatible(const std::vector<GroundAtom>& path, const GroundAtom& extra) const {
    for (const auto* w : models_)
      if (path_in(*w, path) && holds(*w, extra)) return true;
    return false;
  }

  bool compatible_body(const std::vector<GroundAtom>& path,
                       const std::vector<GroundExtLit>& body) const {
    for (const auto* w : models_)
      if (path_in(*w, path) && engine_.tau().sat_body(w->model, body, engine_.sig()))
        return true;
    return false;
  }

  // path guarantees body: compatible, and every world containing the path
  // satisfies it
  bool guarantees(const std::vector<GroundAtom>& path,
                  const std::vector<GroundExtLit>& body) const {
    bool any = false;
    for (const auto* w : models_) {
      if (!path_in(*w, path)) continue;
      if (!engine_.tau().sat_body(w->model, body, engine_.sig())) return false;
      any = true;
    }
    return any;
  }


 private:
  Engine engine_;
  std::vector<const PossibleWorld*> models_;
};

}  // namespace

Rational Tableau::leaf_sum(int node) const {
  const TableauNode& n = nodes[node];
  if (n.children.empty()) return n.path_value;
  Rational sum(0);
  for (int c : n.children) sum += leaf_sum(c);
  return sum;
}

std::string Tableau::text() const {
  std::string out;
  std::function<void(int, int)> rec = [&](int id, int depth) {
    const TableauNode& n = nodes[id];
    out += std::string(static_cast<size_t>(depth) * 2, ' ');
    if (!n.label)
      out += "true";
    else
      out += n.label->str() + "  [" + n.arc.str() + "]";
    out += "  pv=" + n.path_value.str() + "\n";
    for (int c : n.children) rec(c, depth + 1);
  };
  rec(0, 0);
  return out;
}

std::string Tableau::dot() const {
  std::string out = "digraph tableau {\n  node [shape=box];\n";
  for (size_t i = 0; i < nodes.size(); ++i) {
    const TableauNode& n = nodes[i];
    out += "  n" + std::to_string(i) + " [label=\"" +
           (n.label ? n.label->str() : std::string("true")) + "\"];\n";
    if (n.parent >= 0)
      out += "  n" + std::to_string(n.parent) + " -> n" + std::to_string(i) + " [label=\"" +
             n.arc.str() + "\"];\n";
  }
  out += "}\n";
  return out;
}

Tableau build_tableau(const GroundProgram& gp, const InducedStructure& st, GroundOptions opts) {
  const Signature& sig = gp.sig;
  size_t n = st.random_order.size();

  // arc labels are causal probabilities in the full program's worlds
  Engine full(gp.to_program(), opts);
  auto full_arc = [&](const std::vector<GroundAtom>& path, const GroundAtom& atom) {
    for (const auto& w : full.worlds()) {
      bool all = full.tau().sat_lit(w.model, GroundLiteral{false, atom}, sig);
      for (const auto& a : path)
        if (all && !full.tau().sat_lit(w.model, GroundLiteral{false, a}, sig)) all = false;
      if (!all) continue;
      auto it = w.possible.find(atom);
      if (it == w.possible.end())
        fail(ErrorCode::Internal, "tableau: branch value is not a possible outcome");
      return it->second.prob;
    }
    fail(ErrorCode::Internal, "tableau: no world extends the branch " + atom.str());
  };

  Tableau t;
  t.nodes.push_back(TableauNode{-1, std::nullopt, Rational(1), Rational(1), {}});
  std::vector<int> frontier{0};
  std::vector<std::vector<GroundAtom>> paths{{}};

  for (size_t i = 0; i < n; ++i) {
    const AttrTerm& a = st.random_order[i];
    LevelOracle oracle(st.programs[i + 1], opts);

    // selection instances for a in the level program
    std::vector<const GSelection*> sels;
    for (const auto& s : gp.selections)
      if (s.attr_term == a) sels.push_back(&s);

    std::vector<int> next_frontier;
    std::vector<std::vector<GroundAtom>> next_paths;
    for (size_t fi = 0; fi < frontier.size(); ++fi) {
      int node = frontier[fi];
      const std::vector<GroundAtom>& path = paths[fi];

      const GSelection* via = nullptr;
      for (const GSelection* s : sels) {
        // ready to branch on a via s: the path guarantees the premise, decides
        // every indexing pr-atom body, and decides the dynamic range
        if (!oracle.guarantees(path, s->body)) continue;
        bool ok = true;
        for (const auto& q : gp.pr_atoms) {
          if (!(q.rule_name == s->name) || !(attr_term_of(q.head) == a)) continue;
          if (!oracle.guarantees(path, q.body) && oracle.compatible_body(path, q.body)) {
            ok = false;
            break;
          }
        }
        if (ok && s->range_pred) {
          const AttrDecl& pd = sig.attr(*s->range_pred);
          bool some = false;
          for (const Term& y : sig.range_of(a.attr)) {
            if (!sig.sort_has(pd.param_sorts[0], y)) continue;
            std::vector<GroundExtLit> py{
                GroundExtLit{false, GroundLiteral{false, GroundAtom{*s->range_pred, {y}, term_true()}}}};
            bool g = oracle.guarantees(path, py);
            if (g) some = true;
            if (!g && oracle.compatible_body(path, py)) {
              ok = false;
              break;
            }
          }
          if (ok && !some) ok = false;
        }
        if (ok) {
          via = s;
          break;
        }
      }

      if (!via) {  // not ready on this attribute; the leaf carries over
        next_frontier.push_back(node);
        next_paths.push_back(path);
        continue;
      }

      bool boolean = sig.is_boolean(a.attr);
      const auto& range = boolean ? boolean_values() : sig.range_of(a.attr);
      for (const Term& y : range) {
        GroundAtom atom{a.attr, a.args, y};
        if (!oracle.compatible(path, atom)) continue;
        std::vector<GroundAtom> child_path = path;
        child_path.push_back(atom);
        Rational arc = full_arc(path, atom);
        TableauNode child;
        child.parent = node;
        child.label = atom;
        child.arc = arc;
        child.path_value = t.nodes[node].path_value * arc;
        int id = static_cast<int>(t.nodes.size());
        t.nodes[node].children.push_back(id);
        t.nodes.push_back(std::move(child));
        next_frontier.push_back(id);
        next_paths.push_back(std::move(child_path));
      }
    }
    frontier = std::move(next_frontier);
    paths = std::move(next_paths);
  }

  for (size_t i = 0; i < t.nodes.size(); ++i)
    if (t.nodes[i].children.empty()) t.leaves.push_back(static_cast<int>(i));
  return t;
}

std::vector<std::pair<std::vector<GroundAtom>, Rational>> tableau_leaf_paths(const Tableau& t) {
  std::vector<std::pair<std::vector<GroundAtom>, Rational>> out;
  for (int leaf : t.leaves) {
    std::vector<GroundAtom> path;
    for (int cur = leaf; cur >= 0; cur = t.nodes[cur].parent)
      if (t.nodes[cur].label) path.push_back(*t.nodes[cur].label);
    std::reverse(path.begin(), path.end());
    out.push_back({std::move(path), t.nodes[leaf].path_value});
  }
  return out;
}

// --- the verdict ------------------------------------------------------------------------

CoherencyReport coherency_verdict(const Program& p, GroundOptions opts) {
  CoherencyReport rep;
  Program core = strip_observations_actions(p);
  GroundProgram gp = ground_program(core, opts);
  Dependencies deps(gp);
  rep.leveling = find_leveling(gp, deps);

  bool theorem = false;
  if (rep.leveling.leveling) {
    InducedStructure st = induced_structure(gp, deps, *rep.leveling.leveling);
    rep.ordered = is_causally_ordered(gp, st);
    if (rep.ordered->ordered) {
      Engine core_engine(core, opts);
      rep.unitary = is_unitary(core_engine);
      theorem = rep.unitary->unitary;
    }
  }

  if (theorem) {
    // the theorem concludes coherency for the program as given, provided it is
    // consistent with a defined measure
    try {
      Engine full(p, opts);
      full.table();
      rep.verdict = CoherencyVerdict::CoherentByTheorem;
      rep.summary = "coherent: causally ordered and unitary";
      return rep;
    } catch (const Error& e) {
      rep.verdict = CoherencyVerdict::IncoherentWitness;
      rep.summary = std::string("incoherent: ") + e.what();
      return rep;
    }
  }

  rep.semantic = semantic_coherency(p, opts);
  rep.semantic_ran = true;
  if (!rep.semantic.consistent || !rep.semantic.measure_defined) {
    rep.verdict = CoherencyVerdict::IncoherentWitness;
    rep.summary = "incoherent: " + rep.semantic.measure_note;
    return rep;
  }
  for (const auto& c : rep.semantic.checks) {
    if (c.status == "fails") {
      rep.verdict = CoherencyVerdict::IncoherentWitness;
      rep.summary = "incoherent: " + c.pr_atom + " (" + c.detail + ")";
      return rep;
    }
  }
  rep.verdict = CoherencyVerdict::Unknown;
  rep.summary = rep.semantic.has_uncheckable
                    ? "unknown: sufficiency conditions fail and some pr-atoms are uncheckable"
                    : "unknown: sufficiency conditions fail, but every pr-atom passes the "
                      "semantic check";
  return rep;
}

}  // namespace plog
