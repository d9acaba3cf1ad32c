#include "translate.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "errors.hpp"

namespace plog {

int TauAtom::cmp(const TauAtom& o) const {
  if (kind != o.kind) return kind < o.kind ? -1 : 1;
  if (int c = sort.compare(o.sort)) return c < 0 ? -1 : 1;
  if (int c = sort_member.cmp(o.sort_member)) return c;
  if (int c = at.cmp(o.at)) return c;
  if (int c = value.cmp(o.value)) return c;
  if (obs_neg != o.obs_neg) return obs_neg ? 1 : -1;
  return 0;
}

std::string TauAtom::render() const {
  switch (kind) {
    case Kind::SortFact:
      return sort + "(" + sort_member.str() + ")";
    case Kind::Attr: {
      if (value == term_true() && at.args.empty()) return at.attr;
      if (value == term_true()) return at.str();
      std::string out = at.attr + "(";
      for (const auto& a : at.args) out += a.str() + ",";
      out += value.str() + ")";
      return out;
    }
    case Kind::Intervene:
      return "intervene(" + at.str() + ")";
    case Kind::Obs: {
      TauAtom inner{Kind::Attr, "", {}, at, value, false};
      return "obs(" + std::string(obs_neg ? "-" : "") + inner.render() + ")";
    }
    case Kind::Do: {
      if (value == term_false()) {
        TauAtom inner{Kind::Attr, "", {}, at, term_true(), false};
        return "do(-" + inner.render() + ")";
      }
      TauAtom inner{Kind::Attr, "", {}, at, value, false};
      return "do(" + inner.render() + ")";
    }
  }
  return "?";
}

namespace {

// Normalized Sigma-literal: booleans collapse onto the single relational atom.
struct NormLit {
  bool neg;
  AttrTerm at;
  Term value;  // term_true() for booleans
};

NormLit normalize(const Signature& sig, const GroundLiteral& l) {
  AttrTerm at = attr_term_of(l.atom);
  if (sig.is_boolean(l.atom.attr)) {
    bool val_false = l.atom.value == term_false();
    return NormLit{l.neg != val_false, std::move(at), term_true()};
  }
  return NormLit{l.neg, std::move(at), l.atom.value};
}

}  // namespace

std::optional<asp::Lit> TauOutput::atom_lit(const AttrTerm& at, const Term& value,
                                            const Signature& sig) const {
  bool boolean = sig.is_boolean(at.attr);
  Term key = boolean ? term_true() : value;
  auto it1 = attr_index_.find(at.attr);
  if (it1 == attr_index_.end()) return std::nullopt;
  auto it2 = it1->second.find(at.args);
  if (it2 == it1->second.end()) return std::nullopt;
  auto it3 = it2->second.find(key);
  if (it3 == it2->second.end()) return std::nullopt;
  asp::Lit l = asp::pos_lit(it3->second);
  if (boolean && value == term_false()) l = asp::contrary(l);
  return l;
}

std::optional<asp::Lit> TauOutput::lit_of(const GroundLiteral& l, const Signature& sig) const {
  NormLit n = normalize(sig, l);
  auto base = atom_lit(n.at, n.value, sig);
  if (!base) return std::nullopt;
  return n.neg ? asp::contrary(*base) : *base;
}

bool TauOutput::sat_lit(const asp::Model& m, const GroundLiteral& l, const Signature& sig) const {
  auto kl = lit_of(l, sig);
  return kl && asp::model_contains(m, *kl);
}

bool TauOutput::sat_ext_lit(const asp::Model& m, const GroundExtLit& e,
                            const Signature& sig) const {
  bool in = sat_lit(m, e.lit, sig);
  return e.default_neg ? !in : in;
}

bool TauOutput::sat_body(const asp::Model& m, const std::vector<GroundExtLit>& body,
                         const Signature& sig) const {
  for (const auto& e : body)
    if (!sat_ext_lit(m, e, sig)) return false;
  return true;
}

bool TauOutput::has_intervene(const asp::Model& m, const AttrTerm& at) const {
  auto it = intervene_ids.find(at);
  if (it == intervene_ids.end()) return false;
  return asp::model_contains(m, asp::pos_lit(it->second));
}

std::optional<Term> TauOutput::value_in(const asp::Model& m, const AttrTerm& at,
                                        const Signature& sig) const {
  if (sig.is_boolean(at.attr)) {
    auto l = atom_lit(at, term_true(), sig);
    if (!l) return std::nullopt;
    if (asp::model_contains(m, *l)) return term_true();
    if (asp::model_contains(m, asp::contrary(*l))) return term_false();
    return std::nullopt;
  }
  for (const Term& y : sig.range_of(at.attr)) {
    auto l = atom_lit(at, y, sig);
    if (l && asp::model_contains(m, *l)) return y;
  }
  return std::nullopt;
}

std::vector<GroundLiteral> TauOutput::sigma_view(const asp::Model& m, const Signature& sig) const {
  std::vector<GroundLiteral> out;
  for (const AttrTerm& at : attr_terms) {
    auto v = value_in(m, at, sig);
    if (v) {
      out.push_back(GroundLiteral{false, GroundAtom{at.attr, at.args, *v}});
      continue;
    }
    // no value: report explicit negative knowledge only
    if (sig.is_boolean(at.attr)) continue;  // handled above (neither a nor ~a present)
    for (const Term& y : sig.range_of(at.attr)) {
      auto l = atom_lit(at, y, sig);
      if (l && asp::model_contains(m, asp::contrary(*l)))
        out.push_back(GroundLiteral{true, GroundAtom{at.attr, at.args, y}});
    }
  }
  return out;
}

std::string TauOutput::render_rule(const asp::Rule& r) const {
  auto lit_str = [&](asp::Lit l) {
    return std::string(asp::is_neg(l) ? "-" : "") + atoms[asp::atom_of(l)].render();
  };
  std::string out;
  for (size_t i = 0; i < r.head.size(); ++i) {
    if (i) out += " | ";
    out += lit_str(r.head[i]);
  }
  if (!r.pos.empty() || !r.neg.empty()) {
    out += out.empty() ? ":- " : " :- ";
    bool first = true;
    for (asp::Lit l : r.pos) {
      if (!first) out += ", ";
      out += lit_str(l);
      first = false;
    }
    for (asp::Lit l : r.neg) {
      if (!first) out += ", ";
      out += "not " + lit_str(l);
      first = false;
    }
  }
  return out + ".";
}

std::string TauOutput::dump() const {
  std::string out;
  for (const auto& r : prog.rules) {
    out += render_rule(r);
    out += "\n";
  }
  return out;
}

TauOutput translate(const GroundProgram& gp) {
  const Signature& sig = gp.sig;
  TauOutput out;

  // --- occurring attribute terms -------------------------------------------
  std::set<AttrTerm> occ;
  auto note_lit = [&](const GroundLiteral& l) { occ.insert(attr_term_of(l.atom)); };
  auto note_body = [&](const std::vector<GroundExtLit>& b) {
    for (const auto& e : b) note_lit(e.lit);
  };
  for (const auto& r : gp.rules) {
    if (r.head) note_lit(*r.head);
    note_body(r.body);
  }
  for (const auto& s : gp.selections) {
    occ.insert(s.attr_term);
    note_body(s.body);
    if (s.range_pred) {
      const AttrDecl& pd = sig.attr(*s.range_pred);
      for (const Term& y : sig.range_of(s.attr_term.attr))
        if (sig.sort_has(pd.param_sorts[0], y))
          occ.insert(AttrTerm{*s.range_pred, {y}});
    }
  }
  for (const auto& o : gp.observations) note_lit(o.lit);
  for (const auto& d : gp.actions) occ.insert(attr_term_of(d.atom));
  out.attr_terms.assign(occ.begin(), occ.end());

  // --- atom universe ---------------------------------------------------------
  auto add_atom = [&](TauAtom a) -> std::uint32_t {
    std::uint32_t id = static_cast<std::uint32_t>(out.atoms.size());
    out.atoms.push_back(std::move(a));
    return id;
  };
  for (const auto& [sname, members] : sig.sorts)
    for (const Term& m : members)
      add_atom(TauAtom{TauAtom::Kind::SortFact, sname, m, {}, {}, false});
  size_t first_sort_fact_count = out.atoms.size();

  for (const AttrTerm& at : out.attr_terms) {
    if (sig.is_boolean(at.attr)) {
      std::uint32_t id = add_atom(TauAtom{TauAtom::Kind::Attr, "", {}, at, term_true(), false});
      out.attr_index_[at.attr][at.args][term_true()] = id;
    } else {
      for (const Term& y : sig.range_of(at.attr)) {
        std::uint32_t id = add_atom(TauAtom{TauAtom::Kind::Attr, "", {}, at, y, false});
        out.attr_index_[at.attr][at.args][y] = id;
      }
    }
  }
  for (const AttrTerm& at : out.attr_terms)
    out.intervene_ids[at] = add_atom(TauAtom{TauAtom::Kind::Intervene, "", {}, at, {}, false});

  // obs atoms for both polarities of every literal over occurring terms,
  // do atoms for every atom over occurring terms
  std::map<std::string, std::uint32_t>& obs_index = out.obs_index_;
  std::map<std::string, std::uint32_t>& do_index = out.do_index_;
  auto obs_key = [&](const NormLit& n) {
    TauAtom probe{TauAtom::Kind::Obs, "", {}, n.at, n.value, n.neg};
    return probe.render();
  };
  auto do_key = [&](const AttrTerm& at, const Term& v) {
    TauAtom probe{TauAtom::Kind::Do, "", {}, at, v, false};
    return probe.render();
  };
  for (const AttrTerm& at : out.attr_terms) {
    bool boolean = sig.is_boolean(at.attr);
    std::vector<Term> values =
        boolean ? std::vector<Term>{term_true()} : sig.range_of(at.attr);
    for (const Term& y : values) {
      for (bool neg : {false, true}) {
        NormLit n{neg, at, y};
        obs_index[obs_key(n)] = add_atom(TauAtom{TauAtom::Kind::Obs, "", {}, at, y, neg});
      }
    }
    // do atoms carry the plain (unnormalized) value, so booleans get two
    std::vector<Term> do_values = boolean ? boolean_values() : sig.range_of(at.attr);
    for (const Term& y : do_values)
      do_index[do_key(at, y)] = add_atom(TauAtom{TauAtom::Kind::Do, "", {}, at, y, false});
  }
  out.prog.num_atoms = static_cast<std::uint32_t>(out.atoms.size());

  auto klit = [&](const GroundLiteral& l) -> asp::Lit {
    auto k = out.lit_of(l, sig);
    if (!k) fail(ErrorCode::Internal, "literal outside tau universe: " + l.str());
    return *k;
  };
  auto kobs = [&](const GroundLiteral& l) -> asp::Lit {
    NormLit n = normalize(sig, l);
    auto it = obs_index.find(obs_key(n));
    if (it == obs_index.end()) fail(ErrorCode::Internal, "obs atom missing: " + l.str());
    return asp::pos_lit(it->second);
  };
  auto kdo = [&](const GroundAtom& a) -> asp::Lit {
    auto it = do_index.find(do_key(attr_term_of(a), a.value));
    if (it == do_index.end()) fail(ErrorCode::Internal, "do atom missing: " + a.str());
    return asp::pos_lit(it->second);
  };

  auto add_rule = [&](asp::Rule r) { out.prog.rules.push_back(std::move(r)); };
  auto body_of = [&](const std::vector<GroundExtLit>& b, asp::Rule& r) {
    for (const auto& e : b) (e.default_neg ? r.neg : r.pos).push_back(klit(e.lit));
  };

  // 1. sort facts
  for (size_t i = 0; i < first_sort_fact_count; ++i) {
    asp::Rule r;
    r.head.push_back(asp::pos_lit(static_cast<asp::Lit>(i)));
    add_rule(std::move(r));
  }

  // 2a. regular rules with atoms rewritten
  for (const auto& gr : gp.rules) {
    asp::Rule r;
    if (gr.head) r.head.push_back(klit(*gr.head));
    body_of(gr.body, r);
    add_rule(std::move(r));
  }

  // 2b. functionality: at most one value per attribute term
  for (const AttrTerm& at : out.attr_terms) {
    if (sig.is_boolean(at.attr)) continue;  // contrary literals already exclude each other
    const auto& range = sig.range_of(at.attr);
    for (const Term& y1 : range)
      for (const Term& y2 : range) {
        if (y1 == y2) continue;
        asp::Rule r;
        r.head.push_back(asp::contrary(*out.atom_lit(at, y1, sig)));
        r.pos.push_back(*out.atom_lit(at, y2, sig));
        add_rule(std::move(r));
      }
  }

  // 3a. intervene(a(t)) <- do(a(t,Y))
  for (const AttrTerm& at : out.attr_terms) {
    bool boolean = sig.is_boolean(at.attr);
    const std::vector<Term>& values = boolean ? boolean_values() : sig.range_of(at.attr);
    for (const Term& y : values) {
      asp::Rule r;
      r.head.push_back(asp::pos_lit(out.intervene_ids.at(at)));
      r.pos.push_back(kdo(GroundAtom{at.attr, at.args, y}));
      add_rule(std::move(r));
    }
  }

  // 3b. random selections: disjunction over the static range guarded by
  // intervene, plus the dynamic-range constraint
  for (const auto& s : gp.selections) {
    const AttrTerm& at = s.attr_term;
    bool boolean = sig.is_boolean(at.attr);
    asp::Rule dis;
    if (boolean) {
      asp::Lit a = *out.atom_lit(at, term_true(), sig);
      dis.head.push_back(a);
      dis.head.push_back(asp::contrary(a));
    } else {
      for (const Term& y : sig.range_of(at.attr)) dis.head.push_back(*out.atom_lit(at, y, sig));
    }
    body_of(s.body, dis);
    dis.neg.push_back(asp::pos_lit(out.intervene_ids.at(at)));
    add_rule(std::move(dis));

    if (s.range_pred) {
      const AttrDecl& pd = sig.attr(*s.range_pred);
      const std::vector<Term>& values = boolean ? boolean_values() : sig.range_of(at.attr);
      for (const Term& y : values) {
        asp::Rule c;
        c.pos.push_back(boolean ? (y == term_true() ? *out.atom_lit(at, term_true(), sig)
                                                    : asp::contrary(*out.atom_lit(at, term_true(), sig)))
                                : *out.atom_lit(at, y, sig));
        if (sig.sort_has(pd.param_sorts[0], y)) {
          auto py = out.atom_lit(AttrTerm{*s.range_pred, {y}}, term_true(), sig);
          if (!py) fail(ErrorCode::Internal, "range predicate atom missing");
          c.neg.push_back(*py);
        }
        body_of(s.body, c);
        c.neg.push_back(asp::pos_lit(out.intervene_ids.at(at)));
        add_rule(std::move(c));
      }
    }
  }

  // 4. the program's observations and actions, as facts
  for (const auto& o : gp.observations) {
    asp::Rule r;
    r.head.push_back(kobs(o.lit));
    add_rule(std::move(r));
  }
  for (const auto& d : gp.actions) {
    asp::Rule r;
    r.head.push_back(kdo(d.atom));
    add_rule(std::move(r));
  }

  // 5. obs constraints: <- obs(l), not l
  for (const AttrTerm& at : out.attr_terms) {
    bool boolean = sig.is_boolean(at.attr);
    std::vector<Term> values = boolean ? std::vector<Term>{term_true()} : sig.range_of(at.attr);
    for (const Term& y : values) {
      for (bool neg : {false, true}) {
        asp::Rule r;
        NormLit n{neg, at, y};
        r.pos.push_back(asp::pos_lit(obs_index.at(obs_key(n))));
        asp::Lit base = *out.atom_lit(at, y, sig);
        r.neg.push_back(neg ? asp::contrary(base) : base);
        add_rule(std::move(r));
      }
    }
  }

  // 6. do rules: a(t,y) <- do(a(t,y))
  for (const AttrTerm& at : out.attr_terms) {
    bool boolean = sig.is_boolean(at.attr);
    const std::vector<Term>& values = boolean ? boolean_values() : sig.range_of(at.attr);
    for (const Term& y : values) {
      asp::Rule r;
      if (boolean) {
        asp::Lit base = *out.atom_lit(at, term_true(), sig);
        r.head.push_back(y == term_true() ? base : asp::contrary(base));
      } else {
        r.head.push_back(*out.atom_lit(at, y, sig));
      }
      r.pos.push_back(kdo(GroundAtom{at.attr, at.args, y}));
      add_rule(std::move(r));
    }
  }

  return out;
}

}  // namespace plog
