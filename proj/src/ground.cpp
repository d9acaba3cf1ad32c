#include "ground.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "asp.hpp"
#include "errors.hpp"

namespace plog {

// --- comparisons and rendering ----------------------------------------------

static int cmp_term_vecs(const std::vector<Term>& a, const std::vector<Term>& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (size_t i = 0; i < a.size(); ++i)
    if (int c = a[i].cmp(b[i])) return c;
  return 0;
}

int GroundAtom::cmp(const GroundAtom& o) const {
  if (int c = attr.compare(o.attr)) return c < 0 ? -1 : 1;
  if (int c = cmp_term_vecs(args, o.args)) return c;
  return value.cmp(o.value);
}

std::string GroundAtom::str() const {
  std::string out = attr;
  if (!args.empty()) {
    out += "(";
    for (size_t i = 0; i < args.size(); ++i) {
      if (i) out += ",";
      out += args[i].str();
    }
    out += ")";
  }
  if (!(value == term_true())) out += "=" + value.str();
  return out;
}

int GroundLiteral::cmp(const GroundLiteral& o) const {
  if (int c = atom.cmp(o.atom)) return c;
  if (neg == o.neg) return 0;
  return neg ? 1 : -1;
}

std::string GroundLiteral::str() const {
  if (neg && atom.value == term_false()) {
    GroundAtom a = atom;
    a.value = term_true();
    return a.str();
  }
  if (!neg && atom.value == term_false()) {
    GroundAtom a = atom;
    a.value = term_true();
    return "~" + a.str();
  }
  return (neg ? "~" : "") + atom.str();
}

std::string GroundExtLit::str() const {
  return (default_neg ? "not " : "") + lit.str();
}

int AttrTerm::cmp(const AttrTerm& o) const {
  if (int c = attr.compare(o.attr)) return c < 0 ? -1 : 1;
  return cmp_term_vecs(args, o.args);
}

std::string AttrTerm::str() const {
  std::string out = attr;
  if (!args.empty()) {
    out += "(";
    for (size_t i = 0; i < args.size(); ++i) {
      if (i) out += ",";
      out += args[i].str();
    }
    out += ")";
  }
  return out;
}

std::string GSelection::display_name() const {
  if (name_explicit) return name.str();
  return "random(" + attr_term.str() + ")";
}

std::string GPrAtom::str() const {
  bool synthesized = rule_name.is_compound() && rule_name.functor() == "@sel";
  std::string out = synthesized ? "pr(" : "pr[" + rule_name.str() + "](";
  out += head.str();
  if (!body.empty()) {
    out += " |c ";
    for (size_t i = 0; i < body.size(); ++i) {
      if (i) out += ", ";
      out += body[i].str();
    }
  }
  return out + ") = " + value.str();
}

// --- signature ----------------------------------------------------------------

static const std::vector<Term>& boolean_members() {
  static const std::vector<Term> m{term_true(), term_false()};
  return m;
}

const std::vector<Term>& Signature::members(const std::string& sort) const {
  if (sort == "boolean") return boolean_members();
  auto it = sorts.find(sort);
  if (it == sorts.end()) fail(ErrorCode::Sort, "undeclared sort '" + sort + "'");
  return it->second;
}

bool Signature::sort_has(const std::string& sort, const Term& t) const {
  const auto& m = members(sort);
  return std::find(m.begin(), m.end(), t) != m.end();
}

const AttrDecl& Signature::attr(const std::string& name) const {
  auto it = attrs.find(name);
  if (it == attrs.end()) fail(ErrorCode::Sort, "undeclared attribute '" + name + "'");
  return it->second;
}

bool Signature::is_boolean(const std::string& attr_name) const {
  return attr(attr_name).range_sort == "boolean";
}

const std::vector<Term>& Signature::range_of(const std::string& attr_name) const {
  return members(attr(attr_name).range_sort);
}

// --- defining-program sorts ----------------------------------------------------

namespace {

struct Subst {
  std::map<std::string, Term> map;
  const Term* find(const std::string& v) const {
    auto it = map.find(v);
    return it == map.end() ? nullptr : &it->second;
  }
};

std::optional<Term> eval_term(const TermExprPtr& e, const Subst& s) {
  struct V {
    const Subst& s;
    std::optional<Term> operator()(const TermExpr::Var& v) const {
      const Term* t = s.find(v.name);
      if (!t) return std::nullopt;
      return *t;
    }
    std::optional<Term> operator()(const TermExpr::Const& c) const { return c.value; }
    std::optional<Term> operator()(const TermExpr::Compound& c) const {
      std::vector<Term> args;
      for (auto& a : c.args) {
        auto t = eval_term(a, s);
        if (!t) return std::nullopt;
        args.push_back(*t);
      }
      return Term::compound(c.functor, std::move(args));
    }
    std::optional<Term> operator()(const TermExpr::Arith& a) const {
      auto l = eval_term(a.lhs, s), r = eval_term(a.rhs, s);
      if (!l || !r) return std::nullopt;
      const char* op = a.op == ArithOp::Add   ? "+"
                       : a.op == ArithOp::Sub ? "-"
                       : a.op == ArithOp::Mul ? "*"
                                              : "mod";
      return builtin_eval(op, {*l, *r});
    }
  };
  return std::visit(V{s}, e->node);
}

Term eval_term_checked(const TermExprPtr& e, const Subst& s) {
  auto t = eval_term(e, s);
  if (!t) fail(ErrorCode::Sort, "unbound variable in '" + term_expr_str(e) + "'");
  return *t;
}

bool eval_builtin_expr(const BuiltinExpr& b, const Subst& s) {
  Term l = eval_term_checked(b.lhs, s);
  Term r = eval_term_checked(b.rhs, s);
  const char* op = nullptr;
  switch (b.op) {
    case CmpOp::Eq: op = "="; break;
    case CmpOp::Neq: op = "!="; break;
    case CmpOp::Lt: op = "<"; break;
    case CmpOp::Le: op = "<="; break;
    case CmpOp::Gt: op = ">"; break;
    case CmpOp::Ge: op = ">="; break;
  }
  return builtin_eval(op, {l, r}) == term_true();
}

// Evaluates a sort-defining program: datalog over its own constants, with the
// Herbrand universe enlarged by whatever arithmetic derives, to a fixpoint.
std::vector<Term> eval_def_program(const std::string& sort_name,
                                   const std::vector<DefRule>& rules) {
  std::set<Term> universe;
  auto add_const_of = [&](const TermExprPtr& e, auto&& self) -> void {
    if (e->is_const()) {
      const Term& t = std::get<TermExpr::Const>(e->node).value;
      universe.insert(t);
      return;
    }
    if (auto* c = std::get_if<TermExpr::Compound>(&e->node))
      for (auto& a : c->args) self(a, self);
    if (auto* a = std::get_if<TermExpr::Arith>(&e->node)) {
      self(a->lhs, self);
      self(a->rhs, self);
    }
  };
  for (const auto& r : rules) {
    for (auto& a : r.head.args) add_const_of(a, add_const_of);
    for (auto& e : r.body) {
      if (e.is_builtin) {
        add_const_of(e.builtin.lhs, add_const_of);
        add_const_of(e.builtin.rhs, add_const_of);
      } else {
        for (auto& a : e.atom.args) add_const_of(a, add_const_of);
      }
    }
  }

  constexpr size_t kMaxUniverse = 20000;
  constexpr int kMaxIterations = 200;

  bool converged = false;
  std::vector<asp::Model> answer_sets;
  std::map<std::pair<std::string, std::vector<Term>>, asp::Lit> atom_ids;
  std::vector<std::pair<std::string, std::vector<Term>>> atom_names;

  for (int iter = 0; iter < kMaxIterations; ++iter) {
    if (universe.size() > kMaxUniverse)
      fail(ErrorCode::UnboundedSort,
           "defining program for sort '" + sort_name + "' does not converge");
    atom_ids.clear();
    atom_names.clear();
    auto atom_id = [&](const std::string& pred, std::vector<Term> args) -> asp::Lit {
      auto key = std::make_pair(pred, std::move(args));
      auto it = atom_ids.find(key);
      if (it != atom_ids.end()) return it->second;
      asp::Lit id = static_cast<asp::Lit>(atom_names.size());
      atom_ids.emplace(key, id);
      atom_names.push_back(key);
      return id;
    };

    asp::Program gp;
    std::vector<Term> uni(universe.begin(), universe.end());
    for (const auto& r : rules) {
      std::vector<std::string> vars;
      for (auto& a : r.head.args) collect_vars(a, vars);
      for (auto& e : r.body) {
        if (e.is_builtin) {
          collect_vars(e.builtin.lhs, vars);
          collect_vars(e.builtin.rhs, vars);
        } else {
          for (auto& a : e.atom.args) collect_vars(a, vars);
        }
      }
      std::sort(vars.begin(), vars.end());
      vars.erase(std::unique(vars.begin(), vars.end()), vars.end());

      // full substitution product (universe^|vars|); instances whose builtins
      // or arithmetic hit non-integers are silently false
      std::function<void(size_t, Subst&)> rec = [&](size_t k, Subst& sub) {
        if (k == vars.size()) {
          try {
            asp::Rule gr;
            for (auto& e : r.body) {
              if (e.is_builtin) {
                if (!eval_builtin_expr(e.builtin, sub)) return;
                continue;
              }
              std::vector<Term> args;
              for (auto& a : e.atom.args) args.push_back(eval_term_checked(a, sub));
              asp::Lit id = atom_id(e.atom.pred, std::move(args));
              (e.default_neg ? gr.neg : gr.pos).push_back(asp::pos_lit(id));
            }
            std::vector<Term> hargs;
            for (auto& a : r.head.args) hargs.push_back(eval_term_checked(a, sub));
            gr.head.push_back(asp::pos_lit(atom_id(r.head.pred, std::move(hargs))));
            gp.rules.push_back(std::move(gr));
          } catch (const Error& e) {
            if (e.code() != ErrorCode::TypeMismatch) throw;
          }
          return;
        }
        for (const Term& t : uni) {
          sub.map[vars[k]] = t;
          rec(k + 1, sub);
        }
        sub.map.erase(vars[k]);
      };
      Subst sub;
      rec(0, sub);
    }
    gp.num_atoms = static_cast<asp::Lit>(atom_names.size());
    answer_sets = asp::enumerate_answer_sets(gp);

    // grow the universe with constants appearing in derived atoms
    size_t before = universe.size();
    for (const auto& m : answer_sets)
      for (asp::Lit l : m)
        for (const Term& t : atom_names[asp::atom_of(l)].second) universe.insert(t);
    if (universe.size() == before) {
      converged = true;
      break;
    }
  }
  if (!converged)
    fail(ErrorCode::UnboundedSort,
         "defining program for sort '" + sort_name + "' does not converge");

  if (answer_sets.size() != 1)
    fail(ErrorCode::UnboundedSort, "defining program for sort '" + sort_name + "' has " +
                                       std::to_string(answer_sets.size()) +
                                       " answer sets (exactly one required)");
  std::vector<Term> members;
  for (asp::Lit l : answer_sets[0]) {
    const auto& [pred, args] = atom_names[asp::atom_of(l)];
    if (pred == sort_name && args.size() == 1) members.push_back(args[0]);
  }
  std::sort(members.begin(), members.end());
  if (members.empty())
    fail(ErrorCode::UnboundedSort, "defining program for sort '" + sort_name +
                                       "' yields an empty sort");
  return members;
}

}  // namespace

// --- builtins -------------------------------------------------------------------

Term builtin_eval(const std::string& op, const std::vector<Term>& args) {
  if (args.size() != 2) fail(ErrorCode::TypeMismatch, "builtin '" + op + "' expects 2 arguments");
  const Term& a = args[0];
  const Term& b = args[1];
  if (!a.is_integer() || !b.is_integer())
    fail(ErrorCode::TypeMismatch, "builtin '" + op + "' applied to non-integer argument (" +
                                      a.str() + ", " + b.str() + ")");
  std::int64_t x = a.as_integer(), y = b.as_integer();
  if (op == "+") return Term::integer(x + y);
  if (op == "-") return Term::integer(x - y);
  if (op == "*") return Term::integer(x * y);
  if (op == "mod") {
    if (y == 0) fail(ErrorCode::TypeMismatch, "mod by zero");
    return Term::integer(x % y);
  }
  bool r;
  if (op == "=" || op == "==")
    r = x == y;
  else if (op == "!=" || op == "<>")
    r = x != y;
  else if (op == "<")
    r = x < y;
  else if (op == "<=")
    r = x <= y;
  else if (op == ">")
    r = x > y;
  else if (op == ">=")
    r = x >= y;
  else
    fail(ErrorCode::TypeMismatch, "unknown builtin '" + op + "'");
  return r ? term_true() : term_false();
}

// --- grounder -------------------------------------------------------------------

namespace {

class Grounder {
 public:
  Grounder(const Program& p, const GroundOptions& opts) : p_(p), opts_(opts) {}

  GroundProgram run() {
    resolve_declarations();
    collect_domain_decls();
    for (size_t i = 0; i < p_.stmts.size(); ++i) ground_statement(static_cast<int>(i));
    resolve_selection_names();
    resolve_pr_names();
    return std::move(out_);
  }

 private:
  void resolve_declarations() {
    out_.sig.sorts.clear();
    std::map<std::string, SortDecl> sort_decls;
    std::map<std::string, AttrDecl> attr_decls;
    for (const auto& s : p_.stmts) {
      if (auto* sd = std::get_if<SortDecl>(&s)) {
        if (sd->name == "boolean") fail(ErrorCode::Sort, "sort 'boolean' is predefined");
        auto it = sort_decls.find(sd->name);
        if (it != sort_decls.end()) {
          if (print_statement(s) != print_statement(Statement(it->second)))
            fail(ErrorCode::DuplicateDeclaration,
                 "sort '" + sd->name + "' redeclared inconsistently");
          continue;
        }
        sort_decls.emplace(sd->name, *sd);
        out_.declarations.push_back(s);
      } else if (auto* ad = std::get_if<AttrDecl>(&s)) {
        auto it = attr_decls.find(ad->name);
        if (it != attr_decls.end()) {
          if (print_statement(s) != print_statement(Statement(it->second)))
            fail(ErrorCode::DuplicateDeclaration,
                 "attribute '" + ad->name + "' redeclared inconsistently");
          continue;
        }
        attr_decls.emplace(ad->name, *ad);
        out_.declarations.push_back(s);
      }
    }
    for (auto& [name, _] : sort_decls)
      if (attr_decls.count(name))
        fail(ErrorCode::Sort, "'" + name + "' declared both as sort and attribute");

    // resolve sorts in declaration order (products may reference earlier sorts)
    for (const auto& s : out_.declarations) {
      auto* sd = std::get_if<SortDecl>(&s);
      if (!sd) continue;
      std::vector<Term> members;
      if (sd->def_program) {
        members = eval_def_program(sd->name, *sd->def_program);
      } else if (sd->product) {
        std::vector<std::vector<Term>> arg_members;
        for (const auto& sn : *sd->product) arg_members.push_back(out_.sig.members(sn));
        std::vector<size_t> idx(arg_members.size(), 0);
        while (true) {
          std::vector<Term> args;
          for (size_t i = 0; i < idx.size(); ++i) args.push_back(arg_members[i][idx[i]]);
          members.push_back(Term::compound(sd->product_functor, std::move(args)));
          size_t k = idx.size();
          while (k > 0) {
            if (++idx[k - 1] < arg_members[k - 1].size()) break;
            idx[k - 1] = 0;
            --k;
          }
          if (k == 0) break;
        }
      } else {
        for (const auto& e : sd->enumeration) {
          if (auto* r = std::get_if<IntRange>(&e)) {
            for (std::int64_t v = r->lo; v <= r->hi; ++v) members.push_back(Term::integer(v));
          } else {
            members.push_back(std::get<Term>(e));
          }
        }
      }
      std::vector<Term> dedup;
      for (auto& m : members) {
        if (m == term_true() || m == term_false())
          fail(ErrorCode::Sort, "objects true/false are reserved for the boolean sort");
        if (std::find(dedup.begin(), dedup.end(), m) == dedup.end()) dedup.push_back(m);
      }
      if (dedup.empty()) fail(ErrorCode::Sort, "sort '" + sd->name + "' is empty");
      out_.sig.sorts.emplace(sd->name, std::move(dedup));
    }

    for (auto& [name, ad] : attr_decls) {
      for (const auto& ps : ad.param_sorts) out_.sig.members(ps);  // existence check
      out_.sig.members(ad.range_sort);
      out_.sig.attrs.emplace(name, ad);
    }
  }

  void collect_domain_decls() {
    for (const auto& s : p_.stmts)
      if (auto* dd = std::get_if<DomainDecl>(&s)) {
        auto it = domain_.find(dd->var);
        if (it != domain_.end() && it->second != dd->sort)
          fail(ErrorCode::DuplicateDeclaration,
               "#domain variable '" + dd->var + "' bound to two sorts");
        domain_[dd->var] = dd->sort;
      }
  }

  // Sort inference: a variable's sort is set by its first occurrence at a
  // top-level argument or value position of a declared attribute; #domain
  // declarations take precedence. Variables seen only in builtins or nested
  // inside constructor terms must be covered by #domain or occur elsewhere.
  struct VarInfo {
    std::vector<std::string> order;           // first-occurrence order
    std::map<std::string, std::string> sort;  // var -> sort
    std::vector<std::string> all_vars;        // every occurrence, statement order
  };

  void infer_from_term(const TermExprPtr& e, const std::string& sort, VarInfo& vi) {
    collect_vars(e, vi.all_vars);
    if (!e->is_var()) return;
    const std::string& v = std::get<TermExpr::Var>(e->node).name;
    if (vi.sort.count(v)) return;
    vi.order.push_back(v);
    auto dit = domain_.find(v);
    vi.sort[v] = dit != domain_.end() ? dit->second : sort;
  }

  void note_builtin_vars(const BuiltinExpr& b, VarInfo& vi) {
    collect_vars(b.lhs, vi.all_vars);
    collect_vars(b.rhs, vi.all_vars);
  }

  void infer_from_atom(const AtomExpr& a, VarInfo& vi) {
    const AttrDecl& d = out_.sig.attr(a.attr);
    if (a.args.size() != d.param_sorts.size())
      fail(ErrorCode::Sort, "attribute '" + a.attr + "' arity mismatch");
    for (size_t i = 0; i < a.args.size(); ++i) infer_from_term(a.args[i], d.param_sorts[i], vi);
    infer_from_term(a.value, d.range_sort, vi);
  }

  void infer_from_body(const Body& b, VarInfo& vi) {
    for (const auto& e : b) {
      if (auto* el = std::get_if<ExtLiteralExpr>(&e))
        infer_from_atom(el->lit.atom, vi);
      else
        note_builtin_vars(std::get<BuiltinExpr>(e), vi);
    }
  }

  // Call after all infer_from_* passes: resolves stragglers via #domain.
  void finish_inference(VarInfo& vi) {
    for (const auto& v : vi.all_vars) {
      if (vi.sort.count(v)) continue;
      auto dit = domain_.find(v);
      if (dit == domain_.end())
        fail(ErrorCode::Sort, "cannot infer a sort for variable '" + v + "'");
      vi.order.push_back(v);
      vi.sort[v] = dit->second;
    }
  }

  GroundAtom ground_atom(const AtomExpr& a, const Subst& sub, bool check_value_sort = true) {
    const AttrDecl& d = out_.sig.attr(a.attr);
    GroundAtom g;
    g.attr = a.attr;
    for (size_t i = 0; i < a.args.size(); ++i) {
      Term t = eval_term_checked(a.args[i], sub);
      if (!out_.sig.sort_has(d.param_sorts[i], t))
        fail(ErrorCode::Sort, "'" + t.str() + "' is not in sort '" + d.param_sorts[i] +
                                  "' (argument " + std::to_string(i + 1) + " of '" + a.attr +
                                  "')");
      g.args.push_back(std::move(t));
    }
    g.value = eval_term_checked(a.value, sub);
    if (check_value_sort && !out_.sig.sort_has(d.range_sort, g.value))
      fail(ErrorCode::Sort, "'" + g.value.str() + "' is not in the range of attribute '" +
                                a.attr + "' (sort '" + d.range_sort + "')");
    return g;
  }

  GroundLiteral ground_literal(const LiteralExpr& l, const Subst& sub) {
    return GroundLiteral{l.neg, ground_atom(l.atom, sub)};
  }

  // Grounds body; returns false when a builtin is false (instance dropped).
  bool ground_body(const Body& b, const Subst& sub, std::vector<GroundExtLit>& out) {
    for (const auto& e : b) {
      if (auto* el = std::get_if<ExtLiteralExpr>(&e)) {
        out.push_back(GroundExtLit{el->default_neg, ground_literal(el->lit, sub)});
      } else {
        if (!eval_builtin_expr(std::get<BuiltinExpr>(e), sub)) return false;
      }
    }
    return true;
  }

  void for_each_substitution(const VarInfo& vi, const std::function<void(const Subst&)>& fn) {
    std::vector<std::string> vars = vi.order;
    std::vector<const std::vector<Term>*> doms;
    for (const auto& v : vars) doms.push_back(&out_.sig.members(vi.sort.at(v)));
    Subst sub;
    std::function<void(size_t)> rec = [&](size_t k) {
      if (k == vars.size()) {
        fn(sub);
        return;
      }
      for (const Term& t : *doms[k]) {
        sub.map[vars[k]] = t;
        rec(k + 1);
      }
      sub.map.erase(vars[k]);
    };
    rec(0);
  }

  void bump_budget() {
    if (++produced_ > opts_.max_ground_statements)
      fail(ErrorCode::BudgetExceeded,
           "ground statement count exceeds cap of " + std::to_string(opts_.max_ground_statements));
  }

  void ground_statement(int idx) {
    const Statement& s = p_.stmts[idx];
    if (std::holds_alternative<SortDecl>(s) || std::holds_alternative<AttrDecl>(s) ||
        std::holds_alternative<DomainDecl>(s))
      return;

    if (auto* r = std::get_if<RegularRule>(&s)) {
      VarInfo vi;
      if (r->head) infer_from_atom(r->head->atom, vi);
      infer_from_body(r->body, vi);
      finish_inference(vi);
      for_each_substitution(vi, [&](const Subst& sub) {
        GRule g;
        g.src_stmt = idx;
        if (!ground_body(r->body, sub, g.body)) return;
        if (r->head) g.head = ground_literal(*r->head, sub);
        bump_budget();
        out_.rules.push_back(std::move(g));
      });
      return;
    }
    if (auto* sel = std::get_if<RandomSelection>(&s)) {
      const AttrDecl& d = out_.sig.attr(sel->attr);
      if (sel->range) {
        const AttrDecl& pd = out_.sig.attr(sel->range->pred);
        if (pd.param_sorts.size() != 1 || pd.range_sort != "boolean")
          fail(ErrorCode::Sort, "dynamic range predicate '" + sel->range->pred +
                                    "' must be a unary boolean attribute");
      }
      VarInfo vi;
      for (size_t i = 0; i < sel->args.size(); ++i)
        infer_from_term(sel->args[i], d.param_sorts[i], vi);
      infer_from_body(sel->body, vi);
      finish_inference(vi);
      for_each_substitution(vi, [&](const Subst& sub) {
        GSelection g;
        g.src_stmt = idx;
        if (!ground_body(sel->body, sub, g.body)) return;
        for (size_t i = 0; i < sel->args.size(); ++i) {
          Term t = eval_term_checked(sel->args[i], sub);
          if (!out_.sig.sort_has(d.param_sorts[i], t))
            fail(ErrorCode::Sort, "'" + t.str() + "' is not in sort '" + d.param_sorts[i] + "'");
          g.attr_term.args.push_back(std::move(t));
        }
        g.attr_term.attr = sel->attr;
        if (sel->range) g.range_pred = sel->range->pred;
        if (sel->name) {
          g.name = eval_term_checked(*sel->name, sub);
          g.name_explicit = true;
        }
        bump_budget();
        out_.selections.push_back(std::move(g));
      });
      return;
    }
    if (auto* pr = std::get_if<PrAtom>(&s)) {
      VarInfo vi;
      infer_from_atom(pr->head, vi);
      infer_from_body(pr->body, vi);
      finish_inference(vi);
      if (pr->rule_name) {
        std::vector<std::string> nv;
        collect_vars(*pr->rule_name, nv);
        for (auto& v : nv)
          if (!vi.sort.count(v))
            fail(ErrorCode::Sort, "variable '" + v + "' occurs only in the pr-atom rule name");
      }
      for_each_substitution(vi, [&](const Subst& sub) {
        GPrAtom g;
        g.src_stmt = idx;
        g.value = pr->value;
        if (!ground_body(pr->body, sub, g.body)) return;
        g.head = ground_atom(pr->head, sub);
        if (pr->rule_name)
          g.rule_name = eval_term_checked(*pr->rule_name, sub);
        else
          g.rule_name = Term::symbol("");  // resolved later
        pr_named_.push_back(pr->rule_name.has_value());
        bump_budget();
        out_.pr_atoms.push_back(std::move(g));
      });
      return;
    }
    if (auto* ob = std::get_if<Observation>(&s)) {
      VarInfo vi;
      infer_from_atom(ob->lit.atom, vi);
      finish_inference(vi);
      for_each_substitution(vi, [&](const Subst& sub) {
        bump_budget();
        out_.observations.push_back(GObs{ground_literal(ob->lit, sub), idx});
      });
      return;
    }
    if (auto* ac = std::get_if<DoAction>(&s)) {
      VarInfo vi;
      infer_from_atom(ac->atom, vi);
      finish_inference(vi);
      for_each_substitution(vi, [&](const Subst& sub) {
        bump_budget();
        out_.actions.push_back(GDo{ground_atom(ac->atom, sub), idx});
      });
      return;
    }
  }

  void resolve_selection_names() {
    std::map<AttrTerm, std::vector<size_t>> by_term;
    for (size_t i = 0; i < out_.selections.size(); ++i)
      by_term[out_.selections[i].attr_term].push_back(i);
    for (auto& s : out_.selections) {
      if (s.name_explicit) continue;
      if (by_term[s.attr_term].size() > 1)
        fail(ErrorCode::Sort, "random selection for '" + s.attr_term.str() +
                                  "' must be named: the attribute term has " +
                                  std::to_string(by_term[s.attr_term].size()) +
                                  " selection rules");
      // synthesized name; '@' keeps it out of the user namespace
      Term t = s.attr_term.args.empty() ? Term::symbol(s.attr_term.attr)
                                        : Term::compound(s.attr_term.attr, s.attr_term.args);
      s.name = Term::compound("@sel", {t});
    }
  }

  void resolve_pr_names() {
    for (size_t i = 0; i < out_.pr_atoms.size(); ++i) {
      GPrAtom& pr = out_.pr_atoms[i];
      AttrTerm at = attr_term_of(pr.head);
      if (!out_.sig.sort_has(out_.sig.attr(pr.head.attr).range_sort, pr.head.value))
        fail(ErrorCode::Sort, "pr-atom head value out of range: " + pr.head.str());
      std::vector<const GSelection*> cands;
      for (const auto& s : out_.selections)
        if (s.attr_term == at) cands.push_back(&s);
      if (cands.empty())
        fail(ErrorCode::Sort,
             "pr-atom " + pr.str() + " has no random selection rule for " + at.str());
      if (pr_named_[i]) {
        bool found = false;
        for (const auto* s : cands)
          if (s->name_explicit && s->name == pr.rule_name) found = true;
        if (!found)
          fail(ErrorCode::Sort, "pr-atom names rule '" + pr.rule_name.str() +
                                    "' but no such selection rule exists for " + at.str());
      } else {
        std::set<std::string> names;
        for (const auto* s : cands) names.insert(s->name.str());
        if (names.size() > 1)
          fail(ErrorCode::Sort, "pr-atom " + pr.str() +
                                    " is ambiguous: name one of the selection rules for " +
                                    at.str());
        pr.rule_name = cands[0]->name;
      }
    }
  }

  const Program& p_;
  GroundOptions opts_;
  GroundProgram out_;
  std::map<std::string, std::string> domain_;
  std::vector<bool> pr_named_;
  std::uint64_t produced_ = 0;
};

}  // namespace

GroundProgram ground_program(const Program& p, const GroundOptions& opts) {
  return Grounder(p, opts).run();
}

// --- AST conversions -------------------------------------------------------------

static TermExprPtr expr_of(const Term& t) { return TermExpr::constant(t); }

AtomExpr to_atom_expr(const GroundAtom& a) {
  AtomExpr e;
  e.attr = a.attr;
  for (const auto& t : a.args) e.args.push_back(expr_of(t));
  e.value = expr_of(a.value);
  return e;
}

LiteralExpr to_literal_expr(const GroundLiteral& l) {
  return LiteralExpr{l.neg, to_atom_expr(l.atom)};
}

static Body to_body(const std::vector<GroundExtLit>& b) {
  Body out;
  for (const auto& e : b) out.push_back(ExtLiteralExpr{e.default_neg, to_literal_expr(e.lit)});
  return out;
}

Statement to_statement(const GRule& r) {
  RegularRule out;
  if (r.head) out.head = to_literal_expr(*r.head);
  out.body = to_body(r.body);
  return out;
}

Statement to_statement(const GSelection& s) {
  RandomSelection out;
  if (s.name_explicit) out.name = expr_of(s.name);
  out.attr = s.attr_term.attr;
  for (const auto& t : s.attr_term.args) out.args.push_back(expr_of(t));
  if (s.range_pred) out.range = DynRange{"X", *s.range_pred};
  out.body = to_body(s.body);
  return out;
}

Statement to_statement(const GPrAtom& p) {
  bool synthesized = p.rule_name.is_compound() && p.rule_name.functor() == "@sel";
  PrAtom out{synthesized ? std::nullopt : std::optional<TermExprPtr>(expr_of(p.rule_name)),
             to_atom_expr(p.head), to_body(p.body), p.value};
  return out;
}

Statement to_statement(const GObs& o) { return Observation{to_literal_expr(o.lit)}; }
Statement to_statement(const GDo& d) { return DoAction{to_atom_expr(d.atom)}; }

Program GroundProgram::to_program() const {
  Program p;
  p.stmts = declarations;
  struct Item {
    int src;
    int seq;
    Statement stmt;
  };
  std::vector<Item> items;
  int seq = 0;
  for (const auto& r : rules) items.push_back({r.src_stmt, seq++, to_statement(r)});
  for (const auto& s : selections) items.push_back({s.src_stmt, seq++, to_statement(s)});
  for (const auto& pr : pr_atoms) items.push_back({pr.src_stmt, seq++, to_statement(pr)});
  for (const auto& o : observations) items.push_back({o.src_stmt, seq++, to_statement(o)});
  for (const auto& d : actions) items.push_back({d.src_stmt, seq++, to_statement(d)});
  std::stable_sort(items.begin(), items.end(),
                   [](const Item& a, const Item& b) { return a.src < b.src; });
  for (auto& it : items) p.stmts.push_back(std::move(it.stmt));
  return p;
}

}  // namespace plog
