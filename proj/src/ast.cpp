#include "ast.hpp"

#include <sstream>

namespace plog {

namespace {

const char* arith_op_str(ArithOp op) {
  switch (op) {
    case ArithOp::Add: return "+";
    case ArithOp::Sub: return "-";
    case ArithOp::Mul: return "*";
    case ArithOp::Mod: return " mod ";
  }
  return "?";
}

const char* cmp_op_str(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "==";
    case CmpOp::Neq: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

bool is_true_const(const TermExprPtr& e) {
  return e->is_const() && std::get<TermExpr::Const>(e->node).value == term_true();
}
bool is_false_const(const TermExprPtr& e) {
  return e->is_const() && std::get<TermExpr::Const>(e->node).value == term_false();
}

std::string def_atom_str(const DefAtom& a) {
  std::string out = a.pred;
  if (!a.args.empty()) {
    out += "(";
    for (size_t i = 0; i < a.args.size(); ++i) {
      if (i) out += ",";
      out += term_expr_str(a.args[i]);
    }
    out += ")";
  }
  return out;
}

}  // namespace

std::string term_expr_str(const TermExprPtr& e) {
  struct V {
    std::string operator()(const TermExpr::Var& v) const { return v.name; }
    std::string operator()(const TermExpr::Const& c) const { return c.value.str(); }
    std::string operator()(const TermExpr::Compound& c) const {
      std::string out = c.functor + "(";
      for (size_t i = 0; i < c.args.size(); ++i) {
        if (i) out += ",";
        out += term_expr_str(c.args[i]);
      }
      return out + ")";
    }
    std::string operator()(const TermExpr::Arith& a) const {
      return "(" + term_expr_str(a.lhs) + arith_op_str(a.op) + term_expr_str(a.rhs) + ")";
    }
  };
  return std::visit(V{}, e->node);
}

void collect_vars(const TermExprPtr& e, std::vector<std::string>& out) {
  struct V {
    std::vector<std::string>& out;
    void operator()(const TermExpr::Var& v) const { out.push_back(v.name); }
    void operator()(const TermExpr::Const&) const {}
    void operator()(const TermExpr::Compound& c) const {
      for (auto& a : c.args) collect_vars(a, out);
    }
    void operator()(const TermExpr::Arith& a) const {
      collect_vars(a.lhs, out);
      collect_vars(a.rhs, out);
    }
  };
  std::visit(V{out}, e->node);
}

std::string atom_expr_str(const AtomExpr& a) {
  std::string out = a.attr;
  if (!a.args.empty()) {
    out += "(";
    for (size_t i = 0; i < a.args.size(); ++i) {
      if (i) out += ",";
      out += term_expr_str(a.args[i]);
    }
    out += ")";
  }
  if (!is_true_const(a.value)) out += "=" + term_expr_str(a.value);
  return out;
}

std::string literal_expr_str(const LiteralExpr& l) {
  // ~a=false prints as the sugar form `a`; the parser resolves it back.
  if (l.neg && is_false_const(l.atom.value)) {
    AtomExpr pos = l.atom;
    pos.value = TermExpr::constant(term_true());
    return atom_expr_str(pos);
  }
  if (!l.neg && is_false_const(l.atom.value)) {
    AtomExpr pos = l.atom;
    pos.value = TermExpr::constant(term_true());
    return "~" + atom_expr_str(pos);
  }
  return (l.neg ? "~" : "") + atom_expr_str(l.atom);
}

static std::string builtin_str(const BuiltinExpr& b) {
  return term_expr_str(b.lhs) + cmp_op_str(b.op) + term_expr_str(b.rhs);
}

std::string body_str(const Body& b) {
  std::string out;
  for (size_t i = 0; i < b.size(); ++i) {
    if (i) out += ", ";
    if (auto* el = std::get_if<ExtLiteralExpr>(&b[i])) {
      if (el->default_neg) out += "not ";
      out += literal_expr_str(el->lit);
    } else {
      out += builtin_str(std::get<BuiltinExpr>(b[i]));
    }
  }
  return out;
}

std::string print_statement(const Statement& s) {
  struct V {
    std::string operator()(const SortDecl& d) const {
      std::string out = d.name + " = ";
      if (d.def_program) {
        out += "program {";
        for (auto& r : *d.def_program) {
          out += " " + def_atom_str(r.head);
          if (!r.body.empty()) {
            out += " :- ";
            for (size_t i = 0; i < r.body.size(); ++i) {
              if (i) out += ", ";
              const auto& e = r.body[i];
              if (e.is_builtin)
                out += builtin_str(e.builtin);
              else
                out += std::string(e.default_neg ? "not " : "") + def_atom_str(e.atom);
            }
          }
          out += ".";
        }
        out += " }";
      } else if (d.product) {
        out += "{" + d.product_functor + "(";
        for (size_t i = 0; i < d.product->size(); ++i) {
          if (i) out += ",";
          out += (*d.product)[i];
        }
        out += ")}";
      } else {
        out += "{";
        for (size_t i = 0; i < d.enumeration.size(); ++i) {
          if (i) out += ",";
          if (auto* r = std::get_if<IntRange>(&d.enumeration[i]))
            out += std::to_string(r->lo) + ".." + std::to_string(r->hi);
          else
            out += std::get<Term>(d.enumeration[i]).str();
        }
        out += "}";
      }
      return out + ".";
    }
    std::string operator()(const AttrDecl& d) const {
      std::string out = d.name + " : ";
      if (!d.param_sorts.empty()) {
        for (size_t i = 0; i < d.param_sorts.size(); ++i) {
          if (i) out += ", ";
          out += d.param_sorts[i];
        }
        out += " -> ";
      }
      return out + d.range_sort + ".";
    }
    std::string operator()(const DomainDecl& d) const {
      return "#domain " + d.sort + "(" + d.var + ").";
    }
    std::string operator()(const RegularRule& r) const {
      std::string out;
      if (r.head) out = literal_expr_str(*r.head);
      if (!r.body.empty()) out += (r.head ? " " : "") + std::string(":- ") + body_str(r.body);
      return out + ".";
    }
    std::string operator()(const RandomSelection& r) const {
      std::string out;
      if (r.name) out += "[" + term_expr_str(*r.name) + "] ";
      out += "random(" + r.attr;
      if (!r.args.empty()) {
        out += "(";
        for (size_t i = 0; i < r.args.size(); ++i) {
          if (i) out += ",";
          out += term_expr_str(r.args[i]);
        }
        out += ")";
      }
      if (r.range) out += " : {" + r.range->var + " : " + r.range->pred + "(" + r.range->var + ")}";
      out += ")";
      if (!r.body.empty()) out += " :- " + body_str(r.body);
      return out + ".";
    }
    std::string operator()(const PrAtom& p) const {
      std::string out = "pr";
      if (p.rule_name) out += "[" + term_expr_str(*p.rule_name) + "]";
      out += "(" + atom_expr_str(p.head);
      if (!p.body.empty()) out += " |c " + body_str(p.body);
      return out + ") = " + p.value.str() + ".";
    }
    std::string operator()(const Observation& o) const {
      return "obs(" + literal_expr_str(o.lit) + ").";
    }
    std::string operator()(const DoAction& d) const { return "do(" + atom_expr_str(d.atom) + ")."; }
  };
  return std::visit(V{}, s);
}

std::string print_program(const Program& p) {
  std::string out;
  for (const auto& s : p.stmts) {
    out += print_statement(s);
    out += "\n";
  }
  return out;
}

}  // namespace plog
