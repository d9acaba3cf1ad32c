#include "parser.hpp"

#include <cctype>
#include <optional>
#include <sstream>

#include "errors.hpp"

namespace plog {

void DeclEnv::absorb(const Program& p) {
  for (const auto& s : p.stmts) {
    if (auto* sd = std::get_if<SortDecl>(&s)) sorts[sd->name] = true;
    if (auto* ad = std::get_if<AttrDecl>(&s)) attrs.emplace(ad->name, *ad);
  }
}

namespace {

enum class Tok {
  Ident, Var, Int, Decimal,
  Dot, Comma, Colon, LParen, RParen, LBrace, RBrace, LBracket, RBracket,
  Eq, EqEq, Neq, Lt, Le, Gt, Ge, Plus, Minus, Star, Slash,
  If,       // :-
  Arrow,    // ->
  DotDot,   // ..
  Tilde, Pipe, Amp, DomainKw, End
};

struct Token {
  Tok kind;
  std::string text;
  std::int64_t ival = 0;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : s_(src) { scan(); }
  std::vector<Token> take() { return std::move(toks_); }

 private:
  void scan() {
    size_t i = 0;
    int line = 1, col = 1;
    auto push = [&](Tok k, std::string t, std::int64_t v = 0) {
      toks_.push_back({k, std::move(t), v, line, col});
    };
    while (i < s_.size()) {
      char c = s_[i];
      if (c == '\n') { ++i; ++line; col = 1; continue; }
      if (std::isspace(static_cast<unsigned char>(c))) { ++i; ++col; continue; }
      if (c == '%') {
        while (i < s_.size() && s_[i] != '\n') ++i;
        continue;
      }
      int tcol = col;
      auto adv = [&](size_t n) { i += n; col += static_cast<int>(n); };
      if (std::isdigit(static_cast<unsigned char>(c))) {
        size_t j = i;
        while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
        // "1.5" is a decimal, "1..6" a range, "1." an integer then period
        if (j + 1 < s_.size() && s_[j] == '.' && std::isdigit(static_cast<unsigned char>(s_[j + 1]))) {
          size_t k = j + 1;
          while (k < s_.size() && std::isdigit(static_cast<unsigned char>(s_[k]))) ++k;
          toks_.push_back({Tok::Decimal, s_.substr(i, k - i), 0, line, tcol});
          adv(k - i);
          continue;
        }
        std::string num = s_.substr(i, j - i);
        toks_.push_back({Tok::Int, num, std::stoll(num), line, tcol});
        adv(j - i);
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        size_t j = i;
        while (j < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_'))
          ++j;
        std::string w = s_.substr(i, j - i);
        bool isvar = std::isupper(static_cast<unsigned char>(c)) || c == '_';
        toks_.push_back({isvar ? Tok::Var : Tok::Ident, w, 0, line, tcol});
        adv(j - i);
        continue;
      }
      if (c == '#') {
        size_t j = i + 1;
        while (j < s_.size() && std::isalpha(static_cast<unsigned char>(s_[j]))) ++j;
        std::string w = s_.substr(i, j - i);
        if (w != "#domain")
          throw Error(ErrorCode::Syntax, "unknown directive '" + w + "' at line " +
                                             std::to_string(line));
        toks_.push_back({Tok::DomainKw, w, 0, line, tcol});
        adv(j - i);
        continue;
      }
      auto two = [&](const char* pat, Tok k) {
        if (i + 1 < s_.size() && s_[i] == pat[0] && s_[i + 1] == pat[1]) {
          toks_.push_back({k, pat, 0, line, tcol});
          adv(2);
          return true;
        }
        return false;
      };
      if (two(":-", Tok::If) || two("->", Tok::Arrow) || two("..", Tok::DotDot) ||
          two("<>", Tok::Neq) || two("!=", Tok::Neq) || two("<=", Tok::Le) ||
          two(">=", Tok::Ge) || two("==", Tok::EqEq))
        continue;
      switch (c) {
        case '.': push(Tok::Dot, "."); break;
        case ',': push(Tok::Comma, ","); break;
        case ':': push(Tok::Colon, ":"); break;
        case '(': push(Tok::LParen, "("); break;
        case ')': push(Tok::RParen, ")"); break;
        case '{': push(Tok::LBrace, "{"); break;
        case '}': push(Tok::RBrace, "}"); break;
        case '[': push(Tok::LBracket, "["); break;
        case ']': push(Tok::RBracket, "]"); break;
        case '=': push(Tok::Eq, "="); break;
        case '<': push(Tok::Lt, "<"); break;
        case '>': push(Tok::Gt, ">"); break;
        case '+': push(Tok::Plus, "+"); break;
        case '-': push(Tok::Minus, "-"); break;
        case '*': push(Tok::Star, "*"); break;
        case '/': push(Tok::Slash, "/"); break;
        case '~': push(Tok::Tilde, "~"); break;
        case '|': push(Tok::Pipe, "|"); break;
        case '&': push(Tok::Amp, "&"); break;
        default:
          throw Error(ErrorCode::Syntax, std::string("unexpected character '") + c +
                                             "' at line " + std::to_string(line) + ":" +
                                             std::to_string(col));
      }
      adv(1);
    }
    toks_.push_back({Tok::End, "<eof>", 0, line, col});
  }

  const std::string& s_;
  std::vector<Token> toks_;
};

bool is_reserved(const std::string& w) {
  return w == "not" || w == "random" || w == "pr" || w == "obs" || w == "do" || w == "mod" ||
         w == "boolean";
}

class Parser {
 public:
  Parser(const std::string& text, const DeclEnv* env) : toks_(Lexer(text).take()) {
    if (env) env_ = *env;
  }

  Program parse_program() {
    Program p;
    while (!at(Tok::End)) parse_statement_into(p);
    return p;
  }

  LiteralExpr parse_single_literal() {
    LiteralExpr l = parse_literal();
    expect(Tok::End, "end of literal");
    return l;
  }

  AtomExpr parse_single_atom() {
    LiteralExpr l = parse_literal();
    expect(Tok::End, "end of atom");
    if (l.neg) {
      // ~a sugar: do/atoms on boolean attributes may be written negated
      const AttrDecl* d = env_.attr(l.atom.attr);
      if (d && d->range_sort == "boolean" && l.atom.value->is_const() &&
          std::get<TermExpr::Const>(l.atom.value->node).value == term_true()) {
        AtomExpr a = l.atom;
        a.value = TermExpr::constant(term_false());
        return a;
      }
      err("expected an atom, found a negative literal");
    }
    return l.atom;
  }

  Formula parse_single_formula() {
    Formula f = parse_formula_or();
    expect(Tok::End, "end of formula");
    return f;
  }

  Statement parse_single_statement() {
    Program p;
    parse_statement_into(p);
    expect(Tok::End, "end of statement");
    if (p.stmts.size() != 1) err("expected exactly one statement");
    return p.stmts[0];
  }

 private:
  // --- token helpers -------------------------------------------------------
  const Token& cur() const { return toks_[pos_]; }
  const Token& peek(size_t n = 1) const {
    return toks_[std::min(pos_ + n, toks_.size() - 1)];
  }
  bool at(Tok k) const { return cur().kind == k; }
  bool at_ident(const char* w) const { return at(Tok::Ident) && cur().text == w; }
  Token advance() { return toks_[pos_++]; }
  bool accept(Tok k) {
    if (at(k)) { ++pos_; return true; }
    return false;
  }
  Token expect(Tok k, const std::string& what) {
    if (!at(k))
      err("expected " + what + ", found '" + cur().text + "'");
    return advance();
  }
  [[noreturn]] void err(const std::string& msg) const {
    fail(ErrorCode::Syntax, "line " + std::to_string(cur().line) + ":" +
                                std::to_string(cur().col) + ": " + msg);
  }
  [[noreturn]] void sort_err(const std::string& msg) const {
    fail(ErrorCode::Sort, "line " + std::to_string(cur().line) + ":" +
                              std::to_string(cur().col) + ": " + msg);
  }

  // --- statements ----------------------------------------------------------
  void parse_statement_into(Program& p) {
    if (at(Tok::DomainKw)) {
      advance();
      do {
        std::string sort = expect(Tok::Ident, "sort name").text;
        if (!env_.has_sort(sort)) sort_err("undeclared sort '" + sort + "'");
        expect(Tok::LParen, "'('");
        std::string var = expect(Tok::Var, "variable").text;
        expect(Tok::RParen, "')'");
        p.stmts.push_back(DomainDecl{sort, var});
      } while (accept(Tok::Comma));
      expect(Tok::Dot, "'.'");
      return;
    }
    if (at(Tok::LBracket)) {  // [name] random(...)
      advance();
      TermExprPtr name = parse_term();
      expect(Tok::RBracket, "']'");
      if (!at_ident("random")) err("expected 'random' after rule name");
      parse_random(p, name);
      return;
    }
    if (at_ident("random")) { parse_random(p, std::nullopt); return; }
    if (at_ident("pr")) { parse_pr(p); return; }
    if (at_ident("obs")) {
      advance();
      expect(Tok::LParen, "'('");
      LiteralExpr l = parse_literal();
      expect(Tok::RParen, "')'");
      expect(Tok::Dot, "'.'");
      p.stmts.push_back(Observation{l});
      return;
    }
    if (at_ident("do")) {
      advance();
      expect(Tok::LParen, "'('");
      LiteralExpr l = parse_literal();
      expect(Tok::RParen, "')'");
      expect(Tok::Dot, "'.'");
      if (l.neg) {
        const AttrDecl* d = env_.attr(l.atom.attr);
        bool bool_true = l.atom.value->is_const() &&
                         std::get<TermExpr::Const>(l.atom.value->node).value == term_true();
        if (d && d->range_sort == "boolean" && bool_true) {
          AtomExpr a = l.atom;
          a.value = TermExpr::constant(term_false());
          p.stmts.push_back(DoAction{a});
          return;
        }
        sort_err("do(...) takes an atom a(t)=y, not a negative literal");
      }
      p.stmts.push_back(DoAction{l.atom});
      return;
    }
    // sort definition: ident '='
    if (at(Tok::Ident) && peek().kind == Tok::Eq && !env_.attr(cur().text)) {
      parse_sort_decl(p);
      return;
    }
    // attribute declaration: ident (',' ident)* ':'
    if (at(Tok::Ident) && looks_like_attr_decl()) {
      parse_attr_decl(p);
      return;
    }
    // otherwise: regular rule / fact / constraint
    RegularRule r;
    if (!at(Tok::If)) r.head = parse_literal();
    if (accept(Tok::If)) r.body = parse_body(Tok::Dot);
    expect(Tok::Dot, "'.'");
    p.stmts.push_back(std::move(r));
  }

  bool looks_like_attr_decl() const {
    // scan idents separated by commas, then ':' but not ':-'
    size_t i = pos_;
    while (true) {
      if (toks_[i].kind != Tok::Ident) return false;
      ++i;
      if (toks_[i].kind == Tok::Comma) { ++i; continue; }
      return toks_[i].kind == Tok::Colon;
    }
  }

  void parse_sort_decl(Program& p) {
    // Redeclarations parse fine; consistency is checked when the program is
    // resolved, so that merging update files with identical declarations works.
    std::string name = expect(Tok::Ident, "sort name").text;
    if (is_reserved(name)) err("'" + name + "' is reserved");
    expect(Tok::Eq, "'='");
    SortDecl d;
    d.name = name;
    if (at_ident("program")) {
      advance();
      expect(Tok::LBrace, "'{'");
      std::vector<DefRule> rules;
      while (!accept(Tok::RBrace)) rules.push_back(parse_def_rule());
      d.def_program = std::move(rules);
    } else {
      expect(Tok::LBrace, "'{'");
      // comprehension form: {f(s1,...,sk)} with every argument a declared sort
      if (at(Tok::Ident) && peek().kind == Tok::LParen && comprehension_ahead()) {
        d.product_functor = advance().text;
        expect(Tok::LParen, "'('");
        std::vector<std::string> sorts;
        do {
          std::string sn = expect(Tok::Ident, "sort name").text;
          sorts.push_back(sn);
        } while (accept(Tok::Comma));
        expect(Tok::RParen, "')'");
        expect(Tok::RBrace, "'}'");
        d.product = std::move(sorts);
      } else {
        do {
          d.enumeration.push_back(parse_sort_elem());
        } while (accept(Tok::Comma));
        expect(Tok::RBrace, "'}'");
      }
    }
    expect(Tok::Dot, "'.'");
    env_.sorts[name] = true;
    p.stmts.push_back(std::move(d));
  }

  bool comprehension_ahead() const {
    // ident '(' ident,... ')' '}' with all idents declared sorts
    size_t i = pos_ + 2;
    while (true) {
      if (toks_[i].kind != Tok::Ident || !env_.has_sort(toks_[i].text)) return false;
      ++i;
      if (toks_[i].kind == Tok::Comma) { ++i; continue; }
      break;
    }
    return toks_[i].kind == Tok::RParen && toks_[i + 1].kind == Tok::RBrace;
  }

  SortElem parse_sort_elem() {
    if (at(Tok::Int) || at(Tok::Minus)) {
      std::int64_t lo = parse_signed_int();
      if (accept(Tok::DotDot)) {
        std::int64_t hi = parse_signed_int();
        if (lo > hi) sort_err("empty integer range " + std::to_string(lo) + ".." +
                              std::to_string(hi));
        return IntRange{lo, hi};
      }
      return Term::integer(lo);
    }
    TermExprPtr t = parse_term();
    Term g = require_ground(t);
    return g;
  }

  std::int64_t parse_signed_int() {
    bool neg = accept(Tok::Minus);
    auto t = expect(Tok::Int, "integer");
    return neg ? -t.ival : t.ival;
  }

  Term require_ground(const TermExprPtr& e) {
    std::vector<std::string> vars;
    collect_vars(e, vars);
    if (!vars.empty()) err("variable '" + vars[0] + "' not allowed here");
    return ground_of(e);
  }

  Term ground_of(const TermExprPtr& e) {
    if (e->is_const()) return std::get<TermExpr::Const>(e->node).value;
    const auto& c = std::get<TermExpr::Compound>(e->node);
    std::vector<Term> args;
    for (auto& a : c.args) args.push_back(ground_of(a));
    return Term::compound(c.functor, std::move(args));
  }

  void parse_attr_decl(Program& p) {
    std::vector<std::string> names;
    do {
      std::string n = expect(Tok::Ident, "attribute name").text;
      if (is_reserved(n)) err("'" + n + "' is reserved");
      names.push_back(n);
    } while (accept(Tok::Comma));
    expect(Tok::Colon, "':'");
    std::vector<std::string> sorts;
    std::string range;
    // sort list is either "c0" or "c1 * ... * cn -> c0" (commas also accepted);
    // an inline enumeration "{...}" declares an anonymous range sort.
    auto parse_sort_name = [&]() -> std::string {
      if (at(Tok::LBrace)) {
        advance();
        SortDecl anon;
        anon.name = names[0] + "_range";
        do {
          anon.enumeration.push_back(parse_sort_elem());
        } while (accept(Tok::Comma));
        expect(Tok::RBrace, "'}'");
        env_.sorts[anon.name] = true;
        p.stmts.push_back(anon);
        return anon.name;
      }
      std::string sn = expect(Tok::Ident, "sort name").text;
      if (!env_.has_sort(sn)) sort_err("undeclared sort '" + sn + "'");
      return sn;
    };
    sorts.push_back(parse_sort_name());
    while (at(Tok::Star) || at(Tok::Comma)) {
      advance();
      sorts.push_back(parse_sort_name());
    }
    if (accept(Tok::Arrow)) {
      range = parse_sort_name();
    } else {
      if (sorts.size() != 1) err("expected '->' after parameter sorts");
      range = sorts[0];
      sorts.clear();
    }
    expect(Tok::Dot, "'.'");
    for (auto& n : names) {
      AttrDecl d{n, sorts, range};
      env_.attrs.emplace(n, d);
      p.stmts.push_back(std::move(d));
    }
  }

  DefRule parse_def_rule() {
    DefRule r;
    r.head = parse_def_atom();
    if (accept(Tok::If)) {
      do {
        DefBodyElem e;
        if (at_ident("not")) {
          advance();
          e.default_neg = true;
          e.atom = parse_def_atom();
        } else if (at(Tok::Ident) && cur().text != "mod") {
          e.atom = parse_def_atom();
        } else {
          e.is_builtin = true;
          e.builtin = parse_builtin();
        }
        r.body.push_back(std::move(e));
      } while (accept(Tok::Comma));
    }
    expect(Tok::Dot, "'.'");
    return r;
  }

  DefAtom parse_def_atom() {
    DefAtom a;
    a.pred = expect(Tok::Ident, "predicate name").text;
    if (accept(Tok::LParen)) {
      do {
        a.args.push_back(parse_arith_expr());
      } while (accept(Tok::Comma));
      expect(Tok::RParen, "')'");
    }
    return a;
  }

  void parse_random(Program& p, std::optional<TermExprPtr> name) {
    advance();  // 'random'
    expect(Tok::LParen, "'('");
    RandomSelection sel;
    sel.name = std::move(name);
    sel.attr = expect(Tok::Ident, "attribute name").text;
    const AttrDecl* d = env_.attr(sel.attr);
    if (!d) sort_err("undeclared attribute '" + sel.attr + "'");
    if (accept(Tok::LParen)) {
      do {
        sel.args.push_back(parse_term());
      } while (accept(Tok::Comma));
      expect(Tok::RParen, "')'");
    }
    if (sel.args.size() != d->param_sorts.size())
      sort_err("attribute '" + sel.attr + "' expects " + std::to_string(d->param_sorts.size()) +
               " argument(s)");
    if (accept(Tok::Colon)) {
      expect(Tok::LBrace, "'{'");
      std::string var = expect(Tok::Var, "variable").text;
      expect(Tok::Colon, "':'");
      std::string pred = expect(Tok::Ident, "predicate").text;
      const AttrDecl* pd = env_.attr(pred);
      if (!pd) sort_err("undeclared attribute '" + pred + "'");
      if (pd->range_sort != "boolean" || pd->param_sorts.size() != 1)
        sort_err("dynamic range predicate '" + pred + "' must be a unary boolean attribute");
      expect(Tok::LParen, "'('");
      std::string var2 = expect(Tok::Var, "variable").text;
      if (var2 != var) err("set-term variable mismatch: {" + var + " : " + pred + "(" + var2 + ")}");
      expect(Tok::RParen, "')'");
      expect(Tok::RBrace, "'}'");
      sel.range = DynRange{var, pred};
    }
    expect(Tok::RParen, "')'");
    if (accept(Tok::If)) sel.body = parse_body(Tok::Dot);
    expect(Tok::Dot, "'.'");
    p.stmts.push_back(std::move(sel));
  }

  void parse_pr(Program& p) {
    advance();  // 'pr'
    PrAtom pr{std::nullopt, {}, {}, Rational(0)};
    if (accept(Tok::LBracket)) {
      pr.rule_name = parse_term();
      expect(Tok::RBracket, "']'");
    }
    expect(Tok::LParen, "'('");
    LiteralExpr head = parse_literal();
    if (head.neg) sort_err("pr-atom head must be an atom a(t)=y");
    pr.head = head.atom;
    if (accept(Tok::Pipe)) {
      if (!at(Tok::Ident) || cur().text != "c") err("expected 'c' after '|'");
      advance();
      pr.body = parse_body(Tok::RParen);
    }
    expect(Tok::RParen, "')'");
    expect(Tok::Eq, "'='");
    pr.value = parse_probability();
    expect(Tok::Dot, "'.'");
    p.stmts.push_back(std::move(pr));
  }

  Rational parse_probability() {
    Rational v(0);
    if (at(Tok::Decimal)) {
      v = Rational::parse(advance().text);
    } else if (at(Tok::Int)) {
      std::int64_t num = advance().ival;
      if (accept(Tok::Slash)) {
        auto den = expect(Tok::Int, "denominator");
        if (den.ival == 0) err("zero denominator");
        v = Rational(num, den.ival);
      } else {
        v = Rational(num);
      }
    } else {
      err("expected probability value");
    }
    if (v < Rational(0) || v > Rational(1))
      fail(ErrorCode::Range, "probability " + v.str() + " outside [0,1]");
    return v;
  }

  // --- literals, terms, bodies --------------------------------------------
  TermExprPtr parse_term() {
    if (at(Tok::Var)) return TermExpr::var(advance().text);
    if (at(Tok::Int)) return TermExpr::constant(Term::integer(advance().ival));
    if (at(Tok::Minus)) {
      advance();
      auto t = expect(Tok::Int, "integer");
      return TermExpr::constant(Term::integer(-t.ival));
    }
    std::string name = expect(Tok::Ident, "term").text;
    if (accept(Tok::LParen)) {
      std::vector<TermExprPtr> args;
      do {
        args.push_back(parse_term());
      } while (accept(Tok::Comma));
      expect(Tok::RParen, "')'");
      bool all_ground = true;
      for (auto& a : args)
        if (!a->is_const()) all_ground = false;
      if (all_ground) {
        std::vector<Term> ga;
        for (auto& a : args) ga.push_back(std::get<TermExpr::Const>(a->node).value);
        return TermExpr::constant(Term::compound(name, std::move(ga)));
      }
      return TermExpr::compound(name, std::move(args));
    }
    return TermExpr::constant(Term::symbol(name));
  }

  LiteralExpr parse_literal() {
    LiteralExpr l;
    if (accept(Tok::Tilde)) l.neg = true;
    std::string attr = expect(Tok::Ident, "attribute name").text;
    const AttrDecl* d = env_.attr(attr);
    if (!d) sort_err("undeclared attribute '" + attr + "'");
    l.atom.attr = attr;
    if (accept(Tok::LParen)) {
      do {
        l.atom.args.push_back(parse_term());
      } while (accept(Tok::Comma));
      expect(Tok::RParen, "')'");
    }
    if (l.atom.args.size() != d->param_sorts.size())
      sort_err("attribute '" + attr + "' expects " + std::to_string(d->param_sorts.size()) +
               " argument(s), got " + std::to_string(l.atom.args.size()));
    if (accept(Tok::Eq)) {
      l.atom.value = parse_term();
    } else if (accept(Tok::Neq)) {
      l.atom.value = parse_term();
      l.neg = !l.neg;
    } else {
      if (d->range_sort != "boolean")
        sort_err("attribute '" + attr + "' is not boolean; write '" + attr + " = <value>'");
      l.atom.value = TermExpr::constant(term_true());
    }
    return l;
  }

  BuiltinExpr parse_builtin() {
    BuiltinExpr b;
    b.lhs = parse_arith_expr();
    if (accept(Tok::Eq) || accept(Tok::EqEq))
      b.op = CmpOp::Eq;
    else if (accept(Tok::Neq))
      b.op = CmpOp::Neq;
    else if (accept(Tok::Le))
      b.op = CmpOp::Le;
    else if (accept(Tok::Ge))
      b.op = CmpOp::Ge;
    else if (accept(Tok::Lt))
      b.op = CmpOp::Lt;
    else if (accept(Tok::Gt))
      b.op = CmpOp::Gt;
    else
      err("expected comparison operator");
    b.rhs = parse_arith_expr();
    return b;
  }

  TermExprPtr parse_arith_expr() {
    TermExprPtr lhs = parse_arith_mul();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      ArithOp op = at(Tok::Plus) ? ArithOp::Add : ArithOp::Sub;
      advance();
      lhs = TermExpr::arith(op, lhs, parse_arith_mul());
    }
    return lhs;
  }

  TermExprPtr parse_arith_mul() {
    TermExprPtr lhs = parse_arith_primary();
    while (at(Tok::Star) || at_ident("mod")) {
      ArithOp op = at(Tok::Star) ? ArithOp::Mul : ArithOp::Mod;
      advance();
      lhs = TermExpr::arith(op, lhs, parse_arith_primary());
    }
    return lhs;
  }

  TermExprPtr parse_arith_primary() {
    if (accept(Tok::LParen)) {
      TermExprPtr e = parse_arith_expr();
      expect(Tok::RParen, "')'");
      return e;
    }
    if (at(Tok::Minus)) {
      advance();
      return TermExpr::arith(ArithOp::Sub, TermExpr::constant(Term::integer(0)),
                             parse_arith_primary());
    }
    if (at(Tok::Var)) return TermExpr::var(advance().text);
    if (at(Tok::Int)) return TermExpr::constant(Term::integer(advance().ival));
    if (at(Tok::Ident) && cur().text != "mod")
      return TermExpr::constant(Term::symbol(advance().text));
    err("expected integer expression");
  }

  Body parse_body(Tok) {
    Body body;
    do {
      body.push_back(parse_body_elem());
    } while (accept(Tok::Comma));
    return body;
  }

  BodyElem parse_body_elem() {
    if (at_ident("not")) {
      advance();
      ExtLiteralExpr e;
      e.default_neg = true;
      e.lit = parse_literal();
      return e;
    }
    if (at(Tok::Tilde)) {
      ExtLiteralExpr e;
      e.lit = parse_literal();
      return e;
    }
    if (at(Tok::Ident) && cur().text != "mod") {
      if (!env_.attr(cur().text))
        sort_err("undeclared attribute '" + cur().text + "'");
      ExtLiteralExpr e;
      e.lit = parse_literal();
      return e;
    }
    return parse_builtin();
  }

  // --- formulas -------------------------------------------------------------
  Formula parse_formula_or() {
    Formula lhs = parse_formula_and();
    while (accept(Tok::Pipe)) {
      Formula r = parse_formula_and();
      Formula f;
      f.kind = Formula::Kind::Or;
      f.lhs = std::make_shared<Formula>(std::move(lhs));
      f.rhs = std::make_shared<Formula>(std::move(r));
      lhs = std::move(f);
    }
    return lhs;
  }

  Formula parse_formula_and() {
    Formula lhs = parse_formula_unit();
    while (accept(Tok::Amp)) {
      Formula r = parse_formula_unit();
      Formula f;
      f.kind = Formula::Kind::And;
      f.lhs = std::make_shared<Formula>(std::move(lhs));
      f.rhs = std::make_shared<Formula>(std::move(r));
      lhs = std::move(f);
    }
    return lhs;
  }

  Formula parse_formula_unit() {
    if (accept(Tok::LParen)) {
      Formula f = parse_formula_or();
      expect(Tok::RParen, "')'");
      return f;
    }
    Formula f;
    f.kind = Formula::Kind::Lit;
    if (at_ident("not")) {
      advance();
      f.lit.default_neg = true;
    }
    f.lit.lit = parse_literal();
    return f;
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  DeclEnv env_;
};

}  // namespace

Program parse_program(const std::string& text, const DeclEnv* env) {
  return Parser(text, env).parse_program();
}

LiteralExpr parse_literal_text(const std::string& text, const DeclEnv& env) {
  return Parser(text, &env).parse_single_literal();
}

AtomExpr parse_atom_text(const std::string& text, const DeclEnv& env) {
  return Parser(text, &env).parse_single_atom();
}

Formula parse_formula_text(const std::string& text, const DeclEnv& env) {
  return Parser(text, &env).parse_single_formula();
}

Statement parse_statement_text(const std::string& text, const DeclEnv& env) {
  return Parser(text, &env).parse_single_statement();
}

std::string formula_str(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::Lit:
      return (f.lit.default_neg ? "not " : "") + literal_expr_str(f.lit.lit);
    case Formula::Kind::And:
      return "(" + formula_str(*f.lhs) + " & " + formula_str(*f.rhs) + ")";
    case Formula::Kind::Or:
      return "(" + formula_str(*f.lhs) + " | " + formula_str(*f.rhs) + ")";
  }
  return "";
}

}  // namespace plog
