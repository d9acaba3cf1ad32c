#include "bayesnet.hpp"

#include <algorithm>
#include <functional>
#include <json.hpp>
#include <set>
#include <sstream>

#include "errors.hpp"
#include "parser.hpp"
#include "updates.hpp"
#include "worlds.hpp"

namespace plog {

using nlohmann::json;

const BayesNet::Variable& BayesNet::var(const std::string& name) const {
  for (const auto& v : variables)
    if (v.name == name) return v;
  fail(ErrorCode::Sort, "unknown variable '" + name + "'");
}

std::vector<std::string> BayesNet::names() const {
  std::vector<std::string> out;
  for (const auto& v : variables) out.push_back(v.name);
  return out;
}

namespace {

Term term_from_json(const json& j) {
  if (j.is_string()) return Term::symbol(j.get<std::string>());
  if (j.is_number_integer()) return Term::integer(j.get<std::int64_t>());
  fail(ErrorCode::Syntax, "domain values must be strings or integers");
}

Rational prob_from_json(const json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  fail(ErrorCode::Syntax,
       "probabilities must be exact: write them as strings like \"0.8\" or \"4/5\"");
}

Term parse_value(const BayesNet::Variable& v, const json& j) {
  Term t = term_from_json(j);
  // JSON object keys are strings; integer-shaped keys mean integer values
  if (t.is_symbol()) {
    const std::string& s = t.as_symbol();
    bool numeric = !s.empty() && (std::isdigit(static_cast<unsigned char>(s[0])) ||
                                  (s[0] == '-' && s.size() > 1));
    if (numeric) {
      bool all = true;
      for (size_t i = 1; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) all = false;
      if (all) t = Term::integer(std::stoll(s));
    }
  }
  if (std::find(v.domain.begin(), v.domain.end(), t) == v.domain.end())
    fail(ErrorCode::Sort, "'" + t.str() + "' is not in the domain of '" + v.name + "'");
  return t;
}

void validate(const BayesNet& b) {
  std::set<std::string> names;
  for (const auto& v : b.variables) {
    if (!names.insert(v.name).second)
      fail(ErrorCode::Sort, "variable '" + v.name + "' declared twice");
    if (v.domain.empty()) fail(ErrorCode::Sort, "variable '" + v.name + "' has an empty domain");
  }
  // acyclicity and declared parents
  std::map<std::string, int> state;  // 0 fresh, 1 visiting, 2 done
  std::function<void(const std::string&)> visit = [&](const std::string& n) {
    int& s = state[n];
    if (s == 1) fail(ErrorCode::Sort, "parent graph has a cycle through '" + n + "'");
    if (s == 2) return;
    s = 1;
    for (const auto& p : b.var(n).parents) visit(p);
    s = 2;
  };
  for (const auto& v : b.variables) visit(v.name);

  for (const auto& v : b.variables) {
    // every parent assignment covered exactly once, every row a distribution
    size_t expected = 1;
    for (const auto& p : v.parents) expected *= b.var(p).domain.size();
    if (v.cpt.size() != expected)
      fail(ErrorCode::Sort, "variable '" + v.name + "': CPT has " +
                                std::to_string(v.cpt.size()) + " rows, needs " +
                                std::to_string(expected));
    for (const auto& [given, dist] : v.cpt) {
      Rational sum(0);
      for (const Term& y : v.domain) {
        auto it = dist.find(y);
        if (it == dist.end())
          fail(ErrorCode::Sort, "variable '" + v.name + "': CPT row misses value " + y.str());
        if (it->second < Rational(0) || it->second > Rational(1))
          fail(ErrorCode::Range, "CPT entry outside [0,1] for '" + v.name + "'");
        sum += it->second;
      }
      if (sum != Rational(1))
        fail(ErrorCode::Sort, "variable '" + v.name + "': CPT row sums to " + sum.str());
    }
  }
}

bool is_boolean_domain(const std::vector<Term>& d) {
  return d.size() == 2 && d[0] == term_true() && d[1] == term_false();
}

}  // namespace

BayesNet bayes_net_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(ErrorCode::Syntax, std::string("bad JSON: ") + e.what());
  }
  BayesNet b;
  if (!j.contains("variables") || !j["variables"].is_array())
    fail(ErrorCode::Syntax, "expected a top-level \"variables\" array");
  for (const auto& jv : j["variables"]) {
    BayesNet::Variable v;
    v.name = jv.at("name").get<std::string>();
    for (const auto& d : jv.at("domain")) v.domain.push_back(term_from_json(d));
    if (jv.contains("parents"))
      for (const auto& p : jv["parents"]) v.parents.push_back(p.get<std::string>());
    b.variables.push_back(std::move(v));
  }
  // second pass: rows may reference any declared variable
  size_t idx = 0;
  for (const auto& jv : j["variables"]) {
    BayesNet::Variable& v = b.variables[idx++];
    for (const auto& row : jv.at("cpt")) {
      std::vector<Term> key;
      const auto& given = row.at("given");
      for (const auto& p : v.parents) {
        if (!given.contains(p))
          fail(ErrorCode::Sort, "CPT row for '" + v.name + "' misses parent '" + p + "'");
        key.push_back(parse_value(b.var(p), given[p]));
      }
      std::map<Term, Rational> dist;
      for (const auto& [val, pr] : row.at("dist").items())
        dist[parse_value(v, json(val))] = prob_from_json(pr);
      if (!v.cpt.emplace(std::move(key), std::move(dist)).second)
        fail(ErrorCode::Sort, "duplicate CPT row for '" + v.name + "'");
    }
  }
  validate(b);
  return b;
}

std::string bayes_net_to_json(const BayesNet& b) {
  json out;
  out["variables"] = json::array();
  for (const auto& v : b.variables) {
    json jv;
    jv["name"] = v.name;
    jv["domain"] = json::array();
    for (const auto& d : v.domain)
      jv["domain"].push_back(d.is_integer() ? json(d.as_integer()) : json(d.str()));
    jv["parents"] = v.parents;
    jv["cpt"] = json::array();
    for (const auto& [given, dist] : v.cpt) {
      json row;
      row["given"] = json::object();
      for (size_t i = 0; i < v.parents.size(); ++i) row["given"][v.parents[i]] = given[i].str();
      row["dist"] = json::object();
      for (const auto& [val, pr] : dist) row["dist"][val.str()] = pr.str();
      jv["cpt"].push_back(std::move(row));
    }
    out["variables"].push_back(std::move(jv));
  }
  return out.dump(2);
}

Program net_to_plog(const BayesNet& b) {
  validate(b);
  Program p;
  for (const auto& v : b.variables) {
    if (v.name.empty() || !std::islower(static_cast<unsigned char>(v.name[0])))
      fail(ErrorCode::Sort, "variable '" + v.name + "' is not a lowercase identifier");
    if (!is_boolean_domain(v.domain)) {
      SortDecl sd;
      sd.name = "dom_" + v.name;
      for (const Term& t : v.domain) {
        if (t == term_true() || t == term_false())
          fail(ErrorCode::Sort, "mixed boolean/non-boolean domain for '" + v.name + "'");
        sd.enumeration.push_back(t);
      }
      p.stmts.push_back(std::move(sd));
    }
  }
  for (const auto& v : b.variables)
    p.stmts.push_back(
        AttrDecl{v.name, {}, is_boolean_domain(v.domain) ? "boolean" : "dom_" + v.name});
  for (const auto& v : b.variables) {
    RandomSelection sel;
    sel.attr = v.name;
    p.stmts.push_back(std::move(sel));
  }
  for (const auto& v : b.variables) {
    for (const auto& [given, dist] : v.cpt) {
      for (const auto& [val, pr] : dist) {
        PrAtom q{std::nullopt,
                 AtomExpr{v.name, {}, TermExpr::constant(val)},
                 {},
                 pr};
        for (size_t i = 0; i < v.parents.size(); ++i) {
          LiteralExpr l;
          l.atom = AtomExpr{v.parents[i], {}, TermExpr::constant(given[i])};
          q.body.push_back(ExtLiteralExpr{false, l});
        }
        p.stmts.push_back(std::move(q));
      }
    }
  }
  return p;
}

Rational interventional_prob(const BayesNet& b, const Assignment& r, const Assignment& total) {
  for (const auto& v : b.variables)
    if (!total.count(v.name))
      fail(ErrorCode::Sort, "assignment misses variable '" + v.name + "'");
  for (const auto& [n, t] : r)
    if (!(total.at(n) == t)) return Rational(0);
  Rational prod(1);
  for (const auto& v : b.variables) {
    if (r.count(v.name)) continue;
    std::vector<Term> key;
    for (const auto& p : v.parents) key.push_back(total.at(p));
    prod *= v.cpt.at(key).at(total.at(v.name));
  }
  return prod;
}

namespace {

void product_rec(const BayesNet& b, size_t i, bool allow_unset, Assignment& acc,
                 std::vector<Assignment>& out) {
  if (i == b.variables.size()) {
    out.push_back(acc);
    return;
  }
  const auto& v = b.variables[i];
  if (allow_unset) product_rec(b, i + 1, allow_unset, acc, out);
  for (const Term& t : v.domain) {
    acc[v.name] = t;
    product_rec(b, i + 1, allow_unset, acc, out);
    acc.erase(v.name);
  }
}

}  // namespace

std::vector<Assignment> all_assignments(const BayesNet& b) {
  std::vector<Assignment> out;
  Assignment acc;
  product_rec(b, 0, false, acc, out);
  return out;
}

std::vector<Assignment> all_interventions(const BayesNet& b) {
  std::vector<Assignment> out;
  Assignment acc;
  product_rec(b, 0, true, acc, out);
  return out;
}

CbnCheck check_cbn_theorem(const BayesNet& b, const Assignment& r) {
  Program p = net_to_plog(b);
  for (const auto& [n, t] : r) p.stmts.push_back(DoAction{AtomExpr{n, {}, TermExpr::constant(t)}});
  Engine e(p);
  CbnCheck out;
  for (const Assignment& total : all_assignments(b)) {
    std::vector<GroundExtLit> conj;
    for (const auto& [n, t] : total)
      conj.push_back(GroundExtLit{false, GroundLiteral{false, GroundAtom{n, {}, t}}});
    Rational lhs = interventional_prob(b, r, total);
    Rational rhs = e.prob(formula_conj(conj));
    if (lhs != rhs) {
      out.ok = false;
      out.mismatches.push_back(InterventionalTable::assignment_key(total) + ": product " +
                               lhs.str() + " vs program " + rhs.str());
    }
  }
  return out;
}

// --- table-defined interventional distributions -----------------------------------

std::string InterventionalTable::intervention_key(const Assignment& r) {
  std::string out = "{";
  bool first = true;
  for (const auto& [n, t] : r) {
    if (!first) out += ",";
    out += n + "=" + t.str();
    first = false;
  }
  return out + "}";
}

std::string InterventionalTable::assignment_key(const Assignment& a) {
  return intervention_key(a);
}

InterventionalTable table_of_net(const BayesNet& b) {
  InterventionalTable t;
  t.var_names = b.names();
  for (const auto& v : b.variables) t.domains[v.name] = v.domain;
  for (const Assignment& r : all_interventions(b)) {
    auto& row = t.rows[InterventionalTable::intervention_key(r)];
    for (const Assignment& a : all_assignments(b))
      row[InterventionalTable::assignment_key(a)] = interventional_prob(b, r, a);
  }
  return t;
}

namespace {

// P_row(condition) for a set of variable constraints
Rational mass(const InterventionalTable& t, const std::map<std::string, Rational>& row,
              const Assignment& cond) {
  // regenerate assignments from the domains
  std::vector<std::string> names = t.var_names;
  std::vector<Assignment> all;
  Assignment acc;
  std::function<void(size_t)> rec = [&](size_t i) {
    if (i == names.size()) {
      all.push_back(acc);
      return;
    }
    for (const Term& v : t.domains.at(names[i])) {
      acc[names[i]] = v;
      rec(i + 1);
      acc.erase(names[i]);
    }
  };
  rec(0);
  Rational sum(0);
  for (const auto& a : all) {
    bool match = true;
    for (const auto& [n, v] : cond)
      if (!(a.at(n) == v)) match = false;
    if (match) sum += row.at(InterventionalTable::assignment_key(a));
  }
  return sum;
}

}  // namespace

CompatibilityResult cbn_compatible(
    const InterventionalTable& table,
    const std::map<std::string, std::vector<std::string>>& parents) {
  CompatibilityResult res;
  // descendants in the proposed DAG
  std::map<std::string, std::set<std::string>> children;
  for (const auto& [v, ps] : parents)
    for (const auto& p : ps) children[p].insert(v);
  auto descendants = [&](const std::string& v) {
    std::set<std::string> seen;
    std::function<void(const std::string&)> rec = [&](const std::string& x) {
      for (const auto& c : children[x])
        if (seen.insert(c).second) rec(c);
    };
    rec(v);
    return seen;
  };

  // enumerate assignments over an arbitrary variable subset
  auto assignments_over = [&](const std::vector<std::string>& vars) {
    std::vector<Assignment> out;
    Assignment acc;
    std::function<void(size_t)> rec = [&](size_t i) {
      if (i == vars.size()) {
        out.push_back(acc);
        return;
      }
      for (const Term& v : table.domains.at(vars[i])) {
        acc[vars[i]] = v;
        rec(i + 1);
        acc.erase(vars[i]);
      }
    };
    rec(0);
    return out;
  };

  const auto& empty_row = table.rows.at("{}");

  std::vector<Assignment> interventions;
  {
    BayesNet probe;
    for (const auto& n : table.var_names) {
      BayesNet::Variable v;
      v.name = n;
      v.domain = table.domains.at(n);
      probe.variables.push_back(std::move(v));
    }
    interventions = all_interventions(probe);
  }

  for (const Assignment& r : interventions) {
    const auto& row = table.rows.at(InterventionalTable::intervention_key(r));
    // condition 2: manipulated variables obey the intervention
    for (const auto& [n, v] : r) {
      Rational p = mass(table, row, Assignment{{n, v}});
      if (p != Rational(1)) {
        res.compatible = false;
        res.failures.push_back("condition 2 fails for " +
                               InterventionalTable::intervention_key(r) + ": P(" + n + "=" +
                               v.str() + ") = " + p.str());
      }
    }
    for (const auto& vn : table.var_names) {
      if (r.count(vn)) continue;
      std::vector<std::string> pa;
      auto pit = parents.find(vn);
      if (pit != parents.end()) pa = pit->second;
      // every parent assignment consistent with r
      for (const Assignment& s : assignments_over(pa)) {
        bool consistent = true;
        for (const auto& [n, v] : s)
          if (r.count(n) && !(r.at(n) == v)) consistent = false;
        if (!consistent) continue;
        for (const Term& x : table.domains.at(vn)) {
          Assignment vx = s;
          vx[vn] = x;
          // condition 3: unmanipulated variables keep their conditionals
          Rational den_r = mass(table, row, s);
          Rational den_0 = mass(table, empty_row, s);
          if (!den_r.is_zero() && !den_0.is_zero()) {
            Rational lhs = mass(table, row, vx) / den_r;
            Rational rhs = mass(table, empty_row, vx) / den_0;
            if (lhs != rhs) {
              res.compatible = false;
              res.failures.push_back("condition 3 fails for " +
                                     InterventionalTable::intervention_key(r) + ", variable " +
                                     vn + ": LHS = " + lhs.str() + ", RHS = " + rhs.str());
            }
          }
          // condition 1: independence of non-descendants given the parents
          std::set<std::string> desc = descendants(vn);
          std::vector<std::string> nondesc;
          for (const auto& u : table.var_names) {
            if (u == vn || desc.count(u)) continue;
            if (std::find(pa.begin(), pa.end(), u) != pa.end()) continue;
            nondesc.push_back(u);
          }
          for (const Assignment& nd : assignments_over(nondesc)) {
            Assignment cond = s;
            for (const auto& [n, v] : nd) cond[n] = v;
            Rational den_big = mass(table, row, cond);
            Rational den_small = mass(table, row, s);
            if (den_big.is_zero() || den_small.is_zero()) continue;
            Assignment cvx = cond;
            cvx[vn] = x;
            Rational lhs = mass(table, row, cvx) / den_big;
            Rational rhs = mass(table, row, vx) / den_small;
            if (lhs != rhs) {
              res.compatible = false;
              res.failures.push_back("condition 1 fails for " +
                                     InterventionalTable::intervention_key(r) + ", variable " +
                                     vn);
            }
          }
        }
      }
    }
  }
  return res;
}

}  // namespace plog
