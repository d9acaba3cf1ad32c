#include "../include/plog.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "bayesnet.hpp"
#include "coherency.hpp"
#include "errors.hpp"
#include "parser.hpp"
#include "updates.hpp"
#include "worlds.hpp"

using nlohmann::ordered_json;

struct plog_program {
  plog::Program program;
  plog::GroundOptions opts;
};

namespace {

thread_local std::string g_last_error;

plog_status_t status_of(const plog::Error& e) {
  using plog::ErrorCode;
  switch (e.code()) {
    case ErrorCode::Syntax: return PLOG_ERR_SYNTAX;
    case ErrorCode::Sort:
    case ErrorCode::TypeMismatch:
    case ErrorCode::UnboundedSort:
    case ErrorCode::DuplicateDeclaration: return PLOG_ERR_SORT;
    case ErrorCode::Range: return PLOG_ERR_RANGE;
    case ErrorCode::Inconsistent: return PLOG_ERR_INCONSISTENT;
    case ErrorCode::ProbabilityUndefined: return PLOG_ERR_UNDEFINED;
    case ErrorCode::ConditionViolation: return PLOG_ERR_CONDITION;
    case ErrorCode::BudgetExceeded: return PLOG_ERR_BUDGET;
    case ErrorCode::UniverseTooLarge:
    case ErrorCode::Internal: return PLOG_ERR_INTERNAL;
  }
  return PLOG_ERR_INTERNAL;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <class Fn>
plog_status_t guarded(Fn&& fn) {
  try {
    fn();
    return PLOG_OK;
  } catch (const plog::Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PLOG_ERR_INTERNAL;
  }
}

plog_status_t invalid(const char* msg) {
  g_last_error = msg;
  return PLOG_ERR_INVALID;
}

ordered_json worlds_payload(plog::Engine& engine) {
  const auto& table = engine.table();
  const auto& ws = engine.worlds();
  ordered_json out;
  out["world_count"] = ws.size();
  out["worlds"] = ordered_json::array();
  for (size_t i = 0; i < ws.size(); ++i) {
    ordered_json w;
    w["literals"] = ordered_json::array();
    for (const auto& l : engine.tau().sigma_view(ws[i].model, engine.sig()))
      w["literals"].push_back(l.str());
    w["mu_hat"] = table.mu_hat[i].num_str() + "/" + table.mu_hat[i].den_str();
    w["mu"] = table.mu[i].num_str() + "/" + table.mu[i].den_str();
    out["worlds"].push_back(std::move(w));
  }
  return out;
}

ordered_json check_payload(const plog::Program& p, plog::GroundOptions opts, bool with_tableau) {
  using namespace plog;
  CoherencyReport rep = coherency_verdict(p, opts);
  ordered_json out;
  switch (rep.verdict) {
    case CoherencyVerdict::CoherentByTheorem: out["verdict"] = "coherent-by-theorem"; break;
    case CoherencyVerdict::Unknown: out["verdict"] = "unknown"; break;
    case CoherencyVerdict::IncoherentWitness: out["verdict"] = "incoherent-witness"; break;
  }
  out["summary"] = rep.summary;
  if (rep.leveling.leveling) {
    ordered_json lv = ordered_json::object();
    for (const auto& [t, r] : rep.leveling.leveling->rank) lv[t.str()] = r;
    out["leveling"] = std::move(lv);
    ordered_json order = ordered_json::array();
    for (const auto& t : rep.leveling.leveling->random_order) order.push_back(t.str());
    out["random_order"] = std::move(order);
  } else {
    out["leveling_failure"] = rep.leveling.failure;
  }
  if (rep.ordered) {
    out["causally_ordered"] = rep.ordered->ordered;
    if (!rep.ordered->ordered) {
      out["failed_clause"] = rep.ordered->failed_clause;
      out["certificate"] = rep.ordered->certificate;
    }
  }
  if (rep.unitary) {
    out["unitary"] = rep.unitary->unitary;
    ordered_json rules = ordered_json::array();
    Program core = strip_observations_actions(p);
    GroundProgram gp = ground_program(core, opts);
    for (const auto& v : rep.unitary->report) {
      ordered_json sc;
      sc["rule"] = gp.selections[v.scenario.selection].display_name();
      sc["worlds"] = v.scenario.worlds.size();
      sc["clause"] = v.clause;
      sc["assigned_sum"] = v.sum.str();
      rules.push_back(std::move(sc));
    }
    out["scenarios"] = std::move(rules);
  }
  if (rep.semantic_ran) {
    ordered_json sem;
    sem["consistent"] = rep.semantic.consistent;
    sem["measure_defined"] = rep.semantic.measure_defined;
    sem["coherent"] = rep.semantic.coherent;
    ordered_json checks = ordered_json::array();
    for (const auto& c : rep.semantic.checks) {
      ordered_json jc;
      jc["pr_atom"] = c.pr_atom;
      jc["status"] = c.status;
      if (!c.detail.empty()) jc["detail"] = c.detail;
      checks.push_back(std::move(jc));
    }
    sem["checks"] = std::move(checks);
    out["semantic"] = std::move(sem);
  }
  if (with_tableau && rep.leveling.leveling && rep.ordered && rep.ordered->ordered) {
    Program core = strip_observations_actions(p);
    GroundProgram gp = ground_program(core, opts);
    Dependencies deps(gp);
    InducedStructure st = induced_structure(gp, deps, *rep.leveling.leveling);
    Tableau t = build_tableau(gp, st, opts);
    out["tableau"] = ordered_json::object();
    out["tableau"]["leaves"] = t.leaves.size();
    out["tableau"]["text"] = t.text();
    out["tableau"]["dot"] = t.dot();
  }
  return out;
}

}  // namespace

extern "C" {

const char* plog_version(void) { return "1.0.0"; }

const char* plog_last_error(void) { return g_last_error.c_str(); }

void plog_string_free(char* s) { std::free(s); }

plog_status_t plog_program_parse(const char* text, plog_program_t** out) {
  if (!text || !out) return invalid("null argument");
  return guarded([&] {
    auto* p = new plog_program;
    try {
      p->program = plog::parse_program(text);
    } catch (...) {
      delete p;
      throw;
    }
    *out = p;
  });
}

plog_status_t plog_program_parse_file(const char* path, plog_program_t** out) {
  if (!path || !out) return invalid("null argument");
  std::ifstream in(path);
  if (!in.good()) {
    g_last_error = std::string("cannot open '") + path + "'";
    return PLOG_ERR_INVALID;
  }
  std::ostringstream os;
  os << in.rdbuf();
  return plog_program_parse(os.str().c_str(), out);
}

void plog_program_free(plog_program_t* p) { delete p; }

plog_status_t plog_program_add_statements(plog_program_t* p, const char* text) {
  if (!p || !text) return invalid("null argument");
  return guarded([&] {
    plog::DeclEnv env;
    env.absorb(p->program);
    plog::Program extra = plog::parse_program(text, &env);
    p->program = p->program.merged(extra);
  });
}

plog_status_t plog_program_observe(plog_program_t* p, const char* literal) {
  if (!p || !literal) return invalid("null argument");
  return guarded([&] {
    plog::DeclEnv env;
    env.absorb(p->program);
    plog::LiteralExpr l = plog::parse_literal_text(literal, env);
    p->program.stmts.push_back(plog::Observation{l});
  });
}

plog_status_t plog_program_do(plog_program_t* p, const char* atom) {
  if (!p || !atom) return invalid("null argument");
  return guarded([&] {
    plog::DeclEnv env;
    env.absorb(p->program);
    plog::AtomExpr a = plog::parse_atom_text(atom, env);
    p->program.stmts.push_back(plog::DoAction{a});
  });
}

plog_status_t plog_program_set_ground_cap(plog_program_t* p, uint64_t cap) {
  if (!p || cap == 0) return invalid("bad cap");
  p->opts.max_ground_statements = cap;
  return PLOG_OK;
}

plog_status_t plog_program_print(plog_program_t* p, char** out) {
  if (!p || !out) return invalid("null argument");
  return guarded([&] { *out = dup_string(plog::print_program(p->program)); });
}

plog_status_t plog_query_prob(plog_program_t* p, const char* formula, char** num, char** den) {
  if (!p || !formula || !num || !den) return invalid("null argument");
  return guarded([&] {
    plog::Engine engine(p->program, p->opts);
    plog::Rational r = engine.prob_text(formula);
    *num = dup_string(r.num_str());
    *den = dup_string(r.den_str());
  });
}

plog_status_t plog_worlds_json(plog_program_t* p, char** out) {
  if (!p || !out) return invalid("null argument");
  return guarded([&] {
    plog::Engine engine(p->program, p->opts);
    *out = dup_string(worlds_payload(engine).dump(2));
  });
}

plog_status_t plog_check_json(plog_program_t* p, int with_tableau, char** out) {
  if (!p || !out) return invalid("null argument");
  return guarded([&] { *out = dup_string(check_payload(p->program, p->opts, with_tableau).dump(2)); });
}

plog_status_t plog_ground_dump(plog_program_t* p, char** out) {
  if (!p || !out) return invalid("null argument");
  return guarded([&] {
    plog::GroundProgram gp = plog::ground_program(p->program, p->opts);
    plog::TauOutput tau = plog::translate(gp);
    *out = dup_string(tau.dump());
  });
}

plog_status_t plog_bn_to_program(const char* net_json, char** out) {
  if (!net_json || !out) return invalid("null argument");
  return guarded([&] {
    plog::BayesNet b = plog::bayes_net_from_json(net_json);
    *out = dup_string(plog::print_program(plog::net_to_plog(b)));
  });
}

plog_status_t plog_bn_check(const char* net_json, const char* interventions_json, char** out) {
  if (!net_json || !out) return invalid("null argument");
  return guarded([&] {
    plog::BayesNet b = plog::bayes_net_from_json(net_json);
    std::vector<plog::Assignment> rs;
    if (!interventions_json) {
      rs = plog::all_interventions(b);
    } else {
      ordered_json j = ordered_json::parse(interventions_json);
      if (!j.is_array()) plog::fail(plog::ErrorCode::Syntax, "interventions must be an array");
      for (const auto& ji : j) {
        plog::Assignment r;
        for (const auto& [name, val] : ji.items()) {
          const auto& v = b.var(name);
          plog::Term t = val.is_number_integer() ? plog::Term::integer(val.get<std::int64_t>())
                                                 : plog::Term::symbol(val.get<std::string>());
          bool in_domain = false;
          for (const auto& d : v.domain)
            if (d == t) in_domain = true;
          if (!in_domain)
            plog::fail(plog::ErrorCode::Sort,
                       "'" + t.str() + "' is not in the domain of '" + name + "'");
          r[name] = t;
        }
        rs.push_back(std::move(r));
      }
    }
    ordered_json rep;
    rep["interventions"] = ordered_json::array();
    bool all_ok = true;
    for (const auto& r : rs) {
      plog::CbnCheck c = plog::check_cbn_theorem(b, r);
      ordered_json jr;
      jr["intervention"] = plog::InterventionalTable::intervention_key(r);
      jr["ok"] = c.ok;
      if (!c.ok) {
        all_ok = false;
        jr["mismatches"] = c.mismatches;
      }
      rep["interventions"].push_back(std::move(jr));
    }
    rep["ok"] = all_ok;
    *out = dup_string(rep.dump(2));
  });
}

}  // extern "C"
