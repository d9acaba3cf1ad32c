// plog -- command-line front end. Talks to the library through the C API
// only; human-readable output is rendered from the JSON payloads.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "plog.h"

using nlohmann::ordered_json;

namespace {

int exit_code_of(plog_status_t s) {
  switch (s) {
    case PLOG_OK: return 0;
    case PLOG_ERR_SYNTAX:
    case PLOG_ERR_SORT:
    case PLOG_ERR_RANGE:
    case PLOG_ERR_BUDGET:
    case PLOG_ERR_INVALID: return 2;
    case PLOG_ERR_INCONSISTENT: return 3;
    case PLOG_ERR_UNDEFINED: return 4;
    case PLOG_ERR_CONDITION: return 5;
    default: return 1;
  }
}

const char* status_name(plog_status_t s) {
  switch (s) {
    case PLOG_ERR_SYNTAX: return "syntax error";
    case PLOG_ERR_SORT: return "sort error";
    case PLOG_ERR_RANGE: return "range error";
    case PLOG_ERR_BUDGET: return "budget exceeded";
    case PLOG_ERR_INVALID: return "invalid request";
    case PLOG_ERR_INCONSISTENT: return "inconsistent";
    case PLOG_ERR_UNDEFINED: return "probability undefined";
    case PLOG_ERR_CONDITION: return "condition violation";
    default: return "error";
  }
}

[[noreturn]] void die(plog_status_t s) {
  std::cerr << "plog: " << status_name(s) << ": " << plog_last_error() << "\n";
  std::exit(exit_code_of(s));
}

void check(plog_status_t s) {
  if (s != PLOG_OK) die(s);
}

std::string take(char* s) {
  std::string out(s);
  plog_string_free(s);
  return out;
}

struct ProgramOptions {
  std::string file;
  std::vector<std::string> merged;
  std::vector<std::string> observations;
  std::vector<std::string> actions;
  std::vector<std::string> statements;
  uint64_t ground_cap = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("program", file, "program file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--merge", merged, "auxiliary program file merged before grounding")
        ->check(CLI::ExistingFile)
        ->allow_extra_args(false);
    cmd->add_option("--obs", observations, "observe a literal, e.g. --obs \"even(d2)\"")
        ->allow_extra_args(false);
    cmd->add_option("--do", actions, "perform an action, e.g. --do \"drug=false\"")
        ->allow_extra_args(false);
    cmd->add_option("--stmt", statements, "add statements inline, e.g. --stmt \"q.\"")
        ->allow_extra_args(false);
    cmd->add_option("--ground-cap", ground_cap, "cap on ground statements");
  }

  plog_program_t* load() const {
    plog_program_t* p = nullptr;
    check(plog_program_parse_file(file.c_str(), &p));
    for (const auto& m : merged) {
      std::ifstream in(m);
      std::ostringstream os;
      os << in.rdbuf();
      check(plog_program_add_statements(p, os.str().c_str()));
    }
    for (const auto& s : statements) check(plog_program_add_statements(p, s.c_str()));
    for (const auto& o : observations) check(plog_program_observe(p, o.c_str()));
    for (const auto& a : actions) check(plog_program_do(p, a.c_str()));
    if (ground_cap) check(plog_program_set_ground_cap(p, ground_cap));
    return p;
  }
};

std::string decimal_of(const std::string& num, const std::string& den) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", std::stod(num) / std::stod(den));
  return buf;
}

std::string rational_str(const std::string& num, const std::string& den) {
  return den == "1" ? num : num + "/" + den;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) {
    std::cerr << "plog: cannot open '" << path << "'\n";
    std::exit(2);
  }
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void print_worlds_human(const std::string& json_text) {
  ordered_json j = ordered_json::parse(json_text);
  std::cout << j["world_count"].get<size_t>() << " possible world(s)\n";
  size_t i = 0;
  for (const auto& w : j["worlds"]) {
    std::cout << "W" << ++i << ": {";
    bool first = true;
    for (const auto& l : w["literals"]) {
      if (!first) std::cout << ", ";
      std::cout << l.get<std::string>();
      first = false;
    }
    std::cout << "}  mu_hat=" << w["mu_hat"].get<std::string>()
              << "  mu=" << w["mu"].get<std::string>() << "\n";
  }
}

void print_check_human(const std::string& json_text, bool with_tableau) {
  ordered_json j = ordered_json::parse(json_text);
  std::cout << "verdict: " << j["verdict"].get<std::string>() << "\n";
  std::cout << j["summary"].get<std::string>() << "\n";
  if (j.contains("leveling")) {
    std::cout << "leveling:";
    for (const auto& [term, rank] : j["leveling"].items())
      std::cout << " |" << term << "|=" << rank.get<int>();
    std::cout << "\n";
  } else if (j.contains("leveling_failure")) {
    std::cout << "leveling: " << j["leveling_failure"].get<std::string>() << "\n";
  }
  if (j.contains("causally_ordered")) {
    std::cout << "causally ordered: " << (j["causally_ordered"].get<bool>() ? "yes" : "no");
    if (j.contains("certificate"))
      std::cout << " (clause " << j["failed_clause"].get<int>() << ": "
                << j["certificate"].get<std::string>() << ")";
    std::cout << "\n";
  }
  if (j.contains("unitary")) {
    std::cout << "unitary: " << (j["unitary"].get<bool>() ? "yes" : "no") << "\n";
    for (const auto& sc : j["scenarios"])
      std::cout << "  " << sc["rule"].get<std::string>() << ": scenario of "
                << sc["worlds"].get<size_t>() << " world(s), clause "
                << sc["clause"].get<int>() << ", assigned sum "
                << sc["assigned_sum"].get<std::string>() << "\n";
  }
  if (j.contains("semantic")) {
    const auto& sem = j["semantic"];
    std::cout << "semantic check: consistent=" << (sem["consistent"].get<bool>() ? "yes" : "no")
              << " measure=" << (sem["measure_defined"].get<bool>() ? "defined" : "undefined")
              << " coherent=" << (sem["coherent"].get<bool>() ? "yes" : "no") << "\n";
    for (const auto& c : sem["checks"]) {
      std::cout << "  " << c["pr_atom"].get<std::string>() << ": "
                << c["status"].get<std::string>();
      if (c.contains("detail")) std::cout << " (" << c["detail"].get<std::string>() << ")";
      std::cout << "\n";
    }
  }
  if (with_tableau && j.contains("tableau"))
    std::cout << "tableau (" << j["tableau"]["leaves"].get<size_t>() << " leaves):\n"
              << j["tableau"]["text"].get<std::string>();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"plog: probabilistic answer-set programs -- exact inference and analysis"};
  app.require_subcommand(1);

  // query
  auto* query = app.add_subcommand("query", "probability of a formula");
  ProgramOptions qopts;
  qopts.attach(query);
  std::string formula;
  bool qjson = false, show_worlds = false, dump_asp = false;
  query->add_option("formula", formula, "e.g. \"prize=3\", \"roll(d1)=6 & even(d2)\"")
      ->required();
  query->add_flag("--json", qjson, "machine-readable output");
  query->add_flag("--show-worlds", show_worlds, "also print the world table");
  query->add_flag("--dump-asp", dump_asp, "also print the ground translation");

  // worlds
  auto* worlds = app.add_subcommand("worlds", "possible worlds with their measures");
  ProgramOptions wopts;
  wopts.attach(worlds);
  bool wjson = false;
  worlds->add_flag("--json", wjson, "machine-readable output");

  // check
  auto* chk = app.add_subcommand("check", "coherency analysis");
  ProgramOptions copts;
  copts.attach(chk);
  bool cjson = false, tableau = false, dot = false;
  chk->add_flag("--json", cjson, "machine-readable output");
  chk->add_flag("--tableau", tableau, "include the tableau for ordered programs");
  chk->add_flag("--dot", dot, "print the tableau as a DOT graph");

  // ground
  auto* grd = app.add_subcommand("ground", "dump the ground translation");
  ProgramOptions gopts;
  gopts.attach(grd);
  bool gjson = false;
  grd->add_flag("--json", gjson, "machine-readable output");

  // import-bn
  auto* ibn = app.add_subcommand("import-bn", "Bayesian network (JSON) to program text");
  std::string net_path, out_path;
  bool ijson = false;
  ibn->add_option("net", net_path, "network JSON file")->required()->check(CLI::ExistingFile);
  ibn->add_option("-o,--output", out_path, "write the program here instead of stdout");
  ibn->add_flag("--json", ijson, "wrap the program text in JSON");

  // check-bn
  auto* cbn = app.add_subcommand("check-bn",
                                 "compare interventional probabilities with the program");
  std::string cbn_net;
  std::vector<std::string> interventions;
  bool cbn_json = false;
  cbn->add_option("net", cbn_net, "network JSON file")->required()->check(CLI::ExistingFile);
  cbn->add_option("--intervention", interventions,
                  "comma-separated assignment, e.g. \"arsenic=true\"; repeatable. "
                  "Default: every intervention.")
      ->allow_extra_args(false);
  cbn->add_flag("--json", cbn_json, "machine-readable output");

  CLI11_PARSE(app, argc, argv);

  if (query->parsed()) {
    plog_program_t* p = qopts.load();
    if (dump_asp) {
      char* text = nullptr;
      check(plog_ground_dump(p, &text));
      std::cout << take(text);
    }
    char *num = nullptr, *den = nullptr;
    check(plog_query_prob(p, formula.c_str(), &num, &den));
    std::string n = take(num), d = take(den);
    if (qjson) {
      ordered_json out;
      out["formula"] = formula;
      out["num"] = n;
      out["den"] = d;
      out["probability"] = rational_str(n, d);
      out["decimal"] = decimal_of(n, d);
      std::cout << out.dump(2) << "\n";
    } else {
      std::cout << rational_str(n, d) << " (~" << decimal_of(n, d) << ")\n";
    }
    if (show_worlds) {
      char* wj = nullptr;
      check(plog_worlds_json(p, &wj));
      print_worlds_human(take(wj));
    }
    plog_program_free(p);
    return 0;
  }

  if (worlds->parsed()) {
    plog_program_t* p = wopts.load();
    char* wj = nullptr;
    check(plog_worlds_json(p, &wj));
    std::string payload = take(wj);
    if (wjson)
      std::cout << payload << "\n";
    else
      print_worlds_human(payload);
    plog_program_free(p);
    return 0;
  }

  if (chk->parsed()) {
    plog_program_t* p = copts.load();
    char* cj = nullptr;
    check(plog_check_json(p, tableau || dot, &cj));
    std::string payload = take(cj);
    if (cjson) {
      std::cout << payload << "\n";
    } else if (dot) {
      ordered_json j = ordered_json::parse(payload);
      if (j.contains("tableau"))
        std::cout << j["tableau"]["dot"].get<std::string>();
      else
        std::cout << "no tableau: the program is not causally ordered\n";
    } else {
      print_check_human(payload, tableau);
    }
    plog_program_free(p);
    return 0;
  }

  if (grd->parsed()) {
    plog_program_t* p = gopts.load();
    char* text = nullptr;
    check(plog_ground_dump(p, &text));
    std::string dump = take(text);
    if (gjson) {
      ordered_json out;
      out["rules"] = ordered_json::array();
      std::stringstream ss(dump);
      std::string line;
      while (std::getline(ss, line))
        if (!line.empty()) out["rules"].push_back(line);
      std::cout << out.dump(2) << "\n";
    } else {
      std::cout << dump;
    }
    plog_program_free(p);
    return 0;
  }

  if (ibn->parsed()) {
    std::string net = read_file(net_path);
    char* text = nullptr;
    check(plog_bn_to_program(net.c_str(), &text));
    std::string program = take(text);
    if (ijson) {
      ordered_json out;
      out["program"] = program;
      program = out.dump(2) + "\n";
    }
    if (out_path.empty()) {
      std::cout << program;
    } else {
      std::ofstream out(out_path);
      out << program;
    }
    return 0;
  }

  if (cbn->parsed()) {
    std::string net = read_file(cbn_net);
    std::string interv_json;
    if (!interventions.empty()) {
      ordered_json arr = ordered_json::array();
      for (const auto& spec : interventions) {
        ordered_json one = ordered_json::object();
        std::stringstream ss(spec);
        std::string item;
        while (std::getline(ss, item, ',')) {
          if (item.empty()) continue;
          auto eq = item.find('=');
          if (eq == std::string::npos) {
            std::cerr << "plog: bad intervention '" << item << "' (want var=value)\n";
            return 2;
          }
          one[item.substr(0, eq)] = item.substr(eq + 1);
        }
        arr.push_back(std::move(one));
      }
      interv_json = arr.dump();
    }
    char* rj = nullptr;
    check(plog_bn_check(net.c_str(), interv_json.empty() ? nullptr : interv_json.c_str(), &rj));
    std::string payload = take(rj);
    if (cbn_json) {
      std::cout << payload << "\n";
    } else {
      ordered_json j = ordered_json::parse(payload);
      for (const auto& r : j["interventions"]) {
        std::cout << r["intervention"].get<std::string>() << ": "
                  << (r["ok"].get<bool>() ? "ok" : "MISMATCH") << "\n";
        if (!r["ok"].get<bool>())
          for (const auto& m : r["mismatches"]) std::cout << "  " << m.get<std::string>() << "\n";
      }
      std::cout << (j["ok"].get<bool>() ? "all interventions agree\n"
                                        : "disagreement detected\n");
    }
    return 0;
  }

  return 0;
}
