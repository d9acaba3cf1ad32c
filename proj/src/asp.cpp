#include "asp.hpp"

#include <algorithm>
#include <cstdint>

#include "errors.hpp"

namespace plog::asp {

bool is_consistent(const Model& m) {
  for (size_t i = 0; i + 1 < m.size(); ++i)
    if (contrary(m[i]) == m[i + 1]) return false;  // sorted: contrary pairs adjacent
  return true;
}

bool model_contains(const Model& m, Lit l) {
  return std::binary_search(m.begin(), m.end(), l);
}

bool satisfies(const Model& s, const Rule& r) {
  for (Lit l : r.pos)
    if (!model_contains(s, l)) return true;
  for (Lit l : r.neg)
    if (model_contains(s, l)) return true;
  for (Lit l : r.head)
    if (model_contains(s, l)) return true;
  return false;
}

bool satisfies_all(const Model& s, const Program& p) {
  for (const Rule& r : p.rules)
    if (!satisfies(s, r)) return false;
  return true;
}

Program reduct(const Program& p, const Model& s) {
  Program out;
  out.num_atoms = p.num_atoms;
  for (const Rule& r : p.rules) {
    bool dropped = false;
    for (Lit l : r.neg)
      if (model_contains(s, l)) {
        dropped = true;
        break;
      }
    if (dropped) continue;
    Rule nr;
    nr.head = r.head;
    nr.pos = r.pos;
    out.rules.push_back(std::move(nr));
  }
  return out;
}

namespace {

enum State : std::int8_t { UNDEC = 0, IN = 1, OUT = 2 };

// Search for a proper subset of `s` satisfying the negation-free program
// `red`. Literals outside s are fixed OUT; unit propagation forces a head
// literal when a satisfied body leaves a single candidate.
class MinimalityChecker {
 public:
  MinimalityChecker(const Program& red, const Model& s) : s_(s) {
    st_.assign(red.num_atoms * 2, OUT);
    for (Lit l : s) st_[l] = UNDEC;
    for (const Rule& r : red.rules) {
      bool dead = false;
      for (Lit l : r.pos)
        if (!model_contains(s, l)) {
          dead = true;
          break;
        }
      if (dead) continue;  // positive body already falsified forever
      rules_.push_back(&r);
    }
    occ_.resize(red.num_atoms * 2);
    for (size_t i = 0; i < rules_.size(); ++i) {
      for (Lit l : rules_[i]->pos) occ_[l].push_back(i);
      for (Lit l : rules_[i]->head)
        if (st_[l] == UNDEC) occ_[l].push_back(i);
    }
  }

  bool has_proper_satisfying_subset() {
    for (size_t i = 0; i < rules_.size(); ++i) queue_.push_back(i);
    if (!propagate()) return false;
    return search();
  }

 private:
  bool assign(Lit l, State v) {
    if (st_[l] == v) return true;
    if (st_[l] != UNDEC) return false;
    st_[l] = v;
    trail_.push_back(l);
    for (size_t ri : occ_[l]) queue_.push_back(ri);
    return true;
  }

  bool propagate() {
    while (!queue_.empty()) {
      size_t ri = queue_.back();
      queue_.pop_back();
      const Rule* r = rules_[ri];
      bool body_sat = true;
      for (Lit l : r->pos)
        if (st_[l] != IN) {
          body_sat = false;
          break;
        }
      if (!body_sat) continue;
      Lit undec_lit = 0;
      int undec = 0;
      bool sat = false;
      for (Lit l : r->head) {
        if (st_[l] == IN) {
          sat = true;
          break;
        }
        if (st_[l] == UNDEC) {
          ++undec;
          undec_lit = l;
        }
      }
      if (sat) continue;
      if (undec == 0) return false;
      if (undec == 1 && !assign(undec_lit, IN)) return false;
    }
    return true;
  }

  bool search() {
    if (++nodes_ > kBudget)
      fail(ErrorCode::BudgetExceeded, "minimality check exceeded its node budget");
    Lit pick = 0;
    bool found_undec = false;
    for (Lit l : s_)
      if (st_[l] == UNDEC) {
        pick = l;
        found_undec = true;
        break;
      }
    if (!found_undec) {
      for (Lit l : s_)
        if (st_[l] == OUT) return true;  // total, satisfying, proper
      return false;                      // reconstructed s itself
    }
    for (State v : {OUT, IN}) {
      size_t mark = trail_.size();
      queue_.clear();
      if (assign(pick, v) && propagate() && search()) return true;
      undo(mark);
    }
    return false;
  }

  void undo(size_t mark) {
    while (trail_.size() > mark) {
      st_[trail_.back()] = UNDEC;
      trail_.pop_back();
    }
    queue_.clear();
  }

  static constexpr std::uint64_t kBudget = 20'000'000;
  const Model& s_;
  std::vector<std::int8_t> st_;
  std::vector<const Rule*> rules_;
  std::vector<std::vector<size_t>> occ_;
  std::vector<size_t> queue_;
  std::vector<Lit> trail_;
  std::uint64_t nodes_ = 0;
};

// Chronological backtracking over head-literal assignments. Propagation is
// sound pruning only (forced literals hold in every extension); every total
// candidate is verified with reduct + minimality at the leaf.
class Enumerator {
 public:
  Enumerator(const Program& p, const EnumerateOptions& opts) : p_(p), opts_(opts) {
    st_.assign(p.num_lits(), OUT);
    std::vector<char> in_head(p.num_lits(), 0);
    for (const Rule& r : p.rules)
      for (Lit l : r.head) in_head[l] = 1;
    for (Lit l = 0; l < p.num_lits(); ++l)
      if (in_head[l]) {
        st_[l] = UNDEC;
        decisions_.push_back(l);
      }
    // branch on positive literals first: in typical programs negatives are
    // derived (functionality, closed-world defaults) and propagate for free
    std::stable_sort(decisions_.begin(), decisions_.end(),
                     [](Lit a, Lit b) { return is_neg(a) < is_neg(b); });
    occ_.resize(p.num_lits());
    head_occ_.resize(p.num_lits());
    for (size_t i = 0; i < p.rules.size(); ++i) {
      const Rule& r = p.rules[i];
      for (Lit l : r.pos) occ_[l].push_back(i);
      for (Lit l : r.neg) occ_[l].push_back(i);
      for (Lit l : r.head) {
        occ_[l].push_back(i);
        head_occ_[l].push_back(i);
      }
    }
  }

  std::vector<Model> run() {
    for (size_t i = 0; i < p_.rules.size(); ++i) rule_queue_.push_back(i);
    if (propagate()) search();
    std::sort(results_.begin(), results_.end());
    return std::move(results_);
  }

 private:
  bool assign(Lit l, State v) {
    if (st_[l] == v) return true;
    if (st_[l] != UNDEC) return false;
    st_[l] = v;
    trail_.push_back(l);
    for (size_t ri : occ_[l]) rule_queue_.push_back(ri);
    if (v == IN) {
      support_queue_.push_back(l);
      Lit c = contrary(l);
      if (st_[c] == IN) return false;
      if (st_[c] == UNDEC) {
        st_[c] = OUT;
        trail_.push_back(c);
        for (size_t ri : occ_[c]) rule_queue_.push_back(ri);
      }
    }
    return true;
  }

  bool body_unsat(const Rule& r) const {
    for (Lit l : r.pos)
      if (st_[l] == OUT) return true;
    for (Lit l : r.neg)
      if (st_[l] == IN) return true;
    return false;
  }

  // A literal assigned IN must keep at least one rule that can still fire
  // with it as the only satisfied head literal.
  bool supportable(Lit l) const {
    for (size_t ri : head_occ_[l]) {
      const Rule& r = p_.rules[ri];
      if (body_unsat(r)) continue;
      bool other_in = false;
      for (Lit h : r.head)
        if (h != l && st_[h] == IN) {
          other_in = true;
          break;
        }
      if (!other_in) return true;
    }
    return false;
  }

  bool propagate() {
    while (!rule_queue_.empty() || !support_queue_.empty()) {
      if (!rule_queue_.empty()) {
        size_t ri = rule_queue_.back();
        rule_queue_.pop_back();
        const Rule& r = p_.rules[ri];
        bool unsat = false, sat_body = true;
        for (Lit l : r.pos) {
          if (st_[l] == OUT) unsat = true;
          if (st_[l] != IN) sat_body = false;
        }
        for (Lit l : r.neg) {
          if (st_[l] == IN) unsat = true;
          if (st_[l] != OUT) sat_body = false;
        }
        if (unsat) {
          // the rule died: supported IN heads must recheck, and an UNDEC head
          // whose every potential support rule is dead can never enter an
          // answer set extending this state
          for (Lit h : r.head) {
            if (st_[h] == IN) {
              support_queue_.push_back(h);
            } else if (st_[h] == UNDEC) {
              bool alive = false;
              for (size_t rj : head_occ_[h])
                if (!body_unsat(p_.rules[rj])) {
                  alive = true;
                  break;
                }
              if (!alive && !assign(h, OUT)) return false;
            }
          }
          continue;
        }
        bool sat = false;
        int undec = 0;
        Lit undec_lit = 0;
        for (Lit h : r.head) {
          if (st_[h] == IN) sat = true;
          if (st_[h] == UNDEC) {
            ++undec;
            undec_lit = h;
          }
        }
        if (sat_body && !sat) {
          if (undec == 0) return false;  // violated rule or constraint
          if (undec == 1 && !assign(undec_lit, IN)) return false;
        }
        // another head literal turning IN can steal support
        if (sat)
          for (Lit h : r.head)
            if (st_[h] == IN) support_queue_.push_back(h);
        continue;
      }
      Lit l = support_queue_.back();
      support_queue_.pop_back();
      if (st_[l] == IN && !supportable(l)) return false;
    }
    return true;
  }

  void search() {
    if (++nodes_ > opts_.node_budget)
      fail(ErrorCode::BudgetExceeded, "answer-set search exceeded its node budget");
    Lit pick = 0;
    bool found = false;
    for (Lit l : decisions_)
      if (st_[l] == UNDEC) {
        pick = l;
        found = true;
        break;
      }
    if (!found) {
      Model s;
      for (Lit l = 0; l < st_.size(); ++l)
        if (st_[l] == IN) s.push_back(l);
      if (is_answer_set(p_, s)) results_.push_back(std::move(s));
      return;
    }
    for (State v : {IN, OUT}) {
      size_t mark = trail_.size();
      rule_queue_.clear();
      support_queue_.clear();
      if (assign(pick, v) && propagate()) search();
      undo(mark);
    }
  }

  void undo(size_t mark) {
    while (trail_.size() > mark) {
      st_[trail_.back()] = UNDEC;
      trail_.pop_back();
    }
    rule_queue_.clear();
    support_queue_.clear();
  }

  const Program& p_;
  EnumerateOptions opts_;
  std::vector<std::int8_t> st_;
  std::vector<Lit> decisions_;
  std::vector<std::vector<size_t>> occ_, head_occ_;
  std::vector<size_t> rule_queue_, support_queue_;
  std::vector<Lit> trail_;
  std::vector<Model> results_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

bool is_answer_set(const Program& p, const Model& s) {
  if (!std::is_sorted(s.begin(), s.end())) fail(ErrorCode::Internal, "model not sorted");
  if (!is_consistent(s)) return false;
  Program red = reduct(p, s);
  if (!satisfies_all(s, red)) return false;
  return !MinimalityChecker(red, s).has_proper_satisfying_subset();
}

std::vector<Model> enumerate_answer_sets(const Program& p, const EnumerateOptions& opts) {
  return Enumerator(p, opts).run();
}

std::vector<Model> oracle_answer_sets(const Program& p, std::size_t max_universe_lits) {
  std::vector<Lit> occ;
  {
    std::vector<char> seen(p.num_lits(), 0);
    for (const Rule& r : p.rules) {
      for (Lit l : r.head) seen[l] = 1;
      for (Lit l : r.pos) seen[l] = 1;
      for (Lit l : r.neg) seen[l] = 1;
    }
    for (Lit l = 0; l < p.num_lits(); ++l)
      if (seen[l]) occ.push_back(l);
  }
  if (occ.size() > max_universe_lits)
    fail(ErrorCode::UniverseTooLarge,
         "oracle refuses literal universe of size " + std::to_string(occ.size()));
  std::vector<Model> out;
  for (std::uint64_t mask = 0; mask < (1ULL << occ.size()); ++mask) {
    Model s;
    for (size_t i = 0; i < occ.size(); ++i)
      if (mask & (1ULL << i)) s.push_back(occ[i]);
    if (!is_consistent(s)) continue;
    if (is_answer_set(p, s)) out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace plog::asp
