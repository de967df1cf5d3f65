// Copyright 2026 The cqa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Answer sets of ground extended disjunctive programs. Candidates are found
// by branching over literals that occur in disjunctive heads or under weak
// negation, starting from the well-founded lower bound; every total
// candidate is verified against the reduct definition. Weak negation is
// eliminated by the usual two reduct steps; under e-answer semantics a third
// step drops defaults overridden by an exception.

#pragma once

#include <cstdint>
#include <vector>

#include "cqa/grounder.hpp"
#include "cqa/model.hpp"
#include "cqa/wfs.hpp"

namespace cqa {

/// Weak-negation elimination relative to a candidate set. With `e_mode` a
/// persistence default whose complemented head is in `s` is dropped as well.
/// Weak and strong constraint rules take no part in model computation and are
/// not carried over.
inline GroundProgram reduct(const GroundProgram& g, const AnswerSet& s, bool e_mode = false) {
  GroundProgram out;
  for (const auto& r : g.rules) {
    if (r.kind == RuleKind::WeakConstraint || r.kind == RuleKind::StrongConstraint) continue;
    bool dropped = false;
    for (const auto& b : r.body)
      if (b.naf && s.contains(b.lit)) { dropped = true; break; }
    if (!dropped && e_mode && r.kind == RuleKind::PersistenceDefault && r.head.size() == 1 &&
        s.contains(complement(r.head[0])))
      dropped = true;
    if (dropped) continue;
    Rule pos;
    pos.kind = r.kind;
    pos.head = r.head;
    for (const auto& b : r.body)
      if (!b.naf) pos.body.push_back(b);
    out.rules.push_back(canonical(std::move(pos)));
  }
  for (const auto& r : out.rules) {
    for (const auto& l : r.head) out.universe.insert(l);
    for (const auto& b : r.body) out.universe.insert(b.lit);
  }
  out.close_universe();
  return out;
}

namespace detail {

struct PosRule {
  std::vector<int> head, pos;
};

inline std::vector<PosRule> index_positive(const IndexedGround& ig) {
  std::vector<PosRule> out;
  for (const auto& r : ig.regular) {
    assert(r.naf.empty());
    out.push_back(PosRule{r.head, r.pos});
  }
  return out;
}

// Enumerates all closed consistent sets reachable by need-driven growth:
// deterministic closure under rules with a single viable head, branching on
// properly disjunctive ones. Every minimal model is among the leaves.
inline void grow_models(const std::vector<PosRule>& rules, const LitIndex& idx,
                        std::vector<char> in, std::vector<std::vector<char>>& leaves) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : rules) {
      bool body = true;
      for (int b : r.pos)
        if (!in[b]) { body = false; break; }
      if (!body) continue;
      bool sat = false;
      for (int h : r.head)
        if (in[h]) { sat = true; break; }
      if (sat) continue;
      if (r.head.empty()) return;  // constraint violated on this branch
      if (r.head.size() == 1) {
        int h = r.head[0];
        if (in[idx.comp[h]]) return;  // would become inconsistent
        in[h] = 1;
        changed = true;
      }
    }
  }
  for (const auto& r : rules) {
    bool body = true;
    for (int b : r.pos)
      if (!in[b]) { body = false; break; }
    if (!body) continue;
    bool sat = false;
    for (int h : r.head)
      if (in[h]) { sat = true; break; }
    if (sat) continue;
    // properly disjunctive and unsatisfied: branch
    for (int h : r.head) {
      if (in[idx.comp[h]]) continue;
      std::vector<char> next = in;
      next[h] = 1;
      grow_models(rules, idx, std::move(next), leaves);
    }
    return;
  }
  leaves.push_back(std::move(in));
}

}  // namespace detail

/// All subset-minimal consistent models of a positive ground disjunctive
/// program (weak negation must already be eliminated).
inline std::vector<AnswerSet> minimal_models(const GroundProgram& g) {
  for (const auto& r : g.rules)
    for (const auto& b : r.body)
      if (b.naf) throw std::invalid_argument("minimal_models: program is not positive");
  IndexedGround ig = IndexedGround::build(g);
  auto rules = detail::index_positive(ig);
  std::vector<std::vector<char>> leaves;
  detail::grow_models(rules, ig.idx, std::vector<char>(ig.idx.size(), 0), leaves);

  std::sort(leaves.begin(), leaves.end());
  leaves.erase(std::unique(leaves.begin(), leaves.end()), leaves.end());
  auto subset = [](const std::vector<char>& a, const std::vector<char>& b) {
    for (size_t i = 0; i < a.size(); ++i)
      if (a[i] && !b[i]) return false;
    return true;
  };
  std::vector<AnswerSet> out;
  for (size_t i = 0; i < leaves.size(); ++i) {
    bool minimal = true;
    for (size_t j = 0; j < leaves.size(); ++j)
      if (j != i && subset(leaves[j], leaves[i]) && leaves[j] != leaves[i]) {
        minimal = false;
        break;
      }
    if (!minimal) continue;
    std::set<Literal> ls;
    for (int id = 0; id < ig.idx.size(); ++id)
      if (leaves[i][id]) ls.insert(ig.idx.lits[id]);
    out.emplace_back(std::move(ls));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Answer-set search
// ---------------------------------------------------------------------------

struct SolveLimits {
  std::uint64_t max_branch_nodes = 1ull << 22;
};

enum class SolveStatus { Ok, Inconsistent, ResourceLimit };

struct SolveResult {
  SolveStatus status = SolveStatus::Ok;
  std::vector<AnswerSet> sets;       // after strong-constraint filtering
  size_t pre_filter_count = 0;       // candidates that verified as answer sets
};

namespace detail {

class AnswerSetSearch {
 public:
  AnswerSetSearch(const IndexedGround& g, bool e_mode, SolveLimits limits)
      : g_(g), e_mode_(e_mode), limits_(limits), n_(g.idx.size()), val_(n_, 0) {
    build_clauses();
    collect_branch_vars();
  }

  // seeds the search with a sound lower bound; literals known true are in,
  // known false are out
  bool seed(const Interpretation& w) {
    for (const auto& l : w.true_set) {
      int id = g_.idx.id_of(l);
      if (id >= 0 && !assign(id, 1)) return false;
    }
    for (const auto& l : w.false_set) {
      int id = g_.idx.id_of(l);
      if (id >= 0 && !assign(id, -1)) return false;
    }
    return propagate();
  }

  SolveStatus run() {
    search();
    if (exhausted_) return SolveStatus::ResourceLimit;
    return SolveStatus::Ok;
  }

  bool saw_contradiction() const { return saw_contradiction_; }
  std::vector<std::vector<char>>& found() { return found_; }

 private:
  void build_clauses() {
    for (const auto& r : g_.regular) {
      // rule satisfaction: some head in, or some weakly negated literal in,
      // or some positive body literal out
      std::vector<int> cl;
      for (int h : r.head) cl.push_back(enc(h, true));
      for (int c : r.naf) cl.push_back(enc(c, true));
      if (e_mode_ && r.default_guard >= 0) cl.push_back(enc(r.default_guard, true));
      for (int b : r.pos) cl.push_back(enc(b, false));
      clauses_.push_back(std::move(cl));
    }
  }

  void collect_branch_vars() {
    std::vector<char> mark(n_, 0);
    for (const auto& r : g_.regular) {
      if (r.head.size() >= 2)
        for (int h : r.head) mark[h] = 1;
      for (int c : r.naf) mark[c] = 1;
      if (e_mode_ && r.default_guard >= 0) mark[r.default_guard] = 1;
    }
    for (int i = 0; i < n_; ++i)
      if (mark[i]) branch_vars_.push_back(i);
  }

  static int enc(int id, bool want_in) { return want_in ? (id + 1) : -(id + 1); }

  bool assign(int id, int8_t v) {
    if (val_[id] == v) return true;
    if (val_[id] != 0) return false;  // conflict with earlier decision
    val_[id] = v;
    trail_.push_back(id);
    if (v == 1) {
      int c = g_.idx.comp[id];
      if (val_[c] == 1) {
        saw_contradiction_ = true;
        return false;
      }
      if (c != id && !assign(c, -1)) return false;
    }
    return true;
  }

  bool propagate() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& cl : clauses_) {
        int unassigned = -1;
        int count_unassigned = 0;
        bool sat = false;
        for (int e : cl) {
          int id = std::abs(e) - 1;
          int8_t want = e > 0 ? 1 : -1;
          if (val_[id] == want) { sat = true; break; }
          if (val_[id] == 0) {
            ++count_unassigned;
            unassigned = e;
          }
        }
        if (sat) continue;
        if (count_unassigned == 0) return false;  // clause violated
        if (count_unassigned == 1) {
          int id = std::abs(unassigned) - 1;
          if (!assign(id, unassigned > 0 ? 1 : -1)) return false;
          changed = true;
        }
      }
    }
    return true;
  }

  void search() {
    if (exhausted_) return;
    if (++nodes_ > limits_.max_branch_nodes) {
      exhausted_ = true;
      return;
    }
    int var = -1;
    for (int v : branch_vars_)
      if (val_[v] == 0) { var = v; break; }
    if (var < 0) {
      leaf();
      return;
    }
    for (int8_t choice : {int8_t(1), int8_t(-1)}) {
      size_t mark = trail_.size();
      if (assign(var, choice) && propagate()) search();
      while (trail_.size() > mark) {
        val_[trail_.back()] = 0;
        trail_.pop_back();
      }
      if (exhausted_) return;
    }
  }

  void leaf() {
    std::vector<char> in(n_, 0);
    for (int i = 0; i < n_; ++i) in[i] = (val_[i] == 1);
    if (!verify(in)) return;
    found_.push_back(std::move(in));
  }

  // S is an answer set iff it is a minimal model of its own reduct.
  bool verify(const std::vector<char>& in) {
    reduct_.clear();
    for (const auto& r : g_.regular) {
      bool dropped = false;
      for (int c : r.naf)
        if (in[c]) { dropped = true; break; }
      if (!dropped && e_mode_ && r.default_guard >= 0 && in[r.default_guard]) dropped = true;
      if (dropped) continue;
      reduct_.push_back(PosRule{r.head, r.pos});
    }
    // closedness (propagation already enforces it; kept as a self-check)
    for (const auto& r : reduct_) {
      bool body = true;
      for (int b : r.pos)
        if (!in[b]) { body = false; break; }
      if (!body) continue;
      bool sat = false;
      for (int h : r.head)
        if (in[h]) { sat = true; break; }
      if (!sat) return false;
    }
    // minimality: no closed proper subset within S
    std::vector<char> t(n_, 0);
    size_t size_s = 0;
    for (int i = 0; i < n_; ++i) size_s += in[i];
    return !smaller_model(t, 0, in, size_s);
  }

  bool smaller_model(std::vector<char> t, size_t tsize, const std::vector<char>& in,
                     size_t size_s) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& r : reduct_) {
        bool body = true;
        for (int b : r.pos)
          if (!t[b]) { body = false; break; }
        if (!body) continue;
        bool sat = false;
        int candidate = -1, options = 0;
        for (int h : r.head) {
          if (t[h]) { sat = true; break; }
          if (in[h]) {
            ++options;
            candidate = h;
          }
        }
        if (sat) continue;
        assert(options > 0);  // S is closed, so some head literal lies in S
        if (options == 1) {
          t[candidate] = 1;
          ++tsize;
          changed = true;
        }
      }
    }
    for (const auto& r : reduct_) {
      bool body = true;
      for (int b : r.pos)
        if (!t[b]) { body = false; break; }
      if (!body) continue;
      bool sat = false;
      for (int h : r.head)
        if (t[h]) { sat = true; break; }
      if (sat) continue;
      for (int h : r.head) {
        if (!in[h]) continue;
        std::vector<char> next = t;
        next[h] = 1;
        if (smaller_model(std::move(next), tsize + 1, in, size_s)) return true;
      }
      return false;
    }
    return tsize < size_s;  // closed model strictly inside S
  }

  const IndexedGround& g_;
  bool e_mode_;
  SolveLimits limits_;
  int n_;
  std::vector<int8_t> val_;
  std::vector<int> trail_;
  std::vector<std::vector<int>> clauses_;
  std::vector<int> branch_vars_;
  std::vector<PosRule> reduct_;
  std::vector<std::vector<char>> found_;
  std::uint64_t nodes_ = 0;
  bool exhausted_ = false;
  bool saw_contradiction_ = false;
};

inline bool violates(const IRule& denial, const std::vector<char>& in) {
  for (int b : denial.pos)
    if (!in[b]) return false;
  for (int c : denial.naf)
    if (in[c]) return false;
  return true;
}

}  // namespace detail

/// Checks one ground denial against an answer set.
inline bool violates_denial(const Rule& denial, const AnswerSet& s) {
  for (const auto& b : denial.body) {
    bool holds = s.contains(b.lit);
    if (b.naf ? holds : !holds) return false;
  }
  return true;
}

/// Keeps the answer sets that satisfy every denial.
inline std::vector<AnswerSet> filter_strong(const std::vector<AnswerSet>& sets,
                                            const std::vector<Rule>& denials) {
  std::vector<AnswerSet> out;
  for (const auto& s : sets) {
    bool ok = true;
    for (const auto& d : denials)
      if (violates_denial(d, s)) { ok = false; break; }
    if (ok) out.push_back(s);
  }
  return out;
}

/// Number of violated ground weak-constraint instances.
inline size_t weak_violations(const AnswerSet& s, const std::vector<Rule>& weak_rules) {
  size_t n = 0;
  for (const auto& w : weak_rules)
    if (violates_denial(w, s)) ++n;
  return n;
}

/// Keeps exactly the answer sets with the minimum number of violated weak
/// constraint instances.
inline std::vector<AnswerSet> optimize_weak(const std::vector<AnswerSet>& sets,
                                            const std::vector<Rule>& weak_rules) {
  if (sets.empty() || weak_rules.empty()) return sets;
  size_t best = SIZE_MAX;
  std::vector<size_t> counts;
  counts.reserve(sets.size());
  for (const auto& s : sets) {
    counts.push_back(weak_violations(s, weak_rules));
    best = std::min(best, counts.back());
  }
  std::vector<AnswerSet> out;
  for (size_t i = 0; i < sets.size(); ++i)
    if (counts[i] == best) out.push_back(sets[i]);
  return out;
}

/// All consistent answer sets of a ground program, strong constraints
/// applied. Weak constraints are left to `optimize_weak`.
inline SolveResult answer_sets(const GroundProgram& g, bool e_mode = false,
                               SolveLimits limits = {}) {
  SolveResult res;
  IndexedGround ig = IndexedGround::build(g);

  WfsResult w = well_founded(g);
  if (w.inconsistent) {
    res.status = SolveStatus::Inconsistent;
    return res;
  }

  detail::AnswerSetSearch search(ig, e_mode, limits);
  bool feasible = search.seed(w.interp);
  if (feasible) {
    res.status = search.run();
    if (res.status == SolveStatus::ResourceLimit) return res;
  }

  auto& found = search.found();
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());
  res.pre_filter_count = found.size();

  for (const auto& in : found) {
    bool ok = true;
    for (const auto& d : ig.strong)
      if (detail::violates(d, in)) { ok = false; break; }
    if (!ok) continue;
    std::set<Literal> ls;
    for (int id = 0; id < ig.idx.size(); ++id)
      if (in[id]) ls.insert(ig.idx.lits[id]);
    res.sets.emplace_back(std::move(ls));
  }
  std::sort(res.sets.begin(), res.sets.end());

  if (res.pre_filter_count == 0 && search.saw_contradiction())
    res.status = SolveStatus::Inconsistent;
  return res;
}

/// Ground weak-constraint rules of a ground program.
inline std::vector<Rule> weak_rules_of(const GroundProgram& g) {
  std::vector<Rule> out;
  for (const auto& r : g.rules)
    if (r.kind == RuleKind::WeakConstraint) out.push_back(r);
  return out;
}

/// Ground strong-constraint rules of a ground program.
inline std::vector<Rule> strong_rules_of(const GroundProgram& g) {
  std::vector<Rule> out;
  for (const auto& r : g.rules)
    if (r.kind == RuleKind::StrongConstraint) out.push_back(r);
  return out;
}

}  // namespace cqa
