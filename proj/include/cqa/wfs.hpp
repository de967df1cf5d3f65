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
// Disjunctive well-founded interpretation: least fixpoint of the immediate
// consequence operator combined with falsification of the greatest unfounded
// set. The fixpoint under-approximates the intersection of all answer sets
// and seeds the solver's search.

#pragma once

#include <vector>

#include "cqa/grounder.hpp"
#include "cqa/model.hpp"

namespace cqa {

namespace detail {

// Interpretation as id-indexed flags: 1 true, -1 false, 0 undefined.
struct IState {
  std::vector<int8_t> v;
  bool is_true(int i) const { return v[i] == 1; }
  bool is_false(int i) const { return v[i] == -1; }
};

// Immediate consequences: head literal true when the body holds and every
// other head literal is false. Persistence defaults carry the implicit weak
// negation of their complemented head.
inline std::vector<int> t_step(const IndexedGround& g, const IState& s) {
  std::vector<int> out;
  for (const auto& r : g.regular) {
    bool body = true;
    for (int b : r.pos)
      if (!s.is_true(b)) { body = false; break; }
    if (body)
      for (int b : r.naf)
        if (!s.is_false(b)) { body = false; break; }
    if (body && r.default_guard >= 0 && !s.is_false(r.default_guard)) body = false;
    if (!body) continue;
    for (size_t i = 0; i < r.head.size(); ++i) {
      bool mates_false = true;
      for (size_t j = 0; j < r.head.size(); ++j)
        if (j != i && !s.is_false(r.head[j])) { mates_false = false; break; }
      if (mates_false && !s.is_true(r.head[i])) out.push_back(r.head[i]);
    }
  }
  return out;
}

// Greatest unfounded set: start from everything not true and keep removing
// literals founded by some rule whose body is not refuted, whose other head
// literals are not true, and whose positive body lies outside the set.
inline std::vector<bool> gus_step(const IndexedGround& g, const IState& s) {
  const int n = static_cast<int>(s.v.size());
  std::vector<bool> in(n);
  for (int i = 0; i < n; ++i) in[i] = !s.is_true(i);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : g.regular) {
      bool refuted = false;
      for (int b : r.pos)
        if (s.is_false(b)) { refuted = true; break; }
      if (!refuted)
        for (int b : r.naf)
          if (s.is_true(b)) { refuted = true; break; }
      if (!refuted && r.default_guard >= 0 && s.is_true(r.default_guard)) refuted = true;
      if (refuted) continue;
      bool pos_outside = true;
      for (int b : r.pos)
        if (in[b]) { pos_outside = false; break; }
      if (!pos_outside) continue;
      for (size_t i = 0; i < r.head.size(); ++i) {
        if (!in[r.head[i]]) continue;
        bool mate_true = false;
        for (size_t j = 0; j < r.head.size(); ++j)
          if (j != i && s.is_true(r.head[j])) { mate_true = true; break; }
        if (!mate_true) {
          in[r.head[i]] = false;
          changed = true;
        }
      }
    }
  }
  return in;
}

inline IState to_istate(const IndexedGround& g, const Interpretation& i) {
  IState s;
  s.v.assign(g.idx.size(), 0);
  for (const auto& l : i.true_set) {
    int id = g.idx.id_of(l);
    if (id >= 0) s.v[id] = 1;
  }
  for (const auto& l : i.false_set) {
    int id = g.idx.id_of(l);
    if (id >= 0) s.v[id] = -1;
  }
  return s;
}

}  // namespace detail

/// Literals the immediate consequence operator derives from `i`.
inline std::set<Literal> t_operator(const GroundProgram& g, const Interpretation& i) {
  IndexedGround ig = IndexedGround::build(g);
  detail::IState s = detail::to_istate(ig, i);
  std::set<Literal> out;
  for (int id : detail::t_step(ig, s)) out.insert(ig.idx.lits[id]);
  return out;
}

/// The greatest unfounded set of g relative to `i`.
inline std::set<Literal> greatest_unfounded_set(const GroundProgram& g, const Interpretation& i) {
  IndexedGround ig = IndexedGround::build(g);
  detail::IState s = detail::to_istate(ig, i);
  auto in = detail::gus_step(ig, s);
  std::set<Literal> out;
  for (int id = 0; id < ig.idx.size(); ++id)
    if (in[id]) out.insert(ig.idx.lits[id]);
  return out;
}

struct WfsResult {
  Interpretation interp;
  bool inconsistent = false;  // true and false sets overlapped
  int iterations = 0;
};

/// Least fixpoint of the well-founded operator from the empty interpretation.
/// Records for every literal the iteration at which it was decided.
inline WfsResult well_founded(const GroundProgram& g) {
  IndexedGround ig = IndexedGround::build(g);
  const int n = ig.idx.size();
  detail::IState s;
  s.v.assign(n, 0);
  std::vector<int> entered(n, 0);

  WfsResult res;
  int round = 0;
  const int cap = n + 2;
  while (true) {
    ++round;
    auto derived = detail::t_step(ig, s);
    auto unfounded = detail::gus_step(ig, s);
    bool changed = false;
    for (int id : derived) {
      if (s.v[id] == -1) {
        res.inconsistent = true;
      } else if (s.v[id] == 0) {
        s.v[id] = 1;
        entered[id] = round;
        changed = true;
      }
      int c = ig.idx.comp[id];
      if (s.v[c] == 1) res.inconsistent = true;
    }
    for (int id = 0; id < n; ++id) {
      if (!unfounded[id]) continue;
      if (s.v[id] == 1) {
        res.inconsistent = true;
      } else if (s.v[id] == 0) {
        s.v[id] = -1;
        entered[id] = round;
        changed = true;
      }
    }
    if (res.inconsistent) break;
    if (!changed) break;
    if (round > cap) throw std::logic_error("well-founded iteration did not converge");
  }
  res.iterations = round;
  for (int id = 0; id < n; ++id) {
    if (s.v[id] == 1) res.interp.true_set.insert(ig.idx.lits[id]);
    if (s.v[id] == -1) res.interp.false_set.insert(ig.idx.lits[id]);
    if (s.v[id] != 0) res.interp.entered_at[ig.idx.lits[id]] = entered[id];
  }
  return res;
}

/// Intersection of a nonempty family of answer sets.
inline std::set<Literal> core(const std::vector<AnswerSet>& sets) {
  if (sets.empty()) throw std::invalid_argument("core of an empty answer-set family");
  std::set<Literal> out = sets[0].literals;
  for (size_t i = 1; i < sets.size(); ++i) {
    std::set<Literal> next;
    for (const auto& l : out)
      if (sets[i].contains(l)) next.insert(l);
    out = std::move(next);
  }
  return out;
}

}  // namespace cqa
