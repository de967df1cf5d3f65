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
// Seeded generators for the randomized equivalence suites: small instances
// with binary constraints, small ground programs, and FD-plus-unary cases.
// Sizes stay inside the oracle's enumeration bounds.

#pragma once

#include <cstdint>
#include <vector>

#include "cqa/grounder.hpp"
#include "cqa/model.hpp"
#include "cqa/oracle.hpp"

namespace cqa {

/// Deterministic splitmix64; self-contained so seeded runs are reproducible
/// across standard libraries.
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed + 0x9e3779b97f4a7c15ull) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }
  bool chance(int percent) { return below(100) < static_cast<std::uint64_t>(percent); }
};

struct RandomCase {
  DatabaseInstance instance;
  std::vector<Constraint> ics;
  std::set<Term> domain;
};

namespace corpus_detail {

inline Constraint fd(const std::string& pred) {
  Constraint c;
  Atom a1(pred, {Term::var("X"), Term::var("Y")});
  Atom a2(pred, {Term::var("X"), Term::var("Z")});
  c.negatives = {a1, a2};
  Atom eq("=", {Term::var("Y"), Term::var("Z")}, AtomKind::Builtin);
  c.builtin.conjuncts = {Literal(eq)};
  return c;
}

inline Constraint inclusion(const std::string& from, const std::string& to) {
  Constraint c;
  c.negatives = {Atom(from, {Term::var("X")})};
  c.positives = {Atom(to, {Term::var("X")})};
  return c;
}

inline Constraint projection(const std::string& bin, const std::string& un) {
  Constraint c;
  c.negatives = {Atom(bin, {Term::var("X"), Term::var("Y")})};
  c.positives = {Atom(un, {Term::var("X")})};
  return c;
}

inline Constraint exclusion(const std::string& a, const std::string& b) {
  Constraint c;
  c.negatives = {Atom(a, {Term::var("X")}), Atom(b, {Term::var("X")})};
  return c;
}

inline Constraint range(const std::string& pred, const Term& value) {
  Constraint c;
  c.negatives = {Atom(pred, {Term::var("X")})};
  Atom eq("=", {Term::var("X"), value}, AtomKind::Builtin);
  c.builtin.conjuncts = {Literal(eq)};
  return c;
}

inline Constraint must_hold(const std::string& pred) {
  Constraint c;
  c.positives = {Atom(pred, {Term::var("X")})};
  return c;
}

}  // namespace corpus_detail

namespace corpus_detail {

// The standing assumption: the constraint set must admit some consistent
// instance over the domain.
inline bool satisfiable_over(const Schema& schema, const std::vector<Constraint>& ics,
                             const std::set<Term>& dom) {
  auto universe = candidate_universe(schema, dom);
  if (universe.size() > 16) return false;
  for (std::uint64_t mask = 0; mask < (1ull << universe.size()); ++mask) {
    DatabaseInstance inst;
    inst.schema = schema;
    for (size_t i = 0; i < universe.size(); ++i)
      if (mask & (1ull << i)) inst.add_fact(universe[i]);
    if (satisfies_all(inst, ics, dom)) return true;
  }
  return false;
}

}  // namespace corpus_detail

/// A random instance over one unary and at most one binary predicate with
/// one to three binary constraints. The candidate-atom universe stays at or
/// below 13 atoms so the brute-force oracle can sweep it, and draws whose
/// constraint set admits no consistent instance at all are rejected.
inline RandomCase random_bic_case(std::uint64_t seed) {
  Rng rng(seed);
  while (true) {
    RandomCase out;
    size_t dom_size = 2 + rng.below(2);  // 2..3
    std::vector<Term> consts;
    for (size_t i = 0; i < dom_size; ++i) {
      Term c = Term::symbol(std::string(1, static_cast<char>('a' + i)));
      consts.push_back(c);
      out.domain.insert(c);
    }

    bool with_binary = rng.chance(60) && !(dom_size == 3 && rng.chance(40));
    out.instance.schema.declare("u", 1);
    out.instance.schema.declare("w", 1);
    if (with_binary) out.instance.schema.declare("p", 2);

    auto universe = candidate_universe(out.instance.schema, out.domain);
    if (universe.size() > 13) {
      // drop the binary predicate to stay enumerable
      out.instance.schema.relations.erase("p");
      with_binary = false;
    }

    for (const auto& a : candidate_universe(out.instance.schema, out.domain))
      if (rng.chance(40)) out.instance.add_fact(a);

    size_t nic = 1 + rng.below(3);
    for (size_t i = 0; i < nic; ++i) {
      switch (rng.below(with_binary ? 6 : 4)) {
        case 0: out.ics.push_back(corpus_detail::inclusion("u", "w")); break;
        case 1: out.ics.push_back(corpus_detail::exclusion("u", "w")); break;
        case 2:
          out.ics.push_back(corpus_detail::range("u", consts[rng.below(consts.size())]));
          break;
        case 3: out.ics.push_back(corpus_detail::must_hold(rng.chance(50) ? "u" : "w")); break;
        case 4: out.ics.push_back(corpus_detail::fd("p")); break;
        default: out.ics.push_back(corpus_detail::projection("p", "u")); break;
      }
    }
    if (corpus_detail::satisfiable_over(out.instance.schema, out.ics, out.domain)) return out;
  }
}

/// A random FD-plus-unary case over a binary predicate and a unary one.
inline RandomCase random_fd_unary_case(std::uint64_t seed) {
  Rng rng(seed);
  while (true) {
    RandomCase out;
    size_t dom_size = 2 + rng.below(2);
    std::vector<Term> consts;
    for (size_t i = 0; i < dom_size; ++i) {
      Term c = Term::symbol(std::string(1, static_cast<char>('a' + i)));
      consts.push_back(c);
      out.domain.insert(c);
    }
    out.instance.schema.declare("s", 2);
    out.instance.schema.declare("u", 1);
    for (const auto& a : candidate_universe(out.instance.schema, out.domain))
      if (rng.chance(35)) out.instance.add_fact(a);
    out.ics.push_back(corpus_detail::fd("s"));
    if (rng.chance(60))
      out.ics.push_back(corpus_detail::range("u", consts[rng.below(consts.size())]));
    if (rng.chance(30)) out.ics.push_back(corpus_detail::must_hold("u"));
    if (corpus_detail::satisfiable_over(out.instance.schema, out.ics, out.domain)) return out;
  }
}

/// Builds a GroundProgram straight from ground rules (universe computed and
/// closed under complement).
inline GroundProgram finalize_ground(std::vector<Rule> rules) {
  GroundProgram g;
  std::set<Rule> dedup;
  for (auto& r : rules) dedup.insert(canonical(std::move(r)));
  g.rules.assign(dedup.begin(), dedup.end());
  for (const auto& r : g.rules) {
    for (const auto& l : r.head) g.universe.insert(l);
    for (const auto& b : r.body) g.universe.insert(b.lit);
  }
  g.close_universe();
  return g;
}

/// A random ground program over a handful of propositional literals, with
/// occasional strong constraints and persistence-default rules.
inline GroundProgram random_ground_program(std::uint64_t seed, bool with_defaults = false) {
  Rng rng(seed);
  std::vector<Literal> pool;
  size_t npreds = 3 + rng.below(2);  // 3..4 atoms
  for (size_t i = 0; i < npreds; ++i) {
    Atom a(std::string(1, static_cast<char>('a' + i)), {});
    pool.emplace_back(a, false);
    if (rng.chance(50)) pool.emplace_back(a, true);
  }
  auto pick = [&]() { return pool[rng.below(pool.size())]; };

  std::vector<Rule> rules;
  size_t nrules = 2 + rng.below(5);
  for (size_t i = 0; i < nrules; ++i) {
    Rule r;
    if (rng.chance(10)) {
      r.kind = RuleKind::StrongConstraint;
      size_t nb = 1 + rng.below(2);
      for (size_t j = 0; j < nb; ++j) r.body.emplace_back(pick(), rng.chance(40));
      rules.push_back(std::move(r));
      continue;
    }
    size_t nh = 1 + (rng.chance(30) ? 1 : 0);
    for (size_t j = 0; j < nh; ++j) r.head.push_back(pick());
    size_t np = rng.below(3), nn = rng.below(3);
    for (size_t j = 0; j < np; ++j) r.body.emplace_back(pick(), false);
    for (size_t j = 0; j < nn; ++j) r.body.emplace_back(pick(), true);
    r.kind = (with_defaults && r.head.size() == 1 && rng.chance(35))
                 ? RuleKind::PersistenceDefault
                 : RuleKind::AuxiliaryDef;
    rules.push_back(std::move(r));
  }
  return finalize_ground(std::move(rules));
}

}  // namespace cqa
