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
// Brute-force reference implementations used by the property tests: repair
// enumeration straight from the definition, and answer-set enumeration by
// exhaustive candidate checking. Deliberately independent of the solver's
// code paths; hard size caps by design.

#pragma once

#include <functional>
#include <map>
#include <set>
#include <vector>

#include "cqa/grounder.hpp"
#include "cqa/model.hpp"

namespace cqa {

// ---------------------------------------------------------------------------
// Direct constraint evaluation
// ---------------------------------------------------------------------------

namespace oracle_detail {

inline bool holds_ground(const DatabaseInstance& db, const Atom& a) { return db.holds(a); }

// forall assignments of vars over dom: body
inline bool for_all_assignments(const std::vector<std::string>& vars, const std::set<Term>& dom,
                                std::map<std::string, Term>& env,
                                const std::function<bool()>& check) {
  if (vars.empty()) return check();
  std::vector<std::string> rest(vars.begin() + 1, vars.end());
  for (const Term& c : dom) {
    env[vars[0]] = c;
    if (!for_all_assignments(rest, dom, env, check)) {
      env.erase(vars[0]);
      return false;
    }
  }
  env.erase(vars[0]);
  return true;
}

inline Atom subst(const Atom& a, const std::map<std::string, Term>& env) {
  Atom out = a;
  for (auto& t : out.args)
    if (t.is_variable()) {
      auto it = env.find(t.text);
      assert(it != env.end());
      t = it->second;
    }
  return out;
}

}  // namespace oracle_detail

/// Satisfaction of one constraint by an instance, by direct evaluation of the
/// universal formula over `dom`. Referential constraints accept any witness
/// present in the instance, null-valued columns included.
inline bool satisfies(const DatabaseInstance& db, const Constraint& c, const std::set<Term>& dom) {
  using namespace oracle_detail;
  std::map<std::string, Term> env;
  if (c.is_ric()) {
    const Atom& p = c.negatives[0];
    std::vector<std::string> vars;
    collect_vars(p, vars);
    return for_all_assignments(vars, dom, env, [&]() {
      if (!db.holds(subst(p, env))) return true;
      const Atom& cons = c.existential->consequent;
      for (const auto& f : db.facts) {
        if (f.pred != cons.pred || f.args.size() != cons.args.size()) continue;
        bool match = true;
        for (size_t i = 0; i < cons.args.size(); ++i) {
          if (c.existential->existential_pos[i]) continue;  // any witness value
          Term want = cons.args[i].is_variable() ? env.at(cons.args[i].text) : cons.args[i];
          if (!(f.args[i] == want)) { match = false; break; }
        }
        if (match) return true;
      }
      return false;
    });
  }
  std::vector<std::string> vars = c.vars();
  return for_all_assignments(vars, dom, env, [&]() {
    for (const auto& a : c.positives)
      if (db.holds(subst(a, env))) return true;
    for (const auto& a : c.negatives)
      if (!db.holds(subst(a, env))) return true;
    if (!c.builtin.is_false()) {
      bool phi = true;
      for (const auto& b : c.builtin.conjuncts) {
        Literal g(subst(b.atom, env), b.neg);
        if (!eval_builtin_literal(g)) { phi = false; break; }
      }
      if (phi) return true;
    }
    return false;
  });
}

inline bool satisfies_all(const DatabaseInstance& db, const std::vector<Constraint>& ics,
                          const std::set<Term>& dom) {
  for (const auto& c : ics)
    if (!satisfies(db, c, dom)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Repair enumeration from the definition
// ---------------------------------------------------------------------------

enum class RepairMetric { SetInclusion, Cardinality };

/// All schema atoms over `dom`, plus the null-witness atoms of referential
/// constraints when requested. This is the space Definition-style repairs are
/// searched in.
inline std::vector<Atom> candidate_universe(const Schema& schema, const std::set<Term>& dom,
                                            const std::vector<Constraint>& ics = {},
                                            bool with_null_witnesses = false) {
  std::vector<Atom> out;
  for (const auto& [name, rel] : schema.relations) {
    std::vector<Atom> partial{Atom(name, {})};
    for (size_t i = 0; i < rel.arity; ++i) {
      std::vector<Atom> next;
      for (const auto& a : partial)
        for (const Term& c : dom) {
          Atom e = a;
          e.args.push_back(c);
          next.push_back(std::move(e));
        }
      partial = std::move(next);
    }
    for (auto& a : partial) out.push_back(std::move(a));
  }
  if (with_null_witnesses) {
    for (const auto& c : ics) {
      if (!c.is_ric()) continue;
      const Atom& cons = c.existential->consequent;
      std::vector<Atom> partial{Atom(cons.pred, {})};
      for (size_t i = 0; i < cons.args.size(); ++i) {
        std::vector<Atom> next;
        for (const auto& a : partial) {
          if (c.existential->existential_pos[i]) {
            Atom e = a;
            e.args.push_back(Term::null_value());
            next.push_back(std::move(e));
          } else {
            for (const Term& cst : dom) {
              Atom e = a;
              e.args.push_back(cst);
              next.push_back(std::move(e));
            }
          }
        }
        partial = std::move(next);
      }
      for (auto& a : partial)
        if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(std::move(a));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Enumerates every subset of the candidate universe, keeps the consistent
/// ones and retains those with a minimal delta under the chosen metric.
/// Throws when the universe exceeds `max_universe`.
inline std::vector<Repair> enumerate_repairs_bruteforce(
    const DatabaseInstance& r, const std::vector<Constraint>& ics, const std::set<Term>& dom,
    RepairMetric metric = RepairMetric::SetInclusion, size_t max_universe = 22,
    const std::vector<Atom>* universe_override = nullptr) {
  std::vector<Atom> universe =
      universe_override ? *universe_override
                        : candidate_universe(r.schema, dom, ics,
                                             std::any_of(ics.begin(), ics.end(),
                                                         [](const Constraint& c) {
                                                           return c.is_ric();
                                                         }));
  for (const auto& f : r.facts)
    if (std::find(universe.begin(), universe.end(), f) == universe.end())
      universe.push_back(f);
  std::sort(universe.begin(), universe.end());
  if (universe.size() > max_universe)
    throw std::invalid_argument("oracle: candidate universe too large (" +
                                std::to_string(universe.size()) + " atoms)");

  struct Candidate {
    DatabaseInstance inst;
    std::set<Atom> d;
  };
  std::vector<Candidate> consistent;
  const size_t n = universe.size();
  for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
    DatabaseInstance inst;
    inst.schema = r.schema;
    for (size_t i = 0; i < n; ++i)
      if (mask & (1ull << i)) inst.add_fact(universe[i], /*allow_null=*/true);
    if (!satisfies_all(inst, ics, dom)) continue;
    auto [ins, del] = delta(r, inst);
    std::set<Atom> d = ins;
    d.insert(del.begin(), del.end());
    consistent.push_back(Candidate{std::move(inst), std::move(d)});
  }

  std::sort(consistent.begin(), consistent.end(),
            [](const Candidate& a, const Candidate& b) { return a.d.size() < b.d.size(); });
  std::vector<Repair> out;
  if (metric == RepairMetric::Cardinality) {
    if (consistent.empty()) return out;
    size_t best = consistent.front().d.size();
    for (auto& c : consistent)
      if (c.d.size() == best) out.push_back(make_repair(r, std::move(c.inst)));
  } else {
    std::vector<const std::set<Atom>*> kept;
    for (auto& c : consistent) {
      bool dominated = false;
      for (const auto* k : kept)
        if (std::includes(c.d.begin(), c.d.end(), k->begin(), k->end())) {
          dominated = (*k != c.d);
          if (dominated) break;
        }
      if (dominated) continue;
      kept.push_back(&c.d);
      out.push_back(make_repair(r, c.inst));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Answer-set enumeration from the definition
// ---------------------------------------------------------------------------

namespace oracle_detail {

// reduct steps (a), (b) and, in e-mode, (c'): implemented here again on
// purpose, so solver and oracle do not share the code being checked
inline std::vector<std::pair<std::vector<Literal>, std::vector<Literal>>> naive_reduct(
    const GroundProgram& g, const std::set<Literal>& s, bool e_mode) {
  std::vector<std::pair<std::vector<Literal>, std::vector<Literal>>> out;
  for (const auto& r : g.rules) {
    if (r.kind == RuleKind::WeakConstraint || r.kind == RuleKind::StrongConstraint) continue;
    bool dropped = false;
    for (const auto& b : r.body)
      if (b.naf && s.count(b.lit)) { dropped = true; break; }
    if (!dropped && e_mode && r.kind == RuleKind::PersistenceDefault && r.head.size() == 1 &&
        s.count(complement(r.head[0])))
      dropped = true;
    if (dropped) continue;
    std::vector<Literal> pos;
    for (const auto& b : r.body)
      if (!b.naf) pos.push_back(b.lit);
    out.emplace_back(r.head, std::move(pos));
  }
  return out;
}

inline bool closed_under(
    const std::vector<std::pair<std::vector<Literal>, std::vector<Literal>>>& rules,
    const std::set<Literal>& s) {
  for (const auto& [head, pos] : rules) {
    bool body = true;
    for (const auto& b : pos)
      if (!s.count(b)) { body = false; break; }
    if (!body) continue;
    bool sat = false;
    for (const auto& h : head)
      if (s.count(h)) { sat = true; break; }
    if (!sat) return false;
  }
  return true;
}

}  // namespace oracle_detail

/// Tests every consistent subset of the literal universe against the reduct
/// definition. Throws when the universe exceeds `max_universe` literals.
inline std::vector<AnswerSet> enumerate_answer_sets_naive(const GroundProgram& g,
                                                          bool e_mode = false,
                                                          size_t max_universe = 24) {
  std::vector<Literal> universe(g.universe.begin(), g.universe.end());
  if (universe.size() > max_universe)
    throw std::invalid_argument("oracle: literal universe too large (" +
                                std::to_string(universe.size()) + " literals)");
  const size_t n = universe.size();

  std::vector<int> comp(n, -1);
  for (size_t i = 0; i < n; ++i) {
    auto it = std::find(universe.begin(), universe.end(), complement(universe[i]));
    if (it != universe.end()) comp[i] = static_cast<int>(it - universe.begin());
  }

  std::vector<Rule> denials;
  for (const auto& r : g.rules)
    if (r.kind == RuleKind::StrongConstraint) denials.push_back(r);

  std::vector<AnswerSet> out;
  for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
    bool inconsistent = false;
    for (size_t i = 0; i < n && !inconsistent; ++i)
      if ((mask & (1ull << i)) && comp[i] >= 0 && comp[i] > static_cast<int>(i) &&
          (mask & (1ull << comp[i])))
        inconsistent = true;
    if (inconsistent) continue;

    std::set<Literal> s;
    std::vector<Literal> members;
    for (size_t i = 0; i < n; ++i)
      if (mask & (1ull << i)) {
        s.insert(universe[i]);
        members.push_back(universe[i]);
      }

    auto rules = oracle_detail::naive_reduct(g, s, e_mode);
    if (!oracle_detail::closed_under(rules, s)) continue;

    // minimality: no proper subset of s is closed
    bool minimal = true;
    if (members.size() <= 20) {
      const size_t k = members.size();
      for (std::uint64_t sub = 0; sub + 1 < (1ull << k) && minimal; ++sub) {
        std::set<Literal> t;
        for (size_t i = 0; i < k; ++i)
          if (sub & (1ull << i)) t.insert(members[i]);
        if (oracle_detail::closed_under(rules, t)) minimal = false;
      }
    } else {
      throw std::invalid_argument("oracle: candidate too large for the minimality sweep");
    }
    if (!minimal) continue;

    AnswerSet as(std::move(s));
    bool ok = true;
    for (const auto& d : denials) {
      bool violated = true;
      for (const auto& b : d.body) {
        bool holds = as.contains(b.lit);
        if (b.naf ? holds : !holds) { violated = false; break; }
      }
      if (violated) { ok = false; break; }
    }
    if (ok) out.push_back(std::move(as));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// The maximal candidate set S(r, r')
// ---------------------------------------------------------------------------

/// Everything two instances can contribute: the original atoms plain, the
/// repaired ones primed, the repaired complement for every universe atom
/// missing from r', plus the dom facts.
inline std::set<Literal> maximal_candidate_set(const DatabaseInstance& r,
                                               const DatabaseInstance& rp,
                                               const std::vector<Atom>& universe,
                                               const std::set<Term>& dom) {
  std::set<Literal> s;
  for (const auto& a : r.facts) s.insert(Literal(a));
  for (const auto& a : rp.facts) s.insert(Literal(a.primed_copy()));
  for (const auto& a : universe)
    if (!rp.holds(a)) s.insert(Literal(a.primed_copy(), true));
  for (const auto& c : dom) s.insert(Literal(Atom(kDomPred, {c}, AtomKind::DomGuard)));
  return s;
}

/// Model check of a ground program against a plain literal set (weak negation
/// read as non-membership). Weak constraints are ignored.
inline bool is_model_of(const GroundProgram& g, const std::set<Literal>& s) {
  for (const auto& r : g.rules) {
    if (r.kind == RuleKind::WeakConstraint) continue;
    bool body = true;
    for (const auto& b : r.body) {
      bool holds = s.count(b.lit) != 0;
      if (b.naf ? holds : !holds) { body = false; break; }
    }
    if (!body) continue;
    bool sat = false;
    for (const auto& h : r.head)
      if (s.count(h)) { sat = true; break; }
    if (!sat && !r.head.empty()) return false;
    if (r.head.empty()) return false;  // denial violated
  }
  return true;
}

// ---------------------------------------------------------------------------
// Reference evaluation of basic queries over one instance
// ---------------------------------------------------------------------------

inline bool eval_basic_query(const KQuery& q, const DatabaseInstance& db,
                             const std::set<Term>& dom, std::map<std::string, Term>& env) {
  switch (q.node) {
    case KQuery::Node::Atom: {
      Atom a = oracle_detail::subst(q.atom, env);
      if (a.kind == AtomKind::Builtin) return eval_builtin(a);
      return db.holds(a);
    }
    case KQuery::Node::And:
      return eval_basic_query(q.children[0], db, dom, env) &&
             eval_basic_query(q.children[1], db, dom, env);
    case KQuery::Node::Or:
      return eval_basic_query(q.children[0], db, dom, env) ||
             eval_basic_query(q.children[1], db, dom, env);
    case KQuery::Node::Not:
      return !eval_basic_query(q.children[0], db, dom, env);
    case KQuery::Node::Exists: {
      std::function<bool(size_t)> any = [&](size_t i) {
        if (i == q.bound.size()) return eval_basic_query(q.children[0], db, dom, env);
        for (const Term& c : dom) {
          env[q.bound[i]] = c;
          if (any(i + 1)) { env.erase(q.bound[i]); return true; }
        }
        env.erase(q.bound[i]);
        return false;
      };
      return any(0);
    }
    case KQuery::Node::K:
      throw std::invalid_argument("eval_basic_query: K operator in a basic query");
  }
  return false;
}

/// Active-domain answers of a basic query over one instance.
inline std::set<std::vector<Term>> basic_query_answers(const KQuery& q, const DatabaseInstance& db,
                                                       const std::set<Term>& dom) {
  std::vector<std::string> vars = q.free_vars();
  std::set<std::vector<Term>> out;
  std::map<std::string, Term> env;
  std::function<void(size_t)> sweep = [&](size_t i) {
    if (i == vars.size()) {
      if (eval_basic_query(q, db, dom, env)) {
        std::vector<Term> tuple;
        for (const auto& v : vars) tuple.push_back(env.at(v));
        out.insert(std::move(tuple));
      }
      return;
    }
    for (const Term& c : dom) {
      env[vars[i]] = c;
      sweep(i + 1);
    }
    env.erase(vars[i]);
  };
  sweep(0);
  return out;
}

}  // namespace cqa
