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
// Top-level semantics: repairs from answer sets, consistent answers by
// intersection over all repairs, K-query evaluation over materialized
// consistent relations, and the well-founded under-approximation.

#pragma once

#include <optional>
#include <set>
#include <vector>

#include "cqa/compiler.hpp"
#include "cqa/grounder.hpp"
#include "cqa/model.hpp"
#include "cqa/oracle.hpp"
#include "cqa/parser.hpp"
#include "cqa/solver.hpp"
#include "cqa/wfs.hpp"

namespace cqa {

enum class Status {
  Ok = 0,
  NoAdmissibleRepair = 1,
  InputError = 2,
  ResourceLimit = 3,
  InconsistentProgram = 4,
};

inline const char* status_name(Status s) {
  switch (s) {
    case Status::Ok: return "ok";
    case Status::NoAdmissibleRepair: return "no admissible repair";
    case Status::InputError: return "input error";
    case Status::ResourceLimit: return "resource limit";
    case Status::InconsistentProgram: return "inconsistent program";
  }
  return "?";
}

struct CqaOptions {
  RepairMode mode = RepairMode::Winslett;
  StabilizerPolicy stabilizer = StabilizerPolicy::Guarded;
  RicPolicy ric = RicPolicy::NullInsertion;
  std::optional<std::set<Term>> finite_domain;
  SolveLimits limits;
};

struct RepairsResult {
  Status status = Status::Ok;
  std::vector<Repair> repairs;
  std::vector<AnswerSet> answer_sets;  // the surviving sets, optimized when Dalal
  size_t answer_sets_found = 0;        // before strong-constraint filtering
};

struct CqaResult {
  Status status = Status::Ok;
  std::vector<std::string> variables;     // answer-tuple column order
  std::set<std::vector<Term>> answers;    // empty or {()} for closed queries
  std::optional<bool> truth;              // closed queries only
  bool certified_exact = false;
  std::optional<size_t> repairs_count;
};

// ---------------------------------------------------------------------------
// Projection of answer sets to repaired instances
// ---------------------------------------------------------------------------

/// The database instance an answer set stands for. Winslett and default
/// answer sets are total on the primed predicates, so the positive primed
/// atoms are the repair. Dalal answer sets are sparse; the old tuples whose
/// primed deletion is absent persist.
inline Repair project_repair(const AnswerSet& s, const DatabaseInstance& r, RepairMode mode) {
  DatabaseInstance inst;
  inst.schema = r.schema;
  for (const auto& l : s.literals) {
    if (l.neg || !l.atom.primed) continue;
    if (!r.schema.contains(l.atom.pred)) continue;
    Atom a = l.atom;
    a.primed = false;
    inst.add_fact(std::move(a), /*allow_null=*/true);
  }
  if (mode == RepairMode::Dalal) {
    for (const auto& a : r.facts)
      if (!s.contains(Literal(a.primed_copy(), true))) inst.add_fact(a, /*allow_null=*/true);
  }
  return make_repair(r, std::move(inst));
}

namespace detail {

inline Status map_status(const SolveResult& sr) {
  switch (sr.status) {
    case SolveStatus::Inconsistent: return Status::InconsistentProgram;
    case SolveStatus::ResourceLimit: return Status::ResourceLimit;
    case SolveStatus::Ok: break;
  }
  if (sr.pre_filter_count == 0) return Status::InconsistentProgram;
  if (sr.sets.empty()) return Status::NoAdmissibleRepair;
  return Status::Ok;
}

inline std::set<Term> constants_of_program(const Program& p) {
  std::set<Term> out;
  auto add_atom = [&](const Atom& a) {
    for (const auto& t : a.args)
      if (t.is_constant() && !t.is_null()) out.insert(t);
  };
  for (const auto& r : p.rules) {
    for (const auto& l : r.head) add_atom(l.atom);
    for (const auto& b : r.body) add_atom(b.lit.atom);
  }
  return out;
}

struct Pipeline {
  Program program;
  DomainDeclaration domain{};
};

inline Pipeline build_pipeline(const DatabaseInstance& r, const std::vector<Constraint>& ics,
                               const CqaOptions& opts, const Program* strong,
                               const KQuery* query, const Program* query_program) {
  Pipeline out;
  out.program = assemble_repair_program(ics, r.schema, opts.mode, opts.stabilizer, opts.ric);
  if (strong) out.program.append(*strong);
  if (query_program) out.program.append(*query_program);

  if (opts.finite_domain) {
    out.domain = DomainDeclaration::finite(*opts.finite_domain);
  } else {
    std::set<Term> act = active_domain(r, ics, query);
    if (strong) {
      auto extra = constants_of_program(*strong);
      act.insert(extra.begin(), extra.end());
    }
    out.domain = DomainDeclaration::active(std::move(act));
  }
  return out;
}

inline std::vector<Repair> project_all(const std::vector<AnswerSet>& sets,
                                       const DatabaseInstance& r, RepairMode mode) {
  std::vector<Repair> out;
  for (const auto& s : sets) out.push_back(project_repair(s, r, mode));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Repairs
// ---------------------------------------------------------------------------

inline RepairsResult repairs_of(const DatabaseInstance& r, const std::vector<Constraint>& ics,
                                const CqaOptions& opts = {}, const Program* strong = nullptr) {
  RepairsResult out;
  auto pipe = detail::build_pipeline(r, ics, opts, strong, nullptr, nullptr);
  GroundProgram gp = ground(pipe.program, pipe.domain, &r);
  SolveResult sr = answer_sets(gp, opts.mode == RepairMode::RawDefaults, opts.limits);
  out.status = detail::map_status(sr);
  out.answer_sets_found = sr.pre_filter_count;
  if (out.status != Status::Ok) return out;
  out.answer_sets = opts.mode == RepairMode::Dalal
                        ? optimize_weak(sr.sets, weak_rules_of(gp))
                        : sr.sets;
  out.repairs = detail::project_all(out.answer_sets, r, opts.mode);
  return out;
}

// ---------------------------------------------------------------------------
// Consistent answers
// ---------------------------------------------------------------------------

namespace detail {

inline const KQuery& basic_part(const KQuery& q) {
  if (q.node == KQuery::Node::K) {
    if (q.children[0].contains_k())
      throw std::invalid_argument("nested K operators are not supported");
    return q.children[0];
  }
  if (q.contains_k()) throw std::invalid_argument("expected a basic query");
  return q;
}

inline std::set<std::vector<Term>> query_extension(const AnswerSet& s, size_t arity) {
  std::set<std::vector<Term>> out;
  for (const auto& l : s.literals)
    if (!l.neg && !l.atom.primed && l.atom.pred == kQueryPred && l.atom.args.size() == arity)
      out.insert(l.atom.args);
  return out;
}

}  // namespace detail

/// Consistent answers of a basic query: the intersection of the query-goal
/// extensions over all answer sets of the repair program joined with the
/// query program.
inline CqaResult consistent_answers(const KQuery& q, const DatabaseInstance& r,
                                    const std::vector<Constraint>& ics,
                                    const CqaOptions& opts = {},
                                    const Program* strong = nullptr) {
  const KQuery& basic = detail::basic_part(q);
  CqaResult out;
  out.variables = basic.free_vars();
  out.certified_exact = true;

  Program qprog = compile_query_program(basic, opts.mode);
  auto pipe = detail::build_pipeline(r, ics, opts, strong, &basic, &qprog);
  GroundProgram gp = ground(pipe.program, pipe.domain, &r);
  SolveResult sr = answer_sets(gp, opts.mode == RepairMode::RawDefaults, opts.limits);
  out.status = detail::map_status(sr);
  if (out.status != Status::Ok) {
    out.certified_exact = false;
    return out;
  }
  std::vector<AnswerSet> sets = opts.mode == RepairMode::Dalal
                                    ? optimize_weak(sr.sets, weak_rules_of(gp))
                                    : sr.sets;
  out.repairs_count = detail::project_all(sets, r, opts.mode).size();

  const size_t arity = out.variables.size();
  std::set<std::vector<Term>> inter = detail::query_extension(sets[0], arity);
  for (size_t i = 1; i < sets.size() && !inter.empty(); ++i) {
    auto ext = detail::query_extension(sets[i], arity);
    std::set<std::vector<Term>> next;
    for (const auto& t : inter)
      if (ext.count(t)) next.insert(t);
    inter = std::move(next);
  }
  out.answers = std::move(inter);
  if (arity == 0) out.truth = !out.answers.empty();
  return out;
}

namespace detail {

inline bool is_fd(const Constraint& c) {
  if (c.is_ric() || c.n() != 0 || c.m() != 2) return false;
  if (c.negatives[0].pred != c.negatives[1].pred) return false;
  if (c.builtin.is_false()) return false;
  for (const auto& b : c.builtin.conjuncts)
    if (b.atom.pred != "=" || b.neg || !b.atom.args[0].is_variable() ||
        !b.atom.args[1].is_variable())
      return false;
  return true;
}

inline bool fd_and_unary_only(const std::vector<Constraint>& ics) {
  for (const auto& c : ics)
    if (!c.is_unary() && !is_fd(c)) return false;
  return true;
}

inline bool nonexistential_conjunctive(const KQuery& q) {
  switch (q.node) {
    case KQuery::Node::Atom:
      return true;
    case KQuery::Node::And:
      return nonexistential_conjunctive(q.children[0]) &&
             nonexistential_conjunctive(q.children[1]);
    default:
      return false;
  }
}

}  // namespace detail

/// Polynomial under-approximation: evaluates the query program inside the
/// well-founded interpretation of the combined program. The answers are
/// certified exact only in the class where the fixpoint reaches the full
/// intersection of answer sets: FD-plus-unary constraints and
/// non-existential conjunctive queries.
inline CqaResult wfs_consistent_answers(const KQuery& q, const DatabaseInstance& r,
                                        const std::vector<Constraint>& ics,
                                        const CqaOptions& opts = {},
                                        const Program* strong = nullptr) {
  const KQuery& basic = detail::basic_part(q);
  CqaResult out;
  out.variables = basic.free_vars();

  CqaOptions wopts = opts;
  wopts.mode = RepairMode::Winslett;
  Program qprog = compile_query_program(basic, wopts.mode);
  auto pipe = detail::build_pipeline(r, ics, wopts, strong, &basic, &qprog);
  GroundProgram gp = ground(pipe.program, pipe.domain, &r);
  WfsResult w = well_founded(gp);
  if (w.inconsistent) {
    out.status = Status::InconsistentProgram;
    return out;
  }
  const size_t arity = out.variables.size();
  for (const auto& l : w.interp.true_set)
    if (!l.neg && !l.atom.primed && l.atom.pred == kQueryPred && l.atom.args.size() == arity)
      out.answers.insert(l.atom.args);
  if (arity == 0) out.truth = !out.answers.empty();
  out.certified_exact =
      detail::fd_and_unary_only(ics) && detail::nonexistential_conjunctive(basic) && !strong;
  return out;
}

// ---------------------------------------------------------------------------
// K-queries
// ---------------------------------------------------------------------------

namespace detail {

struct KRelation {
  std::vector<std::string> vars;
  std::set<std::vector<Term>> tuples;
};

inline bool eval_outer(const KQuery& q, const std::map<const KQuery*, KRelation>& rels,
                       const std::set<Term>& dom, std::map<std::string, Term>& env) {
  switch (q.node) {
    case KQuery::Node::K: {
      const KRelation& rel = rels.at(&q);
      std::vector<Term> tuple;
      for (const auto& v : rel.vars) tuple.push_back(env.at(v));
      return rel.tuples.count(tuple) != 0;
    }
    case KQuery::Node::And:
      return eval_outer(q.children[0], rels, dom, env) &&
             eval_outer(q.children[1], rels, dom, env);
    case KQuery::Node::Or:
      return eval_outer(q.children[0], rels, dom, env) ||
             eval_outer(q.children[1], rels, dom, env);
    case KQuery::Node::Not:
      return !eval_outer(q.children[0], rels, dom, env);
    case KQuery::Node::Exists: {
      std::function<bool(size_t)> any = [&](size_t i) {
        if (i == q.bound.size()) return eval_outer(q.children[0], rels, dom, env);
        for (const Term& c : dom) {
          env[q.bound[i]] = c;
          if (any(i + 1)) { env.erase(q.bound[i]); return true; }
        }
        env.erase(q.bound[i]);
        return false;
      };
      return any(0);
    }
    case KQuery::Node::Atom:
      throw std::invalid_argument("atom outside K in a K-query");
  }
  return false;
}

inline void collect_k_nodes(const KQuery& q, std::vector<const KQuery*>& out) {
  if (q.node == KQuery::Node::K) {
    out.push_back(&q);
    return;
  }
  for (const auto& c : q.children) collect_k_nodes(c, out);
}

}  // namespace detail

/// Evaluates a general K-query: every K subquery is materialized into a
/// finite relation of consistent answers, and the first-order combination on
/// top is evaluated with active-domain semantics. Free variables occurring
/// only under negation are rejected as unsafe.
inline CqaResult evaluate_k_query(const KQuery& q, const DatabaseInstance& r,
                                  const std::vector<Constraint>& ics,
                                  const CqaOptions& opts = {},
                                  const Program* strong = nullptr) {
  // outer safety: every free variable must be range restricted
  auto rr = detail::range_restricted(q);
  for (const auto& v : q.free_vars())
    if (std::find(rr.begin(), rr.end(), v) == rr.end())
      throw std::invalid_argument("unsafe K-query: variable " + v + " is not range restricted");

  CqaResult out;
  out.variables = q.free_vars();
  out.certified_exact = true;

  std::vector<const KQuery*> knodes;
  detail::collect_k_nodes(q, knodes);
  std::map<const KQuery*, detail::KRelation> rels;
  for (const KQuery* k : knodes) {
    CqaResult sub = consistent_answers(*k, r, ics, opts, strong);
    if (sub.status != Status::Ok) {
      out.status = sub.status;
      out.certified_exact = false;
      return out;
    }
    if (!out.repairs_count) out.repairs_count = sub.repairs_count;
    rels.emplace(k, detail::KRelation{sub.variables, sub.answers});
  }

  std::set<Term> dom = active_domain(r, ics, &q);
  std::map<std::string, Term> env;
  std::function<void(size_t)> sweep = [&](size_t i) {
    if (i == out.variables.size()) {
      if (detail::eval_outer(q, rels, dom, env)) {
        std::vector<Term> tuple;
        for (const auto& v : out.variables) tuple.push_back(env.at(v));
        out.answers.insert(std::move(tuple));
      }
      return;
    }
    for (const Term& c : dom) {
      env[out.variables[i]] = c;
      sweep(i + 1);
    }
    env.erase(out.variables[i]);
  };
  sweep(0);
  if (out.variables.empty()) out.truth = !out.answers.empty();
  return out;
}

// ---------------------------------------------------------------------------
// Emission helpers for the CLI
// ---------------------------------------------------------------------------

/// The repair program with instance and dom facts spelled out, suitable for
/// emission and external solving.
inline Program with_facts(const Program& p, const DatabaseInstance& r,
                          const std::set<Term>& dom_constants) {
  Program out;
  for (const auto& f : r.facts) out.add(Rule({Literal(f)}, {}, RuleKind::Fact));
  for (const auto& c : dom_constants)
    out.add(Rule({Literal(Atom(kDomPred, {c}, AtomKind::DomGuard))}, {}, RuleKind::Fact));
  out.append(p);
  out.declared_domain = p.declared_domain;
  return out;
}

}  // namespace cqa
