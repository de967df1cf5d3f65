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
// Compilation of integrity constraints into repair programs: triggering and
// stabilizing exception rules over primed predicates, persistence layers for
// the different repair semantics, referential constraints via null witnesses,
// and the stratified translation of first-order queries.

#pragma once

#include <string>
#include <vector>

#include "cqa/model.hpp"
#include "cqa/parser.hpp"

namespace cqa {

/// Which persistence layer closes the change program.
enum class RepairMode {
  Winslett,     // persistence rules; repairs minimal under set inclusion
  Dalal,        // weak constraints; repairs minimal in number of changes
  RawDefaults,  // persistence defaults under e-answer semantics
};

/// How stabilizing rules of constraints with more than two database literals
/// relate candidate changes to the original instance.
enum class StabilizerPolicy { Naive, Guarded };

/// Repair policy for referential constraints.
enum class RicPolicy { NullInsertion, DeleteOnly };

namespace detail {

inline Literal primed(const Literal& l) { return Literal(l.atom.primed_copy(), l.neg); }

inline BodyLiteral dom_guard(const std::string& var) {
  Atom a(kDomPred, {Term::var(var)}, AtomKind::DomGuard);
  return BodyLiteral(Literal(std::move(a)), false);
}

}  // namespace detail

/// Adds dom guards for head/naf/builtin variables not bound by a positive
/// body literal. Guards are emitted only where safety needs them.
inline Rule ensure_safe(Rule r) {
  std::vector<std::string> bound;
  for (const auto& b : r.body)
    if (is_binding(b)) collect_vars(b.lit.atom, bound);
  std::vector<std::string> need;
  auto want = [&](const Atom& a) {
    for (const auto& t : a.args)
      if (t.is_variable() && std::find(bound.begin(), bound.end(), t.text) == bound.end() &&
          std::find(need.begin(), need.end(), t.text) == need.end())
        need.push_back(t.text);
  };
  for (const auto& l : r.head) want(l.atom);
  for (const auto& b : r.body)
    if (!is_binding(b)) want(b.lit.atom);
  for (const auto& v : need) r.body.push_back(detail::dom_guard(v));
  return r;
}

namespace detail {

// `not phi` in a rule body, phi a conjunction of builtins: one rule per
// complemented conjunct. An absent phi contributes nothing.
inline std::vector<Rule> split_not_phi(const Rule& base, const BuiltinFormula& phi) {
  if (phi.is_false()) return {canonical(ensure_safe(base))};
  std::vector<Rule> out;
  for (const auto& c : phi.conjuncts) {
    Rule r = base;
    Literal nc = complement(c);
    nc.atom.kind = AtomKind::Builtin;
    r.body.emplace_back(std::move(nc), false);
    out.push_back(canonical(ensure_safe(std::move(r))));
  }
  return out;
}

}  // namespace detail

/// Stabilizing exceptions for a universal constraint with n+m >= 2: one rule
/// per nonempty proper subset H of the database literals, with H primed in
/// the head and the primed complements of the rest in the body. Under the
/// guarded policy every head disjunct is related to the original instance:
/// a deletion head -q'(t) requires q(t), an insertion head p'(t) requires
/// not p(t); dom guards remain only for variables the guards leave unbound.
inline std::vector<Rule> expand_universal(const Constraint& c, StabilizerPolicy policy) {
  if (c.is_ric()) throw std::invalid_argument("expand_universal: referential constraint");
  std::vector<Literal> lits;
  for (const auto& a : c.positives) lits.emplace_back(a, false);
  for (const auto& a : c.negatives) lits.emplace_back(a, true);
  const size_t k = lits.size();
  if (k < 2) throw std::invalid_argument("expand_universal: needs at least two literals");

  std::vector<Rule> out;
  for (unsigned mask = 1; mask + 1 < (1u << k); ++mask) {
    Rule r;
    r.kind = RuleKind::Stabilizing;
    for (size_t i = 0; i < k; ++i) {
      if (mask & (1u << i)) {
        r.head.push_back(detail::primed(lits[i]));
        if (policy == StabilizerPolicy::Guarded) {
          if (lits[i].neg)
            r.body.emplace_back(Literal(lits[i].atom), false);  // q(t) for head -q'(t)
          else
            r.body.emplace_back(Literal(lits[i].atom), true);  // not p(t) for head p'(t)
        }
      } else {
        r.body.emplace_back(detail::primed(complement(lits[i])), false);
      }
    }
    for (auto& sp : detail::split_not_phi(r, c.builtin)) out.push_back(std::move(sp));
  }
  return out;
}

/// The change program: triggering and stabilizing exceptions for every
/// non-existential constraint. Instance and dom facts are the grounder's
/// business. BIC stabilizers are always the plain Def-style ones; the
/// stabilizer policy only affects constraints with more than two literals.
inline Program build_change_program(const std::vector<Constraint>& ics, const Schema& schema,
                                    StabilizerPolicy policy = StabilizerPolicy::Guarded) {
  (void)schema;
  Program out;
  for (const auto& c : ics) {
    if (c.is_ric())
      throw std::invalid_argument("build_change_program: referential constraint (use compile_ric)");
    if (c.n() + c.m() == 0) throw std::invalid_argument("constraint has no database literal");

    // triggering rule: fire on a violated ground instance
    Rule trig;
    trig.kind = RuleKind::Triggering;
    for (const auto& a : c.positives) trig.head.push_back(detail::primed(Literal(a)));
    for (const auto& a : c.negatives) trig.head.push_back(detail::primed(Literal(a, true)));
    for (const auto& a : c.negatives) trig.body.emplace_back(Literal(a), false);
    for (const auto& a : c.positives) trig.body.emplace_back(Literal(a), true);
    out.add_all(detail::split_not_phi(trig, c.builtin));

    if (c.n() + c.m() == 1) {
      // the stabilizer degenerates: keep the complemented trigger literal
      Rule s;
      s.kind = RuleKind::Stabilizing;
      if (c.n() == 1)
        s.head.push_back(detail::primed(Literal(c.positives[0])));
      else
        s.head.push_back(detail::primed(Literal(c.negatives[0], true)));
      out.add_all(detail::split_not_phi(s, c.builtin));
    } else {
      StabilizerPolicy eff = (c.n() + c.m() > 2) ? policy : StabilizerPolicy::Naive;
      out.add_all(expand_universal(c, eff));
    }
  }
  return out;
}

/// Persistence layer per database predicate: rules for Winslett repairs,
/// defaults for the e-answer reading, weak constraints for Dalal repairs.
inline Program add_persistence(Program p, const Schema& schema, RepairMode mode) {
  for (const auto& [name, rel] : schema.relations) {
    std::vector<Term> vars;
    for (size_t i = 0; i < rel.arity; ++i) vars.push_back(Term::var("X" + std::to_string(i + 1)));
    Atom plain(name, vars);
    Atom prime = plain.primed_copy();
    switch (mode) {
      case RepairMode::Winslett: {
        Rule keep({Literal(prime)}, {{Literal(plain), false}, {Literal(prime, true), true}},
                  RuleKind::PersistenceRule);
        Rule drop({Literal(prime, true)}, {{Literal(plain), true}, {Literal(prime), true}},
                  RuleKind::PersistenceRule);
        p.add(ensure_safe(std::move(keep)));
        p.add(ensure_safe(std::move(drop)));
        break;
      }
      case RepairMode::RawDefaults: {
        Rule keep({Literal(prime)}, {{Literal(plain), false}}, RuleKind::PersistenceDefault);
        Rule drop({Literal(prime, true)}, {{Literal(plain), true}}, RuleKind::PersistenceDefault);
        p.add(ensure_safe(std::move(keep)));
        p.add(ensure_safe(std::move(drop)));
        break;
      }
      case RepairMode::Dalal: {
        Rule ins({}, {{Literal(prime), false}, {Literal(plain), true}}, RuleKind::WeakConstraint);
        Rule del({}, {{Literal(prime, true), false}, {Literal(plain), false}},
                 RuleKind::WeakConstraint);
        p.add(std::move(ins));
        p.add(std::move(del));
        break;
      }
    }
  }
  return p;
}

/// Rules for a referential constraint P(x) -> exists y R(x,y). Under the
/// null policy the violation is fixed by deleting P(x) or inserting
/// R(x,null); under deleteOnly the only admissible change is the deletion.
inline std::vector<Rule> compile_ric(const Constraint& c, RicPolicy policy,
                                     const std::string& aux_suffix = "") {
  if (!c.is_ric()) throw std::invalid_argument("compile_ric: not a referential constraint");
  const Atom& p = c.negatives[0];
  const ExistentialTail& tail = *c.existential;
  const Atom& r = tail.consequent;

  std::string aux_name = std::string(kAuxPrefix) + "aux_" + r.pred + aux_suffix;
  std::vector<Term> xs = p.args;
  Atom aux(aux_name, xs, AtomKind::Aux);
  Atom aux_p = aux;  // repaired-side support; kept as a distinct aux predicate
  aux_p.pred = aux_name + "_p";

  Atom r_null = r;
  for (size_t i = 0; i < r.args.size(); ++i)
    if (tail.existential_pos[i]) r_null.args[i] = Term::null_value();

  Literal del_p(p.primed_copy(), true);
  Literal ins_null(r_null.primed_copy());

  std::vector<Rule> out;
  auto add = [&](Rule r2) { out.push_back(canonical(ensure_safe(std::move(r2)))); };

  // support definitions over the original and the repaired table
  add(Rule({Literal(aux)}, {{Literal(r), false}}, RuleKind::AuxiliaryDef));
  add(Rule({Literal(aux_p)}, {{Literal(r.primed_copy()), false}}, RuleKind::AuxiliaryDef));

  if (policy == RicPolicy::NullInsertion) {
    add(Rule({del_p, ins_null}, {{Literal(p), false}, {Literal(aux), true}},
             RuleKind::Triggering));
    add(Rule({del_p}, {{complement(ins_null), false}, {Literal(aux_p), true}},
             RuleKind::Stabilizing));
    add(Rule({ins_null}, {{Literal(p.primed_copy()), false}, {Literal(aux_p), true}},
             RuleKind::Stabilizing));
  } else {
    add(Rule({del_p}, {{Literal(p), false}, {Literal(aux), true}}, RuleKind::Triggering));
    add(Rule({del_p}, {{Literal(aux_p), true}}, RuleKind::Stabilizing));
  }
  return out;
}

namespace detail {

// Persistence for the null column of a RIC consequent. Grounding variables
// range over D only, so the schema-level persistence never reaches these
// atoms; without this rule the deletion stabilizer could not fire.
inline void add_null_column_persistence(Program& p, const Constraint& c, RepairMode mode) {
  const ExistentialTail& tail = *c.existential;
  Atom r_null = tail.consequent;
  for (size_t i = 0; i < r_null.args.size(); ++i)
    if (tail.existential_pos[i]) r_null.args[i] = Term::null_value();
  Literal pos(r_null.primed_copy());
  Literal neg = complement(pos);
  switch (mode) {
    case RepairMode::Winslett:
      p.add(ensure_safe(Rule({neg}, {{pos, true}}, RuleKind::PersistenceRule)));
      break;
    case RepairMode::RawDefaults:
      p.add(ensure_safe(Rule({neg}, {}, RuleKind::PersistenceDefault)));
      break;
    case RepairMode::Dalal:
      p.add(Rule({}, {{pos, false}}, RuleKind::WeakConstraint));
      break;
  }
}

}  // namespace detail

/// Full repair program for an IC set: change program plus RIC rules plus the
/// persistence layer of the chosen mode.
inline Program assemble_repair_program(const std::vector<Constraint>& ics, const Schema& schema,
                                       RepairMode mode,
                                       StabilizerPolicy policy = StabilizerPolicy::Guarded,
                                       RicPolicy ric = RicPolicy::NullInsertion) {
  std::vector<Constraint> universals;
  std::vector<const Constraint*> rics;
  for (const auto& c : ics)
    (c.is_ric() ? (void)rics.push_back(&c) : (void)universals.push_back(c));

  Program p = build_change_program(universals, schema, policy);
  int idx = 0;
  for (const Constraint* c : rics) {
    std::string suffix = rics.size() > 1 ? std::to_string(idx++) : "";
    p.add_all(compile_ric(*c, ric, suffix));
  }
  p = add_persistence(std::move(p), schema, mode);
  if (ric == RicPolicy::NullInsertion)
    for (const Constraint* c : rics) detail::add_null_column_persistence(p, *c, mode);
  return p;
}

/// Validates and collects user denials: headless rules filtered against
/// every answer set.
inline Program compile_strong_constraints(const std::vector<Rule>& denials) {
  Program out;
  for (const auto& r : denials) {
    if (!r.head.empty())
      throw std::invalid_argument("strong constraint with non-empty head: " + rule_to_string(r));
    Rule d = r;
    d.kind = RuleKind::StrongConstraint;
    out.add(std::move(d));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Query programs
// ---------------------------------------------------------------------------

namespace detail {

class QueryCompiler {
 public:
  QueryCompiler(RepairMode mode) : mode_(mode) {}

  Program compile(const KQuery& q) {
    Atom head(kQueryPred, var_terms(q.free_vars()), AtomKind::Aux);
    emit_node(q, head);
    return std::move(prog_);
  }

 private:
  static std::vector<Term> var_terms(const std::vector<std::string>& vs) {
    std::vector<Term> ts;
    for (const auto& v : vs) ts.push_back(Term::var(v));
    return ts;
  }

  void add(Rule r) {
    r.kind = RuleKind::QueryRule;
    prog_.add(ensure_safe(std::move(r)));
  }

  static Atom instantiate(Atom templ, const std::vector<Term>& args) {
    templ.args = args;
    return templ;
  }

  // Membership-in-the-repair test for Dalal answer sets (the query
  // translation table): one aux predicate per database predicate and sign.
  Atom holds_aux(const std::string& pred, size_t arity, bool negated) {
    auto key = std::make_pair(pred, negated);
    auto it = holds_.find(key);
    if (it != holds_.end()) return it->second;
    Atom aux(std::string(kAuxPrefix) + (negated ? "out_" : "in_") + pred, {}, AtomKind::Aux);
    std::vector<Term> vars;
    for (size_t i = 0; i < arity; ++i) vars.push_back(Term::var("X" + std::to_string(i + 1)));
    aux.args = vars;
    Atom plain(pred, vars);
    Atom prime = plain.primed_copy();
    if (!negated) {
      add(Rule({Literal(aux)}, {{Literal(prime), false}}, RuleKind::QueryRule));
      add(Rule({Literal(aux)}, {{Literal(plain), false}, {Literal(prime, true), true}},
               RuleKind::QueryRule));
    } else {
      add(Rule({Literal(aux)}, {{Literal(prime, true), false}}, RuleKind::QueryRule));
      add(Rule({Literal(aux)}, {{Literal(plain), true}, {Literal(prime), true}},
               RuleKind::QueryRule));
    }
    holds_.emplace(key, aux);
    return aux;
  }

  std::string fresh_var(const std::string& base, std::vector<std::string>& used) {
    std::string v = base;
    int i = 0;
    while (std::find(used.begin(), used.end(), v) != used.end()) v = base + std::to_string(++i);
    used.push_back(v);
    return v;
  }

  static void substitute(KQuery& q, const std::string& from, const Term& to) {
    if (q.node == KQuery::Node::Atom) {
      for (auto& t : q.atom.args)
        if (t.is_variable() && t.text == from) t = to;
      return;
    }
    if (q.node == KQuery::Node::Exists &&
        std::find(q.bound.begin(), q.bound.end(), from) != q.bound.end())
      return;  // shadowed
    for (auto& c : q.children) substitute(c, from, to);
  }

  // Flattens a basic query node into body conjuncts; Or and complex negation
  // go through auxiliary predicates.
  void conjuncts(const KQuery& q, std::vector<BodyLiteral>& out, std::vector<std::string>& used) {
    switch (q.node) {
      case KQuery::Node::Atom:
        if (q.atom.kind == AtomKind::Builtin) {
          out.emplace_back(Literal(q.atom), false);
        } else {
          collect_vars(q.atom, used);
          out.push_back(mode_ == RepairMode::Dalal
                            ? BodyLiteral(Literal(instantiate(
                                              holds_aux(q.atom.pred, q.atom.arity(), false),
                                              q.atom.args)),
                                          false)
                            : BodyLiteral(Literal(q.atom.primed_copy()), false));
        }
        return;
      case KQuery::Node::And:
        conjuncts(q.children[0], out, used);
        conjuncts(q.children[1], out, used);
        return;
      case KQuery::Node::Exists: {
        KQuery body = q.children[0];
        for (const auto& bv : q.bound) {
          std::string fresh = fresh_var(bv, used);
          if (fresh != bv) substitute(body, bv, Term::var(fresh));
        }
        conjuncts(body, out, used);
        return;
      }
      case KQuery::Node::Not: {
        const KQuery& inner = q.children[0];
        if (inner.node == KQuery::Node::Atom && inner.atom.kind == AtomKind::Builtin) {
          out.emplace_back(complement(Literal(inner.atom)), false);
          return;
        }
        if (inner.node == KQuery::Node::Atom) {
          collect_vars(inner.atom, used);
          out.push_back(mode_ == RepairMode::Dalal
                            ? BodyLiteral(Literal(instantiate(
                                              holds_aux(inner.atom.pred, inner.atom.arity(), true),
                                              inner.atom.args)),
                                          false)
                            : BodyLiteral(Literal(inner.atom.primed_copy(), true), false));
          return;
        }
        Atom aux = define_aux(inner);
        for (const auto& t : aux.args)
          if (t.is_variable() &&
              std::find(used.begin(), used.end(), t.text) == used.end())
            used.push_back(t.text);
        out.emplace_back(Literal(std::move(aux)), true);
        return;
      }
      case KQuery::Node::Or: {
        Atom aux = define_aux(q);
        for (const auto& t : aux.args)
          if (t.is_variable() &&
              std::find(used.begin(), used.end(), t.text) == used.end())
            used.push_back(t.text);
        out.emplace_back(Literal(std::move(aux)), false);
        return;
      }
      case KQuery::Node::K:
        throw std::invalid_argument("K operator inside a basic query");
    }
  }

  Atom define_aux(const KQuery& q) {
    Atom head(std::string(kAuxPrefix) + "q" + std::to_string(next_aux_++),
              var_terms(q.free_vars()), AtomKind::Aux);
    emit_node(q, head);
    return head;
  }

  // One or more rules defining `head` as the extension of q.
  void emit_node(const KQuery& q, const Atom& head) {
    if (q.node == KQuery::Node::Or) {
      emit_node_rule(q.children[0], head);
      emit_node_rule(q.children[1], head);
      return;
    }
    emit_node_rule(q, head);
  }

  void emit_node_rule(const KQuery& q, const Atom& head) {
    if (q.node == KQuery::Node::Or) {
      emit_node(q, head);
      return;
    }
    // the table rows for a plain (possibly negated) database atom in Dalal
    // mode are emitted directly, as two head rules
    if (mode_ == RepairMode::Dalal && q.node == KQuery::Node::Atom &&
        q.atom.kind != AtomKind::Builtin) {
      const Atom& a = q.atom;
      add(Rule({Literal(head)}, {{Literal(a.primed_copy()), false}}, RuleKind::QueryRule));
      add(Rule({Literal(head)}, {{Literal(a), false}, {Literal(a.primed_copy(), true), true}},
               RuleKind::QueryRule));
      return;
    }
    if (mode_ == RepairMode::Dalal && q.node == KQuery::Node::Not &&
        q.children[0].node == KQuery::Node::Atom &&
        q.children[0].atom.kind != AtomKind::Builtin) {
      const Atom& a = q.children[0].atom;
      add(Rule({Literal(head)}, {{Literal(a.primed_copy(), true), false}}, RuleKind::QueryRule));
      add(Rule({Literal(head)}, {{Literal(a), true}, {Literal(a.primed_copy()), true}},
               RuleKind::QueryRule));
      return;
    }
    std::vector<BodyLiteral> body;
    std::vector<std::string> used = q.free_vars();
    conjuncts(q, body, used);
    add(Rule({Literal(head)}, std::move(body), RuleKind::QueryRule));
  }

  Program prog_;
  RepairMode mode_;
  int next_aux_ = 0;
  std::map<std::pair<std::string, bool>, Atom> holds_;
};

}  // namespace detail

/// Stratified program defining `query` over the answer variables of a basic
/// query. Database atoms are read from the repaired (primed) predicates;
/// Dalal mode uses the two-route membership rules instead.
inline Program compile_query_program(const KQuery& basic, RepairMode mode) {
  if (basic.contains_k()) {
    if (basic.node != KQuery::Node::K || basic.children[0].contains_k())
      throw std::invalid_argument("compile_query_program expects a basic query");
    return compile_query_program(basic.children[0], mode);
  }
  detail::QueryCompiler qc(mode);
  return qc.compile(basic);
}

}  // namespace cqa
