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

#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cqa/compiler.hpp"
#include "cqa/model.hpp"

namespace cqa {

struct DomainDeclaration {
  enum class Kind { Active, Finite };
  Kind kind = Kind::Active;
  std::set<Term> constants;  // the finite domain, or the computed active one

  static DomainDeclaration active(std::set<Term> cs) {
    return DomainDeclaration{Kind::Active, std::move(cs)};
  }
  static DomainDeclaration finite(std::set<Term> cs) {
    if (cs.empty()) throw std::invalid_argument("finite domain must be nonempty");
    for (const auto& c : cs)
      if (c.is_null()) throw std::invalid_argument("null cannot belong to the domain");
    return DomainDeclaration{Kind::Finite, std::move(cs)};
  }
};

/// Constants occurring in the instance, the constraints, and the query.
/// Constraint and query constants are included so that rules and queries
/// mentioning absent constants ground correctly.
inline std::set<Term> active_domain(const DatabaseInstance& r,
                                    const std::vector<Constraint>& ics = {},
                                    const KQuery* q = nullptr) {
  std::set<Term> out;
  auto add_atom = [&](const Atom& a) {
    for (const auto& t : a.args)
      if (t.is_constant() && !t.is_null()) out.insert(t);
  };
  for (const auto& f : r.facts) add_atom(f);
  for (const auto& c : ics) {
    for (const auto& a : c.positives) add_atom(a);
    for (const auto& a : c.negatives) add_atom(a);
    for (const auto& b : c.builtin.conjuncts) add_atom(b.atom);
    if (c.existential) add_atom(c.existential->consequent);
  }
  if (q) {
    std::vector<const KQuery*> stack{q};
    while (!stack.empty()) {
      const KQuery* n = stack.back();
      stack.pop_back();
      if (n->node == KQuery::Node::Atom) add_atom(n->atom);
      for (const auto& c : n->children) stack.push_back(&c);
    }
  }
  return out;
}

/// A variable-free program with every builtin partially evaluated away.
struct GroundProgram {
  std::vector<Rule> rules;
  std::set<Literal> universe;  // all literals occurring anywhere, closed under complement

  void close_universe() {
    std::set<Literal> ext;
    for (const auto& l : universe) ext.insert(complement(l));
    universe.insert(ext.begin(), ext.end());
  }
};

namespace detail {

// Substitution application.
inline Atom apply_sub(const Atom& a, const std::map<std::string, Term>& sub) {
  Atom out = a;
  for (auto& t : out.args)
    if (t.is_variable()) {
      auto it = sub.find(t.text);
      if (it != sub.end()) t = it->second;
    }
  return out;
}

struct GroundContext {
  const std::set<Term>& domain;
  // extension of predicates defined by facts only
  std::map<std::pair<std::string, bool>, std::vector<Atom>> extension;
  std::set<std::pair<std::string, bool>> derived;  // predicates with non-fact head occurrences

  bool is_extensional(const Atom& a) const {
    return a.kind != AtomKind::Builtin && !derived.count({a.pred, a.primed});
  }
};

inline bool unify(const Atom& pattern, const Atom& ground, std::map<std::string, Term>& sub) {
  assert(pattern.args.size() == ground.args.size());
  std::vector<std::string> bound_here;
  for (size_t i = 0; i < pattern.args.size(); ++i) {
    const Term& pt = pattern.args[i];
    const Term& gt = ground.args[i];
    if (pt.is_variable()) {
      auto it = sub.find(pt.text);
      if (it == sub.end()) {
        sub[pt.text] = gt;
        bound_here.push_back(pt.text);
      } else if (!(it->second == gt)) {
        for (const auto& v : bound_here) sub.erase(v);
        return false;
      }
    } else if (!(pt == gt)) {
      for (const auto& v : bound_here) sub.erase(v);
      return false;
    }
  }
  return true;
}

// Enumerates bindings for one rule: extensional body literals match facts,
// everything else ranges over the domain.
inline void ground_rule(const Rule& r, GroundContext& ctx, std::set<Rule>& out) {
  std::vector<const BodyLiteral*> binders;
  for (const auto& b : r.body)
    if (is_binding(b)) binders.push_back(&b);

  std::map<std::string, Term> sub;

  auto emit = [&]() {
    Rule g;
    g.kind = r.kind;
    for (const auto& l : r.head) g.head.push_back(Literal(apply_sub(l.atom, sub), l.neg));
    for (const auto& b : r.body) {
      Atom a = apply_sub(b.lit.atom, sub);
      if (a.kind == AtomKind::Builtin) {
        bool v = eval_builtin_literal(Literal(a, b.lit.neg));
        if (b.naf ? v : !v) return;  // rule instance dropped
        continue;                    // literal satisfied, removed
      }
      g.body.emplace_back(Literal(std::move(a), b.lit.neg), b.naf);
    }
    out.insert(canonical(std::move(g)));
  };

  // recursive join over binding literals, then domain enumeration for any
  // residue (there is none for safe rules)
  std::function<void(size_t)> step = [&](size_t i) {
    if (i == binders.size()) {
      // all variables of a safe rule are bound now
      emit();
      return;
    }
    const Atom& pat = binders[i]->lit.atom;
    Atom inst = apply_sub(pat, sub);
    if (inst.is_ground()) {
      step(i + 1);
      return;
    }
    if (ctx.is_extensional(pat) && !binders[i]->lit.neg) {
      auto it = ctx.extension.find({pat.pred, pat.primed});
      if (it == ctx.extension.end()) return;  // empty extension, no instances
      for (const Atom& f : it->second) {
        std::map<std::string, Term> saved = sub;
        if (unify(inst, f, sub)) step(i + 1);
        sub = std::move(saved);
      }
      return;
    }
    // enumerate the domain for the unbound variables of this literal
    std::vector<std::string> vars;
    for (const auto& t : inst.args)
      if (t.is_variable() && std::find(vars.begin(), vars.end(), t.text) == vars.end())
        vars.push_back(t.text);
    std::function<void(size_t)> assign = [&](size_t k) {
      if (k == vars.size()) {
        step(i + 1);
        return;
      }
      for (const Term& c : ctx.domain) {
        sub[vars[k]] = c;
        assign(k + 1);
      }
      sub.erase(vars[k]);
    };
    assign(0);
  };
  step(0);
}

}  // namespace detail

/// Grounds a program over the given domain. Instance facts and dom facts are
/// added when an instance is supplied; `add_dom_facts=false` grounds a
/// self-contained (e.g. re-parsed) program as is. Variables never take the
/// null value; null reaches ground atoms only as an explicit constant.
inline GroundProgram ground(const Program& p, const DomainDeclaration& dom,
                            const DatabaseInstance* r = nullptr, bool add_dom_facts = true) {
  GroundProgram out;
  detail::GroundContext ctx{dom.constants, {}, {}};

  std::set<Rule> ground_rules;
  std::vector<const Rule*> nonfacts;

  auto add_fact_atom = [&](Atom a, RuleKind kind) {
    Rule f({Literal(a)}, {}, kind);
    if (ground_rules.insert(canonical(f)).second)
      ctx.extension[{a.pred, a.primed}].push_back(std::move(a));
  };

  if (r)
    for (const auto& f : r->facts) add_fact_atom(f, RuleKind::Fact);
  if (add_dom_facts)
    for (const auto& c : dom.constants)
      add_fact_atom(Atom(kDomPred, {c}, AtomKind::DomGuard), RuleKind::Fact);

  for (const auto& rule : p.rules) {
    if (!rule.is_ground() && !is_safe(rule))
      throw std::invalid_argument("unsafe rule reached grounding: " + rule_to_string(rule));
    if (rule.is_fact() && rule.head[0].atom.kind != AtomKind::Builtin && !rule.head[0].neg) {
      add_fact_atom(rule.head[0].atom, rule.kind);
    } else {
      nonfacts.push_back(&rule);
    }
  }
  for (const Rule* rule : nonfacts) {
    for (const auto& l : rule->head)
      if (l.atom.kind != AtomKind::Builtin) ctx.derived.insert({l.atom.pred, l.atom.primed});
  }
  for (const Rule* rule : nonfacts) detail::ground_rule(*rule, ctx, ground_rules);

  out.rules.assign(ground_rules.begin(), ground_rules.end());
  for (const auto& g : out.rules) {
    for (const auto& l : g.head) out.universe.insert(l);
    for (const auto& b : g.body) out.universe.insert(b.lit);
  }
  out.close_universe();
  return out;
}

/// Grounds a self-contained program (facts included in its rules) over the
/// constants it mentions.
inline GroundProgram ground_raw(const Program& p) {
  std::set<Term> consts;
  auto add_atom = [&](const Atom& a) {
    for (const auto& t : a.args)
      if (t.is_constant() && !t.is_null()) consts.insert(t);
  };
  for (const auto& r : p.rules) {
    for (const auto& l : r.head) add_atom(l.atom);
    for (const auto& b : r.body) add_atom(b.lit.atom);
  }
  return ground(p, DomainDeclaration::active(std::move(consts)), nullptr, false);
}

// ---------------------------------------------------------------------------
// Indexed form shared by the fixpoint and the solver
// ---------------------------------------------------------------------------

struct LitIndex {
  std::vector<Literal> lits;
  std::map<Literal, int> ids;
  std::vector<int> comp;  // complement id

  int id_of(const Literal& l) const {
    auto it = ids.find(l);
    return it == ids.end() ? -1 : it->second;
  }
  int size() const { return static_cast<int>(lits.size()); }
};

struct IRule {
  std::vector<int> head, pos, naf;
  RuleKind kind = RuleKind::AuxiliaryDef;
  // complement of the head of a persistence default, -1 otherwise; the
  // default behaves as if `not <comp>` were in its body
  int default_guard = -1;
};

struct IndexedGround {
  LitIndex idx;
  std::vector<IRule> regular;
  std::vector<IRule> strong;
  std::vector<IRule> weak;

  static IndexedGround build(const GroundProgram& g) {
    IndexedGround out;
    for (const auto& l : g.universe) {  // set order makes ids canonical
      out.idx.ids.emplace(l, static_cast<int>(out.idx.lits.size()));
      out.idx.lits.push_back(l);
    }
    out.idx.comp.resize(out.idx.lits.size());
    for (int i = 0; i < out.idx.size(); ++i) {
      int c = out.idx.id_of(complement(out.idx.lits[i]));
      assert(c >= 0);
      out.idx.comp[i] = c;
    }
    for (const auto& r : g.rules) {
      IRule ir;
      ir.kind = r.kind;
      for (const auto& l : r.head) ir.head.push_back(out.idx.id_of(l));
      for (const auto& b : r.body)
        (b.naf ? ir.naf : ir.pos).push_back(out.idx.id_of(b.lit));
      if (r.kind == RuleKind::PersistenceDefault && ir.head.size() == 1)
        ir.default_guard = out.idx.comp[ir.head[0]];
      if (r.kind == RuleKind::StrongConstraint)
        out.strong.push_back(std::move(ir));
      else if (r.kind == RuleKind::WeakConstraint)
        out.weak.push_back(std::move(ir));
      else
        out.regular.push_back(std::move(ir));
    }
    return out;
  }
};

}  // namespace cqa
