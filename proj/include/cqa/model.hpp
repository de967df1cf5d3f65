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

#include <algorithm>
#include <cassert>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace cqa {

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

enum class TermKind { Integer, Symbol, Null, Variable };

/// A term is an integer or symbol constant, the reserved null constant, or a
/// variable. The order on constants is total and fixed: integers numerically,
/// then symbols bytewise, then null. Builtin comparisons use this order.
struct Term {
  TermKind kind = TermKind::Symbol;
  std::int64_t num = 0;
  std::string text;

  static Term integer(std::int64_t v) {
    Term t;
    t.kind = TermKind::Integer;
    t.num = v;
    return t;
  }
  static Term symbol(std::string s) {
    Term t;
    t.kind = TermKind::Symbol;
    t.text = std::move(s);
    return t;
  }
  static Term null_value() {
    Term t;
    t.kind = TermKind::Null;
    return t;
  }
  static Term var(std::string name) {
    Term t;
    t.kind = TermKind::Variable;
    t.text = std::move(name);
    return t;
  }

  bool is_constant() const { return kind != TermKind::Variable; }
  bool is_variable() const { return kind == TermKind::Variable; }
  bool is_null() const { return kind == TermKind::Null; }

  friend bool operator==(const Term& a, const Term& b) {
    return a.kind == b.kind && a.num == b.num && a.text == b.text;
  }
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
  friend bool operator<(const Term& a, const Term& b) {
    if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
    if (a.kind == TermKind::Integer) return a.num < b.num;
    return a.text < b.text;
  }
};

inline std::string term_to_string(const Term& t) {
  switch (t.kind) {
    case TermKind::Integer:
      return std::to_string(t.num);
    case TermKind::Null:
      return "null";
    case TermKind::Variable:
      return t.text;
    case TermKind::Symbol:
      break;
  }
  bool bare = !t.text.empty() && t.text[0] >= 'a' && t.text[0] <= 'z';
  if (bare) {
    for (char c : t.text)
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) {
        bare = false;
        break;
      }
  }
  if (bare && t.text != "null" && t.text != "not" && t.text != "v" && t.text != "exists")
    return t.text;
  std::string out = "\"";
  for (char c : t.text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

// ---------------------------------------------------------------------------
// Atoms and literals
// ---------------------------------------------------------------------------

enum class AtomKind { Database, Builtin, DomGuard, Aux };

/// Name of the domain-guard predicate.
inline constexpr const char* kDomPred = "dom";
/// Name of the query goal predicate.
inline constexpr const char* kQueryPred = "query";
/// Prefix reserved for generated auxiliary predicates.
inline constexpr const char* kAuxPrefix = "__";

inline bool is_builtin_pred(const std::string& p) {
  return p == "=" || p == "!=" || p == "<" || p == "<=" || p == ">" || p == ">=";
}

inline std::string builtin_complement_pred(const std::string& p) {
  if (p == "=") return "!=";
  if (p == "!=") return "=";
  if (p == "<") return ">=";
  if (p == ">=") return "<";
  if (p == ">") return "<=";
  if (p == "<=") return ">";
  throw std::invalid_argument("not a builtin predicate: " + p);
}

/// An atom; `primed` marks the repaired-version predicate (p vs p').
/// `kind` is an annotation and takes no part in identity.
struct Atom {
  std::string pred;
  bool primed = false;
  AtomKind kind = AtomKind::Database;
  std::vector<Term> args;

  Atom() = default;
  Atom(std::string p, std::vector<Term> a, AtomKind k = AtomKind::Database, bool pr = false)
      : pred(std::move(p)), primed(pr), kind(k), args(std::move(a)) {}

  size_t arity() const { return args.size(); }
  bool is_ground() const {
    for (const auto& t : args)
      if (t.is_variable()) return false;
    return true;
  }
  Atom primed_copy() const {
    Atom a = *this;
    a.primed = true;
    return a;
  }

  friend bool operator==(const Atom& a, const Atom& b) {
    return a.pred == b.pred && a.primed == b.primed && a.args == b.args;
  }
  friend bool operator!=(const Atom& a, const Atom& b) { return !(a == b); }
  friend bool operator<(const Atom& a, const Atom& b) {
    return std::tie(a.pred, a.primed, a.args) < std::tie(b.pred, b.primed, b.args);
  }
};

inline std::string atom_to_string(const Atom& a) {
  if (a.kind == AtomKind::Builtin) {
    assert(a.args.size() == 2);
    return term_to_string(a.args[0]) + a.pred + term_to_string(a.args[1]);
  }
  std::string s = a.pred;
  if (a.primed) s += "_p";
  if (!a.args.empty()) {
    s += '(';
    for (size_t i = 0; i < a.args.size(); ++i) {
      if (i) s += ',';
      s += term_to_string(a.args[i]);
    }
    s += ')';
  }
  return s;
}

/// A classical literal: an atom or its strong negation.
struct Literal {
  Atom atom;
  bool neg = false;

  Literal() = default;
  Literal(Atom a, bool n = false) : atom(std::move(a)), neg(n) {}

  friend bool operator==(const Literal& a, const Literal& b) {
    return a.neg == b.neg && a.atom == b.atom;
  }
  friend bool operator!=(const Literal& a, const Literal& b) { return !(a == b); }
  friend bool operator<(const Literal& a, const Literal& b) {
    return std::tie(a.atom, a.neg) < std::tie(b.atom, b.neg);
  }
};

inline Literal complement(const Literal& l) {
  if (l.atom.kind == AtomKind::Builtin) {
    Atom a = l.atom;
    a.pred = builtin_complement_pred(a.pred);
    return Literal(std::move(a), l.neg);
  }
  return Literal(l.atom, !l.neg);
}

inline std::string literal_to_string(const Literal& l) {
  return (l.neg ? "-" : "") + atom_to_string(l.atom);
}

/// A body literal, possibly under weak negation (negation as failure).
struct BodyLiteral {
  Literal lit;
  bool naf = false;

  BodyLiteral() = default;
  BodyLiteral(Literal l, bool n = false) : lit(std::move(l)), naf(n) {}

  friend bool operator==(const BodyLiteral& a, const BodyLiteral& b) {
    return a.naf == b.naf && a.lit == b.lit;
  }
  friend bool operator<(const BodyLiteral& a, const BodyLiteral& b) {
    return std::tie(a.naf, a.lit) < std::tie(b.naf, b.lit);
  }
};

inline std::string body_literal_to_string(const BodyLiteral& b) {
  return (b.naf ? "not " : "") + literal_to_string(b.lit);
}

// ---------------------------------------------------------------------------
// Rules and programs
// ---------------------------------------------------------------------------

enum class RuleKind {
  Fact,
  Triggering,
  Stabilizing,
  PersistenceDefault,
  PersistenceRule,
  QueryRule,
  WeakConstraint,
  StrongConstraint,
  AuxiliaryDef,
};

struct Rule {
  std::vector<Literal> head;  // disjunction; empty for weak/strong constraints
  std::vector<BodyLiteral> body;
  RuleKind kind = RuleKind::AuxiliaryDef;

  Rule() = default;
  Rule(std::vector<Literal> h, std::vector<BodyLiteral> b, RuleKind k)
      : head(std::move(h)), body(std::move(b)), kind(k) {}

  bool is_fact() const { return body.empty() && head.size() == 1; }
  bool is_constraint() const { return head.empty(); }
  bool is_ground() const {
    for (const auto& l : head)
      if (!l.atom.is_ground()) return false;
    for (const auto& b : body)
      if (!b.lit.atom.is_ground()) return false;
    return true;
  }

  friend bool operator==(const Rule& a, const Rule& b) {
    return a.kind == b.kind && a.head == b.head && a.body == b.body;
  }
  friend bool operator<(const Rule& a, const Rule& b) {
    return std::tie(a.head, a.body, a.kind) < std::tie(b.head, b.body, b.kind);
  }
};

inline void collect_vars(const Atom& a, std::vector<std::string>& out) {
  for (const auto& t : a.args)
    if (t.is_variable() && std::find(out.begin(), out.end(), t.text) == out.end())
      out.push_back(t.text);
}

inline std::vector<std::string> rule_vars(const Rule& r) {
  std::vector<std::string> vs;
  for (const auto& l : r.head) collect_vars(l.atom, vs);
  for (const auto& b : r.body) collect_vars(b.lit.atom, vs);
  return vs;
}

/// A body literal binds its variables when it is neither weakly negated nor a
/// builtin. Classically negated and dom-guard literals bind; their extensions
/// are explicit.
inline bool is_binding(const BodyLiteral& b) {
  return !b.naf && b.lit.atom.kind != AtomKind::Builtin;
}

/// Safety: every variable of the head, of a weakly negated literal, or of a
/// builtin occurs in some binding body literal.
inline bool is_safe(const Rule& r) {
  std::vector<std::string> bound;
  for (const auto& b : r.body)
    if (is_binding(b)) collect_vars(b.lit.atom, bound);
  auto ok = [&](const Atom& a) {
    for (const auto& t : a.args)
      if (t.is_variable() && std::find(bound.begin(), bound.end(), t.text) == bound.end())
        return false;
    return true;
  };
  for (const auto& l : r.head)
    if (!ok(l.atom)) return false;
  for (const auto& b : r.body)
    if (!is_binding(b) && !ok(b.lit.atom)) return false;
  return true;
}

// Body sort groups: dom guards, then positive database/aux literals, then
// positive builtins, then weakly negated literals.
inline int body_group(const BodyLiteral& b) {
  if (!b.naf && b.lit.atom.kind == AtomKind::DomGuard) return 0;
  if (!b.naf && b.lit.atom.kind != AtomKind::Builtin) return 1;
  if (!b.naf) return 2;
  return b.lit.atom.kind == AtomKind::Builtin ? 4 : 3;
}

inline Rule canonical(Rule r) {
  std::sort(r.head.begin(), r.head.end());
  r.head.erase(std::unique(r.head.begin(), r.head.end()), r.head.end());
  std::sort(r.body.begin(), r.body.end(), [](const BodyLiteral& a, const BodyLiteral& b) {
    int ga = body_group(a), gb = body_group(b);
    return std::tie(ga, a) < std::tie(gb, b);
  });
  r.body.erase(std::unique(r.body.begin(), r.body.end()), r.body.end());
  return r;
}

inline std::string rule_to_string(const Rule& r) {
  std::string s;
  if (r.kind == RuleKind::WeakConstraint)
    s = ":~ ";
  else if (r.head.empty())
    s = ":- ";
  for (size_t i = 0; i < r.head.size(); ++i) {
    if (i) s += " v ";
    s += literal_to_string(r.head[i]);
  }
  if (!r.body.empty() && !r.head.empty()) s += " :- ";
  for (size_t i = 0; i < r.body.size(); ++i) {
    if (i) s += ", ";
    s += body_literal_to_string(r.body[i]);
  }
  s += '.';
  return s;
}

/// A program is a duplicate-free rule list; rules are canonicalized on entry.
/// `declared_domain` carries the finite-domain declaration when one was given.
struct Program {
  std::vector<Rule> rules;
  std::optional<std::set<Term>> declared_domain;

  void add(Rule r) {
    Rule c = canonical(std::move(r));
    if (std::find(rules.begin(), rules.end(), c) == rules.end()) rules.push_back(std::move(c));
  }
  void add_all(const std::vector<Rule>& rs) {
    for (const auto& r : rs) add(r);
  }
  void append(const Program& p) { add_all(p.rules); }
};

inline std::string program_to_string(const Program& p) {
  std::string s;
  for (const auto& r : p.rules) {
    s += rule_to_string(r);
    s += '\n';
  }
  return s;
}

// ---------------------------------------------------------------------------
// Constraints
// ---------------------------------------------------------------------------

/// Conjunction of builtin literals. An empty conjunct list means the absent
/// builtin disjunct of the standard format, i.e. false.
struct BuiltinFormula {
  std::vector<Literal> conjuncts;

  bool is_false() const { return conjuncts.empty(); }
};

/// Existential tail of a referential IC: forall X (P(X) -> exists Y R(X,Y)).
/// `consequent` is R(X,Y); `existential_pos[i]` marks the positions holding
/// the quantified variables Y.
struct ExistentialTail {
  Atom consequent;
  std::vector<bool> existential_pos;
};

/// Universal IC in standard format:  \/ p_i  \/  -q_i  \/ phi.
struct Constraint {
  std::vector<Atom> positives;
  std::vector<Atom> negatives;
  BuiltinFormula builtin;
  std::optional<ExistentialTail> existential;

  size_t n() const { return positives.size(); }
  size_t m() const { return negatives.size(); }
  bool is_ric() const { return existential.has_value(); }
  bool is_bic() const { return !is_ric() && n() + m() <= 2 && n() + m() >= 1; }
  bool is_unary() const { return !is_ric() && n() + m() == 1; }

  std::vector<std::string> vars() const {
    std::vector<std::string> vs;
    for (const auto& a : positives) collect_vars(a, vs);
    for (const auto& a : negatives) collect_vars(a, vs);
    if (existential) collect_vars(existential->consequent, vs);
    return vs;
  }
};

inline std::string constraint_to_string(const Constraint& c) {
  std::vector<std::string> parts;
  for (const auto& a : c.positives) parts.push_back(atom_to_string(a));
  for (const auto& a : c.negatives) parts.push_back("-" + atom_to_string(a));
  for (const auto& b : c.builtin.conjuncts) parts.push_back(literal_to_string(b));
  std::string s;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) s += " v ";
    s += parts[i];
  }
  if (c.existential) {
    s = "-" + atom_to_string(c.negatives[0]) + " v exists " +
        atom_to_string(c.existential->consequent);
  }
  return s + ".";
}

// ---------------------------------------------------------------------------
// Schema and instances
// ---------------------------------------------------------------------------

struct Relation {
  std::string name;
  size_t arity = 0;
  std::vector<std::string> sorts;  // optional, informational
};

struct Schema {
  std::map<std::string, Relation> relations;

  bool contains(const std::string& p) const { return relations.count(p) != 0; }
  size_t arity_of(const std::string& p) const {
    auto it = relations.find(p);
    if (it == relations.end()) throw std::invalid_argument("unknown predicate: " + p);
    return it->second.arity;
  }
  void declare(const std::string& p, size_t arity, std::vector<std::string> sorts = {}) {
    auto it = relations.find(p);
    if (it != relations.end()) {
      if (it->second.arity != arity)
        throw std::invalid_argument("conflicting arity for predicate " + p);
      if (!sorts.empty()) it->second.sorts = std::move(sorts);
      return;
    }
    relations[p] = Relation{p, arity, std::move(sorts)};
  }

  friend bool operator==(const Schema& a, const Schema& b) {
    if (a.relations.size() != b.relations.size()) return false;
    for (const auto& [k, v] : a.relations) {
      auto it = b.relations.find(k);
      if (it == b.relations.end() || it->second.arity != v.arity) return false;
    }
    return true;
  }
};

/// A finite set of ground, unprimed database atoms over a schema. Instances
/// produced by repairing may contain the null constant; parsed ones never do.
struct DatabaseInstance {
  Schema schema;
  std::set<Atom> facts;

  void add_fact(Atom a, bool allow_null = false) {
    if (!a.is_ground()) throw std::invalid_argument("non-ground fact: " + atom_to_string(a));
    if (a.primed) throw std::invalid_argument("primed fact: " + atom_to_string(a));
    if (!allow_null)
      for (const auto& t : a.args)
        if (t.is_null()) throw std::invalid_argument("null in fact: " + atom_to_string(a));
    if (!schema.contains(a.pred)) schema.declare(a.pred, a.arity());
    if (schema.arity_of(a.pred) != a.arity())
      throw std::invalid_argument("arity mismatch for fact: " + atom_to_string(a));
    a.kind = AtomKind::Database;
    facts.insert(std::move(a));
  }
  bool holds(const Atom& a) const { return facts.count(a) != 0; }

  friend bool operator==(const DatabaseInstance& a, const DatabaseInstance& b) {
    return a.facts == b.facts;
  }
  friend bool operator<(const DatabaseInstance& a, const DatabaseInstance& b) {
    return a.facts < b.facts;
  }
};

// ---------------------------------------------------------------------------
// Interpretations, answer sets, repairs
// ---------------------------------------------------------------------------

/// A consistent set of ground literals.
struct AnswerSet {
  std::set<Literal> literals;

  AnswerSet() = default;
  explicit AnswerSet(std::set<Literal> ls) : literals(std::move(ls)) {
    for (const auto& l : literals)
      if (literals.count(complement(l)))
        throw std::invalid_argument("complementary pair in answer set: " + literal_to_string(l));
  }

  bool contains(const Literal& l) const { return literals.count(l) != 0; }

  /// Restriction to primed literals, the part that describes the repair.
  std::set<Literal> primed_projection() const {
    std::set<Literal> out;
    for (const auto& l : literals)
      if (l.atom.primed) out.insert(l);
    return out;
  }

  friend bool operator==(const AnswerSet& a, const AnswerSet& b) {
    return a.literals == b.literals;
  }
  friend bool operator<(const AnswerSet& a, const AnswerSet& b) {
    return a.literals < b.literals;
  }
};

/// Three-valued interpretation: literals known true, literals designated
/// false, everything else undefined. `entered_at[l]` records the fixpoint
/// iteration at which l was decided.
struct Interpretation {
  std::set<Literal> true_set;
  std::set<Literal> false_set;
  std::map<Literal, int> entered_at;

  bool is_true(const Literal& l) const { return true_set.count(l) != 0; }
  bool is_false(const Literal& l) const { return false_set.count(l) != 0; }
  bool is_undefined(const Literal& l) const { return !is_true(l) && !is_false(l); }
  bool consistent() const {
    for (const auto& l : true_set)
      if (false_set.count(l) || true_set.count(complement(l))) return false;
    return true;
  }
};

struct Repair {
  DatabaseInstance instance;
  std::set<Atom> inserted;
  std::set<Atom> deleted;

  friend bool operator<(const Repair& a, const Repair& b) { return a.instance < b.instance; }
  friend bool operator==(const Repair& a, const Repair& b) { return a.instance == b.instance; }
};

/// Symmetric difference split into (inserted, deleted).
inline std::pair<std::set<Atom>, std::set<Atom>> delta(const DatabaseInstance& r,
                                                       const DatabaseInstance& rp) {
  if (!(r.schema == rp.schema)) throw std::invalid_argument("delta: schema mismatch");
  std::set<Atom> inserted, deleted;
  for (const auto& a : rp.facts)
    if (!r.facts.count(a)) inserted.insert(a);
  for (const auto& a : r.facts)
    if (!rp.facts.count(a)) deleted.insert(a);
  return {std::move(inserted), std::move(deleted)};
}

inline Repair make_repair(const DatabaseInstance& r, DatabaseInstance rp) {
  auto [ins, del] = delta(r, rp);
  return Repair{std::move(rp), std::move(ins), std::move(del)};
}

// ---------------------------------------------------------------------------
// K-queries
// ---------------------------------------------------------------------------

/// Query tree. Basic queries are built from Atom/And/Or/Not/Exists; the K
/// node asks for consistent answers of the basic query below it. Or is sugar
/// (A | B == !( !A & !B )) kept as an explicit node.
struct KQuery {
  enum class Node { Atom, And, Or, Not, Exists, K };

  Node node = Node::Atom;
  Atom atom;                      // Node::Atom
  std::vector<KQuery> children;   // And/Or: 2, Not/Exists/K: 1
  std::vector<std::string> bound; // Node::Exists

  static KQuery atom_node(Atom a) {
    KQuery q;
    q.node = Node::Atom;
    q.atom = std::move(a);
    return q;
  }
  static KQuery binary(Node n, KQuery a, KQuery b) {
    KQuery q;
    q.node = n;
    q.children.push_back(std::move(a));
    q.children.push_back(std::move(b));
    return q;
  }
  static KQuery negate(KQuery a) {
    KQuery q;
    q.node = Node::Not;
    q.children.push_back(std::move(a));
    return q;
  }
  static KQuery exists(std::vector<std::string> vars, KQuery a) {
    KQuery q;
    q.node = Node::Exists;
    q.bound = std::move(vars);
    q.children.push_back(std::move(a));
    return q;
  }
  static KQuery wrap(KQuery a) {
    KQuery q;
    q.node = Node::K;
    q.children.push_back(std::move(a));
    return q;
  }

  bool contains_k() const {
    if (node == Node::K) return true;
    for (const auto& c : children)
      if (c.contains_k()) return true;
    return false;
  }

  /// Free variables in first-occurrence order; this fixes the column order of
  /// answer tuples.
  void free_vars_into(std::vector<std::string>& out) const {
    switch (node) {
      case Node::Atom:
        collect_vars(atom, out);
        return;
      case Node::Exists: {
        std::vector<std::string> inner;
        children[0].free_vars_into(inner);
        for (auto& v : inner)
          if (std::find(bound.begin(), bound.end(), v) == bound.end() &&
              std::find(out.begin(), out.end(), v) == out.end())
            out.push_back(v);
        return;
      }
      default:
        for (const auto& c : children) c.free_vars_into(out);
        return;
    }
  }
  std::vector<std::string> free_vars() const {
    std::vector<std::string> vs;
    free_vars_into(vs);
    return vs;
  }
};

// ---------------------------------------------------------------------------
// Builtin evaluation
// ---------------------------------------------------------------------------

inline bool eval_builtin(const Atom& a) {
  assert(a.kind == AtomKind::Builtin && a.args.size() == 2);
  const Term& x = a.args[0];
  const Term& y = a.args[1];
  assert(x.is_constant() && y.is_constant());
  if (a.pred == "=") return x == y;
  if (a.pred == "!=") return !(x == y);
  if (a.pred == "<") return x < y;
  if (a.pred == "<=") return x < y || x == y;
  if (a.pred == ">") return y < x;
  if (a.pred == ">=") return y < x || x == y;
  throw std::invalid_argument("unknown builtin: " + a.pred);
}

inline bool eval_builtin_literal(const Literal& l) {
  bool v = eval_builtin(l.atom);
  return l.neg ? !v : v;
}

/// Evaluates a ground builtin conjunction; the empty conjunction is false by
/// the standard-format convention.
inline bool eval_builtin_formula(const BuiltinFormula& f) {
  if (f.is_false()) return false;
  for (const auto& c : f.conjuncts)
    if (!eval_builtin_literal(c)) return false;
  return true;
}

}  // namespace cqa
