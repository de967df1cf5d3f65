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
// Text formats: `.facts` ground fact files, `.ic` constraint files, `.q`
// query strings, `.dom` domain declarations and the emitted `.dlv` rule
// syntax. Statements are `.`-terminated, `%` starts a comment.

#pragma once

#include <cctype>
#include <cstdlib>
#include <string>
#include <vector>

#include "cqa/model.hpp"

namespace cqa {

struct SourceSpan {
  std::string file;
  int line = 1;
  int column = 1;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, SourceSpan s)
      : std::runtime_error(s.file + (s.file.empty() ? "" : ":") + std::to_string(s.line) + ":" +
                           std::to_string(s.column) + ": " + msg),
        span(std::move(s)) {}
  SourceSpan span;
};

namespace detail {

enum class Tok {
  End, Dot, Comma, LParen, RParen, Arrow, Pipe, Amp, Bang, Minus,
  ColonDash, ColonTilde, Colon, At, Cmp, Ident, Var, Str, Int,
};

struct Token {
  Tok type = Tok::End;
  std::string text;
  std::int64_t num = 0;
  int line = 1, col = 1;
};

class Lexer {
 public:
  Lexer(const std::string& src, std::string file) : src_(src), file_(std::move(file)) { advance(); }

  const Token& peek() const { return tok_; }
  Token next() {
    Token t = tok_;
    advance();
    return t;
  }
  SourceSpan span() const { return SourceSpan{file_, tok_.line, tok_.col}; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, span()); }

 private:
  void advance() {
    skip_ws();
    tok_ = Token{};
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= src_.size()) {
      tok_.type = Tok::End;
      return;
    }
    char c = src_[pos_];
    auto two = [&](char a, char b) {
      return c == a && pos_ + 1 < src_.size() && src_[pos_ + 1] == b;
    };
    if (two(':', '-')) { take(2); tok_.type = Tok::ColonDash; return; }
    if (two(':', '~')) { take(2); tok_.type = Tok::ColonTilde; return; }
    if (two('-', '>')) { take(2); tok_.type = Tok::Arrow; return; }
    if (two('!', '=')) { take(2); tok_.type = Tok::Cmp; tok_.text = "!="; return; }
    if (two('<', '=')) { take(2); tok_.type = Tok::Cmp; tok_.text = "<="; return; }
    if (two('>', '=')) { take(2); tok_.type = Tok::Cmp; tok_.text = ">="; return; }
    switch (c) {
      case '.': take(1); tok_.type = Tok::Dot; return;
      case ',': take(1); tok_.type = Tok::Comma; return;
      case '(': take(1); tok_.type = Tok::LParen; return;
      case ')': take(1); tok_.type = Tok::RParen; return;
      case '|': take(1); tok_.type = Tok::Pipe; return;
      case '&': take(1); tok_.type = Tok::Amp; return;
      case '!': take(1); tok_.type = Tok::Bang; return;
      case '-': take(1); tok_.type = Tok::Minus; return;
      case ':': take(1); tok_.type = Tok::Colon; return;
      case '@': take(1); tok_.type = Tok::At; return;
      case '=': take(1); tok_.type = Tok::Cmp; tok_.text = "="; return;
      case '<': take(1); tok_.type = Tok::Cmp; tok_.text = "<"; return;
      case '>': take(1); tok_.type = Tok::Cmp; tok_.text = ">"; return;
      default: break;
    }
    if (c == '"') {
      take(1);
      std::string s;
      while (pos_ < src_.size() && src_[pos_] != '"') {
        char d = src_[pos_];
        if (d == '\\' && pos_ + 1 < src_.size()) {
          take(1);
          d = src_[pos_];
        }
        if (d == '\n') throw ParseError("unterminated string", SourceSpan{file_, tok_.line, tok_.col});
        s += d;
        take(1);
      }
      if (pos_ >= src_.size()) throw ParseError("unterminated string", SourceSpan{file_, tok_.line, tok_.col});
      take(1);
      tok_.type = Tok::Str;
      tok_.text = std::move(s);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string s;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        s += src_[pos_];
        take(1);
      }
      tok_.type = Tok::Int;
      tok_.num = std::strtoll(s.c_str(), nullptr, 10);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string s;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        s += src_[pos_];
        take(1);
      }
      tok_.text = std::move(s);
      tok_.type = (std::isupper(static_cast<unsigned char>(c))) ? Tok::Var : Tok::Ident;
      if (c == '_') tok_.type = Tok::Ident;
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", SourceSpan{file_, line_, col_});
  }

  void skip_ws() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') take(1);
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        take(1);
      } else {
        return;
      }
    }
  }

  void take(int k) {
    for (int i = 0; i < k; ++i) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  const std::string& src_;
  std::string file_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

inline bool reserved_word(const std::string& s) {
  return s == "not" || s == "v" || s == "exists" || s == "null";
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Facts
// ---------------------------------------------------------------------------

namespace detail {

class Parser {
 public:
  Parser(const std::string& src, std::string file) : lex_(src, std::move(file)) {}

  Lexer lex_;

  Token expect(Tok t, const std::string& what) {
    if (lex_.peek().type != t) lex_.fail("expected " + what);
    return lex_.next();
  }

  Term parse_term(bool allow_vars, bool allow_null) {
    const Token& t = lex_.peek();
    switch (t.type) {
      case Tok::Int: {
        auto tok = lex_.next();
        return Term::integer(tok.num);
      }
      case Tok::Minus: {
        lex_.next();
        auto tok = expect(Tok::Int, "integer after '-'");
        return Term::integer(-tok.num);
      }
      case Tok::Str: {
        auto tok = lex_.next();
        return Term::symbol(tok.text);
      }
      case Tok::Ident: {
        auto tok = lex_.next();
        if (tok.text == "null") {
          if (!allow_null) throw ParseError("the null constant is reserved", span_of(tok));
          return Term::null_value();
        }
        if (reserved_word(tok.text)) throw ParseError("reserved word used as constant", span_of(tok));
        return Term::symbol(tok.text);
      }
      case Tok::Var: {
        auto tok = lex_.next();
        if (!allow_vars) throw ParseError("variable not allowed here", span_of(tok));
        return Term::var(tok.text);
      }
      default:
        lex_.fail("expected a term");
    }
  }

  SourceSpan span_of(const Token& t) const {
    SourceSpan s = lex_.span();
    s.line = t.line;
    s.column = t.col;
    return s;
  }

  std::vector<Term> parse_term_list(bool allow_vars, bool allow_null) {
    std::vector<Term> ts;
    expect(Tok::LParen, "'('");
    if (lex_.peek().type != Tok::RParen) {
      ts.push_back(parse_term(allow_vars, allow_null));
      while (lex_.peek().type == Tok::Comma) {
        lex_.next();
        ts.push_back(parse_term(allow_vars, allow_null));
      }
    }
    expect(Tok::RParen, "')'");
    return ts;
  }

  // pred(args...) or a 0-ary predicate name.
  Atom parse_plain_atom(bool allow_vars, bool allow_null) {
    auto tok = expect(Tok::Ident, "predicate name");
    if (reserved_word(tok.text)) throw ParseError("reserved word used as predicate", span_of(tok));
    Atom a;
    a.pred = tok.text;
    if (lex_.peek().type == Tok::LParen) a.args = parse_term_list(allow_vars, allow_null);
    return a;
  }

  // term CMP term
  Atom parse_builtin_tail(Term left) {
    auto op = expect(Tok::Cmp, "comparison operator");
    Term right = parse_term(true, false);
    Atom a;
    a.pred = op.text;
    a.kind = AtomKind::Builtin;
    a.args = {std::move(left), std::move(right)};
    return a;
  }

  bool at_builtin_start() const {
    Tok t = lex_.peek().type;
    return t == Tok::Var || t == Tok::Int || t == Tok::Str;
  }
};

// Classifies a predicate name against a schema: `foo_p` is the primed version
// of schema predicate `foo`, `dom` is the domain guard, schema names are
// database atoms, anything else is auxiliary.
inline void classify(Atom& a, const Schema* schema) {
  if (a.kind == AtomKind::Builtin) return;
  if (a.pred == kDomPred) {
    a.kind = AtomKind::DomGuard;
    return;
  }
  if (schema) {
    if (a.pred.size() > 2 && a.pred.substr(a.pred.size() - 2) == "_p" &&
        schema->contains(a.pred.substr(0, a.pred.size() - 2))) {
      a.pred = a.pred.substr(0, a.pred.size() - 2);
      a.primed = true;
      a.kind = AtomKind::Database;
      return;
    }
    if (schema->contains(a.pred)) {
      a.kind = AtomKind::Database;
      return;
    }
  }
  a.kind = AtomKind::Aux;
}

}  // namespace detail

/// Parses a `.facts` file: ground fact statements plus optional
/// `@schema pred:arity:sort,...` header lines. Duplicate facts collapse.
inline DatabaseInstance parse_instance(const std::string& text, Schema schema = {},
                                       const std::string& file = "") {
  detail::Parser p(text, file);
  DatabaseInstance db;
  db.schema = std::move(schema);
  while (p.lex_.peek().type != detail::Tok::End) {
    if (p.lex_.peek().type == detail::Tok::At) {
      p.lex_.next();
      auto kw = p.expect(detail::Tok::Ident, "directive name");
      if (kw.text != "schema") throw ParseError("unknown directive @" + kw.text, p.span_of(kw));
      auto name = p.expect(detail::Tok::Ident, "predicate name");
      p.expect(detail::Tok::Colon, "':'");
      auto ar = p.expect(detail::Tok::Int, "arity");
      std::vector<std::string> sorts;
      if (p.lex_.peek().type == detail::Tok::Colon) {
        p.lex_.next();
        sorts.push_back(p.expect(detail::Tok::Ident, "sort name").text);
        while (p.lex_.peek().type == detail::Tok::Comma) {
          p.lex_.next();
          sorts.push_back(p.expect(detail::Tok::Ident, "sort name").text);
        }
        if (sorts.size() != static_cast<size_t>(ar.num))
          throw ParseError("sort list does not match arity", p.span_of(kw));
      }
      p.expect(detail::Tok::Dot, "'.'");
      db.schema.declare(name.text, static_cast<size_t>(ar.num), std::move(sorts));
      continue;
    }
    SourceSpan at = p.lex_.span();
    Atom a = p.parse_plain_atom(/*allow_vars=*/true, /*allow_null=*/false);
    p.expect(detail::Tok::Dot, "'.'");
    if (a.pred.rfind(kAuxPrefix, 0) == 0)
      throw ParseError("predicate names starting with __ are reserved", at);
    for (const auto& t : a.args)
      if (t.is_variable()) throw ParseError("variable in fact", at);
    try {
      db.add_fact(std::move(a));
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), at);
    }
  }
  return db;
}

/// Parses a `.dom` file: whitespace-separated constants, optionally
/// `.`-terminated.
inline std::set<Term> parse_domain(const std::string& text, const std::string& file = "") {
  detail::Parser p(text, file);
  std::set<Term> out;
  while (p.lex_.peek().type != detail::Tok::End) {
    out.insert(p.parse_term(false, false));
    if (p.lex_.peek().type == detail::Tok::Dot) p.lex_.next();
    if (p.lex_.peek().type == detail::Tok::Comma) p.lex_.next();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Constraints
// ---------------------------------------------------------------------------

namespace detail {

struct ClauseParts {
  std::vector<Atom> pos, neg;
  std::vector<Literal> builtins;  // already in consequent polarity
};

inline void check_constraint(const Constraint& c, const SourceSpan& at) {
  if (c.n() + c.m() == 0 && !c.is_ric())
    throw ParseError("constraint has no database literal", at);
  std::vector<std::string> dbvars;
  for (const auto& a : c.positives) collect_vars(a, dbvars);
  for (const auto& a : c.negatives) collect_vars(a, dbvars);
  std::vector<std::string> bvars;
  for (const auto& b : c.builtin.conjuncts) collect_vars(b.atom, bvars);
  for (const auto& v : bvars)
    if (std::find(dbvars.begin(), dbvars.end(), v) == dbvars.end())
      throw ParseError("builtin variable " + v + " does not occur in a database literal", at);
}

}  // namespace detail

/// Parses an `.ic` file into constraints in standard format. Statements:
///   clause form        `p(X) v -q(X,Y) v X>3.`
///   implication form   `q(X,Y), q(X,Z) -> Y=Z.`
///   referential form   `p(X) -> exists Z r(X,Z).`
/// Implications are normalized by negating body atoms; a builtin group may be
/// a single literal or a parenthesized conjunction, and at most one group per
/// statement is accepted.
inline std::vector<Constraint> parse_constraints(const std::string& text, Schema& schema,
                                                 const std::string& file = "") {
  detail::Parser p(text, file);
  std::vector<Constraint> out;
  using detail::Tok;

  auto declare = [&](const Atom& a, const SourceSpan& at) {
    if (a.pred.rfind(kAuxPrefix, 0) == 0)
      throw ParseError("predicate names starting with __ are reserved", at);
    try {
      schema.declare(a.pred, a.arity());
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), at);
    }
  };

  while (p.lex_.peek().type != Tok::End) {
    SourceSpan at = p.lex_.span();
    Constraint c;
    bool have_builtin_group = false;

    auto add_builtin_group = [&](std::vector<Literal> ls) {
      if (have_builtin_group)
        throw ParseError("only one builtin group per constraint (phi must be a conjunction)", at);
      have_builtin_group = true;
      for (auto& l : ls) c.builtin.conjuncts.push_back(std::move(l));
    };

    // Parse one disjunct/conjunct element: atom, -atom, builtin, or
    // parenthesized builtin conjunction.
    enum class Elem { Pos, Neg, Builtin, Group };
    struct Item {
      Elem e;
      Atom a;
      std::vector<Literal> group;
    };
    auto parse_item = [&]() -> Item {
      if (p.lex_.peek().type == Tok::Minus) {
        p.lex_.next();
        Atom a = p.parse_plain_atom(true, false);
        return {Elem::Neg, std::move(a), {}};
      }
      if (p.lex_.peek().type == Tok::LParen) {
        p.lex_.next();
        std::vector<Literal> g;
        g.emplace_back(p.parse_builtin_tail(p.parse_term(true, false)));
        while (p.lex_.peek().type == Tok::Comma) {
          p.lex_.next();
          g.emplace_back(p.parse_builtin_tail(p.parse_term(true, false)));
        }
        p.expect(Tok::RParen, "')'");
        return {Elem::Group, Atom{}, std::move(g)};
      }
      if (p.at_builtin_start()) {
        Term l = p.parse_term(true, false);
        return {Elem::Builtin, p.parse_builtin_tail(std::move(l)), {}};
      }
      Atom a = p.parse_plain_atom(true, false);
      if (p.lex_.peek().type == Tok::Cmp) {
        // symbol on the left of a comparison
        Term l = Term::symbol(a.pred);
        if (!a.args.empty()) p.lex_.fail("unexpected comparison");
        return {Elem::Builtin, p.parse_builtin_tail(std::move(l)), {}};
      }
      return {Elem::Pos, std::move(a), {}};
    };

    // Left-hand side: either a clause (v-separated) or an implication body
    // (comma-separated, then ->).
    std::vector<Item> items;
    items.push_back(parse_item());
    bool implication = false;
    while (true) {
      const detail::Token& t = p.lex_.peek();
      if (t.type == Tok::Ident && t.text == "v") {
        p.lex_.next();
        items.push_back(parse_item());
      } else if (t.type == Tok::Comma) {
        p.lex_.next();
        items.push_back(parse_item());
        implication = true;
      } else {
        break;
      }
    }
    if (p.lex_.peek().type == Tok::Arrow) implication = true;

    if (!implication) {
      // clause form
      for (auto& it : items) {
        switch (it.e) {
          case Elem::Pos: declare(it.a, at); c.positives.push_back(std::move(it.a)); break;
          case Elem::Neg: declare(it.a, at); c.negatives.push_back(std::move(it.a)); break;
          case Elem::Builtin: add_builtin_group({Literal(std::move(it.a))}); break;
          case Elem::Group: add_builtin_group(std::move(it.group)); break;
        }
      }
      p.expect(Tok::Dot, "'.'");
    } else {
      // implication form: body atoms become negatives, body builtins join phi
      // complemented.
      std::vector<Literal> lhs_builtins;
      for (auto& it : items) {
        switch (it.e) {
          case Elem::Pos: declare(it.a, at); c.negatives.push_back(std::move(it.a)); break;
          case Elem::Neg:
            throw ParseError("negated atom on the left of '->' (write it on the right)", at);
          case Elem::Builtin: lhs_builtins.emplace_back(complement(Literal(std::move(it.a)))); break;
          case Elem::Group:
            throw ParseError("builtin conjunction on the left of '->' is not supported", at);
        }
      }
      if (!lhs_builtins.empty()) add_builtin_group(std::move(lhs_builtins));
      p.expect(Tok::Arrow, "'->'");

      if (p.lex_.peek().type == Tok::Ident && p.lex_.peek().text == "exists") {
        p.lex_.next();
        if (c.negatives.size() != 1 || !c.positives.empty() || have_builtin_group)
          throw ParseError("referential constraint must have the form p(X) -> exists Y r(X,Y)", at);
        std::vector<std::string> evars;
        while (p.lex_.peek().type == Tok::Var) evars.push_back(p.lex_.next().text);
        if (evars.empty()) throw ParseError("exists needs at least one variable", at);
        Atom cons = p.parse_plain_atom(true, false);
        declare(cons, at);
        p.expect(Tok::Dot, "'.'");
        ExistentialTail tail;
        tail.existential_pos.assign(cons.args.size(), false);
        std::vector<std::string> avars;
        collect_vars(c.negatives[0], avars);
        for (size_t i = 0; i < cons.args.size(); ++i) {
          const Term& t = cons.args[i];
          if (!t.is_variable())
            throw ParseError("referential consequent must use variables only", at);
          bool is_exist = std::find(evars.begin(), evars.end(), t.text) != evars.end();
          tail.existential_pos[i] = is_exist;
          if (!is_exist &&
              std::find(avars.begin(), avars.end(), t.text) == avars.end())
            throw ParseError("variable " + t.text + " of the consequent is not bound", at);
        }
        std::vector<std::string> cons_plain;
        for (size_t i = 0; i < cons.args.size(); ++i)
          if (!tail.existential_pos[i]) cons_plain.push_back(cons.args[i].text);
        for (const auto& v : avars)
          if (std::find(cons_plain.begin(), cons_plain.end(), v) == cons_plain.end())
            throw ParseError("antecedent variable " + v + " does not occur in the consequent", at);
        tail.consequent = std::move(cons);
        if (std::none_of(tail.existential_pos.begin(), tail.existential_pos.end(),
                         [](bool b) { return b; }))
          throw ParseError("exists variables do not occur in the consequent", at);
        c.existential = std::move(tail);
        detail::check_constraint(c, at);
        out.push_back(std::move(c));
        continue;
      }

      // right-hand side disjuncts
      std::vector<Item> rhs;
      rhs.push_back(parse_item());
      while (true) {
        const detail::Token& t = p.lex_.peek();
        if (t.type == Tok::Ident && t.text == "v") {
          p.lex_.next();
          rhs.push_back(parse_item());
        } else if (t.type == Tok::Comma) {
          // conjunction on the right: only allowed when every conjunct is a
          // builtin (they jointly form phi)
          p.lex_.next();
          rhs.push_back(parse_item());
        } else {
          break;
        }
      }
      size_t builtin_count = 0;
      for (const auto& it : rhs)
        if (it.e == Elem::Builtin) ++builtin_count;
      if (builtin_count > 1) {
        // treat as one conjunction group
        std::vector<Literal> g;
        for (auto& it : rhs) {
          if (it.e != Elem::Builtin)
            throw ParseError("cannot mix atoms with a builtin conjunction on the right", at);
          g.emplace_back(std::move(it.a));
        }
        add_builtin_group(std::move(g));
      } else {
        for (auto& it : rhs) {
          switch (it.e) {
            case Elem::Pos: declare(it.a, at); c.positives.push_back(std::move(it.a)); break;
            case Elem::Neg: declare(it.a, at); c.negatives.push_back(std::move(it.a)); break;
            case Elem::Builtin: add_builtin_group({Literal(std::move(it.a))}); break;
            case Elem::Group: add_builtin_group(std::move(it.group)); break;
          }
        }
      }
      p.expect(Tok::Dot, "'.'");
    }
    detail::check_constraint(c, at);
    out.push_back(std::move(c));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Queries
// ---------------------------------------------------------------------------

namespace detail {

// expr     := 'exists' VAR+ expr | or
// or       := and ('|' and)*
// and      := unary ('&' unary)*
// unary    := '!' unary | primary
// primary  := '(' expr ')' | 'K' '(' expr ')' | atom | builtin
// `exists` takes maximal scope to the right; parenthesize for a tighter one.
class QueryParser {
 public:
  QueryParser(Parser& p, Schema& schema) : p_(p), schema_(schema) {}

  KQuery parse_expr() {
    if (p_.lex_.peek().type == Tok::Ident && p_.lex_.peek().text == "exists") {
      p_.lex_.next();
      std::vector<std::string> vars;
      while (p_.lex_.peek().type == Tok::Var) {
        auto v = p_.lex_.next();
        if (v.text == "K" && p_.lex_.peek().type == Tok::LParen)
          p_.lex_.fail("K cannot be quantified");
        vars.push_back(v.text);
      }
      if (vars.empty()) p_.lex_.fail("exists needs at least one variable");
      return KQuery::exists(std::move(vars), parse_expr());
    }
    return parse_or();
  }

 private:
  KQuery parse_or() {
    KQuery q = parse_and();
    while (p_.lex_.peek().type == Tok::Pipe) {
      p_.lex_.next();
      q = KQuery::binary(KQuery::Node::Or, std::move(q), parse_and());
    }
    return q;
  }
  KQuery parse_and() {
    KQuery q = parse_unary();
    while (p_.lex_.peek().type == Tok::Amp) {
      p_.lex_.next();
      q = KQuery::binary(KQuery::Node::And, std::move(q), parse_unary());
    }
    return q;
  }
  KQuery parse_unary() {
    if (p_.lex_.peek().type == Tok::Bang) {
      p_.lex_.next();
      return KQuery::negate(parse_unary());
    }
    return parse_primary();
  }
  KQuery parse_primary() {
    const Token& t = p_.lex_.peek();
    if (t.type == Tok::LParen) {
      p_.lex_.next();
      KQuery q = parse_expr();
      p_.expect(Tok::RParen, "')'");
      return q;
    }
    if (t.type == Tok::Var && t.text == "K") {
      // K operator: requires parentheses
      Token k = p_.lex_.next();
      if (p_.lex_.peek().type != Tok::LParen)
        throw ParseError("K must be followed by a parenthesized query", p_.span_of(k));
      p_.lex_.next();
      KQuery q = parse_expr();
      p_.expect(Tok::RParen, "')'");
      return KQuery::wrap(std::move(q));
    }
    if (t.type == Tok::Var || t.type == Tok::Int || t.type == Tok::Str) {
      Term l = p_.parse_term(true, false);
      Atom b = p_.parse_builtin_tail(std::move(l));
      return KQuery::atom_node(std::move(b));
    }
    SourceSpan at = p_.lex_.span();
    Atom a = p_.parse_plain_atom(true, false);
    if (p_.lex_.peek().type == Tok::Cmp) {
      if (!a.args.empty()) p_.lex_.fail("unexpected comparison");
      return KQuery::atom_node(p_.parse_builtin_tail(Term::symbol(a.pred)));
    }
    if (a.pred.rfind(kAuxPrefix, 0) == 0)
      throw ParseError("predicate names starting with __ are reserved", at);
    try {
      schema_.declare(a.pred, a.arity());
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), at);
    }
    a.kind = AtomKind::Database;
    return KQuery::atom_node(std::move(a));
  }

  Parser& p_;
  Schema& schema_;
};

// Range-restricted variables of a basic query node.
inline std::vector<std::string> range_restricted(const KQuery& q) {
  switch (q.node) {
    case KQuery::Node::Atom:
      if (q.atom.kind == AtomKind::Builtin) return {};
      {
        std::vector<std::string> vs;
        collect_vars(q.atom, vs);
        return vs;
      }
    case KQuery::Node::And: {
      auto a = range_restricted(q.children[0]);
      for (auto& v : range_restricted(q.children[1]))
        if (std::find(a.begin(), a.end(), v) == a.end()) a.push_back(v);
      return a;
    }
    case KQuery::Node::Or: {
      auto a = range_restricted(q.children[0]);
      auto b = range_restricted(q.children[1]);
      std::vector<std::string> out;
      for (auto& v : a)
        if (std::find(b.begin(), b.end(), v) != b.end()) out.push_back(v);
      return out;
    }
    case KQuery::Node::Not:
      return {};
    case KQuery::Node::Exists: {
      auto a = range_restricted(q.children[0]);
      std::vector<std::string> out;
      for (auto& v : a)
        if (std::find(q.bound.begin(), q.bound.end(), v) == q.bound.end()) out.push_back(v);
      return out;
    }
    case KQuery::Node::K:
      // a K node materializes to a finite relation, so all its free
      // variables are range restricted
      return q.free_vars();
  }
  return {};
}

inline void collect_k(const KQuery& q, std::vector<const KQuery*>& out) {
  if (q.node == KQuery::Node::K) {
    out.push_back(&q);
    return;
  }
  for (const auto& c : q.children) collect_k(c, out);
}

// The whole query and every basic query under a K must be range restricted;
// subformulas need not be, their variables can be bound by sibling conjuncts.
inline void check_query_safety(const KQuery& q, const SourceSpan& at) {
  auto check = [&](const KQuery& f) {
    auto rr = range_restricted(f);
    for (const auto& v : f.free_vars())
      if (std::find(rr.begin(), rr.end(), v) == rr.end())
        throw ParseError("unsafe query: variable " + v + " is not range restricted", at);
  };
  check(q);
  std::vector<const KQuery*> ks;
  collect_k(q, ks);
  for (const KQuery* k : ks) check(k->children[0]);
}

inline void check_k_shape(const KQuery& q, bool under_k, const SourceSpan& at) {
  if (q.node == KQuery::Node::K) {
    if (under_k) throw ParseError("nested K operators are not supported", at);
    if (q.children[0].contains_k()) throw ParseError("nested K operators are not supported", at);
    return;
  }
  if (q.node == KQuery::Node::Atom && !under_k)
    throw ParseError("atoms outside K must be wrapped: every atom of a K-query "
                     "belongs to some K subquery",
                     at);
  for (const auto& c : q.children) check_k_shape(c, under_k || q.node == KQuery::Node::K, at);
}

}  // namespace detail

/// Parses a query. A bare basic query B means K B. With explicit K operators
/// the outer level may only combine K subqueries with &, |, !, exists.
inline KQuery parse_query(const std::string& text, Schema& schema, const std::string& file = "") {
  detail::Parser p(text, file);
  SourceSpan at = p.lex_.span();
  detail::QueryParser qp(p, schema);
  KQuery q = qp.parse_expr();
  if (p.lex_.peek().type == detail::Tok::Dot) p.lex_.next();
  if (p.lex_.peek().type != detail::Tok::End) p.lex_.fail("trailing input after query");
  if (!q.contains_k()) q = KQuery::wrap(std::move(q));
  detail::check_k_shape(q, false, at);
  detail::check_query_safety(q, at);
  return q;
}

// ---------------------------------------------------------------------------
// DLV-syntax programs
// ---------------------------------------------------------------------------

/// Parses a program in the emitted DLV syntax: facts, rules `h1 v h2 :- ...`,
/// strong constraints `:- body.` and weak constraints `:~ body.`. When a
/// schema is given, `foo_p` names are read back as primed schema predicates.
inline Program parse_program(const std::string& text, const Schema* schema = nullptr,
                             const std::string& file = "") {
  detail::Parser p(text, file);
  using detail::Tok;
  Program out;

  auto parse_literal = [&](bool allow_null) -> Literal {
    bool neg = false;
    if (p.lex_.peek().type == Tok::Minus) {
      p.lex_.next();
      neg = true;
    }
    Atom a = p.parse_plain_atom(true, allow_null);
    detail::classify(a, schema);
    return Literal(std::move(a), neg);
  };

  auto parse_body = [&](std::vector<BodyLiteral>& body) {
    while (true) {
      bool naf = false;
      if (p.lex_.peek().type == Tok::Ident && p.lex_.peek().text == "not") {
        p.lex_.next();
        naf = true;
      }
      if (p.at_builtin_start()) {
        Term l = p.parse_term(true, true);
        Atom b = p.parse_builtin_tail(std::move(l));
        body.emplace_back(Literal(std::move(b)), naf);
      } else if (p.lex_.peek().type == Tok::Minus || p.lex_.peek().type == Tok::Ident) {
        // an Ident might still start a builtin (symbol on the left)
        if (p.lex_.peek().type == Tok::Ident) {
          Atom a = p.parse_plain_atom(true, true);
          if (p.lex_.peek().type == Tok::Cmp && a.args.empty()) {
            Atom b = p.parse_builtin_tail(Term::symbol(a.pred));
            body.emplace_back(Literal(std::move(b)), naf);
          } else {
            detail::classify(a, schema);
            body.emplace_back(Literal(std::move(a)), naf);
          }
        } else {
          body.push_back(BodyLiteral(parse_literal(true), naf));
        }
      } else {
        p.lex_.fail("expected a body literal");
      }
      if (p.lex_.peek().type == Tok::Comma) {
        p.lex_.next();
        continue;
      }
      break;
    }
  };

  while (p.lex_.peek().type != Tok::End) {
    Rule r;
    if (p.lex_.peek().type == Tok::ColonDash || p.lex_.peek().type == Tok::ColonTilde) {
      r.kind = p.lex_.next().type == Tok::ColonDash ? RuleKind::StrongConstraint
                                                    : RuleKind::WeakConstraint;
      parse_body(r.body);
      p.expect(Tok::Dot, "'.'");
      out.add(std::move(r));
      continue;
    }
    r.head.push_back(parse_literal(true));
    while (p.lex_.peek().type == Tok::Ident && p.lex_.peek().text == "v") {
      p.lex_.next();
      r.head.push_back(parse_literal(true));
    }
    if (p.lex_.peek().type == Tok::ColonDash) {
      p.lex_.next();
      parse_body(r.body);
    }
    p.expect(Tok::Dot, "'.'");
    r.kind = (r.body.empty() && r.head.size() == 1 && r.head[0].atom.is_ground())
                 ? RuleKind::Fact
                 : RuleKind::AuxiliaryDef;
    out.add(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

namespace detail {

// Remark-1 form of a persistence default: the implicit weak negation of the
// complemented head is made explicit. DLV-class solvers have no defaults.
inline Rule rewrite_default(const Rule& r) {
  assert(r.head.size() == 1);
  Rule out = r;
  out.kind = RuleKind::PersistenceRule;
  out.body.emplace_back(complement(r.head[0]), /*naf=*/true);
  return canonical(std::move(out));
}

}  // namespace detail

/// Applies the default-to-rule rewrite to every persistence default.
inline Program rewrite_defaults(const Program& p) {
  Program out;
  out.declared_domain = p.declared_domain;
  for (const auto& r : p.rules)
    out.add(r.kind == RuleKind::PersistenceDefault ? detail::rewrite_default(r) : r);
  return out;
}

/// Renders a program in DLV syntax. Persistence defaults are emitted in their
/// rewritten (Remark-1) form so the output means the same to an answer-set
/// solver.
inline std::string emit_dlv(const Program& p) {
  std::string s;
  for (const auto& r : p.rules) {
    const Rule& rr = r;
    if (r.kind == RuleKind::PersistenceDefault) {
      s += rule_to_string(detail::rewrite_default(r));
    } else {
      s += rule_to_string(rr);
    }
    s += '\n';
  }
  return s;
}

}  // namespace cqa
