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
// The worked examples every suite asserts against.

#pragma once

#include <set>
#include <string>
#include <vector>

#include "cqa/cqa.hpp"

namespace fixtures {

using namespace cqa;

inline Term S(const std::string& s) { return Term::symbol(s); }
inline Term I(std::int64_t v) { return Term::integer(v); }
inline Term V(const std::string& s) { return Term::var(s); }

inline Atom A(const std::string& pred, std::vector<Term> args = {}) {
  return Atom(pred, std::move(args));
}
inline Literal prime(const std::string& pred, std::vector<Term> args, bool neg = false) {
  Atom a(pred, std::move(args));
  a.primed = true;
  return Literal(std::move(a), neg);
}

struct Case {
  DatabaseInstance r;
  std::vector<Constraint> ics;
  Schema schema;
};

inline Case make(std::vector<std::pair<std::string, size_t>> rels,
                 std::vector<Atom> facts, const std::string& ic_text) {
  Case c;
  for (auto& [name, ar] : rels) c.r.schema.declare(name, ar);
  for (auto& f : facts) c.r.add_fact(std::move(f));
  c.schema = c.r.schema;
  if (!ic_text.empty()) c.ics = parse_constraints(ic_text, c.schema);
  c.r.schema = c.schema;
  return c;
}

// Salary table with the functional dependency Name -> Amount.
inline Case salary() {
  return make({{"salary", 2}},
              {A("salary", {S("V.Smith"), I(5000)}), A("salary", {S("V.Smith"), I(8000)}),
               A("salary", {S("P.Jones"), I(3000)}), A("salary", {S("M.Stone"), I(7000)})},
              "salary(X,Y), salary(X,Z) -> Y=Z.");
}

// Inclusion dependency p -> q over r = {p(a,b), q(b,c)}.
inline Case inclusion() {
  return make({{"p", 2}, {"q", 2}},
              {A("p", {S("a"), S("b")}), A("q", {S("b"), S("c")})},
              "p(X,Y) -> q(X,Y).");
}

// Finite domain {a,b,c}, r = {p(a)}, constraint: every element is in p.
inline Case finite_p() {
  return make({{"p", 1}}, {A("p", {S("a")})}, "p(X).");
}
inline std::set<Term> finite_domain_abc() { return {S("a"), S("b"), S("c")}; }

// Propositional constraints q v r, s v -q, s v -r over the empty instance.
inline Case noncore() {
  return make({{"q", 0}, {"r", 0}, {"s", 0}}, {}, "q v r. s v -q. s v -r.");
}

// r = {p(a,b), p(a,c)} with the FD on the first column.
inline Case fd_pair() {
  return make({{"p", 2}}, {A("p", {S("a"), S("b")}), A("p", {S("a"), S("c")})},
              "p(X,Y), p(X,Z) -> Y=Z.");
}

// The employee/SSN table with both functional dependencies.
inline Case ssn() {
  return make({{"emp", 2}},
              {A("emp", {S("Irwin Koper"), S("677-223-112")}),
               A("emp", {S("Irwin Koper"), S("952-223-564")}),
               A("emp", {S("Michael Baneman"), S("334-454-991")}),},
              "emp(X,Y), emp(X,Z) -> Y=Z. emp(Y,X), emp(Z,X) -> Y=Z.");
}

// D = {a}, r = {p(a)}, constraints p -> q and q -> r.
inline Case chain() {
  return make({{"p", 1}, {"q", 1}, {"r", 1}}, {A("p", {S("a")})},
              "p(X) -> q(X). q(X) -> r(X).");
}

// Referential constraint p(x) -> exists y rel(x,y), r = {p(a), p(b), rel(b,a)}.
inline Case referential() {
  return make({{"p", 1}, {"rel", 2}},
              {A("p", {S("a")}), A("p", {S("b")}), A("rel", {S("b"), S("a")})},
              "p(X) -> exists Y rel(X,Y).");
}

// Employee/person variant used with a strong constraint.
inline Case person_ssn() {
  return make({{"emp", 2}, {"person", 1}},
              {A("emp", {S("Irwin Koper"), S("677-223-112")}),
               A("emp", {S("Irwin Koper"), S("952-223-564")}),
               A("emp", {S("Michael Baneman"), S("952-223-564")}),
               A("person", {S("Irwin Koper")}), A("person", {S("Michael Baneman")})},
              "emp(X,Y), emp(X,Z) -> Y=Z. emp(Y,X), emp(Z,X) -> Y=Z.");
}
inline Program person_strong_program(const Schema& schema) {
  return parse_program(
      "dom_name(\"Irwin Koper\"). dom_name(\"Michael Baneman\").\n"
      "has_ssn(X) :- emp_p(X,Y).\n"
      ":- dom_name(X), not has_ssn(X).\n",
      &schema);
}

// The seven ternary constraints whose only consistent instance is empty.
inline Case ternary() {
  return make({{"p", 1}, {"q", 1}, {"r", 1}},
              {A("p", {S("a")}), A("q", {S("a")}), A("r", {S("a")})},
              "-p(X) v -q(X) v r(X). -p(X) v -q(X) v -r(X). -p(X) v q(X) v -r(X). "
              "p(X) v -q(X) v -r(X). -p(X) v q(X) v r(X). p(X) v -q(X) v r(X). "
              "p(X) v q(X) v -r(X).");
}

// Transitivity over r = {p(a,b), p(b,c)}.
inline Case transitivity() {
  return make({{"p", 2}}, {A("p", {S("a"), S("b")}), A("p", {S("b"), S("c")})},
              "p(X,Y), p(Y,Z) -> p(X,Z).");
}

inline std::vector<DatabaseInstance> instances_of(const std::vector<Repair>& reps) {
  std::vector<DatabaseInstance> out;
  for (const auto& r : reps) out.push_back(r.instance);
  return out;
}

inline DatabaseInstance instance_from(const Schema& schema, std::vector<Atom> facts) {
  DatabaseInstance db;
  db.schema = schema;
  for (auto& f : facts) db.add_fact(std::move(f), /*allow_null=*/true);
  return db;
}

}  // namespace fixtures
