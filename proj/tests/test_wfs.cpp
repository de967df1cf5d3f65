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

#include <catch2/catch_amalgamated.hpp>

#include "cqa/cqa.hpp"
#include "cqa/random_corpus.hpp"
#include "cqa/wfs.hpp"
#include "support/fixtures.hpp"

using namespace cqa;
using fixtures::A;
using fixtures::S;
using fixtures::V;

namespace {

GroundProgram repair_ground(const fixtures::Case& c,
                            std::optional<std::set<Term>> fin = std::nullopt) {
  Program prog = assemble_repair_program(c.ics, c.schema, RepairMode::Winslett);
  auto dom = fin ? DomainDeclaration::finite(*fin)
                 : DomainDeclaration::active(active_domain(c.r, c.ics));
  return ground(prog, dom, &c.r);
}

}  // namespace

TEST_CASE("the consequence operator derives facts and forced disjuncts") {
  GroundProgram g = finalize_ground({Rule({Literal(A("p", {S("a")}))}, {}, RuleKind::Fact)});
  Interpretation empty;
  CHECK(t_operator(g, empty) == std::set<Literal>{Literal(A("p", {S("a")}))});

  GroundProgram disj = finalize_ground(
      {Rule({Literal(fixtures::prime("q", {})), Literal(fixtures::prime("r", {}))}, {},
            RuleKind::Triggering)});
  CHECK(t_operator(disj, empty).empty());  // nothing forced while both are open

  Interpretation i;
  i.false_set.insert(fixtures::prime("r", {}));
  CHECK(t_operator(disj, i) == std::set<Literal>{fixtures::prime("q", {})});
}

TEST_CASE("greatest unfounded set spares founded literals") {
  GroundProgram g = finalize_ground({Rule({Literal(A("p", {S("a")}))}, {}, RuleKind::Fact)});
  g.universe.insert(Literal(A("q", {S("b")})));
  g.close_universe();
  Interpretation empty;
  auto gus = greatest_unfounded_set(g, empty);
  CHECK(gus.count(Literal(A("q", {S("b")}))));
  CHECK(!gus.count(Literal(A("p", {S("a")}))));
}

TEST_CASE("the noncore program has an empty primed fixpoint") {
  auto c = fixtures::noncore();
  auto gp = repair_ground(c);
  auto w = well_founded(gp);
  REQUIRE(!w.inconsistent);
  for (const auto& l : w.interp.true_set) CHECK(!l.atom.primed);
  for (const auto& l : w.interp.false_set) CHECK(!l.atom.primed);
}

TEST_CASE("the fd query program leaves the disjunctive part undefined") {
  // r = {p(a,b), p(a,c)} with the FD and query exists y p(x,y)
  auto c = fixtures::fd_pair();
  Schema s = c.schema;
  auto q = parse_query("exists Y p(X,Y)", s);
  Program prog = assemble_repair_program(c.ics, c.schema, RepairMode::Winslett);
  prog.append(compile_query_program(q, RepairMode::Winslett));
  auto gp = ground(prog, DomainDeclaration::active(active_domain(c.r, c.ics, &q)), &c.r);
  auto w = well_founded(gp);
  REQUIRE(!w.inconsistent);

  Literal pab = fixtures::prime("p", {S("a"), S("b")});
  Literal pac = fixtures::prime("p", {S("a"), S("c")});
  Literal qa(Atom(kQueryPred, {S("a")}, AtomKind::Aux));
  CHECK(w.interp.is_undefined(pab));
  CHECK(w.interp.is_undefined(pac));
  CHECK(w.interp.is_undefined(qa));
  // -p'(a,a) is derived true and p'(a,a) is designated false
  CHECK(w.interp.is_true(fixtures::prime("p", {S("a"), S("a")}, true)));
  CHECK(w.interp.is_false(fixtures::prime("p", {S("a"), S("a")})));
  // at the fixpoint those literals stay outside the unfounded set
  auto gus = greatest_unfounded_set(gp, w.interp);
  CHECK(!gus.count(pab));
  CHECK(!gus.count(pac));
  CHECK(!gus.count(qa));
}

TEST_CASE("the cleaning program reaches a total fixpoint equal to its answer set") {
  // defaults plus one deletion exception for FD violations
  DatabaseInstance r;
  r.schema.declare("rel", 2);
  r.add_fact(A("rel", {S("a"), S("b")}));
  r.add_fact(A("rel", {S("a"), S("c")}));
  r.add_fact(A("rel", {S("d"), S("e")}));

  Program prog;
  prog.add(Rule({fixtures::prime("rel", {V("X"), V("Y")})},
                {{Literal(A("rel", {V("X"), V("Y")})), false}}, RuleKind::PersistenceDefault));
  prog.add(Rule({fixtures::prime("rel", {V("X"), V("Y")}, true)},
                {{Literal(A("rel", {V("X"), V("Y")})), false},
                 {Literal(A("rel", {V("X"), V("Z")})), false},
                 {Literal(Atom("=", {V("Y"), V("Z")}, AtomKind::Builtin)), true}},
                RuleKind::Triggering));
  auto gp = ground(prog, DomainDeclaration::active(active_domain(r)), &r, false);
  auto w = well_founded(gp);
  REQUIRE(!w.inconsistent);
  for (const auto& l : gp.universe) CHECK(!w.interp.is_undefined(l));

  auto sr = answer_sets(gp, /*e_mode=*/true);
  REQUIRE(sr.sets.size() == 1);
  CHECK(sr.sets[0].literals == w.interp.true_set);
  CHECK(sr.sets[0].contains(fixtures::prime("rel", {S("d"), S("e")})));
  CHECK(sr.sets[0].contains(fixtures::prime("rel", {S("a"), S("b")}, true)));
  CHECK(sr.sets[0].contains(fixtures::prime("rel", {S("a"), S("c")}, true)));
}

TEST_CASE("the finite-domain program reaches a total fixpoint") {
  auto c = fixtures::finite_p();
  auto gp = repair_ground(c, fixtures::finite_domain_abc());
  auto w = well_founded(gp);
  REQUIRE(!w.inconsistent);
  for (const auto& l : gp.universe) CHECK(!w.interp.is_undefined(l));
  auto sr = answer_sets(gp);
  REQUIRE(sr.sets.size() == 1);
  CHECK(sr.sets[0].literals == w.interp.true_set);
}

TEST_CASE("a total fixpoint is the single answer set") {
  Rng rng(23);
  for (int i = 0; i < 60; ++i) {
    GroundProgram g = random_ground_program(rng.next());
    auto w = well_founded(g);
    if (w.inconsistent) continue;
    bool total = true;
    for (const auto& l : g.universe)
      if (w.interp.is_undefined(l)) { total = false; break; }
    if (!total) continue;
    auto sr = answer_sets(g);
    if (!strong_rules_of(g).empty()) continue;  // denials can still prune
    REQUIRE(sr.sets.size() == 1);
    CHECK(sr.sets[0].literals == w.interp.true_set);
  }
}

TEST_CASE("fixpoint iteration is monotone") {
  Rng rng(29);
  for (int i = 0; i < 40; ++i) {
    GroundProgram g = random_ground_program(rng.next());
    Interpretation cur;
    for (int round = 0; round < 8; ++round) {
      auto derived = t_operator(g, cur);
      auto gus = greatest_unfounded_set(g, cur);
      Interpretation next = cur;
      next.true_set.insert(derived.begin(), derived.end());
      for (const auto& l : gus)
        if (!next.true_set.count(l)) next.false_set.insert(l);
      if (!next.consistent()) break;
      for (const auto& l : cur.true_set) CHECK(next.true_set.count(l));
      for (const auto& l : cur.false_set) CHECK(next.false_set.count(l));
      if (next.true_set == cur.true_set && next.false_set == cur.false_set) break;
      cur = std::move(next);
    }
  }
}

TEST_CASE("core intersects answer sets") {
  auto c = fixtures::noncore();
  auto gp = repair_ground(c);
  auto sr = answer_sets(gp);
  REQUIRE(sr.sets.size() == 2);
  CHECK(core(sr.sets) == std::set<Literal>{fixtures::prime("s", {})});

  CHECK(core({sr.sets[0]}) == sr.sets[0].literals);
  CHECK_THROWS_AS(core({}), std::invalid_argument);
}
