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
// The acceptance suite: every top-level behavioral guarantee of the system,
// one pass/fail line each. Exit status is the number of failing criteria.

#include <chrono>
#include <iostream>
#include <sstream>
#include <string>

#include "cqa/cqa.hpp"
#include "cqa/oracle.hpp"
#include "support/fixtures.hpp"
#include "support/properties.hpp"

using namespace cqa;
using fixtures::A;
using fixtures::I;
using fixtures::S;

namespace {

int failures = 0;

void report(int number, const std::string& name, bool ok, const std::string& detail = "") {
  std::cout << (ok ? "PASS" : "FAIL") << "  " << number << "  " << name;
  if (!ok && !detail.empty()) std::cout << "  [" << detail << "]";
  std::cout << "\n";
  if (!ok) ++failures;
}

template <typename F>
void criterion(int number, const std::string& name, F body) {
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = e.what();
  }
  report(number, name, ok, detail);
}

std::vector<DatabaseInstance> insts(const std::vector<Repair>& reps) {
  return properties::fixtures_instances(reps);
}

}  // namespace

int main() {
  criterion(1, "inclusion dependency repairs, under 0.1 s", [](std::string& detail) {
    auto c = fixtures::inclusion();
    auto t0 = std::chrono::steady_clock::now();
    auto rr = repairs_of(c.r, c.ics);
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    auto deletion = fixtures::instance_from(c.schema, {A("q", {S("b"), S("c")})});
    auto insertion = fixtures::instance_from(
        c.schema, {A("p", {S("a"), S("b")}), A("q", {S("a"), S("b")}), A("q", {S("b"), S("c")})});
    bool sets_ok =
        insts(rr.repairs) == std::vector<DatabaseInstance>{insertion, deletion} ||
        insts(rr.repairs) == std::vector<DatabaseInstance>{deletion, insertion};
    if (!sets_ok) detail = "unexpected repair set";
    if (dt >= 0.1) detail = "took " + std::to_string(dt) + " s";
    return sets_ok && dt < 0.1;
  });

  criterion(2, "salary FD: repairs, answers, K-query truths", [](std::string& detail) {
    auto c = fixtures::salary();
    Schema schema = c.schema;
    auto rr = repairs_of(c.r, c.ics);
    auto s1 = fixtures::instance_from(
        c.schema, {A("salary", {S("V.Smith"), I(5000)}), A("salary", {S("P.Jones"), I(3000)}),
                   A("salary", {S("M.Stone"), I(7000)})});
    auto s2 = fixtures::instance_from(
        c.schema, {A("salary", {S("V.Smith"), I(8000)}), A("salary", {S("P.Jones"), I(3000)}),
                   A("salary", {S("M.Stone"), I(7000)})});
    bool ok = insts(rr.repairs) == std::vector<DatabaseInstance>{s1, s2};
    if (!ok) detail = "repairs differ";

    auto q = parse_query("salary(X,Y)", schema);
    auto ans = consistent_answers(q, c.r, c.ics);
    bool ok2 = ans.answers == std::set<std::vector<Term>>{{S("P.Jones"), I(3000)},
                                                          {S("M.Stone"), I(7000)}};
    if (!ok2) detail += " answers differ";

    auto disj = parse_query("salary(\"V.Smith\",5000) | salary(\"V.Smith\",8000)", schema);
    bool ok3 = evaluate_k_query(disj, c.r, c.ics).truth == true;
    auto ex = parse_query("exists X salary(\"V.Smith\",X) & X > 4000", schema);
    bool ok4 = evaluate_k_query(ex, c.r, c.ics).truth == true;
    auto kk = parse_query("K(salary(\"V.Smith\",5000)) | K(salary(\"V.Smith\",8000))", schema);
    bool ok5 = evaluate_k_query(kk, c.r, c.ics).truth == false;
    if (!(ok3 && ok4 && ok5)) detail += " K-query truth values differ";
    return ok && ok2 && ok3 && ok4 && ok5;
  });

  criterion(3, "finite domain: the published answer set and repair", [](std::string& detail) {
    auto c = fixtures::finite_p();
    Program prog = assemble_repair_program(c.ics, c.schema, RepairMode::Winslett);
    auto gp = ground(prog, DomainDeclaration::finite(fixtures::finite_domain_abc()), &c.r);
    auto sr = answer_sets(gp);
    std::set<Literal> expected{
        Literal(Atom(kDomPred, {S("a")}, AtomKind::DomGuard)),
        Literal(Atom(kDomPred, {S("b")}, AtomKind::DomGuard)),
        Literal(Atom(kDomPred, {S("c")}, AtomKind::DomGuard)),
        Literal(A("p", {S("a")})),
        fixtures::prime("p", {S("a")}),
        fixtures::prime("p", {S("b")}),
        fixtures::prime("p", {S("c")}),
    };
    bool one = sr.sets.size() == 1 && sr.sets[0].literals == expected;
    if (!one) detail = "answer set differs";
    CqaOptions o;
    o.finite_domain = fixtures::finite_domain_abc();
    auto rr = repairs_of(c.r, c.ics, o);
    auto want = fixtures::instance_from(c.schema,
                                        {A("p", {S("a")}), A("p", {S("b")}), A("p", {S("c")})});
    bool rep = insts(rr.repairs) == std::vector<DatabaseInstance>{want};
    if (!rep) detail += " repair differs";
    return one && rep;
  });

  criterion(4, "propositional constraints: answer sets, core, fixpoint", [](std::string& detail) {
    auto c = fixtures::noncore();
    Program prog = assemble_repair_program(c.ics, c.schema, RepairMode::Winslett);
    auto gp = ground(prog, DomainDeclaration::active({}), &c.r);
    auto sr = answer_sets(gp);
    AnswerSet first(std::set<Literal>{fixtures::prime("q", {}), fixtures::prime("s", {}),
                                      fixtures::prime("r", {}, true)});
    AnswerSet second(std::set<Literal>{fixtures::prime("q", {}, true), fixtures::prime("r", {}),
                                       fixtures::prime("s", {})});
    bool sets_ok = sr.sets == std::vector<AnswerSet>{first, second};
    if (!sets_ok) detail = "answer sets differ";
    bool core_ok = core(sr.sets) == std::set<Literal>{fixtures::prime("s", {})};
    if (!core_ok) detail += " core differs";
    auto w = well_founded(gp);
    bool wfs_ok = !w.inconsistent;
    for (const auto& l : w.interp.true_set)
      if (l.atom.primed) wfs_ok = false;
    for (const auto& l : w.interp.false_set)
      if (l.atom.primed) wfs_ok = false;
    if (!wfs_ok) detail += " fixpoint decided a primed literal";
    return sets_ok && core_ok && wfs_ok;
  });

  criterion(5, "query literal in the core but beyond the fixpoint", [](std::string& detail) {
    auto c = fixtures::fd_pair();
    Schema schema = c.schema;
    auto q = parse_query("exists Y p(X,Y)", schema);
    Program prog = assemble_repair_program(c.ics, c.schema, RepairMode::Winslett);
    prog.append(compile_query_program(q.children[0], RepairMode::Winslett));
    auto gp = ground(prog, DomainDeclaration::active(active_domain(c.r, c.ics, &q)), &c.r);
    auto sr = answer_sets(gp);
    if (sr.sets.empty()) {
      detail = "no answer sets";
      return false;
    }
    Literal qa(Atom(kQueryPred, {S("a")}, AtomKind::Aux));
    bool in_core = core(sr.sets).count(qa) != 0;
    auto w = well_founded(gp);
    bool beyond = !w.interp.is_true(qa);
    bool undef = w.interp.is_undefined(qa) &&
                 w.interp.is_undefined(fixtures::prime("p", {S("a"), S("b")})) &&
                 w.interp.is_undefined(fixtures::prime("p", {S("a"), S("c")}));
    if (!in_core) detail = "query(a) missing from the core";
    if (!beyond) detail += " query(a) inside W+";
    if (!undef) detail += " undefined partition differs";
    return in_core && beyond && undef;
  });

  criterion(6, "employee FDs: repairs and the single consistent answer", [](std::string& detail) {
    auto c = fixtures::ssn();
    auto rr = repairs_of(c.r, c.ics);
    auto r1 = fixtures::instance_from(c.schema,
                                      {A("emp", {S("Irwin Koper"), S("677-223-112")}),
                                       A("emp", {S("Michael Baneman"), S("334-454-991")})});
    auto r2 = fixtures::instance_from(c.schema,
                                      {A("emp", {S("Irwin Koper"), S("952-223-564")}),
                                       A("emp", {S("Michael Baneman"), S("334-454-991")})});
    bool reps = insts(rr.repairs) == std::vector<DatabaseInstance>{r1, r2} ||
                insts(rr.repairs) == std::vector<DatabaseInstance>{r2, r1};
    if (!reps) detail = "repairs differ";
    Schema schema = c.schema;
    auto q = parse_query("emp(X,Y)", schema);
    auto ans = consistent_answers(q, c.r, c.ics);
    bool one = ans.answers ==
               std::set<std::vector<Term>>{{S("Michael Baneman"), S("334-454-991")}};
    if (!one) detail += " answers differ";
    return reps && one;
  });

  criterion(7, "cardinality repairs via weak constraints", [](std::string& detail) {
    auto c = fixtures::chain();
    CqaOptions dal;
    dal.mode = RepairMode::Dalal;
    auto rd = repairs_of(c.r, c.ics, dal);
    bool dalal_ok = rd.repairs.size() == 1 && rd.repairs[0].instance.facts.empty();
    if (!dalal_ok) detail = "dalal repairs differ";

    auto rw = repairs_of(c.r, c.ics);
    auto full = fixtures::instance_from(c.schema,
                                        {A("p", {S("a")}), A("q", {S("a")}), A("r", {S("a")})});
    DatabaseInstance empty;
    empty.schema = c.schema;
    bool wins_ok = insts(rw.repairs) == std::vector<DatabaseInstance>{empty, full};
    if (!wins_ok) detail += " winslett repairs differ";

    auto dom = active_domain(c.r, c.ics);
    auto oracle = enumerate_repairs_bruteforce(c.r, c.ics, dom, RepairMetric::Cardinality);
    bool oracle_ok = insts(oracle) == insts(rd.repairs);
    if (!oracle_ok) detail += " oracle disagrees";
    return dalal_ok && wins_ok && oracle_ok;
  });

  criterion(8, "referential constraint: null insertion and delete-only", [](std::string& detail) {
    auto c = fixtures::referential();
    auto rn = repairs_of(c.r, c.ics);
    auto del = fixtures::instance_from(c.schema, {A("p", {S("b")}), A("rel", {S("b"), S("a")})});
    auto ins = fixtures::instance_from(
        c.schema, {A("p", {S("a")}), A("p", {S("b")}), A("rel", {S("b"), S("a")}),
                   Atom("rel", {S("a"), Term::null_value()})});
    bool null_ok = rn.repairs.size() == 2 &&
                   ((insts(rn.repairs) == std::vector<DatabaseInstance>{del, ins}) ||
                    (insts(rn.repairs) == std::vector<DatabaseInstance>{ins, del}));
    if (!null_ok) detail = "null-insertion repairs differ";
    CqaOptions d;
    d.ric = RicPolicy::DeleteOnly;
    auto rd = repairs_of(c.r, c.ics, d);
    bool del_ok = insts(rd.repairs) == std::vector<DatabaseInstance>{del};
    if (!del_ok) detail += " delete-only repairs differ";
    return null_ok && del_ok;
  });

  criterion(9, "strong constraints prune to one repair", [](std::string& detail) {
    auto c = fixtures::person_ssn();
    auto base = repairs_of(c.r, c.ics);
    Program strong = fixtures::person_strong_program(c.schema);
    auto filt = repairs_of(c.r, c.ics, {}, &strong);
    bool counts = base.answer_sets.size() == 2 && filt.answer_sets.size() == 1;
    if (!counts) detail = "answer-set counts differ";
    Schema schema = c.schema;
    auto q = parse_query("exists Y emp(X,Y)", schema);
    auto ans = consistent_answers(q, c.r, c.ics, {}, &strong);
    bool names = ans.answers ==
                 std::set<std::vector<Term>>{{S("Irwin Koper")}, {S("Michael Baneman")}};
    if (!names) detail += " query answers differ";
    return counts && names;
  });

  criterion(10, "ternary constraints need the disjunctive stabilizers", [](std::string& detail) {
    auto c = fixtures::ternary();
    auto rr = repairs_of(c.r, c.ics);
    DatabaseInstance empty;
    empty.schema = c.schema;
    bool sole = insts(rr.repairs) == std::vector<DatabaseInstance>{empty};
    if (!sole) detail = "expected the empty instance as the sole repair";

    // ablation: triggers plus only the singleton-head stabilizers
    Program ablated;
    for (const auto& ic : c.ics) {
      Rule trig;
      trig.kind = RuleKind::Triggering;
      for (const auto& a : ic.positives) trig.head.push_back(fixtures::prime(a.pred, a.args));
      for (const auto& a : ic.negatives)
        trig.head.push_back(fixtures::prime(a.pred, a.args, true));
      for (const auto& a : ic.negatives) trig.body.emplace_back(Literal(a), false);
      for (const auto& a : ic.positives) trig.body.emplace_back(Literal(a), true);
      ablated.add(ensure_safe(trig));
      for (const auto& r : expand_universal(ic, StabilizerPolicy::Naive))
        if (r.head.size() == 1) ablated.add(r);
    }
    ablated = add_persistence(std::move(ablated), c.schema, RepairMode::Winslett);
    auto gp = ground(ablated, DomainDeclaration::active(active_domain(c.r, c.ics)), &c.r);
    auto sr = answer_sets(gp);
    bool no_empty = true;
    for (const auto& s : sr.sets)
      if (project_repair(s, c.r, RepairMode::Winslett).instance.facts.empty()) no_empty = false;
    if (!no_empty) detail += " ablated program still reaches the empty repair";
    return sole && no_empty;
  });

  criterion(11, "transitivity: guarded exact, naive overshoots as published",
            [](std::string& detail) {
    auto c = fixtures::transitivity();
    auto guarded = repairs_of(c.r, c.ics);
    auto r1 = fixtures::instance_from(c.schema, {A("p", {S("a"), S("b")})});
    auto r2 = fixtures::instance_from(c.schema, {A("p", {S("b"), S("c")})});
    auto r3 = fixtures::instance_from(
        c.schema,
        {A("p", {S("a"), S("b")}), A("p", {S("b"), S("c")}), A("p", {S("a"), S("c")})});
    std::set<DatabaseInstance> expect{r1, r2, r3};
    auto guarded_insts = insts(guarded.repairs);
    std::set<DatabaseInstance> got(guarded_insts.begin(), guarded_insts.end());
    bool guarded_ok = got == expect;
    if (!guarded_ok) detail = "guarded repairs differ";

    CqaOptions naive;
    naive.stabilizer = StabilizerPolicy::Naive;
    auto loose = repairs_of(c.r, c.ics, naive);
    auto loose_insts = insts(loose.repairs);
    std::set<DatabaseInstance> projections(loose_insts.begin(), loose_insts.end());
    bool contains_repairs = true;
    for (const auto& want : expect) contains_repairs &= projections.count(want) != 0;
    auto full = fixtures::instance_from(
        c.schema, {A("p", {S("a"), S("a")}), A("p", {S("a"), S("b")}), A("p", {S("a"), S("c")}),
                   A("p", {S("b"), S("a")}), A("p", {S("b"), S("b")}), A("p", {S("b"), S("c")}),
                   A("p", {S("c"), S("a")}), A("p", {S("c"), S("b")}), A("p", {S("c"), S("c")})});
    bool has_published_spurious = projections.count(full) != 0;
    size_t spurious = projections.size() - 3;
    bool count_ok = contains_repairs && has_published_spurious && spurious == 6;
    if (!count_ok)
      detail += " naive spurious projections = " + std::to_string(spurious) +
                ", pinned expectation 6; exhaustive enumeration of this program gives 7"
                " (10 answer sets in total, confirmed by an independent implementation;"
                " see README, known expected failure)";
    return guarded_ok && count_ok;
  });

  criterion(12, "randomized property suite", [](std::string& detail) {
    std::string log;
    size_t f = 0;
    f += properties::repairs_vs_oracle(101, 200, &log);
    f += properties::solver_vs_oracle(202, 200, &log);
    f += properties::wfs_core_equivalence(303, 120, &log);
    f += properties::change_program_properties(404, 120, &log);
    if (f > 0) detail = std::to_string(f) + " failing cases; first lines: " + log.substr(0, 200);
    return f == 0;
  });

  std::cout << (failures == 0 ? "all criteria passed"
                              : std::to_string(failures) + " criterion(s) failed")
            << "\n";
  return failures;
}
