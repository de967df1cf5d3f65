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
// The randomized equivalence sweeps shared by the unit suite and the
// acceptance binary. Each returns the number of failing cases.

#pragma once

#include <string>

#include "cqa/cqa.hpp"
#include "cqa/oracle.hpp"
#include "cqa/random_corpus.hpp"

namespace properties {

using namespace cqa;

inline std::vector<DatabaseInstance> fixtures_instances(const std::vector<Repair>& reps) {
  std::vector<DatabaseInstance> out;
  for (const auto& r : reps) out.push_back(r.instance);
  return out;
}

// (a) repairs_of against the definition-level oracle, both metrics, and
// (g) dalal repairs = minimum-cardinality winslett repairs.
inline size_t repairs_vs_oracle(std::uint64_t seed, size_t count, std::string* log = nullptr) {
  size_t failures = 0;
  for (size_t i = 0; i < count; ++i) {
    RandomCase rc = random_bic_case(seed * 1000003ull + i);
    auto oracle_incl = enumerate_repairs_bruteforce(rc.instance, rc.ics, rc.domain,
                                                    RepairMetric::SetInclusion);
    CqaOptions fin;
    fin.finite_domain = rc.domain;  // must-hold constraints are not domain independent
    auto got = repairs_of(rc.instance, rc.ics, fin);
    if (got.status != Status::Ok ||
        fixtures_instances(oracle_incl) != fixtures_instances(got.repairs)) {
      ++failures;
      if (log) *log += "repair mismatch (set inclusion) at case " + std::to_string(i) + "\n";
      continue;
    }
    auto oracle_card = enumerate_repairs_bruteforce(rc.instance, rc.ics, rc.domain,
                                                    RepairMetric::Cardinality);
    CqaOptions dal = fin;
    dal.mode = RepairMode::Dalal;
    auto got_dal = repairs_of(rc.instance, rc.ics, dal);
    if (got_dal.status != Status::Ok ||
        fixtures_instances(oracle_card) != fixtures_instances(got_dal.repairs)) {
      ++failures;
      if (log) *log += "repair mismatch (cardinality) at case " + std::to_string(i) + "\n";
      continue;
    }
    // dalal == minimum-cardinality subset of winslett
    size_t best = SIZE_MAX;
    for (const auto& rep : got.repairs)
      best = std::min(best, rep.inserted.size() + rep.deleted.size());
    std::vector<DatabaseInstance> mincard;
    for (const auto& rep : got.repairs)
      if (rep.inserted.size() + rep.deleted.size() == best) mincard.push_back(rep.instance);
    if (mincard != fixtures_instances(got_dal.repairs)) {
      ++failures;
      if (log) *log += "dalal is not the min-cardinality slice at case " + std::to_string(i) + "\n";
    }
  }
  return failures;
}

// (b) solver against the naive enumeration oracle, with and without the
// e-answer reading of defaults; (c) the fixpoint stays inside the core; and
// (e) every answer set is consistent and satisfies the rules.
inline size_t solver_vs_oracle(std::uint64_t seed, size_t count, std::string* log = nullptr) {
  size_t failures = 0;
  for (size_t i = 0; i < count; ++i) {
    bool defaults = (i % 3) == 0;
    GroundProgram g = random_ground_program(seed * 7777779ull + i, defaults);
    for (bool emode : {false, true}) {
      if (emode && !defaults) continue;
      auto expected = enumerate_answer_sets_naive(g, emode);
      auto got = answer_sets(g, emode);
      bool consistent_exp = true;
      if (got.status == SolveStatus::Inconsistent && expected.empty()) consistent_exp = false;
      if (consistent_exp && (got.status != SolveStatus::Ok || expected != got.sets)) {
        ++failures;
        if (log) *log += "answer-set mismatch at case " + std::to_string(i) + "\n";
        continue;
      }
      auto w = well_founded(g);
      if (!w.inconsistent && !got.sets.empty()) {
        for (const auto& l : w.interp.true_set)
          for (const auto& s : got.sets)
            if (!s.contains(l)) {
              ++failures;
              if (log) *log += "W+ escaped the core at case " + std::to_string(i) + "\n";
            }
        for (const auto& l : w.interp.false_set)
          for (const auto& s : got.sets)
            if (s.contains(l)) {
              ++failures;
              if (log) *log += "W- met an answer set at case " + std::to_string(i) + "\n";
            }
      }
      for (const auto& s : got.sets) {
        for (const auto& l : s.literals)
          if (s.contains(complement(l))) ++failures;
        if (!emode && !is_model_of(g, s.literals)) ++failures;
      }
    }
  }
  return failures;
}

// (d) for FD-plus-unary constraint sets the fixpoint reaches the core, its
// core literals enter within three iterations, and (c) W stays inside it.
inline size_t wfs_core_equivalence(std::uint64_t seed, size_t count, std::string* log = nullptr) {
  size_t failures = 0;
  for (size_t i = 0; i < count; ++i) {
    RandomCase rc = random_fd_unary_case(seed * 424243ull + i);
    Program prog = assemble_repair_program(rc.ics, rc.instance.schema, RepairMode::Winslett);
    auto gp = ground(prog, DomainDeclaration::finite(rc.domain), &rc.instance);
    auto sr = answer_sets(gp);
    if (sr.status != SolveStatus::Ok || sr.sets.empty()) {
      ++failures;
      if (log) *log += "FD-unary program without answer sets at case " + std::to_string(i) + "\n";
      continue;
    }
    auto w = well_founded(gp);
    if (w.inconsistent) {
      ++failures;
      continue;
    }
    auto core_lits = core(sr.sets);
    for (const auto& l : w.interp.true_set)
      if (!core_lits.count(l)) {
        ++failures;
        if (log) *log += "W exceeded the core at case " + std::to_string(i) + "\n";
      }
    if (core_lits != w.interp.true_set) {
      ++failures;
      if (log)
        *log += "core differs from the fixpoint at case " + std::to_string(i) + "\n";
      continue;
    }
    for (const auto& l : core_lits) {
      auto it = w.interp.entered_at.find(l);
      if (it == w.interp.entered_at.end() || it->second > 3) {
        ++failures;
        if (log) *log += "core literal entered after round 3 at case " + std::to_string(i) + "\n";
      }
    }
  }
  return failures;
}

// (f) the projected instance of every answer set of the change program
// satisfies the constraints; plus the model property of the maximal
// candidate set and the change program's nonemptiness.
inline size_t change_program_properties(std::uint64_t seed, size_t count,
                                        std::string* log = nullptr) {
  size_t failures = 0;
  for (size_t i = 0; i < count; ++i) {
    RandomCase rc = random_bic_case(seed * 555557ull + i);
    Program delta_prog = build_change_program(rc.ics, rc.instance.schema);
    auto gp = ground(delta_prog, DomainDeclaration::active(rc.domain), &rc.instance);
    auto sr = answer_sets(gp);
    if (sr.status != SolveStatus::Ok || sr.sets.empty()) {
      ++failures;
      if (log) *log += "change program with no answer set at case " + std::to_string(i) + "\n";
      continue;
    }
    for (const auto& s : sr.sets) {
      auto rep = project_repair(s, rc.instance, RepairMode::Dalal);  // the I(S) merge
      if (!satisfies_all(rep.instance, rc.ics, rc.domain)) {
        ++failures;
        if (log) *log += "I(S) violates the constraints at case " + std::to_string(i) + "\n";
      }
    }
    // S(r, r') is a model for every consistent r'; minimal ones recover r'
    auto universe = candidate_universe(rc.instance.schema, rc.domain);
    if (universe.size() <= 13) {
      auto repairs = enumerate_repairs_bruteforce(rc.instance, rc.ics, rc.domain);
      for (const auto& rep : repairs) {
        auto s = maximal_candidate_set(rc.instance, rep.instance, universe, rc.domain);
        if (!is_model_of(gp, s)) {
          ++failures;
          if (log) *log += "S(r,r') is not a model at case " + std::to_string(i) + "\n";
        }
        for (const auto& as : sr.sets) {
          bool inside = true;
          for (const auto& l : as.literals)
            if (!s.count(l)) { inside = false; break; }
          if (inside) {
            auto proj = project_repair(as, rc.instance, RepairMode::Dalal);
            if (!(proj.instance == rep.instance)) {
              ++failures;
              if (log)
                *log += "answer set inside S(r,r') projects elsewhere at case " +
                        std::to_string(i) + "\n";
            }
          }
        }
      }
    }
  }
  return failures;
}


// Consistent answers checked against the definition: a tuple answers the
// query consistently iff it answers it in every repair the oracle
// enumerates. Exercises the query translation end to end in both repair
// semantics, and the certified fixpoint path where it applies.
inline size_t answers_vs_definition(std::uint64_t seed, size_t count, std::string* log = nullptr) {
  size_t failures = 0;
  for (size_t i = 0; i < count; ++i) {
    RandomCase rc = random_bic_case(seed * 999979ull + i);
    Schema schema = rc.instance.schema;
    std::vector<std::string> queries = {"u(X)", "w(X)", "w(X) & !u(X)", "u(X) | w(X)"};
    if (schema.contains("p")) queries.push_back("exists Y p(X,Y)");

    for (const auto& qtext : queries) {
      Schema qschema = schema;
      KQuery q = parse_query(qtext, qschema);
      for (auto metric : {RepairMetric::SetInclusion, RepairMetric::Cardinality}) {
        auto repairs = enumerate_repairs_bruteforce(rc.instance, rc.ics, rc.domain, metric);
        if (repairs.empty()) continue;
        std::set<std::vector<Term>> expected =
            basic_query_answers(q.children[0], repairs[0].instance, rc.domain);
        for (size_t k = 1; k < repairs.size() && !expected.empty(); ++k) {
          auto ext = basic_query_answers(q.children[0], repairs[k].instance, rc.domain);
          std::set<std::vector<Term>> inter;
          for (const auto& t : expected)
            if (ext.count(t)) inter.insert(t);
          expected = std::move(inter);
        }
        CqaOptions o;
        o.finite_domain = rc.domain;
        o.mode = metric == RepairMetric::Cardinality ? RepairMode::Dalal : RepairMode::Winslett;
        auto got = consistent_answers(q, rc.instance, rc.ics, o);
        if (got.status != Status::Ok || got.answers != expected) {
          ++failures;
          if (log)
            *log += "answer mismatch for '" + qtext + "' (" +
                    (o.mode == RepairMode::Dalal ? "dalal" : "winslett") + ") at case " +
                    std::to_string(i) + "\n";
        }
      }
    }
  }
  return failures;
}

// The fixpoint path is exact on its certified fragment: FD-plus-unary
// constraints with non-existential conjunctive queries.
inline size_t wfs_certified_exactness(std::uint64_t seed, size_t count,
                                      std::string* log = nullptr) {
  size_t failures = 0;
  for (size_t i = 0; i < count; ++i) {
    RandomCase rc = random_fd_unary_case(seed * 31337ull + i);
    Schema schema = rc.instance.schema;
    for (const char* qtext : {"s(X,Y)", "u(X)", "s(X,Y) & u(X)"}) {
      Schema qschema = schema;
      KQuery q = parse_query(qtext, qschema);
      CqaOptions o;
      o.finite_domain = rc.domain;
      auto exact = consistent_answers(q, rc.instance, rc.ics, o);
      auto approx = wfs_consistent_answers(q, rc.instance, rc.ics, o);
      if (exact.status != Status::Ok) {
        ++failures;
        continue;
      }
      if (!approx.certified_exact) {
        ++failures;
        if (log) *log += "missing certification at case " + std::to_string(i) + "\n";
        continue;
      }
      if (approx.answers != exact.answers) {
        ++failures;
        if (log)
          *log += "certified fixpoint answers differ for '" + std::string(qtext) +
                  "' at case " + std::to_string(i) + "\n";
      }
    }
  }
  return failures;
}

}  // namespace properties
