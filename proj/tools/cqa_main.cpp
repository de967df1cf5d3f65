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

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cqa/cqa.hpp"
#include "cqa/oracle.hpp"
#include "cqa/random_corpus.hpp"
#include "cqa/report.hpp"

namespace {

using namespace cqa;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CommonArgs {
  std::string facts_file;
  std::string ics_file;
  std::string strong_file;
  std::string query_str;
  std::string query_file;
  std::string mode = "winslett";
  std::string ric = "null";
  std::string stabilizer = "guarded";
  std::string domain = "active";
  std::string output = "text";
  std::uint64_t seed = 0;
  std::uint64_t max_branch = 0;  // 0: default / env
  bool use_wfs = false;

  void attach(CLI::App* cmd, bool with_query) {
    cmd->add_option("facts", facts_file, "ground facts file (.facts)")->required();
    cmd->add_option("--ics", ics_file, "integrity constraints file (.ic)");
    cmd->add_option("--strong", strong_file,
                    "strong-constraint program: denials plus auxiliary rules and facts");
    cmd->add_option("--mode", mode, "repair semantics: winslett|dalal|defaults");
    cmd->add_option("--ric", ric, "referential constraint policy: null|delete");
    cmd->add_option("--stabilizer", stabilizer, "stabilizer policy for n-ary ICs: guarded|naive");
    cmd->add_option("--domain", domain, "active, or a path to a finite domain file (.dom)");
    cmd->add_option("--output", output, "report format: text|json");
    cmd->add_option("--max-branch", max_branch, "solver branch-node budget");
    if (with_query) {
      cmd->add_option("--q", query_str, "query string");
      cmd->add_option("--query-file", query_file, "query file (.q)");
    }
  }

  CqaOptions options() const {
    CqaOptions o;
    if (mode == "winslett") o.mode = RepairMode::Winslett;
    else if (mode == "dalal") o.mode = RepairMode::Dalal;
    else if (mode == "defaults") o.mode = RepairMode::RawDefaults;
    else throw std::invalid_argument("unknown mode: " + mode);
    if (ric == "null") o.ric = RicPolicy::NullInsertion;
    else if (ric == "delete") o.ric = RicPolicy::DeleteOnly;
    else throw std::invalid_argument("unknown ric policy: " + ric);
    if (stabilizer == "guarded") o.stabilizer = StabilizerPolicy::Guarded;
    else if (stabilizer == "naive") o.stabilizer = StabilizerPolicy::Naive;
    else throw std::invalid_argument("unknown stabilizer policy: " + stabilizer);
    if (domain != "active") o.finite_domain = parse_domain(read_file(domain), domain);
    if (max_branch > 0) {
      o.limits.max_branch_nodes = max_branch;
    } else if (const char* env = std::getenv("CQA_MAX_BRANCH")) {
      o.limits.max_branch_nodes = std::strtoull(env, nullptr, 10);
    }
    return o;
  }
};

struct Inputs {
  DatabaseInstance instance;
  std::vector<Constraint> ics;
  std::optional<Program> strong;
  std::optional<KQuery> query;
  Schema schema;
};

Inputs load(const CommonArgs& args) {
  Inputs in;
  in.instance = parse_instance(read_file(args.facts_file), {}, args.facts_file);
  in.schema = in.instance.schema;
  if (!args.ics_file.empty())
    in.ics = parse_constraints(read_file(args.ics_file), in.schema, args.ics_file);
  std::string qtext = args.query_str;
  if (qtext.empty() && !args.query_file.empty()) qtext = read_file(args.query_file);
  if (!qtext.empty()) in.query = parse_query(qtext, in.schema, args.query_file);
  if (!args.strong_file.empty())
    in.strong = parse_program(read_file(args.strong_file), &in.schema, args.strong_file);
  in.instance.schema = in.schema;  // predicates introduced by ICs or the query
  return in;
}

int run_repair(const CommonArgs& args) {
  Inputs in = load(args);
  CqaOptions opts = args.options();
  RepairsResult res = repairs_of(in.instance, in.ics, opts, in.strong ? &*in.strong : nullptr);
  if (args.output == "json")
    std::cout << render_repairs_json(res, opts.mode).dump(2) << "\n";
  else
    std::cout << render_repairs_text(res);
  return static_cast<int>(res.status);
}

int run_query(const CommonArgs& args) {
  Inputs in = load(args);
  if (!in.query) throw std::invalid_argument("query command needs --q or --query-file");
  CqaOptions opts = args.options();
  CqaResult res = args.use_wfs
                      ? wfs_consistent_answers(*in.query, in.instance, in.ics, opts,
                                               in.strong ? &*in.strong : nullptr)
                      : evaluate_k_query(*in.query, in.instance, in.ics, opts,
                                         in.strong ? &*in.strong : nullptr);
  if (args.output == "json")
    std::cout << render_answers_json(res).dump(2) << "\n";
  else
    std::cout << render_answers_text(res);
  return static_cast<int>(res.status);
}

struct GroundOutputs {
  GroundProgram gp;
  Program program;
  DomainDeclaration domain{};
};

GroundOutputs build_ground(const Inputs& in, const CqaOptions& opts) {
  GroundOutputs out;
  const KQuery* basic = nullptr;
  Program qprog;
  if (in.query) {
    basic = &detail::basic_part(*in.query);
    qprog = compile_query_program(*basic, opts.mode);
  }
  auto pipe = detail::build_pipeline(in.instance, in.ics, opts,
                                     in.strong ? &*in.strong : nullptr, basic,
                                     in.query ? &qprog : nullptr);
  out.program = pipe.program;
  out.domain = pipe.domain;
  out.gp = ground(pipe.program, pipe.domain, &in.instance);
  return out;
}

int run_core(const CommonArgs& args) {
  Inputs in = load(args);
  CqaOptions opts = args.options();
  GroundOutputs g = build_ground(in, opts);
  SolveResult sr = answer_sets(g.gp, opts.mode == RepairMode::RawDefaults, opts.limits);
  Status st = detail::map_status(sr);
  if (st != Status::Ok) {
    std::cout << "status: " << status_name(st) << "\n";
    return static_cast<int>(st);
  }
  std::vector<AnswerSet> sets =
      opts.mode == RepairMode::Dalal ? optimize_weak(sr.sets, weak_rules_of(g.gp)) : sr.sets;
  auto c = core(sets);
  if (args.output == "json") {
    json j;
    j["status"] = status_name(Status::Ok);
    j["answer_sets"] = sets.size();
    json lits = json::array();
    for (const auto& l : c) lits.push_back(literal_to_string(l));
    j["core"] = std::move(lits);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "status: ok\nanswer sets: " << sets.size() << "\n" << render_core_text(c);
  }
  return 0;
}

int run_wfs(const CommonArgs& args) {
  Inputs in = load(args);
  CqaOptions opts = args.options();
  GroundOutputs g = build_ground(in, opts);
  WfsResult w = well_founded(g.gp);
  if (w.inconsistent) {
    std::cout << "status: " << status_name(Status::InconsistentProgram) << "\n";
    return static_cast<int>(Status::InconsistentProgram);
  }
  if (args.output == "json")
    std::cout << render_wfs_json(w.interp, g.gp).dump(2) << "\n";
  else
    std::cout << render_wfs_text(w.interp, g.gp);
  return 0;
}

int run_ground(const CommonArgs& args) {
  Inputs in = load(args);
  GroundOutputs g = build_ground(in, args.options());
  Program p;
  for (const auto& r : g.gp.rules) p.add(r);
  std::cout << emit_dlv(p);
  return 0;
}

int run_compile(const CommonArgs& args) {
  Inputs in = load(args);
  GroundOutputs g = build_ground(in, args.options());
  std::cout << emit_dlv(with_facts(g.program, in.instance, g.domain.constants));
  return 0;
}

int run_oracle_check(std::uint64_t seed, std::uint64_t count) {
  size_t failures = 0;
  for (std::uint64_t i = 0; i < count; ++i) {
    RandomCase rc = random_bic_case(seed * 1000003ull + i);
    auto expected = enumerate_repairs_bruteforce(rc.instance, rc.ics, rc.domain);
    CqaOptions fin;
    fin.finite_domain = rc.domain;
    auto got = repairs_of(rc.instance, rc.ics, fin);
    std::vector<DatabaseInstance> a, b;
    for (const auto& rep : expected) a.push_back(rep.instance);
    for (const auto& rep : got.repairs) b.push_back(rep.instance);
    if (a != b) {
      ++failures;
      std::cout << "MISMATCH repairs at case " << i << "\n";
    }
  }
  for (std::uint64_t i = 0; i < count; ++i) {
    GroundProgram g = random_ground_program(seed * 7777779ull + i);
    auto expected = enumerate_answer_sets_naive(g);
    auto got = answer_sets(g);
    // a contradictory program with no consistent answer set at all reports
    // the inconsistent status; the oracle sees the same empty family
    if (got.status == SolveStatus::Inconsistent && expected.empty()) continue;
    if (got.status != SolveStatus::Ok || expected != got.sets) {
      ++failures;
      std::cout << "MISMATCH answer sets at case " << i << "\n";
    }
  }
  std::cout << (failures == 0 ? "PASS" : "FAIL") << ": " << count
            << " repair cases and " << count << " ground-program cases checked\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"consistent query answering over inconsistent databases"};
  app.require_subcommand(1);

  CommonArgs repair_args, query_args, core_args, wfs_args, ground_args, compile_args;
  std::uint64_t oc_seed = 1, oc_count = 50;

  auto* c_repair = app.add_subcommand("repair", "compute the repairs of an instance");
  repair_args.attach(c_repair, false);
  auto* c_query = app.add_subcommand("query", "consistent answers to a query");
  query_args.attach(c_query, true);
  c_query->add_flag("--wfs", query_args.use_wfs,
                    "use the polynomial well-founded under-approximation");
  auto* c_core = app.add_subcommand("core", "intersection of all answer sets");
  core_args.attach(c_core, true);
  auto* c_wfs = app.add_subcommand("wfs", "well-founded interpretation partitions");
  wfs_args.attach(c_wfs, true);
  auto* c_ground = app.add_subcommand("ground", "emit the ground program");
  ground_args.attach(c_ground, true);
  auto* c_compile = app.add_subcommand("compile", "emit the repair program with facts");
  compile_args.attach(c_compile, true);
  auto* c_oracle = app.add_subcommand("oracle-check", "randomized equivalence suites");
  c_oracle->add_option("--seed", oc_seed, "random seed");
  c_oracle->add_option("--count", oc_count, "cases per suite");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_repair->parsed()) return run_repair(repair_args);
    if (c_query->parsed()) return run_query(query_args);
    if (c_core->parsed()) return run_core(core_args);
    if (c_wfs->parsed()) return run_wfs(wfs_args);
    if (c_ground->parsed()) return run_ground(ground_args);
    if (c_compile->parsed()) return run_compile(compile_args);
    if (c_oracle->parsed()) return run_oracle_check(oc_seed, oc_count);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(cqa::Status::InputError);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(cqa::Status::InputError);
  }
  return 0;
}
