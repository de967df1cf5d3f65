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
// Text and JSON renderings of results. The JSON schema is stable and
// documented in the README so external harnesses can assert on it.

#pragma once

#include <string>

#include <json.hpp>

#include "cqa/cqa.hpp"

namespace cqa {

using json = nlohmann::json;

inline std::string tuple_to_string(const std::vector<Term>& t) {
  std::string s = "(";
  for (size_t i = 0; i < t.size(); ++i) {
    if (i) s += ",";
    s += term_to_string(t[i]);
  }
  return s + ")";
}

inline const char* mode_name(RepairMode m) {
  switch (m) {
    case RepairMode::Winslett: return "winslett";
    case RepairMode::Dalal: return "dalal";
    case RepairMode::RawDefaults: return "defaults";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Text
// ---------------------------------------------------------------------------

inline std::string render_repairs_text(const RepairsResult& r) {
  std::string s = "status: " + std::string(status_name(r.status)) + "\n";
  if (r.status != Status::Ok) return s;
  s += "answer sets: " + std::to_string(r.answer_sets.size()) + "\n";
  s += "repairs: " + std::to_string(r.repairs.size()) + "\n";
  size_t i = 0;
  for (const auto& rep : r.repairs) {
    s += "repair " + std::to_string(++i) + ": delta =";
    if (rep.deleted.empty() && rep.inserted.empty()) s += " (none)";
    for (const auto& a : rep.deleted) s += " -" + atom_to_string(a);
    for (const auto& a : rep.inserted) s += " +" + atom_to_string(a);
    s += "\n";
    for (const auto& a : rep.instance.facts) s += "  " + atom_to_string(a) + "\n";
  }
  return s;
}

inline std::string render_answers_text(const CqaResult& r) {
  std::string s = "status: " + std::string(status_name(r.status)) + "\n";
  if (r.status != Status::Ok) return s;
  s += "certified exact: " + std::string(r.certified_exact ? "yes" : "no") + "\n";
  if (r.repairs_count) s += "repairs: " + std::to_string(*r.repairs_count) + "\n";
  if (r.variables.empty()) {
    s += "truth: " + std::string(r.truth.value_or(false) ? "true" : "false") + "\n";
    return s;
  }
  s += "variables:";
  for (const auto& v : r.variables) s += " " + v;
  s += "\nanswers: " + std::to_string(r.answers.size()) + "\n";
  for (const auto& t : r.answers) s += "  " + tuple_to_string(t) + "\n";
  return s;
}

inline std::string render_core_text(const std::set<Literal>& core_lits) {
  std::string s = "core: " + std::to_string(core_lits.size()) + " literals\n";
  for (const auto& l : core_lits) s += "  " + literal_to_string(l) + "\n";
  return s;
}

inline std::string render_wfs_text(const Interpretation& w, const GroundProgram& g) {
  std::string s;
  s += "true positive literals:\n";
  for (const auto& l : w.true_set)
    if (!l.neg) s += "  " + literal_to_string(l) + "\n";
  s += "true negative literals:\n";
  for (const auto& l : w.true_set)
    if (l.neg) s += "  " + literal_to_string(l) + "\n";
  s += "undefined literals:\n";
  for (const auto& l : g.universe)
    if (w.is_undefined(l)) s += "  " + literal_to_string(l) + "\n";
  return s;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

inline json atom_list_json(const std::set<Atom>& atoms) {
  json arr = json::array();
  for (const auto& a : atoms) arr.push_back(atom_to_string(a));
  return arr;
}

// predicate -> list of argument tuples
inline json relations_json(const std::set<Atom>& atoms) {
  json out = json::object();
  for (const auto& a : atoms) {
    json tup = json::array();
    for (const auto& t : a.args) tup.push_back(term_to_string(t));
    if (!out.contains(a.pred)) out[a.pred] = json::array();
    out[a.pred].push_back(std::move(tup));
  }
  return out;
}

inline json render_repairs_json(const RepairsResult& r, RepairMode mode) {
  json out;
  out["status"] = status_name(r.status);
  out["exit_code"] = static_cast<int>(r.status);
  out["mode"] = mode_name(mode);
  if (r.status != Status::Ok) return out;
  out["answer_sets"] = r.answer_sets.size();
  out["repairs"] = json::array();
  for (const auto& rep : r.repairs) {
    json j;
    j["atoms"] = atom_list_json(rep.instance.facts);
    j["relations"] = relations_json(rep.instance.facts);
    j["inserted"] = atom_list_json(rep.inserted);
    j["deleted"] = atom_list_json(rep.deleted);
    out["repairs"].push_back(std::move(j));
  }
  return out;
}

inline json render_answers_json(const CqaResult& r) {
  json out;
  out["status"] = status_name(r.status);
  out["exit_code"] = static_cast<int>(r.status);
  if (r.status != Status::Ok) return out;
  out["certified_exact"] = r.certified_exact;
  if (r.repairs_count)
    out["repairs"] = *r.repairs_count;
  else
    out["repairs"] = nullptr;
  out["variables"] = r.variables;
  json arr = json::array();
  for (const auto& t : r.answers) {
    json tup = json::array();
    for (const auto& x : t) tup.push_back(term_to_string(x));
    arr.push_back(std::move(tup));
  }
  out["answers"] = std::move(arr);
  if (r.truth)
    out["truth"] = *r.truth;
  else
    out["truth"] = nullptr;
  return out;
}

inline json render_wfs_json(const Interpretation& w, const GroundProgram& g) {
  json out;
  json tp = json::array(), tn = json::array(), un = json::array();
  for (const auto& l : w.true_set) (l.neg ? tn : tp).push_back(literal_to_string(l));
  for (const auto& l : g.universe)
    if (w.is_undefined(l)) un.push_back(literal_to_string(l));
  out["true_positive"] = std::move(tp);
  out["true_negative"] = std::move(tn);
  out["undefined"] = std::move(un);
  return out;
}

}  // namespace cqa
