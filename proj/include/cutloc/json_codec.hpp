// Copyright 2026 The cutloc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON encodings shared by the graph file, transcripts and the session
// service. Object keys keep insertion order so emitted text is stable.

#pragma once

#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cutloc/cutset.hpp"
#include "cutloc/error.hpp"
#include "cutloc/graph.hpp"
#include "cutloc/localizer.hpp"
#include "cutloc/oracles.hpp"

namespace cutloc {

using Json = nlohmann::ordered_json;

inline Json scalar_to_json(const Scalar& s) {
  if (s.is_integer()) return s.as_integer();
  if (s.is_double()) return s.as_double();
  if (s.is_bool()) return s.as_bool();
  return s.as_string();
}

inline Scalar scalar_from_json(const Json& j) {
  if (j.is_number_integer()) return Scalar(j.get<std::int64_t>());
  if (j.is_number_float()) return Scalar(j.get<double>());
  if (j.is_boolean()) return Scalar(j.get<bool>());
  if (j.is_string()) return Scalar(j.get<std::string>());
  throw Error(ErrorCode::kParse, "value must be a number, string or boolean: " + j.dump());
}

inline Json label_to_json(const EdgeLabel& label) {
  if (label.kind == EdgeKind::kControl && label.is_well_formed()) return "true";
  return Json{{"var", label.var}, {"value", scalar_to_json(label.value)}};
}

inline Json atom_to_json(const Atom& atom) {
  return Json{{"edge_key", atom.key.to_string()}, {"label", label_to_json(atom.label)}};
}

inline Json atoms_to_json(const std::vector<Atom>& atoms) {
  Json array = Json::array();
  for (const auto& atom : atoms) array.push_back(atom_to_json(atom));
  return array;
}

inline Json vertex_set_to_json(const VertexSet& set) {
  Json array = Json::array();
  for (VertexId v : set) array.push_back(v);
  return array;
}

inline VertexSet vertex_set_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::kParse, "expected an array of vertex ids");
  VertexSet set;
  for (const auto& item : j) {
    if (!item.is_number_unsigned()) throw Error(ErrorCode::kParse, "bad vertex id " + item.dump());
    set.insert(item.get<VertexId>());
  }
  return set;
}

inline Json cut_to_json(const Cut& cut) { return Json{{"downset", vertex_set_to_json(cut.downset())}}; }

inline Json verdict_to_json(const StateVerdict& v) {
  Json per_edge = Json::object();
  for (const auto& [key, verdict] : v.per_edge) {
    per_edge[key.to_string()] = std::string(edge_verdict_name(verdict));
  }
  Json j{{"per_edge", std::move(per_edge)}, {"global", v.global_violated ? "violated" : "ok"}};
  if (!v.violated_predicates.empty()) j["predicates"] = v.violated_predicates;
  return j;
}

inline StateVerdict verdict_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kParse, "verdict must be an object");
  StateVerdict v;
  auto per_edge = j.find("per_edge");
  if (per_edge == j.end() || !per_edge->is_object()) {
    throw Error(ErrorCode::kParse, "verdict needs a per_edge object");
  }
  for (const auto& [key_text, value] : per_edge->items()) {
    auto key = EdgeKey::parse(key_text);
    if (!key) throw Error(ErrorCode::kParse, "bad edge key '" + key_text + "'");
    auto verdict = value.is_string() ? parse_edge_verdict(value.get<std::string>()) : std::nullopt;
    if (!verdict) throw Error(ErrorCode::kParse, "bad edge verdict " + value.dump());
    v.per_edge.emplace(std::move(*key), *verdict);
  }
  auto global = j.find("global");
  if (global == j.end() || !global->is_string() ||
      (*global != "ok" && *global != "violated")) {
    throw Error(ErrorCode::kParse, "global must be \"ok\" or \"violated\"");
  }
  v.global_violated = *global == "violated";
  if (auto preds = j.find("predicates"); preds != j.end()) {
    if (!preds->is_array()) throw Error(ErrorCode::kParse, "predicates must be an array");
    for (const auto& p : *preds) {
      if (!p.is_string()) throw Error(ErrorCode::kParse, "predicate ids must be strings");
      v.violated_predicates.push_back(p.get<std::string>());
    }
  }
  return v;
}

inline Json result_to_json(const LocalizationResult& r) {
  Json j{{"kind", std::string(result_kind_name(r))}};
  if (const auto* missing = std::get_if<MissingOperation>(&r)) {
    j["at"] = cut_to_json(missing->at);
  } else if (const auto* faulty = std::get_if<FaultyVertices>(&r)) {
    j["vertices"] = vertex_set_to_json(faulty->vertices);
    Json evidence = Json::array();
    for (const auto& key : faulty->evidence) evidence.push_back(key.to_string());
    j["evidence"] = std::move(evidence);
  } else {
    const auto& sections = std::get<MissingCriticalSections>(r);
    j["vertices"] = vertex_set_to_json(sections.vertices);
    j["atoms"] = atoms_to_json(sections.atoms);
  }
  return j;
}

// One line per examination, then the result line.
inline std::string transcript_to_jsonl(const std::vector<TranscriptEntry>& transcript,
                                       const LocalizationResult& result) {
  std::string text;
  for (std::size_t k = 0; k < transcript.size(); ++k) {
    Json line{{"step", k + 1},
              {"cut", cut_to_json(transcript[k].cut)},
              {"verdict", verdict_to_json(transcript[k].verdict)}};
    text += line.dump() + "\n";
  }
  text += Json{{"result", result_to_json(result)}}.dump() + "\n";
  return text;
}

// Reads the examination lines of a transcript back into a script.
inline ScriptedOracle scripted_oracle_from_transcript(const std::string& text) {
  ScriptedOracle oracle;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto j = Json::parse(line);
      if (j.contains("result")) continue;
      oracle.add(vertex_set_from_json(j.at("cut").at("downset")), verdict_from_json(j.at("verdict")));
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::kParse, "transcript line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorCode::kParse, "transcript line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return oracle;
}

}  // namespace cutloc
