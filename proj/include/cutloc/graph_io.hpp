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

// Line-delimited JSON graph files:
//
//   {"type":"graph","root":0,"deterministic":true}
//   {"type":"vertex","id":N,"desc":"..."}                 (one per vertex)
//   {"type":"edge","src":N,"dst":M,"kind":"data","var":"x","value":...}
//   {"type":"edge","src":N,"dst":M,"kind":"control"}
//
// Vertices precede edges; unknown fields are ignored. Structural problems
// (cycles, duplicate keys, ...) are not parse errors: they surface through
// validate_graph() on the loaded graph.

#pragma once

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "cutloc/error.hpp"
#include "cutloc/graph.hpp"
#include "cutloc/json_codec.hpp"

namespace cutloc {

inline std::string graph_to_jsonl(const ExecutionGraph& g) {
  std::string text = Json{{"type", "graph"}, {"root", kRootVertex}, {"deterministic", g.deterministic()}}
                         .dump() + "\n";
  for (const auto& v : g.vertices()) {
    text += Json{{"type", "vertex"}, {"id", v.id}, {"desc", v.desc}}.dump() + "\n";
  }
  for (const auto& e : g.edges()) {
    Json line{{"type", "edge"}, {"src", e.src}, {"dst", e.dst},
              {"kind", std::string(edge_kind_name(e.label.kind))}};
    if (e.label.kind == EdgeKind::kData) {
      line["var"] = e.label.var;
      line["value"] = scalar_to_json(e.label.value);
    } else if (!e.label.is_well_formed()) {
      if (!e.label.var.empty()) line["var"] = e.label.var;
      line["value"] = scalar_to_json(e.label.value);
    }
    text += line.dump() + "\n";
  }
  return text;
}

inline ExecutionGraph graph_from_jsonl(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  bool deterministic = true;
  bool seen_edge = false;
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;

  auto fail = [&line_no](const std::string& what) -> Error {
    return Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": " + what);
  };
  auto vertex_id = [&](const Json& j, const char* field) {
    auto it = j.find(field);
    if (it == j.end() || !it->is_number_unsigned() ||
        it->get<std::uint64_t>() > std::numeric_limits<VertexId>::max()) {
      throw fail(std::string("missing or invalid '") + field + "'");
    }
    return it->get<VertexId>();
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw fail(e.what());
    }
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
      throw fail("expected an object with a string 'type'");
    }
    auto type = j["type"].get<std::string>();
    if (!have_header) {
      if (type != "graph") throw fail("first line must be the graph header");
      if (vertex_id(j, "root") != kRootVertex) throw fail("root must be 0");
      if (auto det = j.find("deterministic"); det != j.end()) {
        if (!det->is_boolean()) throw fail("'deterministic' must be a boolean");
        deterministic = det->get<bool>();
      }
      have_header = true;
      continue;
    }
    if (type == "vertex") {
      if (seen_edge) throw fail("vertex after edges");
      Vertex v{vertex_id(j, "id"), {}};
      if (auto desc = j.find("desc"); desc != j.end()) {
        if (!desc->is_string()) throw fail("'desc' must be a string");
        v.desc = desc->get<std::string>();
      }
      vertices.push_back(std::move(v));
    } else if (type == "edge") {
      seen_edge = true;
      Edge e;
      e.src = vertex_id(j, "src");
      e.dst = vertex_id(j, "dst");
      auto kind_it = j.find("kind");
      auto kind = kind_it != j.end() && kind_it->is_string()
                      ? parse_edge_kind(kind_it->get<std::string>())
                      : std::nullopt;
      if (!kind) throw fail("'kind' must be \"data\" or \"control\"");
      e.label.kind = *kind;
      auto var = j.find("var");
      auto value = j.find("value");
      if (var != j.end()) {
        if (!var->is_string()) throw fail("'var' must be a string");
        e.label.var = var->get<std::string>();
      }
      if (*kind == EdgeKind::kData) {
        if (var == j.end()) throw fail("data edge without 'var'");
        if (value == j.end()) throw fail("data edge without 'value'");
      }
      if (value != j.end()) {
        try {
          e.label.value = scalar_from_json(*value);
        } catch (const Error& err) {
          throw fail(err.what());
        }
      } else {
        e.label.value = true;
      }
      edges.push_back(std::move(e));
    } else if (type == "graph") {
      throw fail("duplicate graph header");
    } else {
      throw fail("unknown line type '" + type + "'");
    }
  }
  if (!have_header) throw Error(ErrorCode::kParse, "missing graph header line");
  return ExecutionGraph(std::move(vertices), std::move(edges), deterministic);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

inline ExecutionGraph load_graph(const std::filesystem::path& path) {
  return graph_from_jsonl(read_file(path));
}

inline void save_graph(const ExecutionGraph& g, const std::filesystem::path& path) {
  write_file(path, graph_to_jsonl(g));
}

}  // namespace cutloc
