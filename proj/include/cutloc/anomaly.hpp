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

// Textual anomaly specs used by the CLI and the session service:
//
//   edge:SRC,DST,data,VAR      local data anomaly on that edge
//   edge:SRC,DST,control       local control anomaly on that edge
//   global:ID,ID,...:P1,P2     global anomaly on the cut with that downset,
//                              naming the violated predicates (optional)

#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "cutloc/cutset.hpp"
#include "cutloc/error.hpp"
#include "cutloc/graph.hpp"
#include "cutloc/localizer.hpp"

namespace cutloc {

namespace detail {

inline std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  while (true) {
    auto pos = text.find(sep);
    parts.push_back(text.substr(0, pos));
    if (pos == std::string_view::npos) break;
    text.remove_prefix(pos + 1);
  }
  return parts;
}

inline VertexId parse_vertex_id(std::string_view text, std::string_view context) {
  VertexId id = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), id);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kInvalidAnomaly,
                "bad vertex id '" + std::string(text) + "' in '" + std::string(context) + "'");
  }
  return id;
}

}  // namespace detail

inline InitialAnomaly parse_anomaly(const ExecutionGraph& g, std::string_view text) {
  auto bad = [&text](const std::string& why) {
    return Error(ErrorCode::kInvalidAnomaly, why + ": '" + std::string(text) + "'");
  };
  if (text.starts_with("edge:")) {
    auto fields = detail::split(text.substr(5), ',');
    if (fields.size() < 3) throw bad("expected edge:SRC,DST,KIND[,VAR]");
    EdgeKey key;
    key.src = detail::parse_vertex_id(fields[0], text);
    key.dst = detail::parse_vertex_id(fields[1], text);
    auto kind = parse_edge_kind(fields[2]);
    if (!kind) throw bad("edge kind must be data or control");
    key.kind = *kind;
    if (*kind == EdgeKind::kData) {
      if (fields.size() != 4 || fields[3].empty()) throw bad("data edge needs a variable");
      key.var = std::string(fields[3]);
    } else if (fields.size() != 3) {
      throw bad("control edge takes no variable");
    }
    if (g.find_edge(key) == nullptr) throw bad("no such edge " + key.to_string());
    return EdgeAnomaly{key, *kind == EdgeKind::kData ? EdgeVerdict::kDataAnomaly
                                                     : EdgeVerdict::kControlAnomaly};
  }
  if (text.starts_with("global:")) {
    auto rest = text.substr(7);
    auto colon = rest.find(':');
    VertexSet downset;
    for (auto field : detail::split(rest.substr(0, colon), ',')) {
      downset.insert(detail::parse_vertex_id(field, text));
    }
    std::vector<std::string> predicates;
    if (colon != std::string_view::npos && colon + 1 < rest.size()) {
      for (auto id : detail::split(rest.substr(colon + 1), ',')) {
        if (id.empty()) throw bad("empty predicate id");
        predicates.emplace_back(id);
      }
    }
    try {
      return GlobalAnomaly{cut_from_downset(g, std::move(downset)), std::move(predicates)};
    } catch (const Error& e) {
      throw bad(e.what());
    }
  }
  throw bad("anomaly must start with edge: or global:");
}

}  // namespace cutloc
