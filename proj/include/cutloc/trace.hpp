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

// Execution traces of a small sequential imperative language and their
// dynamic dependence graphs: one vertex per executed statement, a data edge
// from the latest assignment of each variable read to the reader (labeled with
// the value written), and a control edge from the controlling branch (or the
// program start) to every statement.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cutloc/error.hpp"
#include "cutloc/graph.hpp"
#include "cutloc/json_codec.hpp"

namespace cutloc {

enum class EventKind { kAssign, kBranch, kOutput };

constexpr std::string_view event_kind_name(EventKind kind) {
  switch (kind) {
    case EventKind::kAssign: return "assign";
    case EventKind::kBranch: return "branch";
    case EventKind::kOutput: return "output";
  }
  return "?";
}

struct TraceEvent {
  std::uint32_t seq = 0;
  EventKind kind = EventKind::kAssign;
  std::string var;                  // assign only
  std::optional<Scalar> value;      // assign (required) and output (optional)
  std::vector<std::string> uses;
  bool cond_result = false;         // branch only
  std::uint32_t ctrl = 0;           // controlling branch seq, 0 for top level

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

using Trace = std::vector<TraceEvent>;

struct BuildOptions {
  bool allow_undef = false;
};

inline std::string describe_event(const TraceEvent& e) {
  auto join = [](const std::vector<std::string>& names) {
    std::string text;
    for (std::size_t i = 0; i < names.size(); ++i) text += (i ? ", " : "") + names[i];
    return text;
  };
  switch (e.kind) {
    case EventKind::kAssign: {
      std::string text = e.var + " = " + (e.value ? e.value->to_string() : "?");
      if (!e.uses.empty()) text += " (reads " + join(e.uses) + ")";
      return text;
    }
    case EventKind::kBranch:
      return "if (" + join(e.uses) + ") -> " + (e.cond_result ? "true" : "false");
    case EventKind::kOutput:
      return "output " + join(e.uses);
  }
  return {};
}

inline ExecutionGraph build_graph(const Trace& trace, BuildOptions opts = {}) {
  GraphBuilder builder;
  std::map<std::uint32_t, EventKind> kinds;
  std::map<std::string, std::pair<std::uint32_t, Scalar>> last_write;
  std::uint32_t previous = 0;

  for (const auto& e : trace) {
    if (e.seq == 0 || e.seq <= previous) {
      throw Error(ErrorCode::kBadTrace, "seq " + std::to_string(e.seq) + " is not ascending");
    }
    previous = e.seq;
    if (e.ctrl != 0) {
      auto it = kinds.find(e.ctrl);
      if (it == kinds.end() || it->second != EventKind::kBranch) {
        throw Error(ErrorCode::kBadCtrlRef, "event " + std::to_string(e.seq) +
                                                " controlled by " + std::to_string(e.ctrl) +
                                                ", which is not an earlier branch");
      }
    }
    if (e.kind == EventKind::kAssign && (e.var.empty() || !e.value)) {
      throw Error(ErrorCode::kBadTrace, "assign " + std::to_string(e.seq) + " needs var and value");
    }

    builder.vertex(e.seq, describe_event(e));
    builder.control(e.ctrl, e.seq);
    std::set<std::string> read;
    for (const auto& var : e.uses) {
      if (!read.insert(var).second) continue;
      auto writer = last_write.find(var);
      if (writer != last_write.end()) {
        builder.data(writer->second.first, e.seq, var, writer->second.second);
      } else if (opts.allow_undef) {
        builder.data(kRootVertex, e.seq, var, "undef");
      } else {
        throw Error(ErrorCode::kUseBeforeDef, var + " at seq " + std::to_string(e.seq));
      }
    }
    kinds.emplace(e.seq, e.kind);
    if (e.kind == EventKind::kAssign) last_write.insert_or_assign(e.var, std::pair(e.seq, *e.value));
  }
  return builder.build();
}

// Perturbs the value of one assign event, chosen as the (seed mod #assigns)-th
// assign in trace order: numbers +1, booleans negated, strings get "_X".
inline std::pair<Trace, std::uint32_t> mutate_trace(Trace trace, std::uint64_t seed) {
  std::vector<std::size_t> assigns;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (trace[i].kind == EventKind::kAssign) assigns.push_back(i);
  }
  if (assigns.empty()) throw Error(ErrorCode::kNoAssignEvents, "trace has no assign events");
  auto& event = trace[assigns[seed % assigns.size()]];
  if (!event.value) throw Error(ErrorCode::kBadTrace, "assign without value");
  const Scalar& v = *event.value;
  if (v.is_integer()) {
    event.value = Scalar(v.as_integer() + 1);
  } else if (v.is_double()) {
    event.value = Scalar(v.as_double() + 1.0);
  } else if (v.is_bool()) {
    event.value = Scalar(!v.as_bool());
  } else {
    event.value = Scalar(v.as_string() + "_X");
  }
  return {std::move(trace), event.seq};
}

inline Json event_to_json(const TraceEvent& e) {
  Json j{{"seq", e.seq}, {"kind", std::string(event_kind_name(e.kind))}};
  if (e.kind == EventKind::kAssign) j["var"] = e.var;
  if (e.value) j["value"] = scalar_to_json(*e.value);
  j["uses"] = e.uses;
  if (e.kind == EventKind::kBranch) j["cond_result"] = e.cond_result;
  j["ctrl"] = e.ctrl;
  return j;
}

inline std::string trace_to_jsonl(const Trace& trace) {
  std::string text;
  for (const auto& e : trace) text += event_to_json(e).dump() + "\n";
  return text;
}

inline Trace trace_from_jsonl(const std::string& text) {
  Trace trace;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&line_no](const std::string& what) {
    return Error(ErrorCode::kParse, "line " + std::to_string(line_no) + ": " + what);
  };
  auto seq_field = [&](const Json& j, const char* name, bool required) -> std::uint32_t {
    auto it = j.find(name);
    if (it == j.end()) {
      if (required) throw fail(std::string("missing '") + name + "'");
      return 0;
    }
    if (!it->is_number_unsigned() || it->get<std::uint64_t>() > UINT32_MAX) {
      throw fail(std::string("'") + name + "' must be a non-negative integer");
    }
    return it->get<std::uint32_t>();
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
    if (!j.is_object()) throw fail("event must be an object");
    TraceEvent e;
    e.seq = seq_field(j, "seq", true);
    e.ctrl = seq_field(j, "ctrl", false);
    auto kind = j.find("kind");
    if (kind == j.end() || !kind->is_string()) throw fail("missing 'kind'");
    if (*kind == "assign") {
      e.kind = EventKind::kAssign;
    } else if (*kind == "branch") {
      e.kind = EventKind::kBranch;
    } else if (*kind == "output") {
      e.kind = EventKind::kOutput;
    } else {
      throw fail("unknown kind " + kind->dump());
    }
    if (auto var = j.find("var"); var != j.end()) {
      if (!var->is_string()) throw fail("'var' must be a string");
      e.var = var->get<std::string>();
    }
    if (auto value = j.find("value"); value != j.end() && !value->is_null()) {
      try {
        e.value = scalar_from_json(*value);
      } catch (const Error& err) {
        throw fail(err.what());
      }
    }
    if (auto uses = j.find("uses"); uses != j.end()) {
      if (!uses->is_array()) throw fail("'uses' must be an array");
      for (const auto& u : *uses) {
        if (!u.is_string()) throw fail("'uses' entries must be strings");
        e.uses.push_back(u.get<std::string>());
      }
    }
    if (auto cond = j.find("cond_result"); cond != j.end()) {
      if (!cond->is_boolean()) throw fail("'cond_result' must be a boolean");
      e.cond_result = cond->get<bool>();
    }
    if (e.kind == EventKind::kAssign && (e.var.empty() || !e.value)) {
      throw fail("assign needs 'var' and 'value'");
    }
    trace.push_back(std::move(e));
  }
  return trace;
}

}  // namespace cutloc
