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

// Execution graph data model: a rooted acyclic directed graph whose vertices
// are operations of one program run and whose edges carry either a data label
// (variable, value) or the constant control label "true".

#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "cutloc/error.hpp"

namespace cutloc {

using VertexId = std::uint32_t;
inline constexpr VertexId kRootVertex = 0;

using VertexSet = std::set<VertexId>;

// A label value: integer, floating point, boolean or string. Integers and
// doubles compare numerically with each other.
class Scalar {
 public:
  using Storage = std::variant<std::int64_t, double, bool, std::string>;

  Scalar() : value_(std::int64_t{0}) {}
  Scalar(int v) : value_(std::int64_t{v}) {}
  Scalar(std::int64_t v) : value_(v) {}
  Scalar(double v) : value_(v) {}
  Scalar(bool v) : value_(v) {}
  Scalar(std::string v) : value_(std::move(v)) {}
  Scalar(const char* v) : value_(std::string(v)) {}

  bool is_integer() const { return std::holds_alternative<std::int64_t>(value_); }
  bool is_double() const { return std::holds_alternative<double>(value_); }
  bool is_number() const { return is_integer() || is_double(); }
  bool is_bool() const { return std::holds_alternative<bool>(value_); }
  bool is_string() const { return std::holds_alternative<std::string>(value_); }

  std::int64_t as_integer() const { return std::get<std::int64_t>(value_); }
  double as_double() const { return std::get<double>(value_); }
  double as_number() const {
    return is_integer() ? static_cast<double>(as_integer()) : as_double();
  }
  bool as_bool() const { return std::get<bool>(value_); }
  const std::string& as_string() const { return std::get<std::string>(value_); }

  const Storage& storage() const { return value_; }

  // Literal rendering: numbers in shortest round-trip form, strings quoted.
  std::string to_string() const {
    if (is_integer()) return std::to_string(as_integer());
    if (is_bool()) return as_bool() ? "true" : "false";
    if (is_string()) return '"' + as_string() + '"';
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), as_double());
    std::string text(buf, end);
    if (text.find_first_of(".eEn") == std::string::npos) text += ".0";
    return text;
  }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    if (a.is_number() && b.is_number()) {
      if (a.is_integer() && b.is_integer()) return a.as_integer() == b.as_integer();
      return a.as_number() == b.as_number();
    }
    return a.value_ == b.value_;
  }

 private:
  Storage value_;
};

enum class EdgeKind { kData, kControl };

constexpr std::string_view edge_kind_name(EdgeKind kind) {
  return kind == EdgeKind::kData ? "data" : "control";
}

inline std::optional<EdgeKind> parse_edge_kind(std::string_view text) {
  if (text == "data") return EdgeKind::kData;
  if (text == "control" || text == "ctrl") return EdgeKind::kControl;
  return std::nullopt;
}

struct EdgeLabel {
  EdgeKind kind = EdgeKind::kControl;
  std::string var;  // empty for control labels
  Scalar value = true;

  static EdgeLabel data(std::string var, Scalar value) {
    return {EdgeKind::kData, std::move(var), std::move(value)};
  }
  static EdgeLabel control() { return {EdgeKind::kControl, "", true}; }

  // Control labels must be exactly the literal "true".
  bool is_well_formed() const {
    if (kind == EdgeKind::kData) return !var.empty();
    return var.empty() && value.is_bool() && value.as_bool();
  }

  std::string to_string() const {
    if (kind == EdgeKind::kControl) return "true";
    return var + " = " + value.to_string();
  }

  friend bool operator==(const EdgeLabel&, const EdgeLabel&) = default;
};

// Stable edge identity: (src, dst, kind, var-or-empty).
struct EdgeKey {
  VertexId src = 0;
  VertexId dst = 0;
  EdgeKind kind = EdgeKind::kControl;
  std::string var;

  friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
  friend bool operator==(const EdgeKey&, const EdgeKey&) = default;

  // "src:dst:data:var" or "src:dst:control".
  std::string to_string() const {
    std::string text = std::to_string(src) + ":" + std::to_string(dst) + ":" +
                       std::string(edge_kind_name(kind));
    if (kind == EdgeKind::kData) text += ":" + var;
    return text;
  }

  static std::optional<EdgeKey> parse(std::string_view text) {
    auto take_field = [&text]() -> std::optional<std::string_view> {
      auto pos = text.find(':');
      if (pos == std::string_view::npos) return std::nullopt;
      auto field = text.substr(0, pos);
      text.remove_prefix(pos + 1);
      return field;
    };
    auto parse_id = [](std::string_view s) -> std::optional<VertexId> {
      VertexId id = 0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), id);
      if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
      return id;
    };
    auto src_text = take_field();
    auto dst_text = take_field();
    if (!src_text || !dst_text) return std::nullopt;
    auto src = parse_id(*src_text);
    auto dst = parse_id(*dst_text);
    if (!src || !dst) return std::nullopt;
    auto sep = text.find(':');
    auto kind = parse_edge_kind(text.substr(0, sep));
    if (!kind) return std::nullopt;
    if (*kind == EdgeKind::kControl) {
      if (sep != std::string_view::npos) return std::nullopt;
      return EdgeKey{*src, *dst, *kind, ""};
    }
    if (sep == std::string_view::npos || sep + 1 == text.size()) return std::nullopt;
    return EdgeKey{*src, *dst, *kind, std::string(text.substr(sep + 1))};
  }
};

struct Edge {
  VertexId src = 0;
  VertexId dst = 0;
  EdgeLabel label;

  EdgeKey key() const {
    return {src, dst, label.kind,
            label.kind == EdgeKind::kData ? label.var : std::string()};
  }

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Vertex {
  VertexId id = 0;
  std::string desc;

  friend bool operator==(const Vertex&, const Vertex&) = default;
};

// Immutable after construction. Construction never rejects input: structural
// problems are reported by validate_graph() so that loaded files can be
// diagnosed rather than refused. Vertices are kept sorted by id and edges
// sorted (stably) by key.
class ExecutionGraph {
 public:
  ExecutionGraph() : ExecutionGraph({Vertex{kRootVertex, "program start"}}, {}) {}

  ExecutionGraph(std::vector<Vertex> vertices, std::vector<Edge> edges,
                 bool deterministic = true)
      : vertices_(std::move(vertices)),
        edges_(std::move(edges)),
        deterministic_(deterministic) {
    std::stable_sort(vertices_.begin(), vertices_.end(),
                     [](const Vertex& a, const Vertex& b) { return a.id < b.id; });
    std::stable_sort(edges_.begin(), edges_.end(),
                     [](const Edge& a, const Edge& b) { return a.key() < b.key(); });
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      index_.try_emplace(vertices_[i].id, i);
    }
    out_.resize(vertices_.size());
    in_.resize(vertices_.size());
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      auto src = index_.find(edges_[e].src);
      auto dst = index_.find(edges_[e].dst);
      if (src == index_.end() || dst == index_.end()) continue;
      out_[src->second].push_back(e);
      in_[dst->second].push_back(e);
    }
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      key_index_.try_emplace(edges_[e].key(), e);
    }
    fingerprint_ = compute_fingerprint();
  }

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  bool deterministic() const { return deterministic_; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  bool has_vertex(VertexId id) const { return index_.contains(id); }

  const std::string& description(VertexId id) const {
    return vertices_.at(position(id)).desc;
  }

  // Indices into edges() of the edges leaving / entering `id`.
  std::span<const std::size_t> out_edges(VertexId id) const { return out_[position(id)]; }
  std::span<const std::size_t> in_edges(VertexId id) const { return in_[position(id)]; }

  const Edge* find_edge(const EdgeKey& key) const {
    auto it = key_index_.find(key);
    return it == key_index_.end() ? nullptr : &edges_[it->second];
  }

  VertexSet vertex_ids() const {
    VertexSet ids;
    for (const auto& v : vertices_) ids.insert(v.id);
    return ids;
  }

  // Content hash; cuts remember it to detect use against a different graph.
  std::uint64_t fingerprint() const { return fingerprint_; }

  friend bool operator==(const ExecutionGraph& a, const ExecutionGraph& b) {
    return a.deterministic_ == b.deterministic_ && a.vertices_ == b.vertices_ &&
           a.edges_ == b.edges_;
  }

 private:
  std::size_t position(VertexId id) const {
    auto it = index_.find(id);
    if (it == index_.end()) {
      throw Error(ErrorCode::kUnknownVertex, "vertex " + std::to_string(id));
    }
    return it->second;
  }

  std::uint64_t compute_fingerprint() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](std::string_view bytes) {
      for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
      }
      h ^= 0xff;
      h *= 1099511628211ULL;
    };
    mix(deterministic_ ? "det" : "nondet");
    for (const auto& v : vertices_) mix(std::to_string(v.id));
    for (const auto& e : edges_) {
      mix(e.key().to_string());
      mix(e.label.value.to_string());
    }
    return h;
  }

  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  bool deterministic_ = true;
  std::unordered_map<VertexId, std::size_t> index_;
  std::map<EdgeKey, std::size_t> key_index_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
  std::uint64_t fingerprint_ = 0;
};

// Incremental construction helper. The root vertex is always present.
class GraphBuilder {
 public:
  GraphBuilder() { vertices_.push_back({kRootVertex, "program start"}); }

  GraphBuilder& vertex(VertexId id, std::string desc = {}) {
    if (id == kRootVertex) {
      if (!desc.empty()) vertices_.front().desc = std::move(desc);
    } else {
      vertices_.push_back({id, std::move(desc)});
    }
    return *this;
  }
  GraphBuilder& control(VertexId src, VertexId dst) {
    edges_.push_back({src, dst, EdgeLabel::control()});
    return *this;
  }
  GraphBuilder& data(VertexId src, VertexId dst, std::string var, Scalar value) {
    edges_.push_back({src, dst, EdgeLabel::data(std::move(var), std::move(value))});
    return *this;
  }
  GraphBuilder& edge(Edge e) {
    edges_.push_back(std::move(e));
    return *this;
  }
  GraphBuilder& deterministic(bool flag) {
    deterministic_ = flag;
    return *this;
  }

  ExecutionGraph build() const { return ExecutionGraph(vertices_, edges_, deterministic_); }

 private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  bool deterministic_ = true;
};

// ---------------------------------------------------------------------------
// Validation

enum class ViolationKind {
  kMissingRoot,
  kDuplicateVertex,
  kDanglingEndpoint,
  kSelfLoop,
  kBadControlLabel,
  kBadDataLabel,
  kDuplicateEdgeKey,
  kCycle,
  kUnreachable,
};

constexpr std::string_view violation_kind_name(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kMissingRoot: return "missing root";
    case ViolationKind::kDuplicateVertex: return "duplicate vertex";
    case ViolationKind::kDanglingEndpoint: return "dangling endpoint";
    case ViolationKind::kSelfLoop: return "self loop";
    case ViolationKind::kBadControlLabel: return "control label not \"true\"";
    case ViolationKind::kBadDataLabel: return "data label without variable";
    case ViolationKind::kDuplicateEdgeKey: return "duplicate edge key";
    case ViolationKind::kCycle: return "cycle";
    case ViolationKind::kUnreachable: return "unreachable";
  }
  return "unknown";
}

struct Violation {
  ViolationKind kind;
  std::vector<VertexId> vertices;  // sorted
  std::string edge_key;            // empty unless the violation concerns an edge

  std::string to_string() const {
    std::string text(violation_kind_name(kind));
    if (!vertices.empty()) {
      text += ' ';
      for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (i) text += ',';
        text += 'v' + std::to_string(vertices[i]);
      }
    }
    if (!edge_key.empty()) text += " (edge " + edge_key + ")";
    return text;
  }
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }

  bool has(ViolationKind kind) const {
    return std::any_of(violations.begin(), violations.end(),
                       [kind](const Violation& v) { return v.kind == kind; });
  }
};

namespace detail {

// Tarjan's strongly connected components over the well-formed edges.
inline std::vector<std::vector<VertexId>> nontrivial_sccs(const ExecutionGraph& g) {
  const auto& verts = g.vertices();
  std::unordered_map<VertexId, int> index, low;
  std::unordered_map<VertexId, bool> on_stack;
  std::vector<VertexId> stack;
  std::vector<std::vector<VertexId>> result;
  int counter = 0;

  std::function<void(VertexId)> visit = [&](VertexId v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (auto e : g.out_edges(v)) {
      VertexId w = g.edges()[e].dst;
      if (w == v) continue;
      if (!index.contains(w)) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<VertexId> component;
      VertexId w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        component.push_back(w);
      } while (w != v);
      if (component.size() > 1) {
        std::sort(component.begin(), component.end());
        result.push_back(std::move(component));
      }
    }
  };
  for (const auto& v : verts) {
    if (!index.contains(v.id)) visit(v.id);
  }
  std::sort(result.begin(), result.end());
  return result;
}

inline VertexSet reachable_from_root(const ExecutionGraph& g) {
  VertexSet seen;
  if (!g.has_vertex(kRootVertex)) return seen;
  std::vector<VertexId> work{kRootVertex};
  seen.insert(kRootVertex);
  while (!work.empty()) {
    VertexId v = work.back();
    work.pop_back();
    for (auto e : g.out_edges(v)) {
      VertexId w = g.edges()[e].dst;
      if (seen.insert(w).second) work.push_back(w);
    }
  }
  return seen;
}

}  // namespace detail

// Lists every violated structural invariant; an empty list means the graph is
// a rooted acyclic directed graph with well-formed, uniquely keyed edges.
inline ValidationReport validate_graph(const ExecutionGraph& g) {
  ValidationReport report;
  auto add = [&report](ViolationKind kind, std::vector<VertexId> vertices,
                       std::string edge_key = {}) {
    report.violations.push_back({kind, std::move(vertices), std::move(edge_key)});
  };

  if (!g.has_vertex(kRootVertex)) add(ViolationKind::kMissingRoot, {kRootVertex});
  for (std::size_t i = 1; i < g.vertices().size(); ++i) {
    if (g.vertices()[i].id == g.vertices()[i - 1].id) {
      add(ViolationKind::kDuplicateVertex, {g.vertices()[i].id});
    }
  }

  std::set<EdgeKey> seen_keys;
  for (const auto& e : g.edges()) {
    auto key = e.key();
    auto key_text = key.to_string();
    std::vector<VertexId> missing;
    if (!g.has_vertex(e.src)) missing.push_back(e.src);
    if (!g.has_vertex(e.dst) && e.dst != e.src) missing.push_back(e.dst);
    if (!missing.empty()) {
      std::sort(missing.begin(), missing.end());
      add(ViolationKind::kDanglingEndpoint, missing, key_text);
    }
    if (e.src == e.dst) add(ViolationKind::kSelfLoop, {e.src}, key_text);
    if (!e.label.is_well_formed()) {
      add(e.label.kind == EdgeKind::kControl ? ViolationKind::kBadControlLabel
                                             : ViolationKind::kBadDataLabel,
          {}, key_text);
    }
    if (!seen_keys.insert(key).second) {
      add(ViolationKind::kDuplicateEdgeKey, {}, key_text);
    }
  }

  for (auto& component : detail::nontrivial_sccs(g)) {
    add(ViolationKind::kCycle, std::move(component));
  }

  if (g.has_vertex(kRootVertex)) {
    auto reached = detail::reachable_from_root(g);
    for (const auto& v : g.vertices()) {
      if (!reached.contains(v.id)) add(ViolationKind::kUnreachable, {v.id});
    }
  }
  return report;
}

inline void require_valid(const ExecutionGraph& g) {
  auto report = validate_graph(g);
  if (!report.ok()) {
    throw Error(ErrorCode::kInvalidGraph, report.violations.front().to_string());
  }
}

// Longest directed path length from the root to each vertex.
inline std::map<VertexId, int> topo_levels(const ExecutionGraph& g) {
  require_valid(g);
  std::map<VertexId, int> level;
  std::map<VertexId, std::size_t> pending;
  for (const auto& v : g.vertices()) pending[v.id] = g.in_edges(v.id).size();
  std::vector<VertexId> ready{kRootVertex};
  level[kRootVertex] = 0;
  while (!ready.empty()) {
    VertexId v = ready.back();
    ready.pop_back();
    for (auto e : g.out_edges(v)) {
      VertexId w = g.edges()[e].dst;
      level[w] = std::max(level[w], level[v] + 1);
      if (--pending[w] == 0) ready.push_back(w);
    }
  }
  return level;
}

// All u with a directed path u -> ... -> v, including v itself.
inline VertexSet ancestors(const ExecutionGraph& g, VertexId v) {
  if (!g.has_vertex(v)) {
    throw Error(ErrorCode::kUnknownVertex, "vertex " + std::to_string(v));
  }
  VertexSet seen{v};
  std::vector<VertexId> work{v};
  while (!work.empty()) {
    VertexId w = work.back();
    work.pop_back();
    for (auto e : g.in_edges(w)) {
      VertexId u = g.edges()[e].src;
      if (seen.insert(u).second) work.push_back(u);
    }
  }
  return seen;
}

}  // namespace cutloc
