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

// Cut-sets over an execution graph.
//
// A cut is represented by its root-side vertex set W (a downset: closed under
// predecessors, contains the root, excludes at least one vertex). The edge set
// of the cut is derived: every edge leaving W. Ordering cuts is then subset
// inclusion of their downsets.

#pragma once

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cutloc/error.hpp"
#include "cutloc/graph.hpp"

namespace cutloc {

class Cut;
Cut cut_from_downset(const ExecutionGraph& g, VertexSet downset);

class Cut {
 public:
  const VertexSet& downset() const { return downset_; }
  std::uint64_t graph_fingerprint() const { return graph_fingerprint_; }

  friend bool operator==(const Cut&, const Cut&) = default;

 private:
  friend Cut cut_from_downset(const ExecutionGraph& g, VertexSet downset);

  Cut(VertexSet downset, std::uint64_t fingerprint)
      : downset_(std::move(downset)), graph_fingerprint_(fingerprint) {}

  VertexSet downset_;
  std::uint64_t graph_fingerprint_ = 0;
};

inline std::string format_vertex_set(const VertexSet& set) {
  std::string text = "{";
  for (auto it = set.begin(); it != set.end(); ++it) {
    if (it != set.begin()) text += ',';
    text += 'v' + std::to_string(*it);
  }
  return text + "}";
}

inline Cut cut_from_downset(const ExecutionGraph& g, VertexSet downset) {
  for (VertexId v : downset) {
    if (!g.has_vertex(v)) {
      throw Error(ErrorCode::kUnknownVertex, "vertex " + std::to_string(v));
    }
  }
  if (!downset.contains(kRootVertex)) {
    throw Error(ErrorCode::kRootMissing, format_vertex_set(downset));
  }
  if (downset.size() >= g.vertex_ids().size()) {
    throw Error(ErrorCode::kComplementEmpty, format_vertex_set(downset));
  }
  for (const auto& e : g.edges()) {
    if (downset.contains(e.dst) && !downset.contains(e.src)) {
      throw Error(ErrorCode::kNotPredecessorClosed,
                  "edge " + e.key().to_string() + " enters " + format_vertex_set(downset));
    }
  }
  return Cut(std::move(downset), g.fingerprint());
}

inline bool is_valid_downset(const ExecutionGraph& g, const VertexSet& downset) {
  try {
    cut_from_downset(g, downset);
    return true;
  } catch (const Error&) {
    return false;
  }
}

inline void require_same_graph(const ExecutionGraph& g, const Cut& c) {
  if (c.graph_fingerprint() != g.fingerprint()) {
    throw Error(ErrorCode::kGraphMismatch, "cut " + format_vertex_set(c.downset()) +
                                               " belongs to a different graph");
  }
}

// The cut just after the program start: W = {root}.
inline Cut root_cut(const ExecutionGraph& g) {
  return cut_from_downset(g, VertexSet{kRootVertex});
}

// Edges with source inside the downset and destination outside, by key.
inline std::vector<Edge> cut_edges(const ExecutionGraph& g, const Cut& c) {
  require_same_graph(g, c);
  std::vector<Edge> result;
  for (const auto& e : g.edges()) {
    if (c.downset().contains(e.src) && !c.downset().contains(e.dst)) result.push_back(e);
  }
  return result;
}

// Recovers a downset from a cut's edge set: the vertices reachable from the
// root without traversing any of `edges`.
inline VertexSet downset_behind(const ExecutionGraph& g, const std::vector<Edge>& edges) {
  std::set<EdgeKey> blocked;
  for (const auto& e : edges) blocked.insert(e.key());
  VertexSet seen{kRootVertex};
  std::vector<VertexId> work{kRootVertex};
  while (!work.empty()) {
    VertexId v = work.back();
    work.pop_back();
    for (auto idx : g.out_edges(v)) {
      const auto& e = g.edges()[idx];
      if (blocked.contains(e.key())) continue;
      if (seen.insert(e.dst).second) work.push_back(e.dst);
    }
  }
  return seen;
}

enum class CutOrder { kLess, kEqual, kGreater, kIncomparable };

constexpr std::string_view cut_order_name(CutOrder order) {
  switch (order) {
    case CutOrder::kLess: return "Less";
    case CutOrder::kEqual: return "Equal";
    case CutOrder::kGreater: return "Greater";
    case CutOrder::kIncomparable: return "Incomparable";
  }
  return "?";
}

inline CutOrder compare(const Cut& a, const Cut& b) {
  if (a.graph_fingerprint() != b.graph_fingerprint()) {
    throw Error(ErrorCode::kGraphMismatch, "cuts belong to different graphs");
  }
  const auto& wa = a.downset();
  const auto& wb = b.downset();
  if (wa == wb) return CutOrder::kEqual;
  if (wa.size() < wb.size() && std::includes(wb.begin(), wb.end(), wa.begin(), wa.end())) {
    return CutOrder::kLess;
  }
  if (wb.size() < wa.size() && std::includes(wa.begin(), wa.end(), wb.begin(), wb.end())) {
    return CutOrder::kGreater;
  }
  return CutOrder::kIncomparable;
}

inline bool precedes_or_equal(const Cut& a, const Cut& b) {
  auto order = compare(a, b);
  return order == CutOrder::kLess || order == CutOrder::kEqual;
}

// One conjunct of a state: the label carried by one cut edge.
struct Atom {
  EdgeKey key;
  EdgeLabel label;

  std::string to_string() const { return key.to_string() + " " + label.to_string(); }

  friend bool operator==(const Atom&, const Atom&) = default;
};

// Conjunction of the labels on a cut; atoms are sorted by edge key.
struct State {
  std::vector<Atom> atoms;

  std::size_t size() const { return atoms.size(); }
  bool empty() const { return atoms.empty(); }

  State without(std::size_t index) const {
    State reduced;
    reduced.atoms.reserve(atoms.size() - 1);
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (i != index) reduced.atoms.push_back(atoms[i]);
    }
    return reduced;
  }

  friend bool operator==(const State&, const State&) = default;
};

inline State state_of(const ExecutionGraph& g, const Cut& c) {
  State state;
  for (auto& e : cut_edges(g, c)) state.atoms.push_back({e.key(), std::move(e.label)});
  return state;
}

inline VertexSet vertices_between(const Cut& lo, const Cut& hi) {
  if (!precedes_or_equal(lo, hi)) {
    throw Error(ErrorCode::kCutsNotOrdered, format_vertex_set(lo.downset()) + " vs " +
                                                format_vertex_set(hi.downset()));
  }
  VertexSet between;
  std::set_difference(hi.downset().begin(), hi.downset().end(), lo.downset().begin(),
                      lo.downset().end(), std::inserter(between, between.end()));
  return between;
}

// Picks a cut strictly between `lo` and `hi`, or nothing when at most one
// vertex separates them. The vertices between are ordered by (longest-path
// level, id) and the first half is moved to the root side; every edge raises
// the level, so any prefix of that order keeps the downset closed.
inline std::optional<Cut> bisect(const ExecutionGraph& g, const Cut& lo, const Cut& hi) {
  require_same_graph(g, lo);
  auto between = vertices_between(lo, hi);
  if (between.size() <= 1) return std::nullopt;

  auto levels = topo_levels(g);
  std::vector<VertexId> order(between.begin(), between.end());
  std::stable_sort(order.begin(), order.end(), [&levels](VertexId a, VertexId b) {
    return std::pair(levels.at(a), a) < std::pair(levels.at(b), b);
  });

  VertexSet downset = lo.downset();
  downset.insert(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(order.size() / 2));
  return cut_from_downset(g, std::move(downset));
}

}  // namespace cutloc
