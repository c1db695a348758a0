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

#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cutloc/cutset.hpp"
#include "cutloc/error.hpp"
#include "cutloc/graph.hpp"
#include "cutloc/predicate.hpp"

namespace cutloc {

enum class EdgeVerdict { kOk, kDataAnomaly, kControlAnomaly };

constexpr std::string_view edge_verdict_name(EdgeVerdict v) {
  switch (v) {
    case EdgeVerdict::kOk: return "ok";
    case EdgeVerdict::kDataAnomaly: return "data_anomaly";
    case EdgeVerdict::kControlAnomaly: return "control_anomaly";
  }
  return "?";
}

inline std::optional<EdgeVerdict> parse_edge_verdict(std::string_view text) {
  if (text == "ok") return EdgeVerdict::kOk;
  if (text == "data_anomaly") return EdgeVerdict::kDataAnomaly;
  if (text == "control_anomaly") return EdgeVerdict::kControlAnomaly;
  return std::nullopt;
}

// Judgment of one state: a verdict per crossing edge plus a global verdict.
struct StateVerdict {
  std::map<EdgeKey, EdgeVerdict> per_edge;
  bool global_violated = false;
  std::vector<std::string> violated_predicates;

  static StateVerdict all_ok(const State& s) {
    StateVerdict v;
    for (const auto& atom : s.atoms) v.per_edge.emplace(atom.key, EdgeVerdict::kOk);
    return v;
  }

  std::vector<EdgeKey> local_anomalies() const {
    std::vector<EdgeKey> keys;
    for (const auto& [key, verdict] : per_edge) {
      if (verdict != EdgeVerdict::kOk) keys.push_back(key);
    }
    return keys;
  }

  bool anomalous() const { return global_violated || !local_anomalies().empty(); }

  friend bool operator==(const StateVerdict&, const StateVerdict&) = default;
};

// Throws kVerdictMismatch unless `v` judges exactly the atoms of `s`, with
// data anomalies only on data edges and control anomalies only on control
// edges.
inline void check_verdict_covers(const State& s, const StateVerdict& v) {
  if (v.per_edge.size() != s.atoms.size()) {
    throw Error(ErrorCode::kVerdictMismatch,
                "verdict covers " + std::to_string(v.per_edge.size()) + " edges, state has " +
                    std::to_string(s.atoms.size()));
  }
  for (const auto& atom : s.atoms) {
    auto it = v.per_edge.find(atom.key);
    if (it == v.per_edge.end()) {
      throw Error(ErrorCode::kVerdictMismatch, "no verdict for " + atom.key.to_string());
    }
    bool data = atom.key.kind == EdgeKind::kData;
    if ((it->second == EdgeVerdict::kDataAnomaly && !data) ||
        (it->second == EdgeVerdict::kControlAnomaly && data)) {
      throw Error(ErrorCode::kVerdictMismatch,
                  std::string(edge_verdict_name(it->second)) + " on " + atom.key.to_string());
    }
  }
}

class Oracle {
 public:
  virtual ~Oracle() = default;

  // Examines the state on `cut`. `state` is state_of(g, cut).
  virtual StateVerdict examine(const ExecutionGraph& g, const Cut& cut, const State& state) = 0;
};

// Judges only the global verdict: every edge is Ok and the global verdict
// lists the predicates that evaluate Violated. Unevaluable is not a violation.
class AssertionOracle : public Oracle {
 public:
  explicit AssertionOracle(std::vector<GlobalPredicate> predicates)
      : predicates_(std::move(predicates)) {
    std::set<std::string> ids;
    for (const auto& p : predicates_) {
      if (!ids.insert(p.id).second) throw Error(ErrorCode::kDuplicatePredicate, p.id);
    }
  }

  const std::vector<GlobalPredicate>& predicates() const { return predicates_; }

  StateVerdict judge(const State& state) const {
    auto verdict = StateVerdict::all_ok(state);
    auto bindings = bindings_of(state);
    for (const auto& p : predicates_) {
      if (eval_predicate(p, bindings).result == PredicateResult::kViolated) {
        verdict.violated_predicates.push_back(p.id);
      }
    }
    verdict.global_violated = !verdict.violated_predicates.empty();
    return verdict;
  }

  StateVerdict examine(const ExecutionGraph&, const Cut&, const State& state) override {
    return judge(state);
  }

 private:
  std::vector<GlobalPredicate> predicates_;
};

// Compares each crossing edge against a golden run aligned by edge key.
class DifferentialOracle : public Oracle {
 public:
  explicit DifferentialOracle(const ExecutionGraph& reference) {
    require_valid(reference);
    for (const auto& e : reference.edges()) labels_.emplace(e.key(), e.label);
  }

  StateVerdict judge(const State& state) const {
    StateVerdict verdict;
    for (const auto& atom : state.atoms) {
      auto it = labels_.find(atom.key);
      EdgeVerdict v = EdgeVerdict::kOk;
      if (it == labels_.end()) {
        v = atom.key.kind == EdgeKind::kData ? EdgeVerdict::kDataAnomaly
                                             : EdgeVerdict::kControlAnomaly;
      } else if (!(it->second == atom.label)) {
        v = EdgeVerdict::kDataAnomaly;
      }
      verdict.per_edge.emplace(atom.key, v);
    }
    return verdict;
  }

  StateVerdict examine(const ExecutionGraph&, const Cut&, const State& state) override {
    return judge(state);
  }

 private:
  std::map<EdgeKey, EdgeLabel> labels_;
};

// Answers from a fixed table keyed by cut downset.
class ScriptedOracle : public Oracle {
 public:
  ScriptedOracle() = default;
  explicit ScriptedOracle(std::map<VertexSet, StateVerdict> script) : script_(std::move(script)) {}

  void add(VertexSet downset, StateVerdict verdict) {
    script_.insert_or_assign(std::move(downset), std::move(verdict));
  }

  StateVerdict examine(const ExecutionGraph&, const Cut& cut, const State&) override {
    auto it = script_.find(cut.downset());
    if (it == script_.end()) {
      throw Error(ErrorCode::kUnscriptedCut, format_vertex_set(cut.downset()));
    }
    return it->second;
  }

 private:
  std::map<VertexSet, StateVerdict> script_;
};

}  // namespace cutloc
