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

// The pruning search. A session keeps a clean lower cut and an anomalous upper
// cut; each oracle verdict on a cut strictly between them replaces one of the
// two bounds. When at most one vertex separates the bounds, the terminal
// classification names the culprit:
//
//   bounds equal                  -> MissingOperation at that cut
//   anomalous edge added by C_e   -> FaultyVertices (the sources of such edges)
//   otherwise (global anomaly)    -> MissingCriticalSections: the atoms of
//                                    S(C_e) whose removal clears every
//                                    violated predicate
//
// The search assumes a consistent oracle (a clean verdict at C means every
// culprit lies after C). Inconsistent answers still terminate.

#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cutloc/cutset.hpp"
#include "cutloc/error.hpp"
#include "cutloc/graph.hpp"
#include "cutloc/oracles.hpp"
#include "cutloc/predicate.hpp"

namespace cutloc {

struct EdgeAnomaly {
  EdgeKey edge;
  EdgeVerdict verdict = EdgeVerdict::kDataAnomaly;
};

struct GlobalAnomaly {
  Cut cut;
  std::vector<std::string> predicates;
};

using InitialAnomaly = std::variant<EdgeAnomaly, GlobalAnomaly>;

struct MissingOperation {
  Cut at;
  friend bool operator==(const MissingOperation&, const MissingOperation&) = default;
};

struct FaultyVertices {
  VertexSet vertices;
  std::vector<EdgeKey> evidence;
  friend bool operator==(const FaultyVertices&, const FaultyVertices&) = default;
};

struct MissingCriticalSections {
  std::vector<Atom> atoms;  // M, sorted by edge key
  VertexSet vertices;       // source vertex of each atom in M
  friend bool operator==(const MissingCriticalSections&, const MissingCriticalSections&) = default;
};

using LocalizationResult = std::variant<MissingOperation, FaultyVertices, MissingCriticalSections>;

inline std::string_view result_kind_name(const LocalizationResult& r) {
  if (std::holds_alternative<MissingOperation>(r)) return "missing_operation";
  if (std::holds_alternative<FaultyVertices>(r)) return "faulty_vertices";
  return "missing_critical_sections";
}

struct CulpritSet {
  std::vector<Atom> atoms;
};

struct LocalizerConfig {
  // Predicates consulted when the terminal case is a global anomaly.
  std::vector<GlobalPredicate> predicates;
};

struct TranscriptEntry {
  Cut cut;
  StateVerdict verdict;
};

// Initial bounds. The clean bound is the root cut. For an anomalous edge
// (u, v) the anomalous bound is the downset of u's ancestors, the smallest cut
// whose edge set contains the edge; for a global anomaly it is the given cut.
inline std::pair<Cut, Cut> init_bounds(const ExecutionGraph& g, const InitialAnomaly& anomaly) {
  Cut clean = root_cut(g);
  if (const auto* edge = std::get_if<EdgeAnomaly>(&anomaly)) {
    const Edge* e = g.find_edge(edge->edge);
    if (e == nullptr) throw Error(ErrorCode::kUnknownEdge, edge->edge.to_string());
    bool data = edge->edge.kind == EdgeKind::kData;
    if (edge->verdict == EdgeVerdict::kOk ||
        (edge->verdict == EdgeVerdict::kDataAnomaly) != data) {
      throw Error(ErrorCode::kInvalidAnomaly,
                  std::string(edge_verdict_name(edge->verdict)) + " on " + edge->edge.to_string());
    }
    return {clean, cut_from_downset(g, ancestors(g, e->src))};
  }
  const auto& global = std::get<GlobalAnomaly>(anomaly);
  if (global.cut.graph_fingerprint() != g.fingerprint()) {
    throw Error(ErrorCode::kInvalidAnomaly, "global anomaly cut is not a cut of this graph");
  }
  return {clean, global.cut};
}

// M = { a in s : no predicate evaluates Violated on s without a }. Atoms are
// visited in edge-key order; each test is independent of M.
inline CulpritSet minimize_atoms(const State& s, const std::vector<GlobalPredicate>& predicates) {
  CulpritSet m;
  for (std::size_t i = 0; i < s.atoms.size(); ++i) {
    auto bindings = bindings_of(s.without(i));
    bool still_violated = false;
    for (const auto& p : predicates) {
      if (eval_predicate(p, bindings).result == PredicateResult::kViolated) {
        still_violated = true;
        break;
      }
    }
    if (!still_violated) m.atoms.push_back(s.atoms[i]);
  }
  return m;
}

inline LocalizationResult classify_terminal(const ExecutionGraph& g, const Cut& clean,
                                            const Cut& anomalous,
                                            const StateVerdict& verdict_at_anomalous,
                                            const std::vector<GlobalPredicate>& predicates) {
  auto between = vertices_between(clean, anomalous);
  if (between.size() > 1) {
    throw Error(ErrorCode::kTooManyBetween,
                std::to_string(between.size()) + " vertices between the bounds");
  }
  if (between.empty()) return MissingOperation{clean};

  std::set<EdgeKey> clean_keys;
  for (const auto& e : cut_edges(g, clean)) clean_keys.insert(e.key());

  FaultyVertices faulty;
  for (const auto& e : cut_edges(g, anomalous)) {
    auto key = e.key();
    if (clean_keys.contains(key)) continue;
    auto it = verdict_at_anomalous.per_edge.find(key);
    if (it != verdict_at_anomalous.per_edge.end() && it->second != EdgeVerdict::kOk) {
      faulty.vertices.insert(e.src);
      faulty.evidence.push_back(key);
    }
  }
  if (!faulty.vertices.empty()) return faulty;

  if (!verdict_at_anomalous.global_violated) {
    // Local anomalies only on edges the clean bound also carries: the oracle
    // contradicted itself. Blame those edges' sources.
    for (const auto& key : verdict_at_anomalous.local_anomalies()) {
      faulty.vertices.insert(key.src);
      faulty.evidence.push_back(key);
    }
    if (!faulty.vertices.empty()) return faulty;
    throw Error(ErrorCode::kAnomalyNotConfirmed, "initial anomaly not confirmed");
  }

  State state = state_of(g, anomalous);
  auto bindings = bindings_of(state);
  std::vector<GlobalPredicate> violated;
  for (const auto& p : predicates) {
    if (eval_predicate(p, bindings).result == PredicateResult::kViolated) violated.push_back(p);
  }
  MissingCriticalSections sections;
  // Without an evaluable predicate (a human judged the global verdict) every
  // atom is kept.
  sections.atoms = violated.empty() ? state.atoms : minimize_atoms(state, violated).atoms;
  for (const auto& atom : sections.atoms) sections.vertices.insert(atom.key.src);
  return sections;
}

enum class QueryKind { kBisection, kTerminal };

struct PendingQuery {
  Cut cut;
  QueryKind kind = QueryKind::kBisection;
};

// Value-semantics state machine. While a query is pending the session can be
// held indefinitely (e.g. across network round-trips) and resumed by
// feed_verdict(). The graph is shared and immutable.
class LocalizerSession {
 public:
  static LocalizerSession start(std::shared_ptr<const ExecutionGraph> g,
                                const InitialAnomaly& anomaly, LocalizerConfig config = {}) {
    require_valid(*g);
    auto [clean, anomalous] = init_bounds(*g, anomaly);
    LocalizerSession session(std::move(g), std::move(clean), std::move(anomalous),
                             std::move(config));
    if (const auto* edge = std::get_if<EdgeAnomaly>(&anomaly)) {
      auto verdict = StateVerdict::all_ok(state_of(*session.graph_, session.anomalous_));
      verdict.per_edge.at(edge->edge) = edge->verdict;
      session.verdict_at_anomalous_ = std::move(verdict);
    }
    session.advance();
    return session;
  }

  const ExecutionGraph& graph() const { return *graph_; }
  std::shared_ptr<const ExecutionGraph> shared_graph() const { return graph_; }
  const LocalizerConfig& config() const { return config_; }

  const Cut& clean_bound() const { return clean_; }
  const Cut& anomalous_bound() const { return anomalous_; }
  std::size_t between_count() const { return vertices_between(clean_, anomalous_).size(); }

  bool finished() const { return result_.has_value(); }
  const std::optional<PendingQuery>& pending() const { return pending_; }
  const std::optional<StateVerdict>& verdict_at_anomalous() const { return verdict_at_anomalous_; }

  const LocalizationResult& result() const {
    if (!result_) throw Error(ErrorCode::kSessionFinished, "session has no result yet");
    return *result_;
  }

  State pending_state() const {
    if (!pending_) throw Error(ErrorCode::kSessionFinished, "no pending query");
    return state_of(*graph_, pending_->cut);
  }

  const std::vector<TranscriptEntry>& transcript() const { return transcript_; }
  std::size_t examinations() const { return transcript_.size(); }

  // Consumes the verdict for the pending cut. Throws without modifying the
  // session when the verdict does not match the pending state, or when a
  // terminal confirmation comes back clean (kAnomalyNotConfirmed).
  void feed_verdict(const StateVerdict& verdict) {
    if (!pending_) throw Error(ErrorCode::kSessionFinished, "session already finished");
    check_verdict_covers(pending_state(), verdict);
    PendingQuery query = *pending_;

    if (query.kind == QueryKind::kTerminal) {
      if (!verdict.anomalous()) {
        throw Error(ErrorCode::kAnomalyNotConfirmed, "initial anomaly not confirmed");
      }
      auto result = classify_terminal(*graph_, clean_, anomalous_, verdict, config_.predicates);
      transcript_.push_back({query.cut, verdict});
      verdict_at_anomalous_ = verdict;
      pending_.reset();
      result_ = std::move(result);
      return;
    }

    transcript_.push_back({query.cut, verdict});
    if (verdict.anomalous()) {
      anomalous_ = query.cut;
      verdict_at_anomalous_ = verdict;
    } else {
      clean_ = query.cut;
    }
    advance();
  }

 private:
  LocalizerSession(std::shared_ptr<const ExecutionGraph> g, Cut clean, Cut anomalous,
                   LocalizerConfig config)
      : graph_(std::move(g)),
        config_(std::move(config)),
        clean_(std::move(clean)),
        anomalous_(std::move(anomalous)) {}

  void advance() {
    pending_.reset();
    if (auto next = bisect(*graph_, clean_, anomalous_)) {
      pending_ = PendingQuery{std::move(*next), QueryKind::kBisection};
      return;
    }
    if (clean_ == anomalous_) {
      result_ = MissingOperation{clean_};
      return;
    }
    if (!verdict_at_anomalous_) {
      pending_ = PendingQuery{anomalous_, QueryKind::kTerminal};
      return;
    }
    result_ = classify_terminal(*graph_, clean_, anomalous_, *verdict_at_anomalous_,
                                config_.predicates);
  }

  std::shared_ptr<const ExecutionGraph> graph_;
  LocalizerConfig config_;
  Cut clean_;
  Cut anomalous_;
  std::optional<StateVerdict> verdict_at_anomalous_;
  std::optional<PendingQuery> pending_;
  std::optional<LocalizationResult> result_;
  std::vector<TranscriptEntry> transcript_;
};

struct LocalizationRun {
  LocalizationResult result;
  std::vector<TranscriptEntry> transcript;
};

// Raised when the oracle fails mid-search; carries the transcript so far.
class LocalizationAborted : public Error {
 public:
  LocalizationAborted(const Error& cause, std::vector<TranscriptEntry> transcript)
      : Error(cause.code(), cause.what()), transcript_(std::move(transcript)) {}

  const std::vector<TranscriptEntry>& transcript() const { return transcript_; }

 private:
  std::vector<TranscriptEntry> transcript_;
};

inline LocalizationRun localize(std::shared_ptr<const ExecutionGraph> g,
                                const InitialAnomaly& anomaly, Oracle& oracle,
                                LocalizerConfig config = {}) {
  auto session = LocalizerSession::start(std::move(g), anomaly, std::move(config));
  while (!session.finished()) {
    try {
      auto verdict =
          oracle.examine(session.graph(), session.pending()->cut, session.pending_state());
      session.feed_verdict(verdict);
    } catch (const Error& e) {
      throw LocalizationAborted(e, session.transcript());
    }
  }
  return {session.result(), session.transcript()};
}

inline LocalizationRun localize(const ExecutionGraph& g, const InitialAnomaly& anomaly,
                                Oracle& oracle, LocalizerConfig config = {}) {
  return localize(std::make_shared<const ExecutionGraph>(g), anomaly, oracle, std::move(config));
}

// Examination budget for a search that starts with `between` vertices
// separating the bounds: ceil(log2(max(1, between))) + 2.
inline std::size_t examination_bound(std::size_t between) {
  std::size_t steps = 0;
  for (std::size_t span = 1; span < std::max<std::size_t>(1, between); span *= 2) ++steps;
  return steps + 2;
}

}  // namespace cutloc
