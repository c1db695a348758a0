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

// HTTP/JSON front for interactive localization. A human oracle fetches the
// pending state of a session, answers it edge by edge, and repeats until the
// session reports a result.
//
//   POST /sessions                 {graph, anomaly[, predicates]} -> {id, status, ...}
//   GET  /sessions/{id}/query      pending cut, its atoms and progress
//   POST /sessions/{id}/answer     {per_edge: {key: verdict}, global: "ok"|"violated"}
//   GET  /sessions/{id}/result     result and transcript
//   GET  /sessions/{id}/graph      vertices, edges and levels for rendering
//
// Handlers are plain member functions returning (status, body) so they can be
// exercised without a socket; mount() wires them into an httplib::Server.

#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>

#include "httplib.h"

#include "cutloc/anomaly.hpp"
#include "cutloc/error.hpp"
#include "cutloc/graph_io.hpp"
#include "cutloc/json_codec.hpp"
#include "cutloc/localizer.hpp"
#include "cutloc/predicate.hpp"

namespace cutloc {

struct ServiceReply {
  int status = 200;
  Json body;
};

class SessionService {
 public:
  SessionService() = default;

  // When set, each finished session's transcript is written to
  // `<dir>/<id>.jsonl`.
  explicit SessionService(std::filesystem::path transcript_dir)
      : transcript_dir_(std::move(transcript_dir)) {}

  std::string add_session(LocalizerSession session) {
    auto record = std::make_shared<Record>(std::move(session));
    record->id = "s" + std::to_string(++next_id_);
    std::string id = record->id;
    persist_if_finished(*record);
    std::unique_lock lock(table_mutex_);
    sessions_.emplace(id, std::move(record));
    return id;
  }

  ServiceReply create_session(const Json& request) {
    try {
      if (!request.is_object()) return error(400, "request must be a JSON object");
      auto graph_it = request.find("graph");
      auto anomaly_it = request.find("anomaly");
      if (graph_it == request.end()) return error(400, "missing 'graph'");
      if (anomaly_it == request.end() || !anomaly_it->is_string()) {
        return error(400, "missing 'anomaly' string");
      }
      auto graph = std::make_shared<const ExecutionGraph>(graph_from_payload(*graph_it));
      auto report = validate_graph(*graph);
      if (!report.ok()) {
        Json violations = Json::array();
        for (const auto& v : report.violations) violations.push_back(v.to_string());
        return {400, Json{{"error", "invalid graph"}, {"violations", std::move(violations)}}};
      }
      LocalizerConfig config;
      if (auto preds = request.find("predicates"); preds != request.end()) {
        if (!preds->is_array()) return error(400, "'predicates' must be an array of strings");
        std::string text;
        for (const auto& p : *preds) {
          if (!p.is_string()) return error(400, "'predicates' must be an array of strings");
          text += p.get<std::string>() + "\n";
        }
        config.predicates = parse_predicate_list(text);
      }
      auto anomaly = parse_anomaly(*graph, anomaly_it->get<std::string>());
      auto id = add_session(LocalizerSession::start(graph, anomaly, std::move(config)));
      auto record = find(id);
      std::lock_guard lock(record->mutex);
      Json body{{"id", id}};
      append_status(body, record->session);
      return {201, std::move(body)};
    } catch (const Error& e) {
      return error(400, e.what());
    }
  }

  ServiceReply get_query(const std::string& id) {
    auto record = find(id);
    if (!record) return error(404, "unknown session " + id);
    std::lock_guard lock(record->mutex);
    if (record->session.finished()) return error(409, "session is finished");
    return {200, query_payload(record->session)};
  }

  ServiceReply post_answer(const std::string& id, const Json& body) {
    auto record = find(id);
    if (!record) return error(404, "unknown session " + id);
    std::lock_guard lock(record->mutex);
    if (record->session.finished()) return error(409, "session is finished");
    StateVerdict verdict;
    try {
      verdict = verdict_from_json(body);
    } catch (const Error& e) {
      return error(400, e.what());
    }
    try {
      record->session.feed_verdict(verdict);
    } catch (const Error& e) {
      return error(422, e.what());
    }
    record->updated = std::chrono::system_clock::now();
    persist_if_finished(*record);
    Json reply = Json::object();
    append_status(reply, record->session);
    return {200, std::move(reply)};
  }

  ServiceReply get_result(const std::string& id) {
    auto record = find(id);
    if (!record) return error(404, "unknown session " + id);
    std::lock_guard lock(record->mutex);
    if (!record->session.finished()) return error(409, "session is still awaiting a verdict");
    Json transcript = Json::array();
    const auto& entries = record->session.transcript();
    for (std::size_t k = 0; k < entries.size(); ++k) {
      transcript.push_back(Json{{"step", k + 1},
                                {"cut", cut_to_json(entries[k].cut)},
                                {"verdict", verdict_to_json(entries[k].verdict)}});
    }
    return {200, Json{{"result", result_to_json(record->session.result())},
                      {"transcript", std::move(transcript)}}};
  }

  ServiceReply get_graph(const std::string& id) {
    auto record = find(id);
    if (!record) return error(404, "unknown session " + id);
    std::lock_guard lock(record->mutex);
    const auto& session = record->session;
    const auto& g = session.graph();
    auto levels = topo_levels(g);
    Json vertices = Json::array();
    for (const auto& v : g.vertices()) {
      vertices.push_back(Json{{"id", v.id}, {"desc", v.desc}, {"level", levels.at(v.id)}});
    }
    Json edges = Json::array();
    for (const auto& e : g.edges()) {
      edges.push_back(Json{{"key", e.key().to_string()},
                           {"src", e.src},
                           {"dst", e.dst},
                           {"kind", std::string(edge_kind_name(e.label.kind))},
                           {"label", label_to_json(e.label)}});
    }
    Json body{{"deterministic", g.deterministic()},
              {"vertices", std::move(vertices)},
              {"edges", std::move(edges)},
              {"clean", cut_to_json(session.clean_bound())},
              {"anomalous", cut_to_json(session.anomalous_bound())}};
    if (session.pending()) body["pending"] = cut_to_json(session.pending()->cut);
    return {200, std::move(body)};
  }

  void mount(httplib::Server& server,
             const std::optional<std::filesystem::path>& static_dir = std::nullopt) {
    auto send = [](httplib::Response& res, const ServiceReply& reply) {
      res.status = reply.status;
      res.set_content(reply.body.dump(), "application/json");
    };
    server.Post("/sessions", [this, send](const httplib::Request& req, httplib::Response& res) {
      Json request;
      try {
        request = Json::parse(req.body);
      } catch (const Json::parse_error& e) {
        send(res, error(400, e.what()));
        return;
      }
      send(res, create_session(request));
    });
    server.Get(R"(/sessions/([^/]+)/query)",
               [this, send](const httplib::Request& req, httplib::Response& res) {
                 send(res, get_query(req.matches[1]));
               });
    server.Post(R"(/sessions/([^/]+)/answer)",
                [this, send](const httplib::Request& req, httplib::Response& res) {
                  Json body;
                  try {
                    body = Json::parse(req.body);
                  } catch (const Json::parse_error& e) {
                    send(res, error(400, e.what()));
                    return;
                  }
                  send(res, post_answer(req.matches[1], body));
                });
    server.Get(R"(/sessions/([^/]+)/result)",
               [this, send](const httplib::Request& req, httplib::Response& res) {
                 send(res, get_result(req.matches[1]));
               });
    server.Get(R"(/sessions/([^/]+)/graph)",
               [this, send](const httplib::Request& req, httplib::Response& res) {
                 send(res, get_graph(req.matches[1]));
               });
    if (static_dir) server.set_mount_point("/", static_dir->string());
  }

 private:
  struct Record {
    explicit Record(LocalizerSession s)
        : session(std::move(s)),
          created(std::chrono::system_clock::now()),
          updated(created) {}

    std::mutex mutex;
    std::string id;
    LocalizerSession session;
    std::chrono::system_clock::time_point created;
    std::chrono::system_clock::time_point updated;
    bool persisted = false;
  };

  static ServiceReply error(int status, const std::string& message) {
    return {status, Json{{"error", message}}};
  }

  // Accepts the graph file either as its text or as an array of line objects.
  static ExecutionGraph graph_from_payload(const Json& payload) {
    if (payload.is_string()) return graph_from_jsonl(payload.get<std::string>());
    if (payload.is_array()) {
      std::string text;
      for (const auto& line : payload) text += line.dump() + "\n";
      return graph_from_jsonl(text);
    }
    throw Error(ErrorCode::kParse, "'graph' must be the graph file text or an array of lines");
  }

  static Json query_payload(const LocalizerSession& session) {
    const auto& pending = *session.pending();
    return Json{{"cut", cut_to_json(pending.cut)},
                {"kind", pending.kind == QueryKind::kBisection ? "bisection" : "terminal"},
                {"atoms", atoms_to_json(session.pending_state().atoms)},
                {"progress",
                 Json{{"between_count", session.between_count()},
                      {"step", session.examinations() + 1}}}};
  }

  static void append_status(Json& body, const LocalizerSession& session) {
    if (session.finished()) {
      body["status"] = "finished";
      body["next"] = nullptr;
      body["result"] = result_to_json(session.result());
    } else {
      body["status"] = "awaiting_verdict";
      body["next"] = query_payload(session);
    }
  }

  std::shared_ptr<Record> find(const std::string& id) {
    std::shared_lock lock(table_mutex_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
  }

  void persist_if_finished(Record& record) {
    if (!transcript_dir_ || record.persisted || !record.session.finished()) return;
    write_file(*transcript_dir_ / (record.id + ".jsonl"),
               transcript_to_jsonl(record.session.transcript(), record.session.result()));
    record.persisted = true;
  }

  std::optional<std::filesystem::path> transcript_dir_;
  std::atomic<std::uint64_t> next_id_{0};
  std::shared_mutex table_mutex_;
  std::map<std::string, std::shared_ptr<Record>> sessions_;
};

}  // namespace cutloc
