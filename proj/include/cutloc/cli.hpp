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

// Command-line driver. Exit codes: 0 success, 1 domain error (invalid graph,
// bad anomaly or oracle, unconfirmed anomaly), 2 I/O or parse error.

#pragma once

#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cutloc/anomaly.hpp"
#include "cutloc/error.hpp"
#include "cutloc/graph.hpp"
#include "cutloc/graph_io.hpp"
#include "cutloc/json_codec.hpp"
#include "cutloc/localizer.hpp"
#include "cutloc/oracles.hpp"
#include "cutloc/predicate.hpp"
#include "cutloc/session_service.hpp"
#include "cutloc/trace.hpp"

namespace cutloc {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitIo = 2;

inline int exit_code_for(const Error& e) {
  return e.code() == ErrorCode::kIo || e.code() == ErrorCode::kParse ? kExitIo : kExitDomain;
}

inline std::string format_vertex_list(const VertexSet& vertices) {
  std::string text = "[";
  for (auto it = vertices.begin(); it != vertices.end(); ++it) {
    if (it != vertices.begin()) text += ", ";
    text += 'v' + std::to_string(*it);
  }
  return text + "]";
}

inline void print_result(std::ostream& out, const ExecutionGraph& g, const LocalizationRun& run) {
  const auto& r = run.result;
  if (const auto* missing = std::get_if<MissingOperation>(&r)) {
    out << "MissingOperation: at " << format_vertex_set(missing->at.downset()) << "\n";
  } else if (const auto* faulty = std::get_if<FaultyVertices>(&r)) {
    out << "FaultyVertices: " << format_vertex_list(faulty->vertices) << "\n";
    for (VertexId v : faulty->vertices) out << "  v" << v << ": " << g.description(v) << "\n";
    for (const auto& key : faulty->evidence) {
      const Edge* e = g.find_edge(key);
      out << "  evidence " << key.to_string() << " " << (e ? e->label.to_string() : "") << "\n";
    }
  } else {
    const auto& sections = std::get<MissingCriticalSections>(r);
    out << "MissingCriticalSections: " << format_vertex_list(sections.vertices) << "\n";
    for (VertexId v : sections.vertices) out << "  v" << v << ": " << g.description(v) << "\n";
    for (const auto& atom : sections.atoms) out << "  atom " << atom.to_string() << "\n";
  }
  out << "oracle calls: " << run.transcript.size() << "\n";
}

namespace detail {

inline void warn_if_nondeterministic(const ExecutionGraph& g, std::ostream& err) {
  if (!g.deterministic()) {
    err << "warning: graph is not marked deterministic; cuts may not be reproducible\n";
  }
}

inline int serve_forever(SessionService& service, int port,
                         const std::optional<std::filesystem::path>& ui_dir, std::ostream& out,
                         std::optional<std::string> session_id = std::nullopt) {
  httplib::Server server;
  service.mount(server, ui_dir);
  out << "serving on http://localhost:" << port << "/";
  if (session_id) out << "?session=" << *session_id;
  out << "\n" << std::flush;
  if (!server.listen("0.0.0.0", port)) {
    throw Error(ErrorCode::kIo, "cannot listen on port " + std::to_string(port));
  }
  return kExitOk;
}

}  // namespace detail

inline int cmd_build(const std::string& trace_path, const std::string& out_path, bool allow_undef,
                     std::ostream& out, std::ostream& err) {
  auto trace = trace_from_jsonl(read_file(trace_path));
  ExecutionGraph g;
  try {
    g = build_graph(trace, {allow_undef});
  } catch (const Error& e) {
    if (exit_code_for(e) == kExitIo) throw;
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  auto report = validate_graph(g);
  if (!report.ok()) {
    for (const auto& v : report.violations) err << "violation: " << v.to_string() << "\n";
    return kExitDomain;
  }
  if (out_path.empty()) {
    out << graph_to_jsonl(g);
  } else {
    save_graph(g, out_path);
    out << "wrote " << g.vertex_count() << " vertices, " << g.edge_count() << " edges to "
        << out_path << "\n";
  }
  return kExitOk;
}

inline int cmd_inspect(const std::string& graph_path, std::ostream& out, std::ostream& err) {
  auto g = load_graph(graph_path);
  auto report = validate_graph(g);
  if (!report.ok()) {
    for (const auto& v : report.violations) err << "violation: " << v.to_string() << "\n";
    return kExitDomain;
  }
  detail::warn_if_nondeterministic(g, err);
  out << g.vertex_count() << " vertices, " << g.edge_count() << " edges";
  if (g.vertex_count() >= 2) {
    auto root = cut_edges(g, root_cut(g)).size();
    out << ", root cut: " << root << (root == 1 ? " edge" : " edges");
  } else {
    out << ", root cut: none";
  }
  out << "\n";
  for (const auto& [v, level] : topo_levels(g)) {
    out << "  v" << v << " level " << level;
    if (!g.description(v).empty()) out << "  " << g.description(v);
    out << "\n";
  }
  return kExitOk;
}

inline int cmd_mutate(const std::string& trace_path, std::uint64_t seed, const std::string& out_path,
                      std::ostream& out, std::ostream& err) {
  auto trace = trace_from_jsonl(read_file(trace_path));
  std::pair<Trace, std::uint32_t> mutant;
  try {
    mutant = mutate_trace(std::move(trace), seed);
  } catch (const Error& e) {
    if (exit_code_for(e) == kExitIo) throw;
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  auto text = trace_to_jsonl(mutant.first);
  if (out_path.empty()) {
    out << text;
  } else {
    write_file(out_path, text);
  }
  (out_path.empty() ? err : out) << "mutated seq=" << mutant.second << "\n";
  return kExitOk;
}

struct LocalizeOptions {
  std::string graph_path;
  std::string oracle;
  std::string anomaly;
  std::string out_path;
  int port = 8080;
  std::optional<std::filesystem::path> ui_dir;
};

inline int cmd_localize(const LocalizeOptions& opts, std::ostream& out, std::ostream& err) {
  auto g = std::make_shared<const ExecutionGraph>(load_graph(opts.graph_path));
  auto report = validate_graph(*g);
  if (!report.ok()) {
    for (const auto& v : report.violations) err << "violation: " << v.to_string() << "\n";
    return kExitDomain;
  }
  detail::warn_if_nondeterministic(*g, err);

  InitialAnomaly anomaly;
  try {
    anomaly = parse_anomaly(*g, opts.anomaly);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }

  LocalizerConfig config;
  std::unique_ptr<Oracle> oracle;
  auto colon = opts.oracle.find(':');
  std::string kind = opts.oracle.substr(0, colon);
  std::string arg = colon == std::string::npos ? "" : opts.oracle.substr(colon + 1);
  try {
    if (kind == "assert" && !arg.empty()) {
      auto predicates = parse_predicate_list(read_file(arg));
      oracle = std::make_unique<AssertionOracle>(predicates);
      config.predicates = std::move(predicates);
    } else if (kind == "diff" && !arg.empty()) {
      oracle = std::make_unique<DifferentialOracle>(load_graph(arg));
    } else if (kind == "replay" && !arg.empty()) {
      oracle = std::make_unique<ScriptedOracle>(scripted_oracle_from_transcript(read_file(arg)));
    } else if (kind != "interactive") {
      err << "error: oracle must be assert:<file>, diff:<golden-graph>, replay:<transcript> or "
             "interactive\n";
      return kExitDomain;
    }
  } catch (const Error& e) {
    if (exit_code_for(e) == kExitIo) throw;
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }

  if (auto* global = std::get_if<GlobalAnomaly>(&anomaly); global && !global->predicates.empty() &&
                                                            !config.predicates.empty()) {
    std::vector<GlobalPredicate> named;
    for (const auto& id : global->predicates) {
      auto it = std::find_if(config.predicates.begin(), config.predicates.end(),
                             [&id](const GlobalPredicate& p) { return p.id == id; });
      if (it == config.predicates.end()) {
        err << "error: anomaly names unknown predicate '" << id << "'\n";
        return kExitDomain;
      }
      named.push_back(*it);
    }
    config.predicates = std::move(named);
  }

  if (!oracle) {
    SessionService service;
    auto id = service.add_session(LocalizerSession::start(g, anomaly, config));
    return detail::serve_forever(service, opts.port, opts.ui_dir, out, id);
  }

  try {
    auto run = localize(g, anomaly, *oracle, config);
    if (!opts.out_path.empty()) write_file(opts.out_path, transcript_to_jsonl(run.transcript, run.result));
    print_result(out, *g, run);
    return kExitOk;
  } catch (const LocalizationAborted& e) {
    err << "error: " << (e.code() == ErrorCode::kAnomalyNotConfirmed
                             ? std::string("initial anomaly not confirmed")
                             : std::string(e.what()))
        << " after " << e.transcript().size() << " oracle calls\n";
    return exit_code_for(e);
  }
}

// Entry point shared by the executable and the tests.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cut-set fault localization over execution graphs", "cutloc"};
  app.require_subcommand(1);

  std::string trace_path, graph_path, out_path;
  bool allow_undef = false;
  std::uint64_t seed = 0;
  LocalizeOptions loc;
  std::string ui_dir;

  auto* build = app.add_subcommand("build", "Build an execution graph from a trace");
  build->add_option("trace", trace_path, "Trace file (JSON lines)")->required();
  build->add_option("--out", out_path, "Graph file to write (stdout if omitted)");
  build->add_flag("--allow-undef", allow_undef, "Bind reads of unassigned variables to the root");

  auto* loc_cmd = app.add_subcommand("localize", "Localize the culprit of an anomaly");
  loc_cmd->add_option("graph", loc.graph_path, "Graph file")->required();
  loc_cmd->add_option("--oracle", loc.oracle,
                      "assert:<predicates> | diff:<golden-graph> | replay:<transcript> | interactive")
      ->required();
  loc_cmd->add_option("--anomaly", loc.anomaly,
                      "edge:<src,dst,kind[,var]> | global:<downset>:<predicate-ids>")
      ->required();
  loc_cmd->add_option("--out", loc.out_path, "Transcript file to write");
  loc_cmd->add_option("--port", loc.port, "Port for the interactive oracle");
  loc_cmd->add_option("--ui-dir", ui_dir, "Static web UI directory");

  auto* mutate = app.add_subcommand("mutate", "Plant a single assign-value fault in a trace");
  mutate->add_option("trace", trace_path, "Trace file")->required();
  mutate->add_option("--seed", seed, "Selects the mutated assign event");
  mutate->add_option("--out", out_path, "Mutant trace file (stdout if omitted)");

  auto* inspect = app.add_subcommand("inspect", "Print graph statistics and levels");
  inspect->add_option("graph", graph_path, "Graph file")->required();

  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Run the interactive session service");
  serve->add_option("--port", port, "Listen port");
  serve->add_option("--ui-dir", ui_dir, "Static web UI directory");
  std::string transcripts;
  serve->add_option("--transcripts", transcripts, "Directory for finished session transcripts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitIo;
  }

  try {
    if (*build) return cmd_build(trace_path, out_path, allow_undef, out, err);
    if (*inspect) return cmd_inspect(graph_path, out, err);
    if (*mutate) return cmd_mutate(trace_path, seed, out_path, out, err);
    std::optional<std::filesystem::path> ui;
    if (!ui_dir.empty()) ui = ui_dir;
    if (*loc_cmd) {
      loc.ui_dir = ui;
      return cmd_localize(loc, out, err);
    }
    SessionService service = transcripts.empty() ? SessionService()
                                                 : SessionService(transcripts);
    return detail::serve_forever(service, port, ui, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

}  // namespace cutloc
