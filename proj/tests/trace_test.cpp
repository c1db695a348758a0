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

#include "cutloc/trace.hpp"

#include <map>
#include <set>

#include "gtest/gtest.h"
#include "support/random_gen.hpp"

namespace cutloc {
namespace {

TraceEvent assign(std::uint32_t seq, const std::string& var, Scalar value,
                  std::vector<std::string> uses = {}, std::uint32_t ctrl = 0) {
  TraceEvent e;
  e.seq = seq;
  e.kind = EventKind::kAssign;
  e.var = var;
  e.value = std::move(value);
  e.uses = std::move(uses);
  e.ctrl = ctrl;
  return e;
}

TraceEvent output(std::uint32_t seq, std::vector<std::string> uses, std::uint32_t ctrl = 0) {
  TraceEvent e;
  e.seq = seq;
  e.kind = EventKind::kOutput;
  e.uses = std::move(uses);
  e.ctrl = ctrl;
  return e;
}

TraceEvent branch(std::uint32_t seq, bool result, std::vector<std::string> uses = {}) {
  TraceEvent e;
  e.seq = seq;
  e.kind = EventKind::kBranch;
  e.cond_result = result;
  e.uses = std::move(uses);
  return e;
}

Trace three_events() { return {assign(1, "x", 1), assign(2, "y", 2), output(3, {"x", "y"})}; }

ErrorCode build_error(const Trace& t, BuildOptions opts = {}) {
  try {
    build_graph(t, opts);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kIo;
}

TEST(BuildGraph, ThreeEventExample) {
  auto g = build_graph(three_events());
  EXPECT_TRUE(validate_graph(g).ok());
  EXPECT_EQ(g.vertex_count(), 4u);
  ASSERT_EQ(g.edge_count(), 5u);
  auto x = g.find_edge({1, 3, EdgeKind::kData, "x"});
  auto y = g.find_edge({2, 3, EdgeKind::kData, "y"});
  ASSERT_TRUE(x && y);
  EXPECT_EQ(x->label, EdgeLabel::data("x", 1));
  EXPECT_EQ(y->label, EdgeLabel::data("y", 2));
  for (VertexId v : {1u, 2u, 3u}) {
    EXPECT_TRUE(g.find_edge({0, v, EdgeKind::kControl, ""}) != nullptr) << v;
  }
}

TEST(BuildGraph, EmptyTraceIsRootOnly) {
  auto g = build_graph({});
  EXPECT_EQ(g.vertex_count(), 1u);
  EXPECT_EQ(g.edge_count(), 0u);
  EXPECT_TRUE(validate_graph(g).ok());
}

TEST(BuildGraph, UseBeforeDef) {
  Trace t{output(1, {"z"})};
  EXPECT_EQ(build_error(t), ErrorCode::kUseBeforeDef);
  try {
    build_graph(t);
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("z at seq 1"), std::string::npos);
  }
}

TEST(BuildGraph, AllowUndefDrawsFromRoot) {
  auto g = build_graph({output(1, {"z"})}, {.allow_undef = true});
  auto undef = g.find_edge({0, 1, EdgeKind::kData, "z"});
  ASSERT_NE(undef, nullptr);
  EXPECT_EQ(undef->label, EdgeLabel::data("z", "undef"));
  EXPECT_TRUE(validate_graph(g).ok());
}

TEST(BuildGraph, ControlFromBranch) {
  Trace t{assign(1, "x", 1), branch(2, true, {"x"}), assign(3, "y", 5, {}, 2)};
  auto g = build_graph(t);
  EXPECT_TRUE(g.find_edge({2, 3, EdgeKind::kControl, ""}) != nullptr);
  EXPECT_FALSE(g.find_edge({0, 3, EdgeKind::kControl, ""}) != nullptr);
  EXPECT_TRUE(g.find_edge({1, 2, EdgeKind::kData, "x"}) != nullptr);
}

TEST(BuildGraph, BadCtrlRef) {
  EXPECT_EQ(build_error({assign(1, "x", 1), assign(2, "y", 2, {}, 1)}), ErrorCode::kBadCtrlRef);
  EXPECT_EQ(build_error({assign(1, "x", 1, {}, 7)}), ErrorCode::kBadCtrlRef);
}

TEST(BuildGraph, SequenceMustAscend) {
  EXPECT_EQ(build_error({assign(2, "x", 1), assign(1, "y", 2)}), ErrorCode::kBadTrace);
  EXPECT_EQ(build_error({assign(0, "x", 1)}), ErrorCode::kBadTrace);
}

TEST(BuildGraph, RepeatedUseYieldsOneEdge) {
  auto g = build_graph({assign(1, "x", 1), output(2, {"x", "x"})});
  EXPECT_EQ(g.edge_count(), 3u);
}

TEST(MutateTrace, SeedZeroBumpsFirstAssign) {
  auto [mutant, seq] = mutate_trace(three_events(), 0);
  EXPECT_EQ(seq, 1u);
  EXPECT_EQ(*mutant[0].value, Scalar(2));
  auto g = build_graph(mutant);
  auto edge = g.find_edge({1, 3, EdgeKind::kData, "x"});
  ASSERT_NE(edge, nullptr);
  EXPECT_EQ(edge->label, EdgeLabel::data("x", 2));
}

TEST(MutateTrace, PerturbsEachScalarType) {
  Trace t{assign(1, "b", true), assign(2, "s", "abc"), assign(3, "d", 1.5)};
  EXPECT_EQ(*mutate_trace(t, 0).first[0].value, Scalar(false));
  EXPECT_EQ(*mutate_trace(t, 1).first[1].value, Scalar("abc_X"));
  EXPECT_EQ(*mutate_trace(t, 2).first[2].value, Scalar(2.5));
  EXPECT_EQ(mutate_trace(t, 4).second, 2u);
}

TEST(MutateTrace, Deterministic) {
  testing::Rng rng(61);
  for (int i = 0; i < 20; ++i) {
    auto t = testing::random_trace(rng, 20);
    auto seed = static_cast<std::uint64_t>(testing::uniform(rng, 0, 1000));
    EXPECT_EQ(mutate_trace(t, seed), mutate_trace(t, seed));
  }
}

TEST(MutateTrace, NoAssignEvents) {
  try {
    mutate_trace({output(1, {})}, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoAssignEvents);
  }
}

TEST(TraceJsonl, RoundTrip) {
  testing::Rng rng(62);
  for (int i = 0; i < 20; ++i) {
    auto t = testing::random_trace(rng, 15);
    EXPECT_EQ(trace_from_jsonl(trace_to_jsonl(t)), t);
  }
}

TEST(TraceJsonl, ParsesDocumentedLine) {
  auto t = trace_from_jsonl(
      "{\"seq\":1,\"kind\":\"assign\",\"var\":\"x\",\"value\":1,\"ctrl\":0}\n"
      "{\"seq\":2,\"kind\":\"assign\",\"var\":\"y\",\"value\":2,\"uses\":[],\"ctrl\":0}\n"
      "{\"seq\":3,\"kind\":\"output\",\"uses\":[\"x\",\"y\"],\"ctrl\":0}\n");
  EXPECT_EQ(t, three_events());
}

TEST(TraceJsonl, RejectsMalformedLines) {
  for (const char* text : {"{\"seq\":1}\n", "not json\n", "{\"seq\":-1,\"kind\":\"output\"}\n",
                           "{\"seq\":1,\"kind\":\"loop\"}\n"}) {
    try {
      trace_from_jsonl(text);
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kParse) << text;
    }
  }
}

TEST(TraceProperties, LastWriteMatchesPrefixScan) {
  testing::Rng rng(63);
  for (int round = 0; round < 300; ++round) {
    auto t = testing::random_trace(rng, testing::uniform(rng, 1, 30));
    auto g = build_graph(t);
    ASSERT_TRUE(validate_graph(g).ok());
    std::size_t data_edges = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      std::set<std::string> seen;
      for (const auto& var : t[i].uses) {
        if (!seen.insert(var).second) continue;
        std::uint32_t writer = 0;
        for (std::size_t j = 0; j < i; ++j) {
          if (t[j].kind == EventKind::kAssign && t[j].var == var) writer = t[j].seq;
        }
        ASSERT_NE(writer, 0u);
        EXPECT_TRUE(g.find_edge({writer, t[i].seq, EdgeKind::kData, var}) != nullptr);
        ++data_edges;
      }
    }
    EXPECT_EQ(g.edge_count(), t.size() + data_edges);
  }
}

TEST(TraceProperties, DataValuesMatchSourceAssign) {
  testing::Rng rng(64);
  for (int round = 0; round < 300; ++round) {
    auto t = testing::random_trace(rng, testing::uniform(rng, 1, 30));
    std::map<std::uint32_t, const TraceEvent*> by_seq;
    for (const auto& e : t) by_seq[e.seq] = &e;
    auto g = build_graph(t);
    for (const auto& edge : g.edges()) {
      if (edge.label.kind != EdgeKind::kData) continue;
      const auto& src = *by_seq.at(edge.src);
      EXPECT_EQ(src.var, edge.label.var);
      EXPECT_EQ(*src.value, edge.label.value);
    }
  }
}

TEST(TraceProperties, MutantKeepsEdgeKeys) {
  testing::Rng rng(65);
  for (int round = 0; round < 300; ++round) {
    auto t = testing::random_trace(rng, testing::uniform(rng, 1, 30));
    auto [mutant, seq] = mutate_trace(t, static_cast<std::uint64_t>(round));
    auto golden = build_graph(t);
    auto changed = build_graph(mutant);
    ASSERT_EQ(golden.edge_count(), changed.edge_count());
    for (std::size_t i = 0; i < golden.edge_count(); ++i) {
      const auto& a = golden.edges()[i];
      const auto& b = changed.edges()[i];
      EXPECT_EQ(a.key(), b.key());
      if (a.label != b.label) {
        EXPECT_EQ(a.src, seq);
      }
    }
  }
}

}  // namespace
}  // namespace cutloc
