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

#include "cutloc/graph.hpp"

#include <map>
#include <set>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "support/brute_force.hpp"
#include "support/fixtures.hpp"
#include "support/random_gen.hpp"

namespace cutloc {
namespace {

using ::testing::ElementsAre;
using ::testing::Pair;
using testing::chain4;
using testing::diamond;
using testing::kA;
using testing::kB;
using testing::kC;

ExecutionGraph with_extra_edges(const ExecutionGraph& g, std::vector<Edge> extra) {
  auto edges = g.edges();
  edges.insert(edges.end(), extra.begin(), extra.end());
  return ExecutionGraph(g.vertices(), edges, g.deterministic());
}

TEST(ValidateGraph, Chain4IsValid) { EXPECT_TRUE(validate_graph(chain4()).ok()); }

TEST(ValidateGraph, BackEdgeReportsCycle) {
  auto g = with_extra_edges(chain4(), {{2, 1, EdgeLabel::data("y", 0)}});
  auto report = validate_graph(g);
  ASSERT_EQ(report.violations.size(), 1u);
  EXPECT_EQ(report.violations[0].kind, ViolationKind::kCycle);
  EXPECT_THAT(report.violations[0].vertices, ElementsAre(1, 2));
  EXPECT_EQ(report.violations[0].to_string(), "cycle v1,v2");
}

TEST(ValidateGraph, IsolatedVertexIsUnreachable) {
  auto base = chain4();
  auto vertices = base.vertices();
  vertices.push_back({9, "orphan"});
  auto report = validate_graph(ExecutionGraph(vertices, base.edges()));
  ASSERT_EQ(report.violations.size(), 1u);
  EXPECT_EQ(report.violations[0].kind, ViolationKind::kUnreachable);
  EXPECT_THAT(report.violations[0].vertices, ElementsAre(9));
}

TEST(ValidateGraph, ReportsEdgeLevelViolations) {
  EdgeLabel falsified{EdgeKind::kControl, "", false};
  auto g = with_extra_edges(chain4(), {
                                          {3, 7, EdgeLabel::control()},  // dangling
                                          {1, 3, falsified},             // not "true"
                                          {1, 2, EdgeLabel::data("x", 5)},  // duplicate key
                                      });
  auto report = validate_graph(g);
  EXPECT_TRUE(report.has(ViolationKind::kDanglingEndpoint));
  EXPECT_TRUE(report.has(ViolationKind::kBadControlLabel));
  EXPECT_TRUE(report.has(ViolationKind::kDuplicateEdgeKey));
  EXPECT_FALSE(report.has(ViolationKind::kCycle));
}

TEST(ValidateGraph, MissingRootAndSelfLoop) {
  ExecutionGraph no_root({{1, ""}}, {});
  EXPECT_TRUE(validate_graph(no_root).has(ViolationKind::kMissingRoot));
  auto looped = with_extra_edges(chain4(), {{2, 2, EdgeLabel::control()}});
  EXPECT_TRUE(validate_graph(looped).has(ViolationKind::kSelfLoop));
}

TEST(ValidateGraph, MultiEdgesWithDistinctKeysAreAllowed) {
  auto g = GraphBuilder().vertex(1).vertex(2).control(0, 1).data(1, 2, "x", 1).data(1, 2, "y", 2)
               .control(1, 2).build();
  EXPECT_TRUE(validate_graph(g).ok());
}

TEST(TopoLevels, Chain4) {
  EXPECT_THAT(topo_levels(chain4()), ElementsAre(Pair(0, 0), Pair(1, 1), Pair(2, 2), Pair(3, 3)));
}

TEST(TopoLevels, Diamond) {
  EXPECT_THAT(topo_levels(diamond()),
              ElementsAre(Pair(0, 0), Pair(kA, 1), Pair(kB, 1), Pair(kC, 2)));
}

TEST(TopoLevels, DiamondWithCrossEdgeMatchesBruteForce) {
  auto g = with_extra_edges(diamond(), {{kA, kB, EdgeLabel::data("x", 1)}});
  auto expected = testing::bf_longest_levels(testing::RawGraph::of(g));
  // Frozen from the path enumeration: v0:0, a:1, b:2, c:3.
  ASSERT_THAT(expected, ElementsAre(Pair(0, 0), Pair(kA, 1), Pair(kB, 2), Pair(kC, 3)));
  EXPECT_EQ(topo_levels(g), expected);
}

TEST(TopoLevels, RejectsInvalidGraph) {
  auto g = with_extra_edges(chain4(), {{2, 1, EdgeLabel::data("y", 0)}});
  try {
    topo_levels(g);
    FAIL() << "expected InvalidGraph";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidGraph);
  }
}

TEST(Ancestors, Examples) {
  EXPECT_EQ(ancestors(chain4(), 2), (VertexSet{0, 1, 2}));
  EXPECT_EQ(ancestors(diamond(), kC), (VertexSet{0, kA, kB, kC}));
  EXPECT_EQ(ancestors(diamond(), kA), (VertexSet{0, kA}));
}

TEST(Ancestors, UnknownVertex) {
  try {
    ancestors(chain4(), 42);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownVertex);
  }
}

TEST(EdgeKey, TextFormRoundTrips) {
  for (const auto& key : {testing::e01(), testing::e12(), EdgeKey{4, 9, EdgeKind::kData, "a:b"}}) {
    auto parsed = EdgeKey::parse(key.to_string());
    ASSERT_TRUE(parsed.has_value()) << key.to_string();
    EXPECT_EQ(*parsed, key);
  }
  EXPECT_EQ(testing::e12().to_string(), "1:2:data:x");
  EXPECT_EQ(testing::e01().to_string(), "0:1:control");
  EXPECT_FALSE(EdgeKey::parse("1:2:data").has_value());
  EXPECT_FALSE(EdgeKey::parse("1:2:control:x").has_value());
  EXPECT_FALSE(EdgeKey::parse("a:2:control").has_value());
}

TEST(Scalar, NumericEqualityAcrossRepresentations) {
  EXPECT_EQ(Scalar(1), Scalar(1.0));
  EXPECT_FALSE(Scalar(1) == Scalar("1"));
  EXPECT_FALSE(Scalar(true) == Scalar(1));
  EXPECT_EQ(Scalar(2.5).to_string(), "2.5");
  EXPECT_EQ(Scalar(3.0).to_string(), "3.0");
  EXPECT_EQ(Scalar("ab").to_string(), "\"ab\"");
}

TEST(GraphProperties, ValidateAgreesWithBruteForceOnRandomGraphs) {
  testing::Rng rng(11);
  int valid = 0;
  for (int round = 0; round < 400; ++round) {
    auto g = round % 2 ? testing::random_graph(rng, 8) : testing::random_dag(rng, 8);
    bool expected = testing::bf_is_rooted_dag(testing::RawGraph::of(g));
    EXPECT_EQ(validate_graph(g).ok(), expected) << "round " << round;
    valid += expected;
  }
  // Both outcomes must actually be exercised.
  EXPECT_GT(valid, 100);
  EXPECT_LT(valid, 400);
}

TEST(GraphProperties, TopoLevelsMatchPathEnumeration) {
  testing::Rng rng(12);
  for (int round = 0; round < 300; ++round) {
    auto g = testing::random_dag(rng, 8);
    EXPECT_EQ(topo_levels(g), testing::bf_longest_levels(testing::RawGraph::of(g)));
    for (const auto& e : g.edges()) {
      auto levels = topo_levels(g);
      EXPECT_GE(levels[e.dst], levels[e.src] + 1);
    }
  }
}

TEST(GraphProperties, AncestorsAreClosedAndMonotone) {
  testing::Rng rng(13);
  for (int round = 0; round < 200; ++round) {
    auto g = testing::random_dag(rng, 8);
    auto reach = testing::bf_reach(testing::RawGraph::of(g));
    for (const auto& v : g.vertices()) {
      auto up = ancestors(g, v.id);
      EXPECT_TRUE(up.contains(v.id));
      EXPECT_TRUE(up.contains(kRootVertex));
      for (const auto& u : g.vertices()) {
        EXPECT_EQ(up.contains(u.id), u.id == v.id || reach[u.id].contains(v.id));
      }
    }
    // Adding a forward edge between two vertices never shrinks any ancestor set.
    if (g.vertex_count() < 3) continue;
    auto levels = topo_levels(g);
    auto lo = g.vertices()[1].id;
    auto hi = g.vertices()[2].id;
    if (levels[lo] > levels[hi]) std::swap(lo, hi);
    if (levels[lo] == levels[hi]) continue;
    auto bigger = with_extra_edges(g, {{lo, hi, EdgeLabel::data("extra", 0)}});
    for (const auto& v : g.vertices()) {
      auto before = ancestors(g, v.id);
      auto after = ancestors(bigger, v.id);
      EXPECT_TRUE(std::includes(after.begin(), after.end(), before.begin(), before.end()));
    }
  }
}

}  // namespace
}  // namespace cutloc
