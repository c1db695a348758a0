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

// Shared graph fixtures.
//
//   CHAIN4:  v0 -ctrl-> v1 -(x,1)-> v2 -(x,2)-> v3
//   DIAMOND: v0 -ctrl-> a, v0 -ctrl-> b, a -(x,1)-> c, b -(y,2)-> c
//            with a = 1, b = 2, c = 3

#pragma once

#include "cutloc/graph.hpp"

namespace cutloc::testing {

inline constexpr VertexId kA = 1;
inline constexpr VertexId kB = 2;
inline constexpr VertexId kC = 3;

inline ExecutionGraph chain4() {
  return GraphBuilder()
      .vertex(1, "x = 1")
      .vertex(2, "x = x + 1")
      .vertex(3, "output x")
      .control(0, 1)
      .data(1, 2, "x", 1)
      .data(2, 3, "x", 2)
      .build();
}

inline EdgeKey e01() { return {0, 1, EdgeKind::kControl, ""}; }
inline EdgeKey e12() { return {1, 2, EdgeKind::kData, "x"}; }
inline EdgeKey e23() { return {2, 3, EdgeKind::kData, "x"}; }

inline ExecutionGraph diamond() {
  return GraphBuilder()
      .vertex(kA, "a")
      .vertex(kB, "b")
      .vertex(kC, "c")
      .control(0, kA)
      .control(0, kB)
      .data(kA, kC, "x", 1)
      .data(kB, kC, "y", 2)
      .build();
}

// Path v0 -> v1 -> ... -> v(n-1); the first edge is control, the rest carry
// x = source id.
inline ExecutionGraph chain(VertexId n) {
  GraphBuilder b;
  for (VertexId v = 1; v < n; ++v) b.vertex(v, "step " + std::to_string(v));
  if (n > 1) b.control(0, 1);
  for (VertexId v = 1; v + 1 < n; ++v) b.data(v, v + 1, "x", static_cast<int>(v));
  return b.build();
}

// Three writers feed one reader. Writers are v1: z = 9, v2: x = 3, v3: y = 4,
// all directly under the root; v4 reads z, x and y. The cut W = {v0..v3}
// carries exactly the three data atoms.
inline ExecutionGraph critical_section_fixture() {
  return GraphBuilder()
      .vertex(1, "z = 9")
      .vertex(2, "x = 3")
      .vertex(3, "y = 4")
      .vertex(4, "check x + y")
      .control(0, 1)
      .control(0, 2)
      .control(0, 3)
      .data(1, 4, "z", 9)
      .data(2, 4, "x", 3)
      .data(3, 4, "y", 4)
      .build();
}

}  // namespace cutloc::testing
