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

#include "cutloc/predicate.hpp"

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "support/random_gen.hpp"

namespace cutloc {
namespace {

using ::testing::HasSubstr;

State data_state(std::vector<std::tuple<VertexId, std::string, Scalar>> items) {
  State s;
  VertexId dst = 100;
  for (auto& [src, var, value] : items) {
    s.atoms.push_back({EdgeKey{src, dst++, EdgeKind::kData, var}, EdgeLabel::data(var, value)});
  }
  std::sort(s.atoms.begin(), s.atoms.end(),
            [](const Atom& a, const Atom& b) { return a.key < b.key; });
  return s;
}

PredicateResult eval(std::string_view text, const State& s) {
  return eval_predicate(parse_predicate("p", text), s).result;
}

TEST(EvalPredicate, SumExamples) {
  EXPECT_EQ(eval("x + y = 3", data_state({{1, "x", 1}, {2, "y", 2}})), PredicateResult::kNotViolated);
  EXPECT_EQ(eval("x + y = 3", data_state({{1, "x", 1}, {2, "y", 5}})), PredicateResult::kViolated);
  EXPECT_EQ(eval("x + y = 3", data_state({{1, "x", 1}})), PredicateResult::kUnevaluable);
}

TEST(EvalPredicate, TypeMismatchIsUnevaluableWithDiagnostic) {
  auto outcome = eval_predicate(parse_predicate("p", "x + 1 = 2"), data_state({{1, "x", "one"}}));
  EXPECT_EQ(outcome.result, PredicateResult::kUnevaluable);
  EXPECT_THAT(outcome.diagnostic, HasSubstr("non-number"));
  EXPECT_EQ(eval("x", data_state({{1, "x", 3}})), PredicateResult::kUnevaluable);
}

TEST(EvalPredicate, MostRecentWriteWins) {
  auto s = data_state({{2, "x", 7}, {5, "x", 1}, {3, "x", 9}});
  EXPECT_EQ(bindings_of(s).at("x"), Scalar(1));
  EXPECT_EQ(eval("x = 1", s), PredicateResult::kNotViolated);
}

TEST(EvalPredicate, ControlAtomsBindNothing) {
  State s;
  s.atoms.push_back({EdgeKey{0, 1, EdgeKind::kControl, ""}, EdgeLabel::control()});
  EXPECT_TRUE(bindings_of(s).empty());
}

TEST(EvalPredicate, OperatorsAndSpellings) {
  auto s = data_state({{1, "x", 4}, {2, "y", 2}, {3, "name", "bob"}, {4, "held", true}});
  for (auto text : {"x > y", "x >= 4", "y <= 2", "y < x", "x != y", "x ≠ y", "y ≤ 2", "x ≥ 4",
                    "x == 4", "x * y = 8", "x × y = 8", "x - y = 2", "-x = 0 - 4",
                    "name = \"bob\"", "name < \"carl\"", "held = true", "not (x = 1)", "!(x = 1)",
                    "x = 4 and y = 2", "x = 4 && y = 2", "x = 1 or y = 2", "x = 1 || y = 2",
                    "x + y * 2 = 8", "(x + y) * 2 = 12", "2.5 * 2 = 5"}) {
    EXPECT_EQ(eval(text, s), PredicateResult::kNotViolated) << text;
  }
  EXPECT_EQ(eval("held < true", s), PredicateResult::kUnevaluable);
  EXPECT_EQ(eval("name = 1", s), PredicateResult::kUnevaluable);
  EXPECT_EQ(eval("x = 4 and name", s), PredicateResult::kUnevaluable);
}

TEST(EvalPredicate, UnboundVariableWinsOverShortCircuit) {
  // "x = 1 or y = 1" with only y bound: x is unbound, so the whole predicate
  // is Unevaluable even though y = 1 would settle a disjunction.
  EXPECT_EQ(eval("x = 1 or y = 1", data_state({{1, "y", 1}})), PredicateResult::kUnevaluable);
}

TEST(ParsePredicate, SyntaxErrors) {
  for (auto text : {"", "x +", "(x = 1", "x = = 1", "\"abc", "x = 1 )", "and = 1", "x # 1"}) {
    try {
      parse_predicate("p", text);
      ADD_FAILURE() << "accepted '" << text << "'";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kPredicateSyntax) << text;
    }
  }
}

TEST(ParsePredicate, LineAndListForms) {
  auto p = parse_predicate_line("inv1: x + y = 10");
  EXPECT_EQ(p.id, "inv1");
  EXPECT_EQ(p.text, "x + y = 10");
  EXPECT_EQ(p.variables, (std::set<std::string>{"x", "y"}));

  auto list = parse_predicate_list("# invariants\n\ninv1: x = 1\n  inv2: y < 0  \n");
  ASSERT_EQ(list.size(), 2u);
  EXPECT_EQ(list[1].id, "inv2");

  try {
    parse_predicate_list("a: x = 1\na: y = 1\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDuplicatePredicate);
  }
  EXPECT_THROW(parse_predicate_line("x = 1"), Error);
  EXPECT_THROW(parse_predicate_line("1bad: x = 1"), Error);
}

TEST(PredicateProperties, AgreesWithReferenceEvaluator) {
  testing::Rng rng(31);
  int counts[3] = {0, 0, 0};
  for (int round = 0; round < 2000; ++round) {
    auto ref = testing::ref_bool(rng, 3);
    auto s = testing::random_state(rng, 6);
    auto p = parse_predicate("p", ref.text);
    auto expected = testing::ref_outcome(ref, testing::ref_bindings(s.atoms));
    auto got = eval_predicate(p, s).result;
    ++counts[static_cast<int>(got)];
    ASSERT_EQ(static_cast<int>(got), static_cast<int>(expected)) << ref.text;
    // Deterministic: evaluating twice gives the same answer.
    EXPECT_EQ(eval_predicate(p, s).result, got);
  }
  for (int c : counts) EXPECT_GT(c, 50);
}

}  // namespace
}  // namespace cutloc
