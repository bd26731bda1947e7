// Copyright 2026 The cutsat Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cutsat/model.hpp"

#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "cutsat/verify.hpp"
#include "testing.hpp"

namespace cutsat {
namespace {

TEST(ParseInstance, Fig1) {
  const Instance inst = parse_instance("6 4\n2\n3 2 3\n2 2 3\n");
  EXPECT_EQ(inst.sheet_width, 6);
  EXPECT_EQ(inst.sheet_height, 4);
  ASSERT_EQ(inst.types.size(), 2u);
  EXPECT_EQ(inst.types[0], (ItemType{3, 2, 3}));
  EXPECT_EQ(inst.types[1], (ItemType{2, 2, 3}));
}

TEST(ParseInstance, Minimal) {
  const Instance inst = parse_instance("10 10\n1\n1 1 1\n");
  EXPECT_EQ(inst.sheet_width, 10);
  ASSERT_EQ(inst.types.size(), 1u);
  EXPECT_EQ(inst.types[0], (ItemType{1, 1, 1}));
}

TEST(ParseInstance, CommentsAndBlankLinesIgnored) {
  const Instance inst = parse_instance("# sheet\n\n6 4\n# types\n1\n  3 2 1  \n");
  EXPECT_EQ(inst.types.size(), 1u);
}

TEST(ParseInstance, DataFileMatchesFixture) {
  std::ifstream in(testing::data_path("instances/fig1.txt"));
  ASSERT_TRUE(in);
  EXPECT_EQ(parse_instance(in), testing::fig1());
}

TEST(ParseInstance, FitsInNoOrientation) {
  try {
    parse_instance("6 4\n1\n7 5 1\n");
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_EQ(e.line(), 3);
  }
}

TEST(ParseInstance, RotationOnlyFitRejectedWithoutRotation) {
  // 2x5 fits the 6x4 sheet only rotated.
  EXPECT_NO_THROW(parse_instance("6 4\n1\n2 5 1\n", /*rotation=*/true));
  EXPECT_THROW(parse_instance("6 4\n1\n2 5 1\n", /*rotation=*/false), InputError);
}

TEST(ParseInstance, Errors) {
  EXPECT_THROW(parse_instance(""), InputError);
  EXPECT_THROW(parse_instance("6\n1\n1 1 1\n"), InputError);
  EXPECT_THROW(parse_instance("0 4\n1\n1 1 1\n"), InputError);
  EXPECT_THROW(parse_instance("6 4\n1\n1 1 0\n"), InputError);
  EXPECT_THROW(parse_instance("6 4\n1\n0 1 1\n"), InputError);
  EXPECT_THROW(parse_instance("6 4\n2\n1 1 1\n"), InputError);
  EXPECT_THROW(parse_instance("6 4\n1\n1 1 1\n2 2 2\n"), InputError);
  EXPECT_THROW(parse_instance("6 4\n1\n1 x 1\n"), InputError);
  EXPECT_THROW(parse_instance("6 4\n1\n1 1.5 1\n"), InputError);
  EXPECT_THROW(parse_instance("6 4\n0\n"), InputError);
}

TEST(ParseInstance, ErrorNamesLine) {
  try {
    parse_instance("6 4\n2\n1 1 1\n1 0 1\n");
    FAIL();
  } catch (const InputError& e) {
    EXPECT_EQ(e.line(), 4);
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos);
  }
}

TEST(ExpandDemands, Fig1) {
  const auto copies = expand_demands(testing::fig1());
  ASSERT_EQ(copies.size(), 6u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(copies[i], (Copy{0, i + 1, 3, 2}));
    EXPECT_EQ(copies[i + 3], (Copy{1, i + 1, 2, 2}));
  }
}

TEST(ExpandDemands, SingleCopy) {
  EXPECT_EQ(expand_demands(testing::make_instance(4, 4, {{1, 1, 1}})).size(), 1u);
}

TEST(ExpandDemands, TypeMajorOrder) {
  const auto copies = expand_demands(testing::make_instance(4, 4, {{2, 3, 2}, {1, 1, 3}}));
  const std::vector<std::pair<int, int>> expected = {{0, 1}, {0, 2}, {1, 1}, {1, 2}, {1, 3}};
  ASSERT_EQ(copies.size(), expected.size());
  for (size_t i = 0; i < copies.size(); ++i) {
    EXPECT_EQ(copies[i].type_index, expected[i].first);
    EXPECT_EQ(copies[i].ordinal, expected[i].second);
  }
}

TEST(ModelProperties, RandomInstances) {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 500; ++iter) {
    const Instance inst = testing::random_instance(rng, 12, 10);
    int total = 0;
    for (const auto& t : inst.types) total += t.demand;
    EXPECT_EQ(static_cast<int>(expand_demands(inst).size()), total);
    EXPECT_EQ(parse_instance(to_string(inst)), inst);
    EXPECT_EQ(to_string(parse_instance(to_string(inst))), to_string(inst));
  }
}

TEST(SolutionIo, Fig1RoundTrip) {
  const Instance inst = testing::fig1();
  const Solution s = testing::fig1_layout();
  EXPECT_EQ(read_solution(to_string(s), inst), s);
}

TEST(SolutionIo, DataFileIsFig1Layout) {
  std::ifstream in(testing::data_path("instances/fig1.sol"));
  ASSERT_TRUE(in);
  Solution s = read_solution(in, testing::fig1());
  auto expected = testing::fig1_layout();
  auto key = [](const Placement& a, const Placement& b) {
    return std::pair(a.type_index, a.ordinal) < std::pair(b.type_index, b.ordinal);
  };
  std::sort(s.placements.begin(), s.placements.end(), key);
  std::sort(expected.placements.begin(), expected.placements.end(), key);
  EXPECT_EQ(s, expected);
}

TEST(SolutionIo, MinimalSolution) {
  const Instance inst = testing::make_instance(1, 1, {{1, 1, 1}});
  Solution s{{{0, 1, 1, 0, 0, false}}, 1};
  EXPECT_EQ(to_string(s), "1 1\n1 1 1 0 0 0\n");
  EXPECT_EQ(read_solution(to_string(s), inst), s);
}

TEST(SolutionIo, RejectsBoundaryViolation) {
  const Instance inst = testing::fig1();
  // 3x2 at x=4 needs width 7.
  EXPECT_THROW(read_solution("1 1\n1 1 1 4 0 0\n", inst), InputError);
  // Rotated 3x2 is 2x3; at y=2 it needs height 5.
  EXPECT_THROW(read_solution("1 1\n1 1 1 0 2 1\n", inst), InputError);
}

TEST(SolutionIo, RejectsStructuralErrors) {
  const Instance inst = testing::fig1();
  EXPECT_THROW(read_solution("1 2\n1 1 1 0 0 0\n", inst), InputError);
  EXPECT_THROW(read_solution("1 1\n3 1 1 0 0 0\n", inst), InputError);
  EXPECT_THROW(read_solution("1 1\n1 4 1 0 0 0\n", inst), InputError);
  EXPECT_THROW(read_solution("1 1\n1 1 0 0 0 0\n", inst), InputError);
  EXPECT_THROW(read_solution("1 1\n1 1 1 -1 0 0\n", inst), InputError);
  EXPECT_THROW(read_solution("1 1\n1 1 1 0 0 2\n", inst), InputError);
}

TEST(SolutionIo, AcceptedSolutionsPassBoundaryChecks) {
  std::mt19937_64 rng(11);
  const Instance inst = testing::fig1();
  std::uniform_int_distribution<int> coord(0, 6);
  int accepted = 0;
  for (int iter = 0; iter < 2000; ++iter) {
    const int type = iter % 2;
    const bool rot = (iter / 2) % 2 == 1;
    const std::string text = "1 1\n" + std::to_string(type + 1) + " 1 1 " +
                             std::to_string(coord(rng)) + " " + std::to_string(coord(rng)) +
                             " " + (rot ? "1" : "0") + "\n";
    try {
      const Solution s = read_solution(text, inst);
      ++accepted;
      EXPECT_FALSE(verify_solution(inst, s, true).has(ViolationKind::kBoundary));
    } catch (const InputError&) {
    }
  }
  EXPECT_GT(accepted, 0);
}

TEST(CompactSheets, RelabelsInOrder) {
  Solution s{{{0, 1, 3, 0, 0, false}, {0, 2, 7, 0, 0, false}, {0, 3, 3, 2, 0, false}}, 7};
  const Solution c = compact_sheets(s);
  EXPECT_EQ(c.sheets_used, 2);
  EXPECT_EQ(c.placements[0].sheet, 1);
  EXPECT_EQ(c.placements[1].sheet, 2);
  EXPECT_EQ(c.placements[2].sheet, 1);
}

}  // namespace
}  // namespace cutsat
