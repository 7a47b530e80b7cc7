// Copyright 2026 The Quadra Authors
//
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

#include "quadra/reduce.hpp"

#include <catch2/catch_amalgamated.hpp>

#include "quadra/multigraph.hpp"
#include "test_helpers.hpp"

using quadra::Pbf;
using quadra::quadratize;
using quadra::ReductionResult;
using quadra::select_pair;
using quadra::SelectionStrategy;
using quadra::substitute_pair;

namespace {
constexpr SelectionStrategy kAllStrategies[] = {SelectionStrategy::Sparse,
                                                SelectionStrategy::Medium,
                                                SelectionStrategy::Dense};
}  // namespace

TEST_CASE("default penalty weight is one plus the coefficient mass") {
  CHECK(quadra::default_penalty_weight(Pbf()) == 1.0);
  CHECK(quadra::default_penalty_weight(
            Pbf::from_terms({{{0}, 3.0}, {{1, 2}, -2.0}})) == 6.0);
  CHECK(quadra::default_penalty_weight(quadra::testing::worked_reduction_input()) ==
        5.0);
}

TEST_CASE("strategy names round-trip") {
  for (SelectionStrategy s : kAllStrategies) {
    CHECK(quadra::strategy_from_string(quadra::to_string(s)) == s);
  }
  CHECK_THROWS_AS(quadra::strategy_from_string("densest"), std::invalid_argument);
}

TEST_CASE("select_pair on the worked example picks (0,1) then (2,4)") {
  const Pbf f1 = quadra::testing::worked_reduction_input();
  const Pbf f2 = quadra::testing::worked_reduction_midpoint();
  for (SelectionStrategy s : kAllStrategies) {
    CHECK(select_pair(f1, s) == std::pair<quadra::VarId, quadra::VarId>{0, 1});
    // (2,4) and (3,4) both occur twice across all monomials; the
    // lexicographic tie-break settles on (2,4).
    CHECK(select_pair(f2, s) == std::pair<quadra::VarId, quadra::VarId>{2, 4});
  }
}

TEST_CASE("select_pair ranks by occurrences across all monomials") {
  // The quadratic x1x2 boosts the pair above the cubic-only alternatives.
  const Pbf f = Pbf::from_terms({{{0, 1, 2}, 1.0}, {{1, 2}, 1.0}});
  for (SelectionStrategy s : kAllStrategies) {
    CHECK(select_pair(f, s) == std::pair<quadra::VarId, quadra::VarId>{1, 2});
  }
}

TEST_CASE("candidate scopes differ between strategies") {
  SECTION("sparse scans only the first maximal monomial") {
    const Pbf f =
        Pbf::from_terms({{{0, 1, 2}, 1.0}, {{3, 4, 5}, 1.0}, {{3, 4}, 1.0}});
    CHECK(select_pair(f, SelectionStrategy::Sparse) ==
          std::pair<quadra::VarId, quadra::VarId>{0, 1});
    CHECK(select_pair(f, SelectionStrategy::Medium) ==
          std::pair<quadra::VarId, quadra::VarId>{3, 4});
    CHECK(select_pair(f, SelectionStrategy::Dense) ==
          std::pair<quadra::VarId, quadra::VarId>{3, 4});
  }
  SECTION("dense also scans below the maximal degree") {
    const Pbf f = Pbf::from_terms(
        {{{0, 1, 2, 3}, 1.0}, {{4, 5, 6}, 1.0}, {{4, 5}, 1.0}});
    CHECK(select_pair(f, SelectionStrategy::Sparse) ==
          std::pair<quadra::VarId, quadra::VarId>{0, 1});
    CHECK(select_pair(f, SelectionStrategy::Medium) ==
          std::pair<quadra::VarId, quadra::VarId>{0, 1});
    CHECK(select_pair(f, SelectionStrategy::Dense) ==
          std::pair<quadra::VarId, quadra::VarId>{4, 5});
  }
  SECTION("disjoint supports fall back to the lexicographic first pair") {
    const Pbf f = Pbf::from_terms({{{1, 2, 3}, 1.0}, {{4, 5, 6}, 1.0}});
    for (SelectionStrategy s : kAllStrategies) {
      CHECK(select_pair(f, s) == std::pair<quadra::VarId, quadra::VarId>{1, 2});
    }
  }
}

TEST_CASE("ranking rules differ between strategies") {
  SECTION("sparse takes the first recurring pair, not the most frequent") {
    // Within x0x1x2x3, (1,2) is the lexicographically first pair that
    // recurs elsewhere; (2,3) recurs more often but sparse never ranks.
    const Pbf f = Pbf::from_terms({{{0, 1, 2, 3}, 1.0},
                                   {{1, 2}, 1.0},
                                   {{2, 3}, 1.0},
                                   {{2, 3, 5}, 1.0}});
    CHECK(select_pair(f, SelectionStrategy::Sparse) ==
          std::pair<quadra::VarId, quadra::VarId>{1, 2});
    CHECK(select_pair(f, SelectionStrategy::Medium) ==
          std::pair<quadra::VarId, quadra::VarId>{2, 3});
    CHECK(select_pair(f, SelectionStrategy::Dense) ==
          std::pair<quadra::VarId, quadra::VarId>{2, 3});
  }
  SECTION("medium prefers the pair covering the most maximal monomials") {
    // (0,1) sits in two degree-4 monomials; (2,3) occurs three times in
    // total but only once at the maximal degree.
    const Pbf f = Pbf::from_terms({{{0, 1, 2, 3}, 1.0},
                                   {{0, 1, 4, 5}, 1.0},
                                   {{2, 3, 6}, 1.0},
                                   {{2, 3, 7}, 1.0}});
    CHECK(select_pair(f, SelectionStrategy::Sparse) ==
          std::pair<quadra::VarId, quadra::VarId>{0, 1});
    CHECK(select_pair(f, SelectionStrategy::Medium) ==
          std::pair<quadra::VarId, quadra::VarId>{0, 1});
    CHECK(select_pair(f, SelectionStrategy::Dense) ==
          std::pair<quadra::VarId, quadra::VarId>{2, 3});
  }
}

TEST_CASE("select_pair refuses quadratic inputs") {
  const Pbf f = Pbf::from_terms({{{0, 1}, 1.0}});
  for (SelectionStrategy s : kAllStrategies) {
    CHECK_THROWS_AS(select_pair(f, s), std::invalid_argument);
  }
}

TEST_CASE("substitute_pair reproduces the worked example step by step") {
  const Pbf f1 = quadra::testing::worked_reduction_input();
  const Pbf f2 = substitute_pair(f1, 0, 1, 4, 1.0);
  CHECK(f2 == quadra::testing::worked_reduction_midpoint());
  const Pbf f3 = substitute_pair(f2, 2, 4, 5, 1.0);
  CHECK(f3 == quadra::testing::worked_reduction_output());
}

TEST_CASE("substitute_pair rewrites the standalone quadratic too") {
  const Pbf f = Pbf::from_terms({{{0, 1}, 1.0}});
  const Pbf out = substitute_pair(f, 0, 1, 2, 1.0);
  CHECK(out == Pbf::from_terms(
                   {{{2}, 4.0}, {{0, 1}, 1.0}, {{0, 2}, -2.0}, {{1, 2}, -2.0}}));
}

TEST_CASE("the penalty gadget is zero on consistent corners, >= 1 otherwise") {
  // Substituting on the zero polynomial leaves exactly the penalty behind.
  const Pbf penalty = substitute_pair(Pbf(2), 0, 1, 2, 1.0);
  const double expected[2][2][2] = {// [x0][x1][y]
                                    {{0.0, 3.0}, {0.0, 1.0}},
                                    {{0.0, 1.0}, {1.0, 0.0}}};
  for (std::uint8_t x0 : {0, 1}) {
    for (std::uint8_t x1 : {0, 1}) {
      for (std::uint8_t y : {0, 1}) {
        const std::vector<std::uint8_t> bits = {x0, x1, y};
        CHECK(penalty.evaluate(bits) == expected[x0][x1][y]);
      }
    }
  }
}

TEST_CASE("substitute_pair validates its preconditions") {
  const Pbf f = quadra::testing::worked_reduction_input();
  CHECK_THROWS_AS(substitute_pair(f, 1, 1, 4, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(substitute_pair(f, 0, 7, 4, 1.0), std::out_of_range);
  CHECK_THROWS_AS(substitute_pair(f, 0, 1, 3, 1.0), std::out_of_range);
  CHECK_THROWS_AS(substitute_pair(f, 0, 1, 5, 1.0), std::out_of_range);
  CHECK_THROWS_AS(substitute_pair(f, 0, 1, 4, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(substitute_pair(f, 0, 1, 4, -2.0), std::invalid_argument);
}

TEST_CASE("quadratize reproduces the worked two-step reduction") {
  const Pbf f1 = quadra::testing::worked_reduction_input();
  for (SelectionStrategy s : kAllStrategies) {
    const ReductionResult r = quadratize(f1, s, 1.0);
    REQUIRE(r.steps.size() == 2);
    CHECK(r.steps[0] == quadra::ReductionStep{0, 1, 4, 0});
    CHECK(r.steps[1] == quadra::ReductionStep{2, 4, 5, 0});
    CHECK(r.steps[0].pair_multiplicity == 4);  // all four monomials hold (0,1)
    CHECK(r.steps[1].pair_multiplicity == 2);
    CHECK(r.reduced == quadra::testing::worked_reduction_output());
    CHECK(r.penalty_weight == 1.0);
    CHECK(r.original_num_vars == 4);
    CHECK(r.introduced_vars() == 2);
  }
}

TEST_CASE("quadratize uses the default weight policy when none is given") {
  const ReductionResult r =
      quadratize(quadra::testing::worked_reduction_input(),
                 SelectionStrategy::Sparse);
  CHECK(r.penalty_weight == 5.0);
  CHECK_THROWS_AS(quadratize(quadra::testing::worked_reduction_input(),
                             SelectionStrategy::Sparse, -1.0),
                  std::invalid_argument);
}

TEST_CASE("quadratize is the identity on quadratic inputs") {
  const Pbf f = Pbf::from_terms({{{0, 1}, 2.0}, {{1}, -1.0}, {{}, 0.5}});
  const ReductionResult r = quadratize(f, SelectionStrategy::Dense);
  CHECK(r.steps.empty());
  CHECK(r.reduced == f);
  CHECK(r.reduced.num_vars() == f.num_vars());
}

TEST_CASE("a single degree-k monomial needs exactly k-2 steps") {
  for (std::size_t k = 3; k <= 7; ++k) {
    std::vector<std::int64_t> vars;
    for (std::size_t v = 0; v < k; ++v) vars.push_back(static_cast<std::int64_t>(v));
    const Pbf mono = Pbf::from_terms({{vars, -3.5}});
    for (SelectionStrategy s : kAllStrategies) {
      const ReductionResult r = quadratize(mono, s);
      CHECK(r.steps.size() == k - 2);
      CHECK(r.reduced.degree() <= 2);
    }
  }
}

TEST_CASE("auxiliary indices are fresh and sequential") {
  for (SelectionStrategy s : kAllStrategies) {
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
      const Pbf f = quadra::testing::random_pbf(seed);
      const ReductionResult r = quadratize(f, s);
      CHECK(r.reduced.num_vars() == f.num_vars() + r.steps.size());
      CHECK(r.reduced.degree() <= 2);
      for (std::size_t k = 0; k < r.steps.size(); ++k) {
        CHECK(r.steps[k].h == f.num_vars() + k);
        CHECK(r.steps[k].i < r.steps[k].j);
        CHECK(r.steps[k].j < r.steps[k].h);
      }
    }
  }
}

TEST_CASE("step count is bounded by the total excess degree") {
  for (SelectionStrategy s : kAllStrategies) {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
      const Pbf f = quadra::testing::random_pbf(seed);
      const ReductionResult r = quadratize(f, s);
      CHECK(r.steps.size() <= quadra::testing::reduction_slack(f));
    }
  }
}

TEST_CASE("every step strictly lowers the excess degree and adds a fresh linear term") {
  for (SelectionStrategy s : kAllStrategies) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const Pbf f = quadra::testing::random_pbf(seed);
      const double w = quadra::default_penalty_weight(f);
      Pbf current = f;
      while (current.degree() > 2) {
        const std::size_t slack_before = quadra::testing::reduction_slack(current);
        const auto [i, j] = select_pair(current, s);
        const quadra::VarId h = static_cast<quadra::VarId>(current.num_vars());
        current = substitute_pair(current, i, j, h, w);
        CHECK(quadra::testing::reduction_slack(current) < slack_before);
        CHECK(current.coefficient({h}) != 0.0);
      }
    }
  }
}

TEST_CASE("quadratize is deterministic") {
  const Pbf f = quadra::testing::random_pbf(77);
  for (SelectionStrategy s : kAllStrategies) {
    const ReductionResult a = quadratize(f, s);
    const ReductionResult b = quadratize(f, s);
    CHECK(a.reduced == b.reduced);
    CHECK(a.steps == b.steps);
  }
}

TEST_CASE("decode_assignment projects and checks auxiliary consistency") {
  const ReductionResult r = quadratize(quadra::testing::worked_reduction_input(),
                                       SelectionStrategy::Sparse, 1.0);
  SECTION("consistent extension decodes cleanly") {
    const std::vector<std::uint8_t> extended = {1, 1, 0, 0, 1, 0};
    const quadra::DecodedAssignment d = quadra::decode_assignment(r, extended);
    CHECK(d.consistent);
    CHECK(d.assignment == std::vector<std::uint8_t>{1, 1, 0, 0});
  }
  SECTION("broken auxiliary is flagged") {
    const std::vector<std::uint8_t> broken = {1, 1, 0, 0, 0, 0};
    CHECK_FALSE(quadra::decode_assignment(r, broken).consistent);
    // Chained inconsistency: y2 must equal x2 * y1 = 0 here.
    const std::vector<std::uint8_t> chained = {1, 1, 0, 0, 1, 1};
    CHECK_FALSE(quadra::decode_assignment(r, chained).consistent);
  }
  SECTION("length mismatch throws") {
    const std::vector<std::uint8_t> wrong = {1, 1, 0, 0};
    CHECK_THROWS_AS(quadra::decode_assignment(r, wrong), std::invalid_argument);
  }
}

TEST_CASE("trace JSON round-trips") {
  const ReductionResult r = quadratize(quadra::testing::worked_reduction_input(),
                                       SelectionStrategy::Medium, 1.0);
  const nlohmann::json j = r;
  CHECK(j.at("penalty_weight") == 1.0);
  CHECK(j.at("introduced_vars") == 2);
  CHECK(j.at("original_num_vars") == 4);
  REQUIRE(j.at("steps").size() == 2);
  CHECK(j.at("steps")[0] == nlohmann::json({{"i", 0}, {"j", 1}, {"h", 4}}));

  const ReductionResult back = j.get<ReductionResult>();
  CHECK(back.reduced == r.reduced);
  CHECK(back.steps == r.steps);
  CHECK(back.penalty_weight == r.penalty_weight);
  CHECK(back.original_num_vars == 4);

  // original_num_vars falls back to reduced minus steps when absent.
  nlohmann::json stripped = j;
  stripped.erase("original_num_vars");
  stripped.erase("elapsed_ms");
  CHECK(stripped.get<ReductionResult>().original_num_vars == 4);
}
