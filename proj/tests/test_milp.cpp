#include <doctest.h>

#include <cmath>

#include "minirel/milp.hpp"
#include "minirel/rng.hpp"

#include "support/generators.hpp"
#include "support/lp_reference.hpp"

using namespace minirel;
using milp::Model;
using milp::Sense;
using milp::SolveStatus;

TEST_SUITE("milp") {

TEST_CASE("lp: one bounded variable") {
  Model m;
  m.add_variable(0.0, 10.0, false, 1.0);
  m.add_row({{0, 1.0}}, Sense::GreaterEqual, 3.0);
  const auto sol = milp::solve_lp(m);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(3.0));
  CHECK(sol.x[0] == doctest::Approx(3.0));
}

TEST_CASE("lp: infeasible pair") {
  Model m;
  m.add_variable(0.0, 10.0, false, 1.0);
  m.add_row({{0, 1.0}}, Sense::GreaterEqual, 2.0);
  m.add_row({{0, 1.0}}, Sense::LessEqual, 1.0);
  CHECK(milp::solve_lp(m).status == SolveStatus::Infeasible);
}

TEST_CASE("lp: unbounded detection") {
  Model m;
  m.add_variable(0.0, std::numeric_limits<double>::infinity(), false, -1.0);
  CHECK(milp::solve_lp(m).status == SolveStatus::Unbounded);
}

TEST_CASE("lp: equality with negative costs and bound flips") {
  Model m;
  m.add_variable(0.0, 4.0, false, -1.0);
  m.add_variable(0.0, 4.0, false, -2.0);
  m.add_row({{0, 1.0}, {1, 1.0}}, Sense::Equal, 5.0);
  const auto sol = milp::solve_lp(m);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(-9.0));  // x1 = 4, x0 = 1
}

TEST_CASE("lp: 100 random instances match the reference tableau solver") {
  Rng rng(424242);
  int optimal_agree = 0, infeasible_agree = 0;
  for (int t = 0; t < 100; ++t) {
    const Model m = gen::random_lp(rng, 10, 8);
    const auto mine = milp::solve_lp(m);
    const auto ref = lpref::solve_reference(m);
    REQUIRE_MESSAGE(mine.status == ref.status,
                    "instance ", t, ": ", milp::to_string(mine.status), " vs reference ",
                    milp::to_string(ref.status));
    if (mine.status == SolveStatus::Optimal) {
      REQUIRE_MESSAGE(std::abs(mine.objective - ref.objective) <=
                          1e-6 * (1.0 + std::abs(ref.objective)),
                      "instance ", t, " objective ", mine.objective, " vs ", ref.objective);
      ++optimal_agree;
    } else {
      ++infeasible_agree;
    }
  }
  CHECK(optimal_agree >= 60);  // the generator leans feasible
  CHECK(infeasible_agree >= 5);
}

TEST_CASE("milp: negated knapsack picks the better item") {
  Model m;
  m.add_variable(0.0, 1.0, true, -3.0);
  m.add_variable(0.0, 1.0, true, -2.0);
  m.add_row({{0, 1.0}, {1, 1.0}}, Sense::LessEqual, 1.0);
  const auto sol = milp::solve_milp(m);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(-3.0));
  CHECK(sol.values[0] == doctest::Approx(1.0));
  CHECK(sol.values[1] == doctest::Approx(0.0));
  CHECK(sol.gap == doctest::Approx(0.0));
}

TEST_CASE("milp: integral assignment LP solves at the root") {
  // 3x3 assignment problem: totally unimodular, so the LP bound is tight
  Model m;
  const double cost[3][3] = {{1, 9, 7}, {8, 2, 9}, {7, 8, 3}};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m.add_variable(0.0, 1.0, true, cost[i][j]);
  }
  for (int i = 0; i < 3; ++i) {
    std::vector<std::pair<int, double>> row;
    for (int j = 0; j < 3; ++j) row.emplace_back(i * 3 + j, 1.0);
    m.add_row(std::move(row), Sense::Equal, 1.0);
  }
  for (int j = 0; j < 3; ++j) {
    std::vector<std::pair<int, double>> col;
    for (int i = 0; i < 3; ++i) col.emplace_back(i * 3 + j, 1.0);
    m.add_row(std::move(col), Sense::Equal, 1.0);
  }
  const auto sol = milp::solve_milp(m);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(6.0));
  CHECK(sol.nodes == 1);
}

TEST_CASE("milp: 120 random 0-1 models match exhaustive enumeration exactly") {
  Rng rng(777);
  int feasible_count = 0;
  for (int t = 0; t < 120; ++t) {
    const Model m = gen::random_binary_milp(rng, 10);
    const auto truth = gen::enumerate_binary(m);
    const auto sol = milp::solve_milp(m);
    if (truth.feasible) {
      REQUIRE_MESSAGE(sol.status == SolveStatus::Optimal, "instance ", t);
      REQUIRE_MESSAGE(sol.objective == truth.objective, "instance ", t, ": got ", sol.objective,
                      " expected ", truth.objective);
      ++feasible_count;
    } else {
      REQUIRE_MESSAGE(sol.status == SolveStatus::Infeasible, "instance ", t);
    }
  }
  CHECK(feasible_count >= 40);
}

TEST_CASE("milp: reproducible values, not just objectives") {
  Rng rng(31337);
  const Model m = gen::random_binary_milp(rng, 12);
  const auto a = milp::solve_milp(m);
  const auto b = milp::solve_milp(m);
  CHECK(a.status == b.status);
  CHECK(a.nodes == b.nodes);
  CHECK(a.values == b.values);
}

TEST_CASE("milp: dual bound never exceeds the incumbent and improves monotonically") {
  Rng rng(99);
  for (int t = 0; t < 20; ++t) {
    const Model m = gen::random_binary_milp(rng, 12);
    double last_bound = -std::numeric_limits<double>::infinity();
    bool monotone = true, bounded = true;
    milp::Options options;
    options.node_callback = [&](const milp::NodeInfo& info) {
      if (info.lower_bound < last_bound - 1e-9) monotone = false;
      last_bound = std::max(last_bound, info.lower_bound);
      if (std::isfinite(info.incumbent) && info.lower_bound > info.incumbent + 1e-9) {
        bounded = false;
      }
    };
    (void)milp::solve_milp(m, options);
    CHECK(bounded);
    CHECK(monotone);
  }
}

TEST_CASE("milp: feasible hint becomes the incumbent, infeasible hints are ignored") {
  Model m;
  m.add_variable(0.0, 1.0, true, -3.0);
  m.add_variable(0.0, 1.0, true, -2.0);
  m.add_row({{0, 1.0}, {1, 1.0}}, Sense::LessEqual, 1.0);

  milp::Options good;
  good.hint = std::vector<double>{0.0, 1.0};
  auto sol = milp::solve_milp(m, good);
  CHECK(sol.hint_accepted);
  CHECK(sol.objective == doctest::Approx(-3.0));  // still finds the optimum

  milp::Options bad;
  bad.hint = std::vector<double>{1.0, 1.0};  // violates the row
  sol = milp::solve_milp(m, bad);
  CHECK_FALSE(sol.hint_accepted);
  CHECK(sol.objective == doctest::Approx(-3.0));
}

TEST_CASE("milp: node budget returns the incumbent with a gap") {
  Rng rng(2024);
  // a model with some tree depth
  Model m;
  for (int j = 0; j < 12; ++j) m.add_variable(0.0, 1.0, true, rng.uniform(-3.0, -0.5));
  for (int r = 0; r < 4; ++r) {
    std::vector<std::pair<int, double>> row;
    for (int j = 0; j < 12; ++j) row.emplace_back(j, 1.0 + rng.uniform01() * 2.0);
    m.add_row(std::move(row), Sense::LessEqual, 8.0);
  }
  const auto full = milp::solve_milp(m);
  REQUIRE(full.status == SolveStatus::Optimal);
  milp::Options capped;
  capped.budgets.nodes = 2;
  capped.hint = full.values;  // guarantees an incumbent exists
  const auto limited = milp::solve_milp(m, capped);
  if (limited.status == SolveStatus::Limit) {
    CHECK(limited.gap >= 0.0);
    CHECK(limited.objective == doctest::Approx(full.objective));
  } else {
    CHECK(limited.status == SolveStatus::Optimal);
  }
}

TEST_CASE("milp: continuous variables mix with binaries") {
  Model m;
  const int x = m.add_variable(0.0, 1.0, true, 5.0);
  const int y = m.add_variable(0.0, 10.0, false, 1.0);
  m.add_row({{x, 6.0}, {y, 1.0}}, Sense::GreaterEqual, 4.0);
  const auto sol = milp::solve_milp(m);
  REQUIRE(sol.status == SolveStatus::Optimal);
  // either x=1 (cost 5) or y=4 (cost 4): y wins
  CHECK(sol.objective == doctest::Approx(4.0));
  CHECK(sol.values[static_cast<std::size_t>(x)] == doctest::Approx(0.0));
  CHECK(sol.values[static_cast<std::size_t>(y)] == doctest::Approx(4.0));
}

TEST_CASE("milp: rejects non-binary integer variables") {
  Model m;
  m.add_variable(0.0, 2.0, true, 1.0);
  CHECK_THROWS_AS(milp::solve_milp(m), std::invalid_argument);
}

TEST_CASE("lp format dump has the documented sections") {
  Model m;
  m.add_variable(0.0, 1.0, true, 1.5);
  m.add_variable(0.0, 3.0, false, -1.0);
  m.add_row({{0, 2.0}, {1, -1.0}}, Sense::LessEqual, 1.0);
  const std::string text = milp::dump_lp_format(m);
  CHECK(text.find("minimize") != std::string::npos);
  CHECK(text.find("subject to") != std::string::npos);
  CHECK(text.find("c0: 2 x0 -1 x1 <= 1") != std::string::npos);
  CHECK(text.find("bounds") != std::string::npos);
  CHECK(text.find("binaries") != std::string::npos);
  CHECK(text.find("end") != std::string::npos);
  // stable: same model, same dump
  CHECK(text == milp::dump_lp_format(m));
}

}  // TEST_SUITE
