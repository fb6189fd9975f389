#include <doctest.h>

#include <nlohmann/json.hpp>

#include "minirel/fair_assign.hpp"
#include "minirel/kmeans.hpp"
#include "minirel/oracle.hpp"
#include "minirel/rng.hpp"

#include "support/generators.hpp"

using namespace minirel;

namespace {

// n=4, K=2, two disjoint groups, W full
FairAssignInstance toy_instance() {
  FairAssignInstance inst;
  inst.distances.resize(4, 2);
  inst.distances << 0.0, 1.0,
                    0.1, 0.9,
                    1.0, 0.0,
                    0.9, 0.1;
  inst.groups = {{0, 1}, {2, 3}};
  inst.spec.alpha = Rational(51, 100);
  inst.spec.num_groups = 2;
  inst.spec.num_clusters = 2;
  inst.spec.beta = {1, 1};
  inst.spec.allowed = FairnessSpec::full_w(2, 2);
  return inst;
}

// the 6-point 1-D instance used across the suites: two interleaved groups
FairAssignInstance line_instance() {
  FairAssignInstance inst;
  Eigen::VectorXd x(6);
  x << 0.0, 0.1, 0.2, 1.0, 1.1, 1.2;
  Eigen::Vector2d centers(0.1, 1.1);
  inst.distances.resize(6, 2);
  for (int i = 0; i < 6; ++i) {
    for (int k = 0; k < 2; ++k) {
      inst.distances(i, k) = (x[i] - centers[k]) * (x[i] - centers[k]);
    }
  }
  inst.groups = {{0, 1, 3}, {2, 4, 5}};
  inst.spec.alpha = Rational(51, 100);
  inst.spec.num_groups = 2;
  inst.spec.num_clusters = 2;
  inst.spec.beta = {1, 1};
  inst.spec.allowed = FairnessSpec::full_w(2, 2);
  return inst;
}

}  // namespace

TEST_SUITE("fairassign") {

TEST_CASE("big_m uses alpha*n then alpha*u") {
  FairnessSpec spec;
  spec.alpha = Rational(51, 100);
  CHECK(big_m(spec, 100) == doctest::Approx(51.0));
  spec.size_upper = 50;
  CHECK(big_m(spec, 100) == doctest::Approx(25.5));
  spec.alpha = Rational(1, 1);
  spec.size_upper = -1;
  CHECK(big_m(spec, 10) == doctest::Approx(10.0));
}

TEST_CASE("full model has the documented shape") {
  const FairAssignInstance inst = toy_instance();
  const milp::Model m = build_full(inst);
  CHECK(m.num_vars() == 8 + 4);              // 8 z + 4 y
  CHECK(m.num_rows() == 4 + 4 + 2 + 4);      // assignment + big-M + coverage + cardinality
}

TEST_CASE("prefixed model drops y and big-M rows") {
  FairAssignInstance inst = toy_instance();
  inst.plan = std::vector<GroupClusterPair>{{0, 0}, {1, 1}};
  const milp::Model m = build_prefixed(inst);
  CHECK(m.num_vars() == 8);
  CHECK(m.num_rows() == 4 + 2 + 4);
  const milp::Model full = build_full(inst);
  CHECK(m.num_vars() < full.num_vars());
  CHECK(m.num_rows() < full.num_rows());
}

TEST_CASE("beta zero reduces to greedy nearest assignment") {
  FairAssignInstance inst = toy_instance();
  inst.spec.beta = {0, 0};
  const AssignResult res = solve(inst);
  REQUIRE(res.status == milp::SolveStatus::Optimal);
  CHECK(res.assignment == std::vector<int>{0, 0, 1, 1});
  CHECK(res.objective == doctest::Approx(0.2));
}

TEST_CASE("balanced-cluster bounds force a split") {
  FairAssignInstance inst = toy_instance();
  inst.spec.beta = {0, 0};
  inst.spec.size_lower = 2;
  inst.spec.size_upper = 2;
  const AssignResult res = solve(inst);
  REQUIRE(res.status == milp::SolveStatus::Optimal);
  auto sizes = std::vector<long long>(2, 0);
  for (int k : res.assignment) sizes[static_cast<std::size_t>(k)]++;
  CHECK(sizes == std::vector<long long>{2, 2});
}

TEST_CASE("six-point line instance matches the exhaustive oracle") {
  const FairAssignInstance inst = line_instance();
  const auto truth = oracle::brute_force_fair_assignment(inst);
  REQUIRE(truth.feasible);
  const AssignResult res = solve(inst);
  REQUIRE(res.status == milp::SolveStatus::Optimal);
  CHECK(res.objective == doctest::Approx(truth.objective).epsilon(1e-12));
  // fairness holds on the returned assignment
  std::vector<long long> sizes(2, 0), g0(2, 0), g1(2, 0);
  for (std::size_t i = 0; i < 6; ++i) sizes[static_cast<std::size_t>(res.assignment[i])]++;
  for (std::size_t i : inst.groups[0]) g0[static_cast<std::size_t>(res.assignment[i])]++;
  for (std::size_t i : inst.groups[1]) g1[static_cast<std::size_t>(res.assignment[i])]++;
  long long rep0 = 0, rep1 = 0;
  for (int k = 0; k < 2; ++k) {
    if (is_alpha_represented(sizes[k], g0[k], inst.spec.alpha)) ++rep0;
    if (is_alpha_represented(sizes[k], g1[k], inst.spec.alpha)) ++rep1;
  }
  CHECK(rep0 >= 1);
  CHECK(rep1 >= 1);
}

TEST_CASE("pigeonhole infeasibility surfaces") {
  FairAssignInstance inst = toy_instance();
  inst.spec.allowed = {{0, 0}, {1, 0}, {1, 1}};
  inst.spec.beta = {2, 1};  // group 0 only has one allowed cluster
  const AssignResult res = solve(inst);
  CHECK(res.status == milp::SolveStatus::Infeasible);
}

TEST_CASE("fair optimum dominates the greedy cost") {
  Rng rng(555);
  for (int t = 0; t < 25; ++t) {
    const FairAssignInstance inst = gen::random_fair_instance(rng);
    const AssignResult fair = solve(inst);
    if (fair.status != milp::SolveStatus::Optimal) continue;
    double greedy = 0.0;
    for (std::size_t i = 0; i < inst.n(); ++i) {
      greedy += inst.distances.row(static_cast<Eigen::Index>(i)).minCoeff();
    }
    CHECK(fair.objective >= greedy - 1e-9);
  }
}

TEST_CASE("oracle agreement on random instances") {
  Rng rng(808);
  int checked = 0, infeasible = 0;
  for (int t = 0; t < 60; ++t) {
    const FairAssignInstance inst = gen::random_fair_instance(rng);
    const auto truth = oracle::brute_force_fair_assignment(inst);
    const AssignResult res = solve(inst);
    if (truth.feasible) {
      REQUIRE_MESSAGE(res.status == milp::SolveStatus::Optimal, "instance ", t);
      REQUIRE_MESSAGE(std::abs(res.objective - truth.objective) <= 1e-9, "instance ", t,
                      ": ip ", res.objective, " vs oracle ", truth.objective);
      ++checked;
    } else {
      REQUIRE_MESSAGE(res.status == milp::SolveStatus::Infeasible, "instance ", t);
      ++infeasible;
    }
  }
  CHECK(checked > 0);
  CHECK(infeasible > 0);
}

TEST_CASE("warm-start hint shrinks the tree on most instances") {
  Rng rng(9090);
  int paired = 0, improved_or_equal = 0;
  while (paired < 50) {
    const FairAssignInstance inst = gen::random_fair_instance(rng);
    const AssignResult cold = solve(inst);
    if (cold.status != milp::SolveStatus::Optimal) continue;
    const AssignResult warm = solve(inst, {}, cold.assignment);
    REQUIRE(warm.status == milp::SolveStatus::Optimal);
    CHECK(warm.hint_accepted);
    CHECK(warm.objective == doctest::Approx(cold.objective).epsilon(1e-12));
    ++paired;
    if (warm.nodes <= cold.nodes) ++improved_or_equal;
  }
  CHECK(improved_or_equal >= 40);  // >= 80% of 50
}

TEST_CASE("instance json round-trip") {
  FairAssignInstance inst = line_instance();
  inst.plan = std::vector<GroupClusterPair>{{0, 0}, {1, 1}};
  const nlohmann::json j = instance_to_json(inst);
  const FairAssignInstance back = instance_from_json(j);
  CHECK(back.distances == inst.distances);
  CHECK(back.groups == inst.groups);
  CHECK(back.spec.alpha == inst.spec.alpha);
  CHECK(back.spec.beta == inst.spec.beta);
  CHECK(back.spec.allowed == inst.spec.allowed);
  REQUIRE(back.plan.has_value());
  CHECK(*back.plan == *inst.plan);
  // solving the round-tripped instance gives the same objective
  CHECK(solve(back).objective == doctest::Approx(solve(inst).objective));
}

}  // TEST_SUITE
