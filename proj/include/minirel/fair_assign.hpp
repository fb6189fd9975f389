#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "minirel/fairness.hpp"
#include "minirel/milp.hpp"

namespace minirel {

// The assignment subproblem with centers fixed: distances D[i][k], fairness
// parameters, group membership, and optionally a pre-fixed set of
// (group, cluster) representation obligations.
struct FairAssignInstance {
  Eigen::MatrixXd distances;  // n x K squared distances
  FairnessSpec spec;
  std::vector<std::vector<std::size_t>> groups;  // X_g index sets
  std::optional<std::vector<GroupClusterPair>> plan;

  std::size_t n() const { return static_cast<std::size_t>(distances.rows()); }
  int K() const { return static_cast<int>(distances.cols()); }
};

// alpha * u when a cardinality upper bound is active, else alpha * n.
double big_m(const FairnessSpec& spec, std::size_t n);

// Full model: n*K binary z variables (i-major) then |W| binary y variables in
// W order. Rows: n assignment equalities, |W| big-M tracking rows, |G|
// coverage rows, K lower- and K upper-cardinality rows. Fairness rows are
// scaled by the denominator of alpha so every coefficient is an integer.
milp::Model build_full(const FairAssignInstance& instance);

// Pre-fixed model: z variables only; one hard representation row per
// obligation in the plan, plus assignment and cardinality rows.
milp::Model build_prefixed(const FairAssignInstance& instance);

struct AssignResult {
  milp::SolveStatus status = milp::SolveStatus::Numerical;
  std::vector<int> assignment;  // point -> cluster, valid when an incumbent exists
  double objective = 0.0;
  long long nodes = 0;
  bool hint_accepted = false;
};

// Solve the instance (pre-fixed form when a plan is present, else the full
// form). An optional previous assignment is passed to the solver as an
// incumbent hint. Infeasible is a legitimate outcome and is never masked.
AssignResult solve(const FairAssignInstance& instance, const milp::Options& options = {},
                   const std::optional<std::vector<int>>& hint_assignment = std::nullopt);

// Greedy repair: start from the nearest-center assignment and move the
// cheapest outside group members until every obligation (the plan, or a
// greedily chosen quota cover) holds, then fix cluster sizes. Best-effort;
// the solver re-verifies any hint exactly, so a bad repair is just ignored.
std::optional<std::vector<int>> heuristic_assignment(const FairAssignInstance& instance);

// Regression-fixture serialization (documented schema: distances, groups,
// spec with exact rational alpha, optional plan).
nlohmann::json instance_to_json(const FairAssignInstance& instance);
FairAssignInstance instance_from_json(const nlohmann::json& j);

}  // namespace minirel
