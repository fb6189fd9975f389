#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "minirel/fairness.hpp"
#include "minirel/kmeans.hpp"
#include "minirel/milp.hpp"
#include "minirel/prefix.hpp"

namespace minirel {

enum class InitScheme { Random, KMeansPP, WarmStart };

// Auto = IP pre-fixing when groups are disjoint and alpha > 1/2 (the regime
// where pre-fixing preserves the optimum), full model otherwise.
enum class PrefixMode { Off, Auto, Ip, Naive };

struct MiniRelConfig {
  int K = 2;
  FairnessSpec spec;
  InitScheme init = InitScheme::WarmStart;
  int restarts = 10;          // warm-start restarts
  int iteration_limit = 100;  // L
  PrefixMode prefix = PrefixMode::Auto;
  PrefixObjective prefix_objective = PrefixObjective::Local;
  std::uint64_t seed = 0;
  milp::Budgets budgets;
};

enum class RunStatus { Success, Infeasible, SolverLimit };

struct IterationRecord {
  int iter = 0;
  double ip_objective = 0.0;  // assignment cost under the centers it was solved for
  double cost = 0.0;          // clustering cost after the mean update
  int changed = 0;            // points whose cluster changed this iteration
  long long nodes = 0;
  double wall_ms = 0.0;
  bool budget_hit = false;

  nlohmann::json to_json() const;
};

struct MiniRelTrace {
  std::vector<IterationRecord> iterations;
  Clustering clustering;
  ValidationReport report;
  RunStatus status = RunStatus::Infeasible;
  std::string message;
  bool fixed_point = false;
  bool used_prefix = false;
  PrefixPlan plan;
  double init_wall_ms = 0.0;
  double total_wall_ms = 0.0;
};

// Centers for the configured scheme: Random -> random_init, KMeansPP ->
// kmeanspp_init, WarmStart -> best_of(restarts) Lloyd centers.
Centers initialize(const Dataset& ds, const MiniRelConfig& cfg);

// The MiniReL loop: alternate the exact fair assignment with mean-center
// updates until the assignment reaches a fixed point or the iteration limit.
// The previous iteration's assignment is passed to the solver as an
// incumbent, so the objective sequence is non-increasing even when a solver
// budget cuts a solve short.
MiniRelTrace run(const Dataset& ds, const MiniRelConfig& cfg);

}  // namespace minirel
