#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "minirel/fairness.hpp"
#include "minirel/kmeans.hpp"

namespace minirel {

// A chosen set of (group, cluster) representation obligations. Every plan
// satisfies: at least beta_g obligations per group, at most floor(1/alpha)
// groups per cluster, and plan is a subset of W.
struct PrefixPlan {
  std::vector<GroupClusterPair> obligations;           // sorted
  std::map<GroupClusterPair, double> costs;            // costs used, on W
  double objective = 0.0;

  nlohmann::json to_json() const;
  static PrefixPlan from_json(const nlohmann::json& j);
};

enum class PrefixObjective { Proportion, Weighted, Local };

// Cost sentinel marking a (g,k) pair that cannot be pre-fixed (not enough
// group members outside the cluster); such cells are dropped from W.
constexpr double kInfeasibleCost = std::numeric_limits<double>::infinity();

// max(alpha - p_gk, 0): the share of cluster k that would have to change.
double cost_proportion(const Clustering& clustering, const Dataset& ds, int g, int k,
                       Rational alpha);

// |C_k| * max(alpha - p_gk, 0).
double cost_weighted(const Clustering& clustering, const Dataset& ds, int g, int k,
                     Rational alpha);

// Smallest q with (q + group_in_cluster) >= alpha * (q + size), i.e.
// ceil(max(0, alpha - p) / (1 - alpha) * size), computed in exact integer
// arithmetic. Returns -1 if no finite q works (alpha = 1 with p < 1).
long long required_moves_counts(long long group_in_cluster, long long cluster_size,
                                Rational alpha);

// Spec-facing wrapper taking the proportion p_gk; p*size must be integral.
long long required_moves(double p_gk, long long cluster_size, Rational alpha);

// Sum of the q smallest squared distances from group-g points outside C_k to
// center c_k; kInfeasibleCost when fewer than q candidates exist.
double cost_local(const Clustering& clustering, const Dataset& ds, int g, int k, Rational alpha);

// G x K cost matrix for the chosen objective; kInfeasibleCost marks cells
// outside W or dropped by cost_local.
Eigen::MatrixXd prefix_costs(const Clustering& clustering, const Dataset& ds,
                             const FairnessSpec& spec, PrefixObjective objective);

// Optimal plan for the given cost matrix via the exact 0-1 solver. Throws
// std::runtime_error when no feasible plan exists.
PrefixPlan solve_prefix_ip(const Eigen::MatrixXd& costs, const FairnessSpec& spec);

// Uniformly random feasible plan (rejection sampling over capacity-respecting
// assignments), deterministic per seed. After too many rejections falls back
// to a seeded greedy fill.
PrefixPlan naive_prefix(const FairnessSpec& spec, std::uint64_t seed);

bool plan_is_valid(const std::vector<GroupClusterPair>& obligations, const FairnessSpec& spec);

}  // namespace minirel
