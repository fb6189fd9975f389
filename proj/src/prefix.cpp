#include "minirel/prefix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "minirel/milp.hpp"
#include "minirel/rng.hpp"

namespace minirel {

namespace {

struct ClusterStats {
  std::vector<long long> sizes;                   // |C_k|
  std::vector<std::vector<long long>> in_group;   // [g][k]
};

ClusterStats cluster_stats(const Clustering& clustering, const Dataset& ds) {
  ClusterStats s;
  const int K = clustering.num_clusters();
  s.sizes.assign(static_cast<std::size_t>(K), 0);
  for (int k : clustering.assignment) s.sizes[static_cast<std::size_t>(k)]++;
  s.in_group.assign(ds.groups.size(), std::vector<long long>(static_cast<std::size_t>(K), 0));
  for (std::size_t g = 0; g < ds.groups.size(); ++g) {
    for (std::size_t i : ds.groups[g]) {
      s.in_group[g][static_cast<std::size_t>(clustering.assignment[i])]++;
    }
  }
  return s;
}

double proportion_shortfall(long long in_cluster, long long size, Rational alpha) {
  if (size == 0) return 0.0;
  const double p = static_cast<double>(in_cluster) / static_cast<double>(size);
  return std::max(alpha.value() - p, 0.0);
}

}  // namespace

double cost_proportion(const Clustering& clustering, const Dataset& ds, int g, int k,
                       Rational alpha) {
  const ClusterStats s = cluster_stats(clustering, ds);
  return proportion_shortfall(s.in_group[static_cast<std::size_t>(g)][static_cast<std::size_t>(k)],
                              s.sizes[static_cast<std::size_t>(k)], alpha);
}

double cost_weighted(const Clustering& clustering, const Dataset& ds, int g, int k,
                     Rational alpha) {
  const ClusterStats s = cluster_stats(clustering, ds);
  const long long size = s.sizes[static_cast<std::size_t>(k)];
  return static_cast<double>(size) *
         proportion_shortfall(s.in_group[static_cast<std::size_t>(g)][static_cast<std::size_t>(k)],
                              size, alpha);
}

long long required_moves_counts(long long group_in_cluster, long long cluster_size,
                                Rational alpha) {
  // already represented?
  if (group_in_cluster * alpha.den >= alpha.num * cluster_size) return 0;
  if (alpha.num == alpha.den) return -1;  // alpha = 1 and p < 1: no finite q
  // q = ceil( (alpha - p)/(1 - alpha) * |C_k| )
  //   = ceil( (num*size - den*cnt) / (den - num) )  with p = cnt/size
  const long long numerator = alpha.num * cluster_size - alpha.den * group_in_cluster;
  const long long denominator = alpha.den - alpha.num;
  return (numerator + denominator - 1) / denominator;
}

long long required_moves(double p_gk, long long cluster_size, Rational alpha) {
  const double scaled = p_gk * static_cast<double>(cluster_size);
  const long long counts = std::llround(scaled);
  if (std::abs(scaled - static_cast<double>(counts)) > 1e-6) {
    throw std::invalid_argument("p_gk must equal a member count divided by the cluster size");
  }
  return required_moves_counts(counts, cluster_size, alpha);
}

double cost_local(const Clustering& clustering, const Dataset& ds, int g, int k, Rational alpha) {
  const ClusterStats s = cluster_stats(clustering, ds);
  const long long q =
      required_moves_counts(s.in_group[static_cast<std::size_t>(g)][static_cast<std::size_t>(k)],
                            s.sizes[static_cast<std::size_t>(k)], alpha);
  if (q == 0) return 0.0;
  if (q < 0) return kInfeasibleCost;
  // q smallest squared distances from group members outside C_k to c_k
  std::vector<double> dists;
  for (std::size_t i : ds.groups[static_cast<std::size_t>(g)]) {
    if (clustering.assignment[i] == k) continue;
    dists.push_back(
        (ds.points.row(static_cast<Eigen::Index>(i)) - clustering.centers.row(k)).squaredNorm());
  }
  if (static_cast<long long>(dists.size()) < q) return kInfeasibleCost;
  std::nth_element(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(q - 1), dists.end());
  double total = 0.0;
  for (long long i = 0; i < q; ++i) total += dists[static_cast<std::size_t>(i)];
  return total;
}

Eigen::MatrixXd prefix_costs(const Clustering& clustering, const Dataset& ds,
                             const FairnessSpec& spec, PrefixObjective objective) {
  const int G = spec.num_groups;
  const int K = spec.num_clusters;
  Eigen::MatrixXd costs = Eigen::MatrixXd::Constant(G, K, kInfeasibleCost);
  const ClusterStats s = cluster_stats(clustering, ds);
  for (const auto& [g, k] : spec.allowed) {
    const Rational a = spec.alpha_of(g);
    const long long size = s.sizes[static_cast<std::size_t>(k)];
    const long long cnt = s.in_group[static_cast<std::size_t>(g)][static_cast<std::size_t>(k)];
    switch (objective) {
      case PrefixObjective::Proportion:
        costs(g, k) = proportion_shortfall(cnt, size, a);
        break;
      case PrefixObjective::Weighted:
        costs(g, k) = static_cast<double>(size) * proportion_shortfall(cnt, size, a);
        break;
      case PrefixObjective::Local:
        costs(g, k) = cost_local(clustering, ds, g, k, a);
        break;
    }
  }
  return costs;
}

bool plan_is_valid(const std::vector<GroupClusterPair>& obligations, const FairnessSpec& spec) {
  std::vector<long long> per_group(static_cast<std::size_t>(spec.num_groups), 0);
  std::vector<long long> per_cluster(static_cast<std::size_t>(spec.num_clusters), 0);
  for (const auto& [g, k] : obligations) {
    if (!spec.pair_allowed(g, k)) return false;
    per_group[static_cast<std::size_t>(g)]++;
    per_cluster[static_cast<std::size_t>(k)]++;
  }
  for (int g = 0; g < spec.num_groups; ++g) {
    if (per_group[static_cast<std::size_t>(g)] < spec.beta[static_cast<std::size_t>(g)]) {
      return false;
    }
  }
  long long cap = std::numeric_limits<long long>::max();
  for (int g = 0; g < spec.num_groups; ++g) cap = std::min(cap, spec.alpha_of(g).floor_inverse());
  if (spec.num_groups == 0) cap = 0;
  for (int k = 0; k < spec.num_clusters; ++k) {
    if (per_cluster[static_cast<std::size_t>(k)] > cap) return false;
  }
  return true;
}

PrefixPlan solve_prefix_ip(const Eigen::MatrixXd& costs, const FairnessSpec& spec) {
  // x_{gk} binaries over the finite-cost cells of W
  milp::Model model;
  std::vector<GroupClusterPair> cells;
  for (const auto& [g, k] : spec.allowed) {
    if (std::isfinite(costs(g, k))) {
      model.add_variable(0.0, 1.0, true, costs(g, k));
      cells.emplace_back(g, k);
    }
  }
  for (int g = 0; g < spec.num_groups; ++g) {
    std::vector<std::pair<int, double>> row;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (cells[c].first == g) row.emplace_back(static_cast<int>(c), 1.0);
    }
    model.add_row(std::move(row), milp::Sense::GreaterEqual,
                  static_cast<double>(spec.beta[static_cast<std::size_t>(g)]));
  }
  for (int k = 0; k < spec.num_clusters; ++k) {
    std::vector<std::pair<int, double>> row;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (cells[c].second == k) row.emplace_back(static_cast<int>(c), 1.0);
    }
    long long cap = std::numeric_limits<long long>::max();
    for (int g = 0; g < spec.num_groups; ++g) cap = std::min(cap, spec.alpha_of(g).floor_inverse());
    if (spec.num_groups == 0) cap = 0;
    model.add_row(std::move(row), milp::Sense::LessEqual, static_cast<double>(cap));
  }

  const milp::Solution sol = milp::solve_milp(model);
  if (sol.status != milp::SolveStatus::Optimal) {
    throw std::runtime_error("prefix IP " + milp::to_string(sol.status) +
                             ": no feasible pre-fix plan");
  }
  PrefixPlan plan;
  plan.objective = sol.objective;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    plan.costs[cells[c]] = costs(cells[c].first, cells[c].second);
    if (sol.values[c] > 0.5) plan.obligations.push_back(cells[c]);
  }
  std::sort(plan.obligations.begin(), plan.obligations.end());
  return plan;
}

PrefixPlan naive_prefix(const FairnessSpec& spec, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x70726578ULL));
  long long cap = std::numeric_limits<long long>::max();
  for (int g = 0; g < spec.num_groups; ++g) cap = std::min(cap, spec.alpha_of(g).floor_inverse());
  if (spec.num_groups == 0) cap = 0;

  std::vector<std::vector<int>> candidates(static_cast<std::size_t>(spec.num_groups));
  for (int g = 0; g < spec.num_groups; ++g) {
    candidates[static_cast<std::size_t>(g)] = spec.allowed_clusters(g);
    if (static_cast<long long>(candidates[static_cast<std::size_t>(g)].size()) <
        spec.beta[static_cast<std::size_t>(g)]) {
      throw std::runtime_error("naive_prefix: group " + std::to_string(g) +
                               " has fewer allowed clusters than beta");
    }
  }

  constexpr int kMaxRejections = 1'000'000;
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    std::vector<GroupClusterPair> obligations;
    std::vector<long long> per_cluster(static_cast<std::size_t>(spec.num_clusters), 0);
    bool ok = true;
    for (int g = 0; g < spec.num_groups && ok; ++g) {
      // uniform beta_g-subset of the allowed clusters
      const auto& cand = candidates[static_cast<std::size_t>(g)];
      const std::size_t want = static_cast<std::size_t>(spec.beta[static_cast<std::size_t>(g)]);
      std::vector<std::size_t> pick = rng.sample_indices(cand.size(), want);
      for (std::size_t idx : pick) {
        const int k = cand[idx];
        if (++per_cluster[static_cast<std::size_t>(k)] > cap) {
          ok = false;
          break;
        }
        obligations.emplace_back(g, k);
      }
    }
    if (!ok) continue;
    std::sort(obligations.begin(), obligations.end());
    PrefixPlan plan;
    plan.obligations = std::move(obligations);
    return plan;
  }

  // saturated quotas make rejection sampling hopeless; greedy fill over a
  // seeded cluster order still returns a valid (if not uniform) plan
  std::vector<GroupClusterPair> obligations;
  std::vector<long long> per_cluster(static_cast<std::size_t>(spec.num_clusters), 0);
  std::vector<int> group_order(static_cast<std::size_t>(spec.num_groups));
  for (int g = 0; g < spec.num_groups; ++g) group_order[static_cast<std::size_t>(g)] = g;
  rng.shuffle(group_order);
  for (int g : group_order) {
    std::vector<int> candidates = spec.allowed_clusters(g);
    rng.shuffle(candidates);
    long long need = spec.beta[static_cast<std::size_t>(g)];
    for (int k : candidates) {
      if (need == 0) break;
      if (per_cluster[static_cast<std::size_t>(k)] < cap) {
        per_cluster[static_cast<std::size_t>(k)]++;
        obligations.emplace_back(g, k);
        --need;
      }
    }
    if (need > 0) throw std::runtime_error("naive_prefix: no feasible plan found");
  }
  std::sort(obligations.begin(), obligations.end());
  PrefixPlan plan;
  plan.obligations = std::move(obligations);
  return plan;
}

nlohmann::json PrefixPlan::to_json() const {
  nlohmann::json obligations_json = nlohmann::json::array();
  for (const auto& [g, k] : obligations) obligations_json.push_back(nlohmann::json::array({g, k}));
  nlohmann::json costs_json = nlohmann::json::array();
  for (const auto& [cell, cost] : costs) {
    costs_json.push_back({{"group", cell.first}, {"cluster", cell.second}, {"cost", cost}});
  }
  return nlohmann::json{
      {"obligations", obligations_json}, {"costs", costs_json}, {"objective", objective}};
}

PrefixPlan PrefixPlan::from_json(const nlohmann::json& j) {
  PrefixPlan plan;
  for (const auto& pair : j.at("obligations")) {
    plan.obligations.emplace_back(pair.at(0).get<int>(), pair.at(1).get<int>());
  }
  std::sort(plan.obligations.begin(), plan.obligations.end());
  if (j.contains("costs")) {
    for (const auto& entry : j.at("costs")) {
      plan.costs[{entry.at("group").get<int>(), entry.at("cluster").get<int>()}] =
          entry.at("cost").get<double>();
    }
  }
  plan.objective = j.value("objective", 0.0);
  return plan;
}

}  // namespace minirel
