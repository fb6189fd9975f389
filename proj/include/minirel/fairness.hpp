#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace minirel {

struct Dataset;
struct Clustering;

// Exact rational in lowest terms, used for representation thresholds so that
// boundary comparisons (e.g. alpha = 0.51) never hinge on floating point.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d);

  // Nearest rational with denominator 1e9, reduced. Recovers the intended
  // decimal for thresholds written as short decimals (0.51 -> 51/100).
  static Rational from_double(double v);

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  // floor(1/alpha): the most groups that can simultaneously cross the
  // threshold in one cluster.
  long long floor_inverse() const { return den / num; }

  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
};

using GroupClusterPair = std::pair<int, int>;  // (group, cluster)

// Parameters of a minimum-representation fairness instance: the threshold
// alpha, the per-group cluster quotas beta, the allowed (group, cluster)
// pairs W, and cluster cardinality bounds [l, u].
struct FairnessSpec {
  Rational alpha{1, 2};
  std::vector<Rational> alpha_per_group;  // optional per-group override; empty = shared alpha
  std::vector<long long> beta;            // one entry per group
  std::vector<GroupClusterPair> allowed;  // W, sorted (group, cluster)
  long long size_lower = 1;               // l
  long long size_upper = -1;              // u; -1 = n (no effective bound)
  int num_groups = 0;
  int num_clusters = 0;

  Rational alpha_of(int g) const {
    return alpha_per_group.empty() ? alpha : alpha_per_group[static_cast<std::size_t>(g)];
  }
  bool pair_allowed(int g, int k) const;
  std::vector<int> allowed_clusters(int g) const;

  // W = G x K.
  static std::vector<GroupClusterPair> full_w(int num_groups, int num_clusters);

  // Necessary feasibility conditions: every group has at least beta_g allowed
  // clusters, and (for disjoint groups) total quota within the
  // floor(1/alpha) * K representation capacity. Returns human-readable
  // violations; empty means the cheap checks pass.
  std::vector<std::string> quick_infeasibility_reasons(bool disjoint_groups) const;
};

bool is_alpha_represented(long long cluster_size, long long group_in_cluster, Rational alpha);

// Per-group count of clusters in {0..K-1} where the group crosses alpha.
long long lambda_count(const Clustering& clustering, const Dataset& ds, int g, Rational alpha);
std::vector<long long> lambda_counts(const Clustering& clustering, const Dataset& ds, Rational alpha);

// beta_g = floor( floor(1/alpha) * K / |G| ), identical for every group.
std::vector<long long> beta_statistical_parity(int num_groups, Rational alpha, int K);

// beta_g = floor( |X_g| * floor(1/alpha) * K / n ).
std::vector<long long> beta_equality_of_opportunity(const Dataset& ds, Rational alpha, int K);

struct ValidationReport {
  std::vector<long long> lambda;
  std::vector<long long> beta;
  std::vector<bool> group_ok;
  std::vector<long long> cluster_sizes;
  bool sizes_ok = true;
  double cost = 0.0;
  bool satisfied = false;

  nlohmann::json to_json(const std::vector<std::string>& group_names = {}) const;
};

ValidationReport validate(const Clustering& clustering, const Dataset& ds, const FairnessSpec& spec);

}  // namespace minirel
