#include "minirel/fairness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "minirel/dataset.hpp"
#include "minirel/kmeans.hpp"

namespace minirel {

Rational::Rational(long long n, long long d) : num(n), den(d) {
  if (den <= 0) throw std::invalid_argument("Rational: denominator must be positive");
  if (num < 0) throw std::invalid_argument("Rational: negative threshold");
  const long long g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

Rational Rational::from_double(double v) {
  if (!(v > 0.0) || v > 1.0) throw std::invalid_argument("alpha must be in (0, 1]");
  constexpr long long kScale = 1'000'000'000;
  const long long num = std::llround(v * static_cast<double>(kScale));
  return Rational(num, kScale);
}

bool FairnessSpec::pair_allowed(int g, int k) const {
  return std::binary_search(allowed.begin(), allowed.end(), GroupClusterPair{g, k});
}

std::vector<int> FairnessSpec::allowed_clusters(int g) const {
  std::vector<int> out;
  for (const auto& [gg, k] : allowed) {
    if (gg == g) out.push_back(k);
  }
  return out;
}

std::vector<GroupClusterPair> FairnessSpec::full_w(int num_groups, int num_clusters) {
  std::vector<GroupClusterPair> w;
  w.reserve(static_cast<std::size_t>(num_groups) * static_cast<std::size_t>(num_clusters));
  for (int g = 0; g < num_groups; ++g) {
    for (int k = 0; k < num_clusters; ++k) w.emplace_back(g, k);
  }
  return w;
}

std::vector<std::string> FairnessSpec::quick_infeasibility_reasons(bool disjoint_groups) const {
  std::vector<std::string> reasons;
  long long beta_total = 0;
  long long max_per_cluster = 0;
  for (int g = 0; g < num_groups; ++g) {
    const long long bg = beta[static_cast<std::size_t>(g)];
    beta_total += bg;
    max_per_cluster = std::max(max_per_cluster, alpha_of(g).floor_inverse());
    const long long candidates = static_cast<long long>(allowed_clusters(g).size());
    if (bg > candidates) {
      reasons.push_back("group " + std::to_string(g) + ": beta " + std::to_string(bg) +
                        " exceeds its " + std::to_string(candidates) + " allowed clusters");
    }
  }
  // A cluster can alpha-represent at most floor(1/alpha) disjoint groups,
  // so sum(beta) <= floor(1/alpha) * K. Not valid when groups overlap.
  if (disjoint_groups && beta_total > max_per_cluster * num_clusters) {
    reasons.push_back("total beta " + std::to_string(beta_total) +
                      " exceeds representation capacity " +
                      std::to_string(max_per_cluster * num_clusters));
  }
  return reasons;
}

bool is_alpha_represented(long long cluster_size, long long group_in_cluster, Rational alpha) {
  // |C_k ∩ X_g| >= alpha |C_k|, compared in integers.
  return group_in_cluster * alpha.den >= alpha.num * cluster_size;
}

namespace {

// per-cluster sizes and per (group, cluster) member counts
struct Tally {
  std::vector<long long> sizes;
  std::vector<std::vector<long long>> group_counts;  // [g][k]
};

Tally tally(const Clustering& clustering, const Dataset& ds) {
  const int K = clustering.num_clusters();
  Tally t;
  t.sizes.assign(static_cast<std::size_t>(K), 0);
  for (int k : clustering.assignment) t.sizes[static_cast<std::size_t>(k)]++;
  t.group_counts.assign(ds.groups.size(), std::vector<long long>(static_cast<std::size_t>(K), 0));
  for (std::size_t g = 0; g < ds.groups.size(); ++g) {
    for (std::size_t i : ds.groups[g]) {
      t.group_counts[g][static_cast<std::size_t>(clustering.assignment[i])]++;
    }
  }
  return t;
}

}  // namespace

long long lambda_count(const Clustering& clustering, const Dataset& ds, int g, Rational alpha) {
  const Tally t = tally(clustering, ds);
  long long count = 0;
  for (std::size_t k = 0; k < t.sizes.size(); ++k) {
    if (is_alpha_represented(t.sizes[k], t.group_counts[static_cast<std::size_t>(g)][k], alpha)) {
      ++count;
    }
  }
  return count;
}

std::vector<long long> lambda_counts(const Clustering& clustering, const Dataset& ds,
                                     Rational alpha) {
  const Tally t = tally(clustering, ds);
  std::vector<long long> out(ds.groups.size(), 0);
  for (std::size_t g = 0; g < ds.groups.size(); ++g) {
    for (std::size_t k = 0; k < t.sizes.size(); ++k) {
      if (is_alpha_represented(t.sizes[k], t.group_counts[g][k], alpha)) out[g]++;
    }
  }
  return out;
}

std::vector<long long> beta_statistical_parity(int num_groups, Rational alpha, int K) {
  if (num_groups <= 0) return {};
  const long long value = alpha.floor_inverse() * K / num_groups;
  return std::vector<long long>(static_cast<std::size_t>(num_groups), value);
}

std::vector<long long> beta_equality_of_opportunity(const Dataset& ds, Rational alpha, int K) {
  std::vector<long long> out(ds.groups.size(), 0);
  const long long n = static_cast<long long>(ds.n());
  if (n == 0) return out;
  for (std::size_t g = 0; g < ds.groups.size(); ++g) {
    const long long size = static_cast<long long>(ds.groups[g].size());
    out[g] = size * alpha.floor_inverse() * K / n;
  }
  return out;
}

ValidationReport validate(const Clustering& clustering, const Dataset& ds,
                          const FairnessSpec& spec) {
  ValidationReport report;
  const Tally t = tally(clustering, ds);
  report.cluster_sizes = t.sizes;
  report.beta = spec.beta;
  report.lambda.resize(ds.groups.size());
  report.group_ok.resize(ds.groups.size());
  bool all_groups_ok = true;
  for (std::size_t g = 0; g < ds.groups.size(); ++g) {
    long long lam = 0;
    for (std::size_t k = 0; k < t.sizes.size(); ++k) {
      if (is_alpha_represented(t.sizes[k], t.group_counts[g][k], spec.alpha_of(static_cast<int>(g)))) {
        ++lam;
      }
    }
    report.lambda[g] = lam;
    report.group_ok[g] = lam >= spec.beta[g];
    all_groups_ok = all_groups_ok && report.group_ok[g];
  }
  const long long upper =
      spec.size_upper < 0 ? static_cast<long long>(ds.n()) : spec.size_upper;
  report.sizes_ok = true;
  for (long long s : t.sizes) {
    if (s < spec.size_lower || s > upper) report.sizes_ok = false;
  }
  report.cost = clustering_cost(ds, clustering.assignment, clustering.centers);
  report.satisfied = all_groups_ok && report.sizes_ok;
  return report;
}

nlohmann::json ValidationReport::to_json(const std::vector<std::string>& group_names) const {
  nlohmann::json per_group = nlohmann::json::array();
  for (std::size_t g = 0; g < lambda.size(); ++g) {
    nlohmann::json entry{{"group", g},
                         {"lambda", lambda[g]},
                         {"beta", beta[g]},
                         {"satisfied", static_cast<bool>(group_ok[g])}};
    if (g < group_names.size()) entry["name"] = group_names[g];
    per_group.push_back(entry);
  }
  return nlohmann::json{{"per_group", per_group},
                        {"cluster_sizes", cluster_sizes},
                        {"sizes_ok", sizes_ok},
                        {"cost", cost},
                        {"satisfied", satisfied}};
}

}  // namespace minirel
