#include "minirel/fair_assign.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace minirel {

namespace {

long long effective_upper(const FairnessSpec& spec, std::size_t n) {
  return spec.size_upper < 0 ? static_cast<long long>(n) : spec.size_upper;
}

void check_instance(const FairAssignInstance& instance) {
  if (!instance.distances.allFinite()) throw std::invalid_argument("distances must be finite");
  const std::size_t n = instance.n();
  for (const auto& group : instance.groups) {
    for (std::size_t i : group) {
      if (i >= n) throw std::invalid_argument("group index out of range");
    }
  }
  if (static_cast<int>(instance.groups.size()) != instance.spec.num_groups) {
    throw std::invalid_argument("spec num_groups does not match group sets");
  }
  if (instance.K() != instance.spec.num_clusters) {
    throw std::invalid_argument("spec num_clusters does not match distance matrix");
  }
}

}  // namespace

double big_m(const FairnessSpec& spec, std::size_t n) {
  const long long cap = std::min<long long>(static_cast<long long>(n), effective_upper(spec, n));
  return spec.alpha.value() * static_cast<double>(cap);
}

milp::Model build_full(const FairAssignInstance& instance) {
  check_instance(instance);
  const std::size_t n = instance.n();
  const int K = instance.K();
  const FairnessSpec& spec = instance.spec;

  milp::Model model;
  // z_{ik}, i-major
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < K; ++k) {
      model.add_variable(0.0, 1.0, true, instance.distances(static_cast<Eigen::Index>(i), k));
    }
  }
  const auto z = [&](std::size_t i, int k) { return static_cast<int>(i) * K + k; };
  // y_{gk} in W order
  std::vector<int> y(spec.allowed.size());
  for (std::size_t w = 0; w < spec.allowed.size(); ++w) {
    y[w] = model.add_variable(0.0, 1.0, true, 0.0);
  }

  // each point in exactly one cluster
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<int, double>> row;
    for (int k = 0; k < K; ++k) row.emplace_back(z(i, k), 1.0);
    model.add_row(std::move(row), milp::Sense::Equal, 1.0);
  }

  // representation tracking, scaled by den(alpha) so all coefficients are
  // integers:  den*sum_{X_g} z_ik - num*sum_i z_ik - den*M*y_gk >= -den*M
  const long long cap = std::min<long long>(static_cast<long long>(n), effective_upper(spec, n));
  for (std::size_t w = 0; w < spec.allowed.size(); ++w) {
    const auto [g, k] = spec.allowed[w];
    const Rational a = spec.alpha_of(g);
    const double scaled_m = static_cast<double>(a.num * cap);  // den * (alpha*cap)
    std::vector<bool> in_group(n, false);
    for (std::size_t i : instance.groups[static_cast<std::size_t>(g)]) in_group[i] = true;
    std::vector<std::pair<int, double>> row;
    for (std::size_t i = 0; i < n; ++i) {
      const double coef = (in_group[i] ? static_cast<double>(a.den) : 0.0) -
                          static_cast<double>(a.num);
      if (coef != 0.0) row.emplace_back(z(i, k), coef);
    }
    row.emplace_back(y[w], -scaled_m);
    model.add_row(std::move(row), milp::Sense::GreaterEqual, -scaled_m);
  }

  // each group alpha-represented in at least beta_g allowed clusters
  for (int g = 0; g < spec.num_groups; ++g) {
    std::vector<std::pair<int, double>> row;
    for (std::size_t w = 0; w < spec.allowed.size(); ++w) {
      if (spec.allowed[w].first == g) row.emplace_back(y[w], 1.0);
    }
    model.add_row(std::move(row), milp::Sense::GreaterEqual,
                  static_cast<double>(spec.beta[static_cast<std::size_t>(g)]));
  }

  // cardinality bounds l <= |C_k| <= u
  const long long u = effective_upper(spec, n);
  for (int k = 0; k < K; ++k) {
    std::vector<std::pair<int, double>> row;
    for (std::size_t i = 0; i < n; ++i) row.emplace_back(z(i, k), 1.0);
    model.add_row(row, milp::Sense::GreaterEqual, static_cast<double>(spec.size_lower));
    model.add_row(std::move(row), milp::Sense::LessEqual, static_cast<double>(u));
  }
  return model;
}

milp::Model build_prefixed(const FairAssignInstance& instance) {
  check_instance(instance);
  if (!instance.plan) throw std::invalid_argument("build_prefixed requires a plan");
  const std::size_t n = instance.n();
  const int K = instance.K();
  const FairnessSpec& spec = instance.spec;

  milp::Model model;
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < K; ++k) {
      model.add_variable(0.0, 1.0, true, instance.distances(static_cast<Eigen::Index>(i), k));
    }
  }
  const auto z = [&](std::size_t i, int k) { return static_cast<int>(i) * K + k; };

  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<int, double>> row;
    for (int k = 0; k < K; ++k) row.emplace_back(z(i, k), 1.0);
    model.add_row(std::move(row), milp::Sense::Equal, 1.0);
  }

  // hard representation rows for the obligated pairs:
  // den*sum_{X_g} z_ik - num*sum_i z_ik >= 0
  for (const auto& [g, k] : *instance.plan) {
    const Rational a = spec.alpha_of(g);
    std::vector<bool> in_group(n, false);
    for (std::size_t i : instance.groups[static_cast<std::size_t>(g)]) in_group[i] = true;
    std::vector<std::pair<int, double>> row;
    for (std::size_t i = 0; i < n; ++i) {
      const double coef = (in_group[i] ? static_cast<double>(a.den) : 0.0) -
                          static_cast<double>(a.num);
      if (coef != 0.0) row.emplace_back(z(i, k), coef);
    }
    model.add_row(std::move(row), milp::Sense::GreaterEqual, 0.0);
  }

  const long long u = effective_upper(spec, n);
  for (int k = 0; k < K; ++k) {
    std::vector<std::pair<int, double>> row;
    for (std::size_t i = 0; i < n; ++i) row.emplace_back(z(i, k), 1.0);
    model.add_row(row, milp::Sense::GreaterEqual, static_cast<double>(spec.size_lower));
    model.add_row(std::move(row), milp::Sense::LessEqual, static_cast<double>(u));
  }
  return model;
}

std::optional<std::vector<int>> heuristic_assignment(const FairAssignInstance& instance) {
  const std::size_t n = instance.n();
  const int K = instance.K();
  const FairnessSpec& spec = instance.spec;

  std::vector<int> assignment(n);
  std::vector<long long> sizes(static_cast<std::size_t>(K), 0);
  std::vector<std::vector<long long>> cnt(instance.groups.size(),
                                          std::vector<long long>(static_cast<std::size_t>(K), 0));
  for (std::size_t i = 0; i < n; ++i) {
    int best = 0;
    for (int k = 1; k < K; ++k) {
      if (instance.distances(static_cast<Eigen::Index>(i), k) <
          instance.distances(static_cast<Eigen::Index>(i), best)) {
        best = k;
      }
    }
    assignment[i] = best;
    sizes[static_cast<std::size_t>(best)]++;
  }
  for (std::size_t g = 0; g < instance.groups.size(); ++g) {
    for (std::size_t i : instance.groups[g]) cnt[g][static_cast<std::size_t>(assignment[i])]++;
  }

  // obligations: the plan when present, otherwise cover each quota with the
  // clusters where the group is already strongest
  std::vector<GroupClusterPair> obligations;
  if (instance.plan) {
    obligations = *instance.plan;
  } else {
    long long cap = std::numeric_limits<long long>::max();
    for (int g = 0; g < spec.num_groups; ++g) cap = std::min(cap, spec.alpha_of(g).floor_inverse());
    std::vector<long long> claims(static_cast<std::size_t>(K), 0);
    std::vector<int> order(static_cast<std::size_t>(spec.num_groups));
    for (int g = 0; g < spec.num_groups; ++g) order[static_cast<std::size_t>(g)] = g;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return spec.beta[static_cast<std::size_t>(a)] > spec.beta[static_cast<std::size_t>(b)] ||
             (spec.beta[static_cast<std::size_t>(a)] == spec.beta[static_cast<std::size_t>(b)] &&
              a < b);
    });
    for (int g : order) {
      std::vector<int> candidates = spec.allowed_clusters(g);
      std::stable_sort(candidates.begin(), candidates.end(), [&](int a, int b) {
        return cnt[static_cast<std::size_t>(g)][static_cast<std::size_t>(a)] >
               cnt[static_cast<std::size_t>(g)][static_cast<std::size_t>(b)];
      });
      long long need = spec.beta[static_cast<std::size_t>(g)];
      for (int k : candidates) {
        if (need == 0) break;
        if (claims[static_cast<std::size_t>(k)] >= cap) continue;
        claims[static_cast<std::size_t>(k)]++;
        obligations.emplace_back(g, k);
        --need;
      }
      if (need > 0) return std::nullopt;
    }
    std::sort(obligations.begin(), obligations.end());
  }

  // move the cheapest outside members in until each obligation holds; moved
  // points lock so later obligations cannot undo earlier ones; members
  // sitting in another obligated cluster of the same group are off limits
  std::vector<bool> locked(n, false);
  std::vector<std::vector<bool>> obligated(instance.groups.size(),
                                           std::vector<bool>(static_cast<std::size_t>(K), false));
  for (const auto& [g, k] : obligations) obligated[static_cast<std::size_t>(g)][static_cast<std::size_t>(k)] = true;

  std::vector<std::vector<int>> member_of(n);
  for (std::size_t g = 0; g < instance.groups.size(); ++g) {
    for (std::size_t i : instance.groups[g]) member_of[i].push_back(static_cast<int>(g));
  }
  const auto move_point = [&](std::size_t i, int to) {
    const int from = assignment[i];
    assignment[i] = to;
    sizes[static_cast<std::size_t>(from)]--;
    sizes[static_cast<std::size_t>(to)]++;
    for (int g : member_of[i]) {
      cnt[static_cast<std::size_t>(g)][static_cast<std::size_t>(from)]--;
      cnt[static_cast<std::size_t>(g)][static_cast<std::size_t>(to)]++;
    }
  };

  for (const auto& [g, k] : obligations) {
    const Rational a = spec.alpha_of(g);
    const std::size_t sg = static_cast<std::size_t>(g);
    int guard = static_cast<int>(n) + 1;
    while (!is_alpha_represented(sizes[static_cast<std::size_t>(k)], cnt[sg][static_cast<std::size_t>(k)], a) &&
           guard-- > 0) {
      std::size_t best = n;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t i : instance.groups[sg]) {
        if (assignment[i] == k || locked[i]) continue;
        if (obligated[sg][static_cast<std::size_t>(assignment[i])]) continue;
        const double d = instance.distances(static_cast<Eigen::Index>(i), k);
        if (d < best_d) {
          best_d = d;
          best = i;
        }
      }
      if (best == n) return std::nullopt;
      move_point(best, k);
      locked[best] = true;
    }
    if (!is_alpha_represented(sizes[static_cast<std::size_t>(k)], cnt[sg][static_cast<std::size_t>(k)], a)) {
      return std::nullopt;
    }
  }

  // cardinality repair: fill clusters below l with the nearest movable
  // points, then drain clusters above u
  const long long u = effective_upper(spec, n);
  for (int k = 0; k < K; ++k) {
    int guard = static_cast<int>(n) + 1;
    while (sizes[static_cast<std::size_t>(k)] < spec.size_lower && guard-- > 0) {
      std::size_t best = n;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n; ++i) {
        if (locked[i] || assignment[i] == k) continue;
        if (sizes[static_cast<std::size_t>(assignment[i])] <= spec.size_lower) continue;
        const double d = instance.distances(static_cast<Eigen::Index>(i), k);
        if (d < best_d) {
          best_d = d;
          best = i;
        }
      }
      if (best == n) return std::nullopt;
      move_point(best, k);
      locked[best] = true;
    }
  }
  for (int k = 0; k < K; ++k) {
    int guard = static_cast<int>(n) + 1;
    while (sizes[static_cast<std::size_t>(k)] > u && guard-- > 0) {
      std::size_t best = n;
      double best_d = std::numeric_limits<double>::infinity();
      int target = -1;
      for (std::size_t i = 0; i < n; ++i) {
        if (locked[i] || assignment[i] != k) continue;
        for (int k2 = 0; k2 < K; ++k2) {
          if (k2 == k || sizes[static_cast<std::size_t>(k2)] >= u) continue;
          const double d = instance.distances(static_cast<Eigen::Index>(i), k2);
          if (d < best_d) {
            best_d = d;
            best = i;
            target = k2;
          }
        }
      }
      if (best == n) return std::nullopt;
      move_point(best, target);
      locked[best] = true;
    }
  }
  return assignment;
}

AssignResult solve(const FairAssignInstance& instance, const milp::Options& options,
                   const std::optional<std::vector<int>>& hint_assignment) {
  const std::size_t n = instance.n();
  const int K = instance.K();
  const milp::Model model = instance.plan ? build_prefixed(instance) : build_full(instance);

  milp::Options opts = options;
  if (hint_assignment) {
    // expand an assignment into model values; for the full model the y
    // variables are set to the represented pairs, which dominates any
    // feasible y choice
    std::vector<double> hint(static_cast<std::size_t>(model.num_vars()), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const int k = (*hint_assignment)[i];
      if (k < 0 || k >= K) throw std::invalid_argument("hint assignment out of range");
      hint[i * static_cast<std::size_t>(K) + static_cast<std::size_t>(k)] = 1.0;
    }
    if (!instance.plan) {
      std::vector<long long> sizes(static_cast<std::size_t>(K), 0);
      for (std::size_t i = 0; i < n; ++i) sizes[static_cast<std::size_t>((*hint_assignment)[i])]++;
      for (std::size_t w = 0; w < instance.spec.allowed.size(); ++w) {
        const auto [g, k] = instance.spec.allowed[w];
        long long in_cluster = 0;
        for (std::size_t i : instance.groups[static_cast<std::size_t>(g)]) {
          if ((*hint_assignment)[i] == k) ++in_cluster;
        }
        if (is_alpha_represented(sizes[static_cast<std::size_t>(k)], in_cluster,
                                 instance.spec.alpha_of(g))) {
          hint[static_cast<std::size_t>(n) * static_cast<std::size_t>(K) + w] = 1.0;
        }
      }
    }
    opts.hint = std::move(hint);
  }

  const milp::Solution ip = milp::solve_milp(model, opts);
  AssignResult result;
  result.status = ip.status;
  result.nodes = ip.nodes;
  result.hint_accepted = ip.hint_accepted;
  result.objective = ip.objective;
  if (!ip.values.empty()) {
    result.assignment.assign(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
      for (int k = 0; k < K; ++k) {
        if (ip.values[i * static_cast<std::size_t>(K) + static_cast<std::size_t>(k)] > 0.5) {
          result.assignment[i] = k;
          break;
        }
      }
    }
  }
  return result;
}

nlohmann::json instance_to_json(const FairAssignInstance& instance) {
  nlohmann::json j;
  const std::size_t n = instance.n();
  const int K = instance.K();
  nlohmann::json d = nlohmann::json::array();
  for (std::size_t i = 0; i < n; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < K; ++k) row.push_back(instance.distances(static_cast<Eigen::Index>(i), k));
    d.push_back(std::move(row));
  }
  j["distances"] = std::move(d);
  j["groups"] = instance.groups;
  const FairnessSpec& s = instance.spec;
  nlohmann::json spec{{"alpha", {{"num", s.alpha.num}, {"den", s.alpha.den}}},
                      {"beta", s.beta},
                      {"l", s.size_lower},
                      {"u", s.size_upper}};
  nlohmann::json w = nlohmann::json::array();
  for (const auto& [g, k] : s.allowed) w.push_back(nlohmann::json::array({g, k}));
  spec["W"] = std::move(w);
  if (!s.alpha_per_group.empty()) {
    nlohmann::json per = nlohmann::json::array();
    for (const Rational& a : s.alpha_per_group) per.push_back({{"num", a.num}, {"den", a.den}});
    spec["alpha_per_group"] = std::move(per);
  }
  j["spec"] = std::move(spec);
  if (instance.plan) {
    nlohmann::json p = nlohmann::json::array();
    for (const auto& [g, k] : *instance.plan) p.push_back(nlohmann::json::array({g, k}));
    j["prefix_plan"] = std::move(p);
  }
  return j;
}

FairAssignInstance instance_from_json(const nlohmann::json& j) {
  FairAssignInstance instance;
  const auto& d = j.at("distances");
  const std::size_t n = d.size();
  const std::size_t K = n == 0 ? 0 : d.at(0).size();
  instance.distances.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(K));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < K; ++k) {
      instance.distances(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          d.at(i).at(k).get<double>();
    }
  }
  instance.groups = j.at("groups").get<std::vector<std::vector<std::size_t>>>();
  const auto& spec = j.at("spec");
  FairnessSpec& s = instance.spec;
  s.alpha = Rational(spec.at("alpha").at("num").get<long long>(),
                     spec.at("alpha").at("den").get<long long>());
  s.beta = spec.at("beta").get<std::vector<long long>>();
  s.size_lower = spec.at("l").get<long long>();
  s.size_upper = spec.at("u").get<long long>();
  for (const auto& pair : spec.at("W")) {
    s.allowed.emplace_back(pair.at(0).get<int>(), pair.at(1).get<int>());
  }
  std::sort(s.allowed.begin(), s.allowed.end());
  if (spec.contains("alpha_per_group")) {
    for (const auto& a : spec.at("alpha_per_group")) {
      s.alpha_per_group.emplace_back(a.at("num").get<long long>(), a.at("den").get<long long>());
    }
  }
  s.num_groups = static_cast<int>(instance.groups.size());
  s.num_clusters = static_cast<int>(K);
  if (j.contains("prefix_plan")) {
    std::vector<GroupClusterPair> plan;
    for (const auto& pair : j.at("prefix_plan")) {
      plan.emplace_back(pair.at(0).get<int>(), pair.at(1).get<int>());
    }
    std::sort(plan.begin(), plan.end());
    instance.plan = std::move(plan);
  }
  return instance;
}

}  // namespace minirel
