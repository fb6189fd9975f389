#pragma once

// Seeded random instance generators shared by the unit and acceptance suites.

#include <vector>

#include "minirel/dataset.hpp"
#include "minirel/fair_assign.hpp"
#include "minirel/milp.hpp"
#include "minirel/rng.hpp"

namespace gen {

using minirel::Rng;

// Feasible-by-construction (mostly) random LP with finite bounds; a slice of
// instances gets a contradictory row on purpose.
inline minirel::milp::Model random_lp(Rng& rng, int n = 10, int m = 8) {
  minirel::milp::Model model;
  std::vector<double> interior(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double ub = 1.0 + rng.uniform01() * 9.0;
    model.add_variable(0.0, ub, false, rng.uniform(-5.0, 5.0));
    interior[static_cast<std::size_t>(j)] = rng.uniform01() * ub;
  }
  for (int r = 0; r < m; ++r) {
    std::vector<std::pair<int, double>> coeffs;
    double activity = 0.0;
    for (int j = 0; j < n; ++j) {
      if (rng.uniform01() < 0.7) {
        const double a = rng.uniform(-5.0, 5.0);
        coeffs.emplace_back(j, a);
        activity += a * interior[static_cast<std::size_t>(j)];
      }
    }
    if (coeffs.empty()) coeffs.emplace_back(0, 1.0);
    const double margin = 0.1 + 2.0 * rng.uniform01();
    const double roll = rng.uniform01();
    if (roll < 0.4) {
      model.add_row(std::move(coeffs), minirel::milp::Sense::LessEqual, activity + margin);
    } else if (roll < 0.8) {
      model.add_row(std::move(coeffs), minirel::milp::Sense::GreaterEqual, activity - margin);
    } else {
      model.add_row(std::move(coeffs), minirel::milp::Sense::Equal, activity);
    }
  }
  if (rng.uniform01() < 0.15) {
    // x_0 >= ub_0 + 1 contradicts the variable bound
    model.add_row({{0, 1.0}}, minirel::milp::Sense::GreaterEqual, model.vars[0].upper + 1.0);
  }
  return model;
}

// Random 0-1 model with integer data, small enough for 2^n enumeration. Rows
// are anchored at a random binary point so most instances are feasible; a
// slice gets a contradictory row for status coverage.
inline minirel::milp::Model random_binary_milp(Rng& rng, int max_vars = 12) {
  const int n = 2 + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(max_vars - 1)));
  minirel::milp::Model model;
  std::vector<double> anchor(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    model.add_variable(0.0, 1.0, true, static_cast<double>(static_cast<long long>(rng.bounded(21)) - 10));
    anchor[static_cast<std::size_t>(j)] = rng.uniform01() < 0.5 ? 1.0 : 0.0;
  }
  const int m = 1 + static_cast<int>(rng.bounded(8));
  for (int r = 0; r < m; ++r) {
    std::vector<std::pair<int, double>> coeffs;
    double at_anchor = 0.0;
    for (int j = 0; j < n; ++j) {
      if (rng.uniform01() < 0.6) {
        const long long a = static_cast<long long>(rng.bounded(11)) - 5;
        if (a != 0) {
          coeffs.emplace_back(j, static_cast<double>(a));
          at_anchor += static_cast<double>(a) * anchor[static_cast<std::size_t>(j)];
        }
      }
    }
    if (coeffs.empty()) continue;
    const double slack = static_cast<double>(rng.bounded(4));
    const double roll = rng.uniform01();
    if (roll < 0.45) {
      model.add_row(std::move(coeffs), minirel::milp::Sense::LessEqual, at_anchor + slack);
    } else if (roll < 0.9) {
      model.add_row(std::move(coeffs), minirel::milp::Sense::GreaterEqual, at_anchor - slack);
    } else {
      model.add_row(std::move(coeffs), minirel::milp::Sense::Equal, at_anchor);
    }
  }
  if (rng.uniform01() < 0.2) {
    // sum of all variables above n is unreachable
    std::vector<std::pair<int, double>> row;
    for (int j = 0; j < n; ++j) row.emplace_back(j, 1.0);
    model.add_row(std::move(row), minirel::milp::Sense::GreaterEqual, n + 1.0);
  }
  return model;
}

struct BruteForceMilp {
  bool feasible = false;
  double objective = 0.0;
  std::vector<double> values;
};

// Exhaustive 2^n ground truth for 0-1 models (continuous variables absent).
inline BruteForceMilp enumerate_binary(const minirel::milp::Model& model) {
  const int n = model.num_vars();
  BruteForceMilp best;
  std::vector<double> x(static_cast<std::size_t>(n), 0.0);
  for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
    for (int j = 0; j < n; ++j) x[static_cast<std::size_t>(j)] = (mask >> j) & 1 ? 1.0 : 0.0;
    if (model.max_infeasibility(x) > 1e-9) continue;
    const double obj = model.objective_value(x);
    if (!best.feasible || obj < best.objective) {
      best.feasible = true;
      best.objective = obj;
      best.values = x;
    }
  }
  return best;
}

// Random fair-assignment instance at oracle scale: n <= 10, K <= 3, G <= 3,
// alpha from the fixed menu, beta random within the disjoint-group capacity.
inline minirel::FairAssignInstance random_fair_instance(Rng& rng, bool force_disjoint = false,
                                                        bool fixed_alpha_51 = false) {
  using minirel::Rational;
  minirel::FairAssignInstance inst;
  const int n = 4 + static_cast<int>(rng.bounded(7));   // 4..10
  const int K = 2 + static_cast<int>(rng.bounded(2));   // 2..3
  const int G = 1 + static_cast<int>(rng.bounded(3));   // 1..3

  inst.distances.resize(n, K);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < K; ++k) inst.distances(i, k) = rng.uniform01() * 10.0;
  }
  inst.groups.assign(static_cast<std::size_t>(G), {});
  for (int i = 0; i < n; ++i) {
    const int g = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(G)));
    inst.groups[static_cast<std::size_t>(g)].push_back(static_cast<std::size_t>(i));
    if (!force_disjoint && G > 1 && rng.uniform01() < 0.2) {
      const int g2 = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(G)));
      if (g2 != g) inst.groups[static_cast<std::size_t>(g2)].push_back(static_cast<std::size_t>(i));
    }
  }
  for (auto& members : inst.groups) std::sort(members.begin(), members.end());

  static const Rational kAlphas[] = {Rational(34, 100), Rational(1, 2), Rational(51, 100),
                                     Rational(67, 100)};
  minirel::FairnessSpec& spec = inst.spec;
  spec.alpha = fixed_alpha_51 ? Rational(51, 100) : kAlphas[rng.bounded(4)];
  spec.num_groups = G;
  spec.num_clusters = K;
  spec.size_lower = 1;
  spec.size_upper = -1;
  spec.allowed = minirel::FairnessSpec::full_w(G, K);

  // beta within the representation capacity floor(1/alpha) * K
  long long budget = spec.alpha.floor_inverse() * K;
  spec.beta.assign(static_cast<std::size_t>(G), 0);
  for (int g = 0; g < G; ++g) {
    const long long cap = std::min<long long>(budget, K);
    const long long b = static_cast<long long>(rng.bounded(static_cast<std::uint64_t>(cap + 1)));
    spec.beta[static_cast<std::size_t>(g)] = b;
    budget -= b;
  }
  return inst;
}

// Small random dataset with disjoint groups for end-to-end runs.
inline minirel::Dataset random_dataset(Rng& rng, std::size_t n, int dim, int groups) {
  Eigen::MatrixXd points(n, dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (int d = 0; d < dim; ++d) points(static_cast<Eigen::Index>(i), d) = rng.uniform01();
  }
  std::vector<std::vector<std::size_t>> sets(static_cast<std::size_t>(groups));
  for (std::size_t i = 0; i < n; ++i) {
    sets[rng.bounded(static_cast<std::uint64_t>(groups))].push_back(i);
  }
  return minirel::dataset_from_matrix(std::move(points), std::move(sets));
}

}  // namespace gen
