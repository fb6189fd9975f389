#include "minirel/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace minirel::oracle {

namespace {

bool fits_budget(std::size_t n, int K) {
  double combos = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    combos *= static_cast<double>(K);
    if (combos > 1e7) return false;
  }
  return true;
}

}  // namespace

BruteForceResult brute_force_fair_assignment(const FairAssignInstance& instance) {
  const std::size_t n = instance.n();
  const int K = instance.K();
  const FairnessSpec& spec = instance.spec;
  if (!fits_budget(n, K)) throw std::invalid_argument("K^n exceeds the enumeration budget");

  const long long upper =
      spec.size_upper < 0 ? static_cast<long long>(n) : spec.size_upper;

  BruteForceResult best;
  std::vector<int> assignment(n, 0);
  std::vector<long long> sizes(static_cast<std::size_t>(K), 0);
  std::vector<std::vector<long long>> in_group(
      instance.groups.size(), std::vector<long long>(static_cast<std::size_t>(K), 0));

  const auto evaluate = [&]() {
    std::fill(sizes.begin(), sizes.end(), 0);
    for (auto& row : in_group) std::fill(row.begin(), row.end(), 0);
    for (std::size_t i = 0; i < n; ++i) sizes[static_cast<std::size_t>(assignment[i])]++;
    for (std::size_t g = 0; g < instance.groups.size(); ++g) {
      for (std::size_t i : instance.groups[g]) {
        in_group[g][static_cast<std::size_t>(assignment[i])]++;
      }
    }
    for (int k = 0; k < K; ++k) {
      const long long s = sizes[static_cast<std::size_t>(k)];
      if (s < spec.size_lower || s > upper) return;
    }
    // W-restricted representation counting, exact rational comparisons
    for (int g = 0; g < spec.num_groups; ++g) {
      long long represented = 0;
      for (int k : spec.allowed_clusters(g)) {
        if (is_alpha_represented(sizes[static_cast<std::size_t>(k)],
                                 in_group[static_cast<std::size_t>(g)][static_cast<std::size_t>(k)],
                                 spec.alpha_of(g))) {
          ++represented;
        }
      }
      if (represented < spec.beta[static_cast<std::size_t>(g)]) return;
    }
    double cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      cost += instance.distances(static_cast<Eigen::Index>(i), assignment[i]);
    }
    if (!best.feasible || cost < best.objective) {
      best.feasible = true;
      best.objective = cost;
      best.assignment = assignment;
    }
  };

  // odometer over K^n assignments
  while (true) {
    evaluate();
    std::size_t pos = 0;
    while (pos < n && ++assignment[pos] == K) {
      assignment[pos] = 0;
      ++pos;
    }
    if (pos == n) break;
  }
  return best;
}

Clustering brute_force_kmeans(const Dataset& ds, int K) {
  const std::size_t n = ds.n();
  if (!fits_budget(n, K)) throw std::invalid_argument("K^n exceeds the enumeration budget");

  Clustering best;
  best.cost = std::numeric_limits<double>::infinity();
  std::vector<int> assignment(n, 0);
  while (true) {
    Centers centers = Centers::Zero(K, ds.points.cols());
    std::vector<long long> sizes(static_cast<std::size_t>(K), 0);
    for (std::size_t i = 0; i < n; ++i) {
      centers.row(assignment[i]) += ds.points.row(static_cast<Eigen::Index>(i));
      sizes[static_cast<std::size_t>(assignment[i])]++;
    }
    for (int k = 0; k < K; ++k) {
      if (sizes[static_cast<std::size_t>(k)] > 0) {
        centers.row(k) /= static_cast<double>(sizes[static_cast<std::size_t>(k)]);
      }
    }
    const double cost = clustering_cost(ds, assignment, centers);
    if (cost < best.cost) {
      best.cost = cost;
      best.assignment = assignment;
      best.centers = centers;
    }
    std::size_t pos = 0;
    while (pos < n && ++assignment[pos] == K) {
      assignment[pos] = 0;
      ++pos;
    }
    if (pos == n) break;
  }
  return best;
}

Cnf parse_dimacs(const std::string& text) {
  Cnf cnf;
  std::istringstream in(text);
  std::string line;
  std::vector<int> literals;
  int declared_clauses = -1;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c') continue;
    std::istringstream ls(line);
    if (line[0] == 'p') {
      std::string p, fmt;
      ls >> p >> fmt >> cnf.num_vars >> declared_clauses;
      if (fmt != "cnf") throw std::invalid_argument("parse_dimacs: expected 'p cnf'");
      continue;
    }
    int lit;
    while (ls >> lit) {
      if (lit == 0) {
        if (literals.empty() || literals.size() > 3) {
          throw std::invalid_argument("parse_dimacs: clauses must have 1-3 literals");
        }
        while (literals.size() < 3) literals.push_back(literals.back());  // pad by repetition
        cnf.clauses.push_back({literals[0], literals[1], literals[2]});
        literals.clear();
      } else {
        if (std::abs(lit) > cnf.num_vars) {
          throw std::invalid_argument("parse_dimacs: literal out of range");
        }
        literals.push_back(lit);
      }
    }
  }
  if (!literals.empty()) throw std::invalid_argument("parse_dimacs: unterminated clause");
  return cnf;
}

bool satisfies(const Cnf& cnf, const std::vector<bool>& valuation) {
  for (const auto& clause : cnf.clauses) {
    bool ok = false;
    for (int lit : clause) {
      const std::size_t v = static_cast<std::size_t>(std::abs(lit) - 1);
      if ((lit > 0 && valuation[v]) || (lit < 0 && !valuation[v])) {
        ok = true;
        break;
      }
    }
    if (!ok) return false;
  }
  return true;
}

bool brute_force_sat(const Cnf& cnf) {
  const int n = cnf.num_vars;
  std::vector<bool> valuation(static_cast<std::size_t>(n), false);
  for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
    for (int v = 0; v < n; ++v) valuation[static_cast<std::size_t>(v)] = (mask >> v) & 1;
    if (satisfies(cnf, valuation)) return true;
  }
  return false;
}

SatReduction sat_to_fair_assignment(const Cnf& cnf) {
  if (cnf.num_vars < 1) throw std::invalid_argument("reduction needs at least one variable");
  SatReduction red;
  red.num_vars = cnf.num_vars;
  const int n = cnf.num_vars;
  const std::size_t points = 2 * static_cast<std::size_t>(n);

  FairAssignInstance& inst = red.instance;
  // feasibility-only instance: all costs zero, feature placement irrelevant
  inst.distances = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(points), 2);

  FairnessSpec& spec = inst.spec;
  spec.num_clusters = 2;
  spec.alpha = Rational(1, 2LL * n);
  spec.size_lower = 1;
  spec.size_upper = -1;

  // one group per variable: both literal points, required in both clusters
  for (int v = 0; v < n; ++v) {
    inst.groups.push_back({static_cast<std::size_t>(red.positive_point(v)),
                           static_cast<std::size_t>(red.negative_point(v))});
    spec.beta.push_back(2);
    const int g = static_cast<int>(inst.groups.size()) - 1;
    spec.allowed.emplace_back(g, 0);
    spec.allowed.emplace_back(g, 1);
  }
  // one group per clause: its literal points, required in cluster 0 only
  for (const auto& clause : cnf.clauses) {
    std::vector<std::size_t> members;
    for (int lit : clause) {
      const int v = std::abs(lit) - 1;
      members.push_back(static_cast<std::size_t>(lit > 0 ? red.positive_point(v)
                                                         : red.negative_point(v)));
    }
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    inst.groups.push_back(std::move(members));
    spec.beta.push_back(1);
    spec.allowed.emplace_back(static_cast<int>(inst.groups.size()) - 1, 0);
  }
  spec.num_groups = static_cast<int>(inst.groups.size());
  std::sort(spec.allowed.begin(), spec.allowed.end());
  return red;
}

std::optional<std::vector<bool>> decode_assignment(const SatReduction& red,
                                                   const std::vector<int>& assignment) {
  std::vector<bool> valuation(static_cast<std::size_t>(red.num_vars), false);
  for (int v = 0; v < red.num_vars; ++v) {
    const bool pos_in_0 = assignment[static_cast<std::size_t>(red.positive_point(v))] == 0;
    const bool neg_in_0 = assignment[static_cast<std::size_t>(red.negative_point(v))] == 0;
    if (pos_in_0 == neg_in_0) return std::nullopt;  // both or neither: not a valid decode
    valuation[static_cast<std::size_t>(v)] = pos_in_0;
  }
  return valuation;
}

}  // namespace minirel::oracle
