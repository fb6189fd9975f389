#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "minirel/fair_assign.hpp"
#include "minirel/kmeans.hpp"

namespace minirel::oracle {

struct BruteForceResult {
  bool feasible = false;
  std::vector<int> assignment;
  double objective = 0.0;
};

// Exhaustive ground truth for the fair assignment problem: enumerate all K^n
// assignments, filter by cardinality and W-restricted alpha-representation
// (exact rational comparisons), return the cheapest. Requires K^n <= 1e7.
BruteForceResult brute_force_fair_assignment(const FairAssignInstance& instance);

// Global k-means optimum by enumerating all K^n assignments with mean
// centers. Requires K^n <= 1e7.
Clustering brute_force_kmeans(const Dataset& ds, int K);

// 3-CNF formula; literals are +/- 1-based variable indices.
struct Cnf {
  int num_vars = 0;
  std::vector<std::array<int, 3>> clauses;
};

Cnf parse_dimacs(const std::string& text);

bool brute_force_sat(const Cnf& cnf);

// The 3-SAT encoding into fair assignment: one point per literal, two
// clusters, a beta=2 group per variable allowed in both clusters, a beta=1
// group per clause allowed in cluster 0 only, alpha = 1/(2n), cardinality
// lower bound 1. The instance is feasible iff the formula is satisfiable.
struct SatReduction {
  FairAssignInstance instance;
  int num_vars = 0;
  // point indices: positive literal of v at 2v, negation at 2v+1
  int positive_point(int var) const { return 2 * var; }
  int negative_point(int var) const { return 2 * var + 1; }
};

SatReduction sat_to_fair_assignment(const Cnf& cnf);

// v = true iff the positive-literal point sits in cluster 0. Returns nullopt
// if the assignment does not decode (some variable has neither or both
// literal points in cluster 0).
std::optional<std::vector<bool>> decode_assignment(const SatReduction& red,
                                                   const std::vector<int>& assignment);

bool satisfies(const Cnf& cnf, const std::vector<bool>& valuation);

}  // namespace minirel::oracle
