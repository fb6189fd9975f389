#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "minirel/dataset.hpp"

namespace minirel {

// K cluster centers, one per row.
using Centers = Eigen::MatrixXd;

struct Clustering {
  std::vector<int> assignment;  // point index -> cluster in [0, K)
  Centers centers;              // K x m
  double cost = 0.0;            // sum of squared distances to assigned centers

  int num_clusters() const { return static_cast<int>(centers.rows()); }
  std::vector<long long> cluster_sizes() const;
};

double clustering_cost(const Dataset& ds, const std::vector<int>& assignment,
                       const Centers& centers);

// Squared distances point i -> center k as an n x K matrix.
Eigen::MatrixXd squared_distances(const Dataset& ds, const Centers& centers);

// K distinct data points via the k-means++ D^2 weighting. Falls back to a
// uniform pick among unchosen points when all remaining distances are zero.
Centers kmeanspp_init(const Dataset& ds, int K, std::uint64_t seed);

// K distinct data points sampled uniformly without replacement.
Centers random_init(const Dataset& ds, int K, std::uint64_t seed);

// Lloyd iterations from the given centers until the assignment stops
// changing or max_iters is hit. Distance ties break toward the lowest
// cluster index; an empty cluster is repaired by reseeding it with the point
// farthest from its current center.
Clustering lloyd(const Dataset& ds, const Centers& init, int max_iters = 300);

// Minimum-cost result over `restarts` independent kmeanspp_init + lloyd runs.
Clustering best_of(const Dataset& ds, int K, int restarts, std::uint64_t seed);

}  // namespace minirel
