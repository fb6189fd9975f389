#include "minirel/kmeans.hpp"

#include <limits>
#include <stdexcept>

#include "minirel/rng.hpp"

namespace minirel {

std::vector<long long> Clustering::cluster_sizes() const {
  std::vector<long long> sizes(static_cast<std::size_t>(num_clusters()), 0);
  for (int k : assignment) sizes[static_cast<std::size_t>(k)]++;
  return sizes;
}

double clustering_cost(const Dataset& ds, const std::vector<int>& assignment,
                       const Centers& centers) {
  double cost = 0.0;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    cost += (ds.points.row(static_cast<Eigen::Index>(i)) - centers.row(assignment[i]))
                .squaredNorm();
  }
  return cost;
}

Eigen::MatrixXd squared_distances(const Dataset& ds, const Centers& centers) {
  const Eigen::Index n = ds.points.rows();
  const Eigen::Index K = centers.rows();
  // ||x - c||^2 = ||x||^2 - 2 x.c + ||c||^2
  Eigen::MatrixXd d = -2.0 * ds.points * centers.transpose();
  d.colwise() += ds.points.rowwise().squaredNorm();
  d.rowwise() += centers.rowwise().squaredNorm().transpose();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < K; ++k) {
      if (d(i, k) < 0.0) d(i, k) = 0.0;  // clamp cancellation noise
    }
  }
  return d;
}

namespace {

Centers gather_centers(const Dataset& ds, const std::vector<std::size_t>& idx) {
  Centers c(static_cast<Eigen::Index>(idx.size()), ds.points.cols());
  for (std::size_t r = 0; r < idx.size(); ++r) {
    c.row(static_cast<Eigen::Index>(r)) = ds.points.row(static_cast<Eigen::Index>(idx[r]));
  }
  return c;
}

void check_k(const Dataset& ds, int K) {
  if (K < 1 || static_cast<std::size_t>(K) > ds.n()) {
    throw std::invalid_argument("K must satisfy 1 <= K <= n");
  }
}

}  // namespace

Centers kmeanspp_init(const Dataset& ds, int K, std::uint64_t seed) {
  check_k(ds, K);
  Rng rng(derive_seed(seed, 0x6b7070ULL));
  const std::size_t n = ds.n();
  std::vector<std::size_t> chosen;
  std::vector<bool> is_chosen(n, false);
  chosen.push_back(static_cast<std::size_t>(rng.bounded(n)));
  is_chosen[chosen[0]] = true;

  std::vector<double> dist2(n, std::numeric_limits<double>::infinity());
  while (chosen.size() < static_cast<std::size_t>(K)) {
    const Eigen::Index latest = static_cast<Eigen::Index>(chosen.back());
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = (ds.points.row(static_cast<Eigen::Index>(i)) - ds.points.row(latest))
                           .squaredNorm();
      if (d < dist2[i]) dist2[i] = d;
      if (!is_chosen[i]) total += dist2[i];
    }
    std::size_t pick = n;
    if (total > 0.0) {
      const double r = rng.uniform01() * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (is_chosen[i]) continue;
        acc += dist2[i];
        if (acc >= r) {
          pick = i;
          break;
        }
      }
      if (pick == n) {  // numeric tail: last unchosen point
        for (std::size_t i = n; i-- > 0;) {
          if (!is_chosen[i]) {
            pick = i;
            break;
          }
        }
      }
    } else {
      // all remaining points coincide with a center: uniform among unchosen
      std::vector<std::size_t> rest;
      for (std::size_t i = 0; i < n; ++i) {
        if (!is_chosen[i]) rest.push_back(i);
      }
      pick = rest[rng.bounded(rest.size())];
    }
    chosen.push_back(pick);
    is_chosen[pick] = true;
  }
  return gather_centers(ds, chosen);
}

Centers random_init(const Dataset& ds, int K, std::uint64_t seed) {
  check_k(ds, K);
  Rng rng(derive_seed(seed, 0x72616e64ULL));
  return gather_centers(ds, rng.sample_indices(ds.n(), static_cast<std::size_t>(K)));
}

Clustering lloyd(const Dataset& ds, const Centers& init, int max_iters) {
  if (!init.allFinite()) throw std::invalid_argument("lloyd: centers must be finite");
  const std::size_t n = ds.n();
  const int K = static_cast<int>(init.rows());
  Clustering result;
  result.centers = init;
  result.assignment.assign(n, -1);

  std::vector<int> previous(n, -1);
  for (int iter = 0; iter < max_iters; ++iter) {
    // nearest-center assignment, ties toward the lowest cluster index
    const Eigen::MatrixXd d = squared_distances(ds, result.centers);
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_d = d(static_cast<Eigen::Index>(i), 0);
      for (int k = 1; k < K; ++k) {
        const double dk = d(static_cast<Eigen::Index>(i), k);
        if (dk < best_d) {
          best_d = dk;
          best = k;
        }
      }
      result.assignment[i] = best;
    }

    // reseed any empty cluster with the point farthest from its center
    std::vector<long long> sizes(static_cast<std::size_t>(K), 0);
    for (int k : result.assignment) sizes[static_cast<std::size_t>(k)]++;
    for (int k = 0; k < K; ++k) {
      if (sizes[static_cast<std::size_t>(k)] > 0) continue;
      std::size_t farthest = n;
      double farthest_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (sizes[static_cast<std::size_t>(result.assignment[i])] <= 1) continue;
        const double di = d(static_cast<Eigen::Index>(i), result.assignment[i]);
        if (di > farthest_d) {
          farthest_d = di;
          farthest = i;
        }
      }
      if (farthest == n) break;  // nothing movable
      sizes[static_cast<std::size_t>(result.assignment[farthest])]--;
      result.assignment[farthest] = k;
      sizes[static_cast<std::size_t>(k)] = 1;
    }

    // mean update
    Centers next = Centers::Zero(K, ds.points.cols());
    for (std::size_t i = 0; i < n; ++i) {
      next.row(result.assignment[i]) += ds.points.row(static_cast<Eigen::Index>(i));
    }
    for (int k = 0; k < K; ++k) {
      if (sizes[static_cast<std::size_t>(k)] > 0) {
        next.row(k) /= static_cast<double>(sizes[static_cast<std::size_t>(k)]);
      } else {
        next.row(k) = result.centers.row(k);
      }
    }
    result.centers = next;

    if (result.assignment == previous) break;
    previous = result.assignment;
  }
  result.cost = clustering_cost(ds, result.assignment, result.centers);
  return result;
}

Clustering best_of(const Dataset& ds, int K, int restarts, std::uint64_t seed) {
  if (restarts < 1) throw std::invalid_argument("best_of: restarts must be >= 1");
  Clustering best;
  best.cost = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    Clustering run = lloyd(ds, kmeanspp_init(ds, K, derive_seed(seed, static_cast<std::uint64_t>(r))));
    if (run.cost < best.cost) best = std::move(run);
  }
  return best;
}

}  // namespace minirel
