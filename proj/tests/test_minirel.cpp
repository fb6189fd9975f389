#include <doctest.h>


#include <nlohmann/json.hpp>
#include <filesystem>

#include "minirel/minirel.hpp"
#include "minirel/oracle.hpp"
#include "minirel/rng.hpp"

#include "support/generators.hpp"

using namespace minirel;

namespace {

Dataset iris() {
  Schema schema;
  schema.sensitive_column = "species";
  return preprocess(load_csv(std::filesystem::path(TEST_DATA_DIR) / "iris.csv", schema));
}

MiniRelConfig config_for(const Dataset& ds, int K, Rational alpha, std::vector<long long> beta) {
  MiniRelConfig cfg;
  cfg.K = K;
  cfg.spec.alpha = alpha;
  cfg.spec.num_groups = ds.num_groups();
  cfg.spec.num_clusters = K;
  cfg.spec.beta = std::move(beta);
  cfg.spec.allowed = FairnessSpec::full_w(ds.num_groups(), K);
  cfg.seed = 7;
  return cfg;
}

// the 6-point line with interleaved groups, as a dataset
Dataset line_dataset() {
  Eigen::MatrixXd points(6, 1);
  points << 0.0, 0.1, 0.2, 1.0, 1.1, 1.2;
  return dataset_from_matrix(points, {{0, 1, 3}, {2, 4, 5}});
}

// global optimum of the fair k-means problem by enumerating all partitions
// with mean centers
double global_fair_optimum(const Dataset& ds, int K, const FairnessSpec& spec) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> assignment(ds.n(), 0);
  while (true) {
    Centers centers = Centers::Zero(K, ds.points.cols());
    std::vector<long long> sizes(static_cast<std::size_t>(K), 0);
    for (std::size_t i = 0; i < ds.n(); ++i) {
      centers.row(assignment[i]) += ds.points.row(static_cast<Eigen::Index>(i));
      sizes[static_cast<std::size_t>(assignment[i])]++;
    }
    bool sizes_ok = true;
    for (long long s : sizes) sizes_ok = sizes_ok && s >= spec.size_lower;
    if (sizes_ok) {
      for (int k = 0; k < K; ++k) {
        if (sizes[static_cast<std::size_t>(k)] > 0) {
          centers.row(k) /= static_cast<double>(sizes[static_cast<std::size_t>(k)]);
        }
      }
      Clustering c;
      c.assignment = assignment;
      c.centers = centers;
      const auto report = validate(c, ds, spec);
      if (report.satisfied) best = std::min(best, report.cost);
    }
    std::size_t pos = 0;
    while (pos < ds.n() && ++assignment[pos] == K) {
      assignment[pos] = 0;
      ++pos;
    }
    if (pos == ds.n()) break;
  }
  return best;
}

}  // namespace

TEST_SUITE("minirel") {

TEST_CASE("beta zero reproduces plain lloyd") {
  const Dataset ds = iris();
  MiniRelConfig cfg = config_for(ds, 4, Rational(51, 100), {0, 0, 0});
  cfg.init = InitScheme::WarmStart;
  cfg.restarts = 3;
  const MiniRelTrace trace = run(ds, cfg);
  REQUIRE(trace.status == RunStatus::Success);
  const Clustering plain = best_of(ds, 4, 3, cfg.seed);
  CHECK(trace.clustering.cost == doctest::Approx(plain.cost).epsilon(1e-9));
}

TEST_CASE("line instance reaches the global fair optimum") {
  const Dataset ds = line_dataset();
  MiniRelConfig cfg = config_for(ds, 2, Rational(51, 100), {1, 1});
  cfg.restarts = 5;
  const MiniRelTrace trace = run(ds, cfg);
  REQUIRE(trace.status == RunStatus::Success);
  CHECK(trace.report.satisfied);
  const double global = global_fair_optimum(ds, 2, cfg.spec);
  CHECK(trace.clustering.cost == doctest::Approx(global).epsilon(1e-9));
}

TEST_CASE("objective sequence is non-increasing and ends at a fixed point") {
  const Dataset ds = iris();
  for (const auto mode : {PrefixMode::Off, PrefixMode::Auto, PrefixMode::Naive}) {
    MiniRelConfig cfg = config_for(ds, 5, Rational(51, 100),
                                   beta_equality_of_opportunity(ds, Rational(51, 100), 5));
    cfg.prefix = mode;
    cfg.restarts = 2;
    // a naive random plan can make the IP brutally hard for a cuts-free
    // solver; the budget path returns incumbents and keeps descent intact
    cfg.budgets.time_seconds = 2.0;
    const MiniRelTrace trace = run(ds, cfg);
    REQUIRE(trace.status == RunStatus::Success);
    CHECK(trace.fixed_point);
    CHECK(trace.report.satisfied);
    for (std::size_t t = 0; t + 1 < trace.iterations.size(); ++t) {
      CHECK(trace.iterations[t + 1].cost <= trace.iterations[t].cost + 1e-9);
      CHECK(trace.iterations[t + 1].ip_objective <= trace.iterations[t].cost + 1e-9);
    }
    for (const auto& rec : trace.iterations) {
      CHECK(rec.cost <= rec.ip_objective + 1e-9);  // mean update never hurts
    }
    CHECK(trace.iterations.back().changed == 0);
  }
}

TEST_CASE("initialization schemes dispatch as documented") {
  const Dataset ds = iris();
  MiniRelConfig cfg = config_for(ds, 3, Rational(51, 100), {0, 0, 0});

  cfg.init = InitScheme::Random;
  CHECK(initialize(ds, cfg) == random_init(ds, 3, cfg.seed));
  cfg.init = InitScheme::KMeansPP;
  CHECK(initialize(ds, cfg) == kmeanspp_init(ds, 3, cfg.seed));
  cfg.init = InitScheme::WarmStart;
  cfg.restarts = 1;
  const Centers warm = initialize(ds, cfg);
  const Clustering fixed = lloyd(ds, warm);  // already a fixed point
  CHECK((fixed.centers - warm).cwiseAbs().maxCoeff() <= 1e-12);

  // more restarts never increase the init cost on a shared seed stream
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const double one = best_of(ds, 3, 1, seed).cost;
    const double hundred = best_of(ds, 3, 25, seed).cost;
    CHECK(hundred <= one + 1e-12);
  }
}

TEST_CASE("warm start cuts iterations versus random init on iris") {
  const Dataset ds = iris();
  double random_iters = 0.0, warm_iters = 0.0;
  const int seeds = 5;
  for (std::uint64_t seed = 0; seed < seeds; ++seed) {
    MiniRelConfig cfg = config_for(ds, 4, Rational(51, 100),
                                   beta_equality_of_opportunity(ds, Rational(51, 100), 4));
    cfg.seed = seed;
    cfg.init = InitScheme::Random;
    random_iters += static_cast<double>(run(ds, cfg).iterations.size());
    cfg.init = InitScheme::WarmStart;
    cfg.restarts = 10;
    warm_iters += static_cast<double>(run(ds, cfg).iterations.size());
  }
  CHECK(warm_iters / seeds <= random_iters / seeds);
}

TEST_CASE("infeasible quotas surface with diagnostics") {
  const Dataset ds = line_dataset();
  MiniRelConfig cfg = config_for(ds, 2, Rational(51, 100), {2, 2});  // capacity is 2
  const MiniRelTrace trace = run(ds, cfg);
  CHECK(trace.status == RunStatus::Infeasible);
  CHECK_FALSE(trace.message.empty());
}

TEST_CASE("restricted W is widened once at iteration one") {
  const Dataset ds = line_dataset();
  MiniRelConfig cfg = config_for(ds, 2, Rational(51, 100), {1, 1});
  // group 0 may only claim cluster 0, group 1 only cluster 0 as well: the
  // capacity of cluster 0 is one group, so this W is infeasible as given
  cfg.spec.allowed = {{0, 0}, {1, 0}};
  cfg.prefix = PrefixMode::Off;
  const MiniRelTrace trace = run(ds, cfg);
  REQUIRE(trace.status == RunStatus::Success);
  CHECK(trace.message.find("widened") != std::string::npos);
  CHECK(trace.report.satisfied);
}

TEST_CASE("local optimality at the fixed point on small instances") {
  Rng rng(88);
  int tested = 0;
  while (tested < 3) {
    const Dataset ds = gen::random_dataset(rng, 12, 2, 2);
    const int K = 2;
    MiniRelConfig cfg = config_for(ds, K, Rational(51, 100), {1, 1});
    cfg.restarts = 3;
    const MiniRelTrace trace = run(ds, cfg);
    if (trace.status != RunStatus::Success) continue;
    REQUIRE(trace.fixed_point);
    ++tested;
    // no single feasible point move lowers the cost
    const Clustering& c = trace.clustering;
    for (std::size_t i = 0; i < ds.n(); ++i) {
      for (int k = 0; k < K; ++k) {
        if (k == c.assignment[i]) continue;
        Clustering moved = c;
        moved.assignment[i] = k;
        // recompute means for the perturbed partition
        Centers centers = Centers::Zero(K, ds.points.cols());
        std::vector<long long> sizes(static_cast<std::size_t>(K), 0);
        for (std::size_t p = 0; p < ds.n(); ++p) {
          centers.row(moved.assignment[p]) += ds.points.row(static_cast<Eigen::Index>(p));
          sizes[static_cast<std::size_t>(moved.assignment[p])]++;
        }
        bool ok_sizes = true;
        for (long long s : sizes) ok_sizes = ok_sizes && s >= cfg.spec.size_lower;
        if (!ok_sizes) continue;
        for (int kk = 0; kk < K; ++kk) {
          if (sizes[static_cast<std::size_t>(kk)] > 0) {
            centers.row(kk) /= static_cast<double>(sizes[static_cast<std::size_t>(kk)]);
          }
        }
        moved.centers = centers;
        const auto report = validate(moved, ds, cfg.spec);
        if (report.satisfied) {
          CHECK(report.cost >= trace.clustering.cost - 1e-9);
        }
      }
    }
  }
}

TEST_CASE("iteration records serialize to json lines") {
  const Dataset ds = line_dataset();
  MiniRelConfig cfg = config_for(ds, 2, Rational(51, 100), {1, 1});
  const MiniRelTrace trace = run(ds, cfg);
  REQUIRE(trace.status == RunStatus::Success);
  REQUIRE_FALSE(trace.iterations.empty());
  const auto j = trace.iterations.front().to_json();
  CHECK(j.contains("iter"));
  CHECK(j.contains("ip_objective"));
  CHECK(j.contains("cost"));
  CHECK(j.contains("changed"));
  CHECK(j.contains("nodes"));
}

}  // TEST_SUITE
