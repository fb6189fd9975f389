#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "minirel/dataset.hpp"
#include "minirel/fairness.hpp"
#include "minirel/minirel.hpp"

namespace minirel {

enum class Method { KMeans, MiniRelSP, MiniRelEqOp };
std::string to_string(Method m);

struct ExperimentConfig {
  std::filesystem::path dataset_path;
  Schema schema;
  std::vector<int> k_values;
  Rational alpha{51, 100};
  std::vector<Method> methods;
  std::vector<std::uint64_t> seeds;
  InitScheme init = InitScheme::WarmStart;
  int restarts = 10;
  int iteration_limit = 100;
  PrefixMode prefix = PrefixMode::Auto;
  PrefixObjective prefix_objective = PrefixObjective::Local;
  std::optional<std::size_t> subsample_size;
  std::uint64_t subsample_seed = 0;
  milp::Budgets budgets;
  long long size_lower = 1;
  long long size_upper = -1;  // -1 = n
  std::filesystem::path out_dir;

  nlohmann::json to_json() const;
};

// Parses and validates; collects every problem instead of stopping at the
// first one. On failure `errors` is non-empty and the config is unusable.
ExperimentConfig parse_experiment_config(const nlohmann::json& j, std::vector<std::string>& errors);

struct CellResult {
  std::string dataset;
  Method method = Method::KMeans;
  int K = 0;
  std::uint64_t seed = 0;
  std::string status;  // ok | infeasible | solver-limit
  double cost = 0.0;
  std::vector<long long> lambda;
  std::vector<long long> beta;
  bool satisfied = false;
  int iterations = 0;
  long long nodes = 0;
  double wall_ms = 0.0;
  std::vector<IterationRecord> trace;
};

// One grid cell: a single (method, K, seed) run on a prepared dataset.
CellResult run_cell(const Dataset& ds, const std::string& dataset_name, Method method, int K,
                    std::uint64_t seed, const ExperimentConfig& cfg);

// The full grid on `jobs` worker threads; rows merged in sorted
// (dataset, method, K, seed) order regardless of scheduling.
std::vector<CellResult> run_grid(const Dataset& ds, const std::string& dataset_name,
                                 const ExperimentConfig& cfg, int jobs);

void write_results_csv(const std::filesystem::path& path, const std::vector<CellResult>& results,
                       const std::vector<std::string>& group_names, bool include_timing = true);
void write_records_jsonl(const std::filesystem::path& path, const std::vector<CellResult>& results,
                         const std::vector<std::string>& group_names);
void write_plot_data(const std::filesystem::path& dir, const std::vector<CellResult>& results,
                     const std::vector<std::string>& group_names);

// CLI entry points. Exit codes: 0 ok, 2 config error, 3 infeasible cell
// (partial results still written).
int cmd_run(const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
            std::optional<std::size_t> scale, int jobs, std::uint64_t seed_base);
int cmd_audit(const std::filesystem::path& clustering_path, const std::filesystem::path& dataset_path,
              const std::string& sensitive, const std::optional<std::string>& target, double alpha,
              const std::string& notion, std::ostream& out);
int cmd_bench_init(const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
                   std::optional<std::size_t> scale, int jobs, std::uint64_t seed_base);
int cmd_bench_prefix(const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
                     std::optional<std::size_t> scale, int jobs, std::uint64_t seed_base);

}  // namespace minirel
