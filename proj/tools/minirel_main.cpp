#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "minirel/experiment.hpp"
#include "minirel/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"minirel: minimum-representation-fair k-means clustering"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::optional<std::size_t> scale;
  int jobs = 1;
  std::uint64_t seed_base = 0;
  const auto add_grid_flags = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "experiment config (JSON)")->required();
    cmd->add_option("--out", out_dir, "output directory (overrides config)");
    cmd->add_option("--scale", scale, "subsample the dataset to N points");
    cmd->add_option("--jobs", jobs, "worker threads for grid cells");
    cmd->add_option("--seed-base", seed_base, "offset added to every seed");
  };

  CLI::App* run = app.add_subcommand("run", "run the experiment grid");
  add_grid_flags(run);
  CLI::App* bench_init = app.add_subcommand("bench-init", "compare initialization schemes");
  add_grid_flags(bench_init);
  CLI::App* bench_prefix = app.add_subcommand("bench-prefix", "compare pre-fixing strategies");
  add_grid_flags(bench_prefix);

  std::string clustering_path, dataset_path, sensitive, notion = "eqop";
  std::string target;
  double alpha = 0.51;
  CLI::App* audit = app.add_subcommand("audit", "validate a clustering against a fairness spec");
  audit->add_option("--clustering", clustering_path, "clustering JSON ({\"assignment\": [...]})")
      ->required();
  audit->add_option("--dataset", dataset_path, "dataset CSV")->required();
  audit->add_option("--sensitive", sensitive, "sensitive column name")->required();
  audit->add_option("--target", target, "target column to drop");
  audit->add_option("--alpha", alpha, "representation threshold");
  audit->add_option("--notion", notion, "beta rule: sp, eqop, or none");

  std::string synth_kind = "census", synth_out;
  std::size_t synth_rows = 2000;
  std::uint64_t synth_seed = 0;
  CLI::App* synth = app.add_subcommand("synth", "write a synthetic benchmark CSV");
  synth->add_option("--kind", synth_kind, "census or blobs");
  synth->add_option("--rows", synth_rows, "row count");
  synth->add_option("--seed", synth_seed, "generator seed");
  synth->add_option("--out", synth_out, "output CSV path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return minirel::cmd_run(config_path, out_dir, scale, jobs, seed_base);
    }
    if (bench_init->parsed()) {
      return minirel::cmd_bench_init(config_path, out_dir, scale, jobs, seed_base);
    }
    if (bench_prefix->parsed()) {
      return minirel::cmd_bench_prefix(config_path, out_dir, scale, jobs, seed_base);
    }
    if (audit->parsed()) {
      return minirel::cmd_audit(clustering_path, dataset_path, sensitive,
                                target.empty() ? std::nullopt : std::make_optional(target), alpha,
                                notion, std::cout);
    }
    if (synth->parsed()) {
      minirel::RawTable table;
      if (synth_kind == "census") {
        table = minirel::synthetic_census(synth_rows, synth_seed);
      } else if (synth_kind == "blobs") {
        table = minirel::synthetic_blobs(synth_rows / 2, 2, 2, 6.0, synth_seed);
      } else {
        std::cerr << "unknown --kind \"" << synth_kind << "\"; allowed: census, blobs\n";
        return 2;
      }
      std::ofstream out(synth_out);
      if (!out) {
        std::cerr << "cannot open " << synth_out << "\n";
        return 2;
      }
      for (std::size_t c = 0; c < table.columns.size(); ++c) {
        out << (c ? "," : "") << table.columns[c];
      }
      out << "\n";
      for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
        out << "\n";
      }
      std::cout << "wrote " << table.rows.size() << " rows to " << synth_out << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
