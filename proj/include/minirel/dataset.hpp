#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace minirel {

// Column role declarations for loading a delimiter-separated table.
struct Schema {
  std::string sensitive_column;
  std::optional<std::string> target_column;
  std::vector<std::string> drop_columns;
  char delimiter = ',';
};

// A parsed table with cells kept as text; type inference happens in
// preprocess(). Rows with missing cells ("" or "?") are rejected at load
// time and counted.
struct RawTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::string sensitive_column;
  std::optional<std::string> target_column;
  std::size_t skipped_rows = 0;

  std::size_t column_index(const std::string& name) const;
};

// Numeric dataset: features min-max scaled to [0,1], categoricals one-hot
// encoded, the sensitive column turned into group index sets. Groups may
// overlap and need not cover every point.
struct Dataset {
  Eigen::MatrixXd points;  // n x m
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::string> group_names;
  std::vector<std::string> feature_names;

  std::size_t n() const { return static_cast<std::size_t>(points.rows()); }
  std::size_t m() const { return static_cast<std::size_t>(points.cols()); }
  int num_groups() const { return static_cast<int>(groups.size()); }
};

RawTable load_csv(const std::filesystem::path& path, const Schema& schema);

// Build a RawTable directly (bindings, synthetic data, tests).
RawTable make_table(std::vector<std::string> columns,
                    std::vector<std::vector<std::string>> rows, const Schema& schema);

// Drop the target column, convert the sensitive column to group sets, min-max
// scale numeric columns and one-hot encode categorical ones (indicator
// columns ordered by first appearance). Constant numeric columns map to 0.
Dataset preprocess(const RawTable& raw);

// Uniform sample of min(size, n) points without replacement, original order
// preserved, group sets remapped. Deterministic per seed.
Dataset subsample(const Dataset& ds, std::size_t size, std::uint64_t seed);

// Assemble a Dataset from an already-numeric matrix plus group sets.
Dataset dataset_from_matrix(Eigen::MatrixXd points,
                            std::vector<std::vector<std::size_t>> groups,
                            std::vector<std::string> group_names = {});

}  // namespace minirel
