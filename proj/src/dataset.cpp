#include "minirel/dataset.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <stdexcept>

#include "minirel/rng.hpp"

namespace minirel {

namespace {

bool is_missing(const std::string& cell) { return cell.empty() || cell == "?"; }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Whole-cell numeric parse; "nan"/"inf" are rejected on purpose.
bool parse_number(const std::string& cell, double& out) {
  const std::string t = trim(cell);
  if (t.empty()) return false;
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v)) return false;
  out = v;
  return true;
}

std::vector<std::string> split_line(const std::string& line, char delim) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delim) {
      cells.push_back(trim(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  cells.push_back(trim(cur));
  return cells;
}

}  // namespace

std::size_t RawTable::column_index(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::runtime_error("missing column: " + name);
  return static_cast<std::size_t>(it - columns.begin());
}

RawTable make_table(std::vector<std::string> columns, std::vector<std::vector<std::string>> rows,
                    const Schema& schema) {
  RawTable table;
  table.columns = std::move(columns);
  table.sensitive_column = schema.sensitive_column;
  table.target_column = schema.target_column;
  table.column_index(table.sensitive_column);  // throws if absent
  if (table.target_column) table.column_index(*table.target_column);
  for (auto& row : rows) {
    if (row.size() != table.columns.size()) {
      throw std::runtime_error("ragged row: expected " + std::to_string(table.columns.size()) +
                               " cells, got " + std::to_string(row.size()));
    }
    const bool missing = std::any_of(row.begin(), row.end(),
                                     [](const std::string& c) { return is_missing(c); });
    if (missing) {
      table.skipped_rows++;
      continue;
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

RawTable load_csv(const std::filesystem::path& path, const Schema& schema) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty file: " + path.string());
  std::vector<std::string> columns = split_line(line, schema.delimiter);
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    rows.push_back(split_line(line, schema.delimiter));
  }
  RawTable table = make_table(std::move(columns), std::move(rows), schema);
  // drop requested columns up front so they never reach preprocessing
  for (const auto& name : schema.drop_columns) {
    const std::size_t idx = table.column_index(name);
    table.columns.erase(table.columns.begin() + static_cast<std::ptrdiff_t>(idx));
    for (auto& row : table.rows) row.erase(row.begin() + static_cast<std::ptrdiff_t>(idx));
  }
  return table;
}

Dataset preprocess(const RawTable& raw) {
  if (raw.rows.empty()) throw std::runtime_error("preprocess: table has zero rows");
  const std::size_t n = raw.rows.size();
  const std::size_t sensitive_idx = raw.column_index(raw.sensitive_column);
  std::optional<std::size_t> target_idx;
  if (raw.target_column) target_idx = raw.column_index(*raw.target_column);

  Dataset ds;

  // sensitive column -> dense group ids in order of first appearance
  std::map<std::string, int> group_id;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& value = raw.rows[i][sensitive_idx];
    auto it = group_id.find(value);
    if (it == group_id.end()) {
      it = group_id.emplace(value, static_cast<int>(ds.groups.size())).first;
      ds.groups.emplace_back();
      ds.group_names.push_back(value);
    }
    ds.groups[static_cast<std::size_t>(it->second)].push_back(i);
  }

  // classify feature columns, then emit scaled / one-hot values
  std::vector<Eigen::VectorXd> feature_cols;
  for (std::size_t c = 0; c < raw.columns.size(); ++c) {
    if (c == sensitive_idx || (target_idx && c == *target_idx)) continue;
    bool numeric = true;
    Eigen::VectorXd values(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (!parse_number(raw.rows[i][c], values[static_cast<Eigen::Index>(i)])) {
        numeric = false;
        break;
      }
    }
    if (numeric) {
      const double lo = values.minCoeff();
      const double hi = values.maxCoeff();
      if (hi > lo) {
        values = (values.array() - lo) / (hi - lo);
      } else {
        values.setZero();  // constant column carries no information
      }
      feature_cols.push_back(std::move(values));
      ds.feature_names.push_back(raw.columns[c]);
    } else {
      // one indicator column per distinct value, ordered by first appearance
      std::vector<std::string> order;
      std::map<std::string, std::size_t> col_of;
      for (std::size_t i = 0; i < n; ++i) {
        const std::string& v = raw.rows[i][c];
        if (col_of.emplace(v, order.size()).second) order.push_back(v);
      }
      std::vector<Eigen::VectorXd> indicators(order.size(), Eigen::VectorXd::Zero(n));
      for (std::size_t i = 0; i < n; ++i) {
        indicators[col_of[raw.rows[i][c]]][static_cast<Eigen::Index>(i)] = 1.0;
      }
      for (std::size_t v = 0; v < order.size(); ++v) {
        feature_cols.push_back(std::move(indicators[v]));
        ds.feature_names.push_back(raw.columns[c] + "=" + order[v]);
      }
    }
  }

  ds.points.resize(n, static_cast<Eigen::Index>(feature_cols.size()));
  for (std::size_t c = 0; c < feature_cols.size(); ++c) {
    ds.points.col(static_cast<Eigen::Index>(c)) = feature_cols[c];
  }
  return ds;
}

Dataset subsample(const Dataset& ds, std::size_t size, std::uint64_t seed) {
  if (size == 0) throw std::invalid_argument("subsample: size must be >= 1");
  if (size >= ds.n()) return ds;
  Rng rng(derive_seed(seed, 0x5ab5aULL));
  const std::vector<std::size_t> keep = rng.sample_indices(ds.n(), size);
  std::vector<std::size_t> new_index(ds.n(), static_cast<std::size_t>(-1));
  Dataset out;
  out.points.resize(static_cast<Eigen::Index>(keep.size()), ds.points.cols());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    new_index[keep[i]] = i;
    out.points.row(static_cast<Eigen::Index>(i)) = ds.points.row(static_cast<Eigen::Index>(keep[i]));
  }
  out.group_names = ds.group_names;
  out.feature_names = ds.feature_names;
  out.groups.resize(ds.groups.size());
  for (std::size_t g = 0; g < ds.groups.size(); ++g) {
    for (std::size_t i : ds.groups[g]) {
      if (new_index[i] != static_cast<std::size_t>(-1)) out.groups[g].push_back(new_index[i]);
    }
  }
  return out;
}

Dataset dataset_from_matrix(Eigen::MatrixXd points, std::vector<std::vector<std::size_t>> groups,
                            std::vector<std::string> group_names) {
  Dataset ds;
  ds.points = std::move(points);
  ds.groups = std::move(groups);
  const std::size_t n = ds.n();
  for (const auto& set : ds.groups) {
    for (std::size_t i : set) {
      if (i >= n) throw std::invalid_argument("group index out of range");
    }
  }
  if (group_names.empty()) {
    for (std::size_t g = 0; g < ds.groups.size(); ++g) ds.group_names.push_back("g" + std::to_string(g));
  } else {
    ds.group_names = std::move(group_names);
  }
  return ds;
}

}  // namespace minirel
