#include "minirel/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace minirel {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

std::string sanitize(const std::string& s) {
  std::string out = s;
  for (char& c : out) {
    if (c == ',' || c == '\n' || c == '\r') c = '_';
  }
  return out;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double stderr_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1)) /
         std::sqrt(static_cast<double>(v.size()));
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

FairnessSpec spec_for(Method method, const Dataset& ds, int K, const ExperimentConfig& cfg) {
  FairnessSpec spec;
  spec.alpha = cfg.alpha;
  spec.num_groups = ds.num_groups();
  spec.num_clusters = K;
  spec.size_lower = cfg.size_lower;
  spec.size_upper = cfg.size_upper;
  spec.allowed = FairnessSpec::full_w(spec.num_groups, K);
  switch (method) {
    case Method::KMeans:
      spec.beta.assign(ds.groups.size(), 0);
      break;
    case Method::MiniRelSP:
      spec.beta = beta_statistical_parity(ds.num_groups(), cfg.alpha, K);
      break;
    case Method::MiniRelEqOp:
      spec.beta = beta_equality_of_opportunity(ds, cfg.alpha, K);
      break;
  }
  return spec;
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::KMeans: return "kmeans";
    case Method::MiniRelSP: return "minirel-sp";
    case Method::MiniRelEqOp: return "minirel-eqop";
  }
  return "unknown";
}

json ExperimentConfig::to_json() const {
  json init_json{{"scheme", init == InitScheme::Random      ? "random"
                            : init == InitScheme::KMeansPP  ? "kmeanspp"
                                                            : "warmstart"}};
  if (init == InitScheme::WarmStart) init_json["restarts"] = restarts;
  json prefix_json{{"mode", prefix == PrefixMode::Off    ? "off"
                            : prefix == PrefixMode::Auto ? "auto"
                            : prefix == PrefixMode::Ip   ? "ip"
                                                         : "naive"}};
  prefix_json["objective"] = prefix_objective == PrefixObjective::Local        ? "local"
                             : prefix_objective == PrefixObjective::Proportion ? "proportion"
                                                                               : "weighted";
  json methods_json = json::array();
  for (Method m : methods) methods_json.push_back(to_string(m));
  json j{{"dataset",
          {{"path", dataset_path.string()},
           {"sensitive", schema.sensitive_column},
           {"delimiter", std::string(1, schema.delimiter)}}},
         {"k_values", k_values},
         {"alpha", alpha.value()},
         {"alpha_exact", {{"num", alpha.num}, {"den", alpha.den}}},
         {"methods", methods_json},
         {"seeds", seeds},
         {"init", init_json},
         {"prefix", prefix_json},
         {"iteration_limit", iteration_limit},
         {"l", size_lower},
         {"u", size_upper}};
  if (schema.target_column) j["dataset"]["target"] = *schema.target_column;
  if (!schema.drop_columns.empty()) j["dataset"]["drop"] = schema.drop_columns;
  if (subsample_size) j["subsample"] = *subsample_size;
  if (std::isfinite(budgets.time_seconds)) j["budgets"]["time_seconds"] = budgets.time_seconds;
  if (budgets.nodes != std::numeric_limits<long long>::max()) j["budgets"]["nodes"] = budgets.nodes;
  return j;
}

ExperimentConfig parse_experiment_config(const json& j, std::vector<std::string>& errors) {
  ExperimentConfig cfg;
  const auto fail = [&errors](const std::string& msg) { errors.push_back(msg); };

  if (!j.contains("dataset") || !j["dataset"].is_object()) {
    fail("missing \"dataset\" object");
  } else {
    const json& d = j["dataset"];
    if (!d.contains("path")) fail("dataset.path is required");
    else cfg.dataset_path = d["path"].get<std::string>();
    if (!d.contains("sensitive")) fail("dataset.sensitive is required");
    else cfg.schema.sensitive_column = d["sensitive"].get<std::string>();
    if (d.contains("target") && !d["target"].is_null()) {
      cfg.schema.target_column = d["target"].get<std::string>();
    }
    if (d.contains("drop")) cfg.schema.drop_columns = d["drop"].get<std::vector<std::string>>();
    if (d.contains("delimiter")) {
      const std::string delim = d["delimiter"].get<std::string>();
      if (delim.size() != 1) fail("dataset.delimiter must be a single character");
      else cfg.schema.delimiter = delim[0];
    }
  }

  if (!j.contains("k_values")) {
    fail("k_values is required (list of K or {\"from\":a,\"to\":b})");
  } else if (j["k_values"].is_array()) {
    cfg.k_values = j["k_values"].get<std::vector<int>>();
  } else if (j["k_values"].is_object()) {
    const int from = j["k_values"].value("from", 0);
    const int to = j["k_values"].value("to", -1);
    for (int k = from; k <= to; ++k) cfg.k_values.push_back(k);
  }
  if (j.contains("k_values") && cfg.k_values.empty()) fail("k_values resolves to an empty list");
  for (int k : cfg.k_values) {
    if (k < 1) fail("k_values entries must be >= 1 (got " + std::to_string(k) + ")");
  }

  if (j.contains("alpha")) {
    try {
      if (j["alpha"].is_object()) {
        cfg.alpha = Rational(j["alpha"].at("num").get<long long>(),
                             j["alpha"].at("den").get<long long>());
      } else {
        cfg.alpha = Rational::from_double(j["alpha"].get<double>());
      }
      if (cfg.alpha.num > cfg.alpha.den) fail("alpha must be in (0, 1]");
    } catch (const std::exception& e) {
      fail(std::string("alpha: ") + e.what());
    }
  }

  static const std::map<std::string, Method> kMethods{{"kmeans", Method::KMeans},
                                                      {"minirel-sp", Method::MiniRelSP},
                                                      {"minirel-eqop", Method::MiniRelEqOp}};
  if (j.contains("methods")) {
    for (const auto& m : j["methods"]) {
      const std::string name = m.get<std::string>();
      const auto it = kMethods.find(name);
      if (it == kMethods.end()) {
        fail("unknown method \"" + name + "\"; allowed: kmeans, minirel-sp, minirel-eqop");
      } else {
        cfg.methods.push_back(it->second);
      }
    }
  }
  if (cfg.methods.empty()) {
    cfg.methods = {Method::KMeans, Method::MiniRelSP, Method::MiniRelEqOp};
  }

  if (j.contains("seeds")) {
    if (j["seeds"].is_number()) {
      const long long count = j["seeds"].get<long long>();
      if (count < 1) fail("seeds must be >= 1");
      for (long long s = 0; s < count; ++s) cfg.seeds.push_back(static_cast<std::uint64_t>(s));
    } else {
      cfg.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
    }
  } else {
    for (std::uint64_t s = 0; s < 10; ++s) cfg.seeds.push_back(s);
  }

  if (j.contains("init")) {
    const std::string scheme = j["init"].value("scheme", "warmstart");
    if (scheme == "random") cfg.init = InitScheme::Random;
    else if (scheme == "kmeanspp") cfg.init = InitScheme::KMeansPP;
    else if (scheme == "warmstart") cfg.init = InitScheme::WarmStart;
    else fail("unknown init.scheme \"" + scheme + "\"; allowed: random, kmeanspp, warmstart");
    cfg.restarts = j["init"].value("restarts", 10);
    if (cfg.restarts < 1) fail("init.restarts must be >= 1");
  }

  if (j.contains("prefix")) {
    const std::string mode = j["prefix"].value("mode", "auto");
    if (mode == "off") cfg.prefix = PrefixMode::Off;
    else if (mode == "auto") cfg.prefix = PrefixMode::Auto;
    else if (mode == "ip") cfg.prefix = PrefixMode::Ip;
    else if (mode == "naive") cfg.prefix = PrefixMode::Naive;
    else fail("unknown prefix.mode \"" + mode + "\"; allowed: off, auto, ip, naive");
    const std::string objective = j["prefix"].value("objective", "local");
    if (objective == "local") cfg.prefix_objective = PrefixObjective::Local;
    else if (objective == "proportion") cfg.prefix_objective = PrefixObjective::Proportion;
    else if (objective == "weighted") cfg.prefix_objective = PrefixObjective::Weighted;
    else {
      fail("unknown prefix.objective \"" + objective +
           "\"; allowed: local, proportion, weighted");
    }
  }

  if (j.contains("subsample")) cfg.subsample_size = j["subsample"].get<std::size_t>();
  if (j.contains("subsample_seed")) cfg.subsample_seed = j["subsample_seed"].get<std::uint64_t>();
  if (j.contains("iteration_limit")) {
    cfg.iteration_limit = j["iteration_limit"].get<int>();
    if (cfg.iteration_limit < 1) fail("iteration_limit must be >= 1");
  }
  if (j.contains("budgets")) {
    if (j["budgets"].contains("time_seconds")) {
      cfg.budgets.time_seconds = j["budgets"]["time_seconds"].get<double>();
    }
    if (j["budgets"].contains("nodes")) cfg.budgets.nodes = j["budgets"]["nodes"].get<long long>();
  }
  if (j.contains("l")) cfg.size_lower = j["l"].get<long long>();
  if (j.contains("u") && !j["u"].is_null()) cfg.size_upper = j["u"].get<long long>();
  if (cfg.size_lower < 1) fail("l must be >= 1");
  if (j.contains("out")) cfg.out_dir = j["out"].get<std::string>();
  return cfg;
}

CellResult run_cell(const Dataset& ds, const std::string& dataset_name, Method method, int K,
                    std::uint64_t seed, const ExperimentConfig& cfg) {
  CellResult cell;
  cell.dataset = dataset_name;
  cell.method = method;
  cell.K = K;
  cell.seed = seed;
  const FairnessSpec spec = spec_for(method, ds, K, cfg);
  const auto t0 = Clock::now();
  if (method == Method::KMeans) {
    const Clustering c = best_of(ds, K, cfg.restarts, seed);
    cell.status = "ok";
    cell.cost = c.cost;
    const ValidationReport report = validate(c, ds, spec);
    cell.lambda = report.lambda;
    cell.beta = report.beta;
    cell.satisfied = report.satisfied;
  } else {
    MiniRelConfig mc;
    mc.K = K;
    mc.spec = spec;
    mc.init = cfg.init;
    mc.restarts = cfg.restarts;
    mc.iteration_limit = cfg.iteration_limit;
    mc.prefix = cfg.prefix;
    mc.prefix_objective = cfg.prefix_objective;
    mc.seed = seed;
    mc.budgets = cfg.budgets;
    const MiniRelTrace trace = run(ds, mc);
    cell.status = trace.status == RunStatus::Success      ? "ok"
                  : trace.status == RunStatus::Infeasible ? "infeasible"
                                                          : "solver-limit";
    cell.iterations = static_cast<int>(trace.iterations.size());
    cell.trace = trace.iterations;
    for (const IterationRecord& r : trace.iterations) cell.nodes += r.nodes;
    if (trace.status != RunStatus::Infeasible) {
      cell.cost = trace.clustering.cost;
      cell.lambda = trace.report.lambda;
      cell.beta = trace.report.beta;
      cell.satisfied = trace.report.satisfied;
    } else {
      cell.beta = spec.beta;
    }
  }
  cell.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  return cell;
}

std::vector<CellResult> run_grid(const Dataset& ds, const std::string& dataset_name,
                                 const ExperimentConfig& cfg, int jobs) {
  struct Task {
    Method method;
    int K;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (Method m : cfg.methods) {
    for (int k : cfg.k_values) {
      for (std::uint64_t s : cfg.seeds) tasks.push_back({m, k, s});
    }
  }
  std::vector<CellResult> results(tasks.size());
  std::atomic<std::size_t> next{0};
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(tasks.size())));
  const auto work = [&] {
    while (true) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      results[t] = run_cell(ds, dataset_name, tasks[t].method, tasks[t].K, tasks[t].seed, cfg);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  std::sort(results.begin(), results.end(), [](const CellResult& a, const CellResult& b) {
    return std::tie(a.dataset, a.method, a.K, a.seed) <
           std::tie(b.dataset, b.method, b.K, b.seed);
  });
  return results;
}

void write_results_csv(const std::filesystem::path& path, const std::vector<CellResult>& results,
                       const std::vector<std::string>& group_names, bool include_timing) {
  std::ofstream out(path);
  out.precision(12);
  out << "dataset,method,K,seed,status,cost,iterations,nodes,satisfied";
  for (const std::string& g : group_names) out << ",lambda_" << sanitize(g);
  for (const std::string& g : group_names) out << ",beta_" << sanitize(g);
  if (include_timing) out << ",wall_ms";
  out << "\n";
  for (const CellResult& r : results) {
    out << sanitize(r.dataset) << ',' << to_string(r.method) << ',' << r.K << ',' << r.seed << ','
        << r.status << ',' << r.cost << ',' << r.iterations << ',' << r.nodes << ','
        << (r.satisfied ? 1 : 0);
    for (std::size_t g = 0; g < group_names.size(); ++g) {
      out << ',' << (g < r.lambda.size() ? r.lambda[g] : 0);
    }
    for (std::size_t g = 0; g < group_names.size(); ++g) {
      out << ',' << (g < r.beta.size() ? r.beta[g] : 0);
    }
    if (include_timing) out << ',' << r.wall_ms;
    out << "\n";
  }
}

void write_records_jsonl(const std::filesystem::path& path, const std::vector<CellResult>& results,
                         const std::vector<std::string>& group_names) {
  std::ofstream out(path);
  for (const CellResult& r : results) {
    json rec{{"dataset", r.dataset}, {"method", to_string(r.method)}, {"K", r.K},
             {"seed", r.seed},       {"status", r.status},           {"cost", r.cost},
             {"iterations", r.iterations}, {"nodes", r.nodes},        {"satisfied", r.satisfied},
             {"wall_ms", r.wall_ms}};
    json lambda = json::object(), beta = json::object();
    for (std::size_t g = 0; g < group_names.size(); ++g) {
      lambda[group_names[g]] = g < r.lambda.size() ? r.lambda[g] : 0;
      beta[group_names[g]] = g < r.beta.size() ? r.beta[g] : 0;
    }
    rec["lambda"] = std::move(lambda);
    rec["beta"] = std::move(beta);
    out << rec.dump() << "\n";
  }
}

void write_plot_data(const std::filesystem::path& dir, const std::vector<CellResult>& results,
                     const std::vector<std::string>& group_names) {
  // lambda vs K, per method and group, averaged over seeds
  {
    std::ofstream out(dir / "plot_lambda_vs_k.csv");
    out.precision(12);
    out << "K,method,group,mean_lambda,beta\n";
    std::map<std::tuple<int, std::string, std::size_t>, std::pair<std::vector<double>, long long>>
        agg;
    for (const CellResult& r : results) {
      if (r.status == "infeasible") continue;
      for (std::size_t g = 0; g < r.lambda.size(); ++g) {
        auto& slot = agg[{r.K, to_string(r.method), g}];
        slot.first.push_back(static_cast<double>(r.lambda[g]));
        slot.second = g < r.beta.size() ? r.beta[g] : 0;
      }
    }
    for (const auto& [key, value] : agg) {
      out << std::get<0>(key) << ',' << std::get<1>(key) << ','
          << sanitize(group_names[std::get<2>(key)]) << ',' << mean_of(value.first) << ','
          << value.second << "\n";
    }
  }
  // cost vs K, per method, averaged over seeds
  {
    std::ofstream out(dir / "plot_cost_vs_k.csv");
    out.precision(12);
    out << "K,method,mean_cost,stderr_cost\n";
    std::map<std::pair<int, std::string>, std::vector<double>> agg;
    for (const CellResult& r : results) {
      if (r.status == "infeasible") continue;
      agg[{r.K, to_string(r.method)}].push_back(r.cost);
    }
    for (const auto& [key, costs] : agg) {
      out << key.first << ',' << key.second << ',' << mean_of(costs) << ',' << stderr_of(costs)
          << "\n";
    }
  }
}

namespace {

struct LoadedExperiment {
  ExperimentConfig cfg;
  Dataset dataset;
  std::string name;
};

int load_experiment(const std::filesystem::path& config_path,
                    const std::filesystem::path& out_dir, std::optional<std::size_t> scale,
                    std::uint64_t seed_base, LoadedExperiment& out) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "config error: cannot open " << config_path << "\n";
    return 2;
  }
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    std::cerr << "config error: invalid JSON: " << e.what() << "\n";
    return 2;
  }
  std::vector<std::string> errors;
  out.cfg = parse_experiment_config(j, errors);
  if (!errors.empty()) {
    std::cerr << "config errors (" << errors.size() << "):\n";
    for (const auto& e : errors) std::cerr << "  - " << e << "\n";
    return 2;
  }
  if (!out_dir.empty()) out.cfg.out_dir = out_dir;
  if (out.cfg.out_dir.empty()) {
    std::cerr << "config error: no output directory (config \"out\" or --out)\n";
    return 2;
  }
  if (scale) out.cfg.subsample_size = *scale;
  if (seed_base != 0) {
    for (auto& s : out.cfg.seeds) s += seed_base;
  }
  try {
    const RawTable raw = load_csv(out.cfg.dataset_path, out.cfg.schema);
    out.dataset = preprocess(raw);
    if (out.cfg.subsample_size && *out.cfg.subsample_size < out.dataset.n()) {
      out.dataset = subsample(out.dataset, *out.cfg.subsample_size, out.cfg.subsample_seed);
    }
  } catch (const std::exception& e) {
    std::cerr << "config error: dataset: " << e.what() << "\n";
    return 2;
  }
  out.name = out.cfg.dataset_path.stem().string();
  std::filesystem::create_directories(out.cfg.out_dir);
  std::ofstream cfg_out(out.cfg.out_dir / "resolved_config.json");
  cfg_out << out.cfg.to_json().dump(2) << "\n";
  return 0;
}

void write_traces_jsonl(const std::filesystem::path& path,
                        const std::vector<CellResult>& results) {
  std::ofstream out(path);
  for (const CellResult& r : results) {
    for (const IterationRecord& rec : r.trace) {
      json line = rec.to_json();
      line["dataset"] = r.dataset;
      line["method"] = to_string(r.method);
      line["K"] = r.K;
      line["seed"] = r.seed;
      out << line.dump() << "\n";
    }
  }
}

}  // namespace

int cmd_run(const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
            std::optional<std::size_t> scale, int jobs, std::uint64_t seed_base) {
  LoadedExperiment exp;
  const int rc = load_experiment(config_path, out_dir, scale, seed_base, exp);
  if (rc != 0) return rc;

  const std::vector<CellResult> results = run_grid(exp.dataset, exp.name, exp.cfg, jobs);
  write_results_csv(exp.cfg.out_dir / "results.csv", results, exp.dataset.group_names);
  write_records_jsonl(exp.cfg.out_dir / "records.jsonl", results, exp.dataset.group_names);
  write_traces_jsonl(exp.cfg.out_dir / "traces.jsonl", results);
  write_plot_data(exp.cfg.out_dir, results, exp.dataset.group_names);

  bool any_infeasible = false;
  for (const CellResult& r : results) any_infeasible = any_infeasible || r.status == "infeasible";
  std::cout << "wrote " << results.size() << " records to " << exp.cfg.out_dir << "\n";
  return any_infeasible ? 3 : 0;
}

int cmd_audit(const std::filesystem::path& clustering_path,
              const std::filesystem::path& dataset_path, const std::string& sensitive,
              const std::optional<std::string>& target, double alpha, const std::string& notion,
              std::ostream& out) {
  Schema schema;
  schema.sensitive_column = sensitive;
  schema.target_column = target;
  Dataset ds;
  json cj;
  try {
    ds = preprocess(load_csv(dataset_path, schema));
    std::ifstream in(clustering_path);
    if (!in) throw std::runtime_error("cannot open " + clustering_path.string());
    in >> cj;
  } catch (const std::exception& e) {
    std::cerr << "audit error: " << e.what() << "\n";
    return 2;
  }

  Clustering clustering;
  clustering.assignment = cj.at("assignment").get<std::vector<int>>();
  if (clustering.assignment.size() != ds.n()) {
    std::cerr << "audit error: assignment length " << clustering.assignment.size()
              << " does not match dataset size " << ds.n() << "\n";
    return 2;
  }
  int K = 0;
  for (int k : clustering.assignment) K = std::max(K, k + 1);
  if (cj.contains("centers")) {
    const auto rows = cj["centers"].get<std::vector<std::vector<double>>>();
    K = std::max<int>(K, static_cast<int>(rows.size()));
    clustering.centers.resize(static_cast<Eigen::Index>(rows.size()),
                              static_cast<Eigen::Index>(ds.m()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t c = 0; c < rows[r].size(); ++c) {
        clustering.centers(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
      }
    }
  } else {
    clustering.centers = Centers::Zero(K, static_cast<Eigen::Index>(ds.m()));
    std::vector<long long> sizes(static_cast<std::size_t>(K), 0);
    for (std::size_t i = 0; i < ds.n(); ++i) {
      clustering.centers.row(clustering.assignment[i]) += ds.points.row(static_cast<Eigen::Index>(i));
      sizes[static_cast<std::size_t>(clustering.assignment[i])]++;
    }
    for (int k = 0; k < K; ++k) {
      if (sizes[static_cast<std::size_t>(k)] > 0) {
        clustering.centers.row(k) /= static_cast<double>(sizes[static_cast<std::size_t>(k)]);
      }
    }
  }
  clustering.cost = clustering_cost(ds, clustering.assignment, clustering.centers);

  FairnessSpec spec;
  spec.alpha = Rational::from_double(alpha);
  spec.num_groups = ds.num_groups();
  spec.num_clusters = K;
  spec.allowed = FairnessSpec::full_w(spec.num_groups, K);
  if (notion == "sp") {
    spec.beta = beta_statistical_parity(ds.num_groups(), spec.alpha, K);
  } else if (notion == "eqop") {
    spec.beta = beta_equality_of_opportunity(ds, spec.alpha, K);
  } else if (notion == "none") {
    spec.beta.assign(ds.groups.size(), 0);
  } else {
    std::cerr << "audit error: unknown notion \"" << notion << "\"; allowed: sp, eqop, none\n";
    return 2;
  }

  const ValidationReport report = validate(clustering, ds, spec);
  out << report.to_json(ds.group_names).dump(2) << "\n";
  return 0;
}

int cmd_bench_init(const std::filesystem::path& config_path, const std::filesystem::path& out_dir,
                   std::optional<std::size_t> scale, int jobs, std::uint64_t seed_base) {
  LoadedExperiment exp;
  const int rc = load_experiment(config_path, out_dir, scale, seed_base, exp);
  if (rc != 0) return rc;

  Method method = Method::MiniRelEqOp;
  for (Method m : exp.cfg.methods) {
    if (m != Method::KMeans) {
      method = m;
      break;
    }
  }
  struct SchemeDef {
    std::string name;
    InitScheme scheme;
    int restarts;
  };
  const std::vector<SchemeDef> schemes{{"random", InitScheme::Random, 1},
                                       {"kmeanspp", InitScheme::KMeansPP, 1},
                                       {"warmstart-1", InitScheme::WarmStart, 1},
                                       {"warmstart-100", InitScheme::WarmStart, 100}};

  std::vector<CellResult> all;
  std::map<std::string, std::vector<double>> wall_by_scheme, iters_by_scheme, cost_by_scheme;
  std::ofstream out(exp.cfg.out_dir / "bench_init.csv");
  out.precision(12);
  out << "scheme,K,seeds,mean_wall_ms,stderr_wall_ms,mean_iterations,stderr_iterations,"
         "mean_cost,stderr_cost\n";
  bool any_infeasible = false;
  for (const SchemeDef& def : schemes) {
    ExperimentConfig cfg = exp.cfg;
    cfg.init = def.scheme;
    cfg.restarts = def.restarts;
    cfg.methods = {method};
    const std::vector<CellResult> results = run_grid(exp.dataset, exp.name, cfg, jobs);
    for (int k : cfg.k_values) {
      std::vector<double> wall, iters, cost;
      for (const CellResult& r : results) {
        if (r.K != k) continue;
        if (r.status == "infeasible") {
          any_infeasible = true;
          continue;
        }
        wall.push_back(r.wall_ms);
        iters.push_back(static_cast<double>(r.iterations));
        cost.push_back(r.cost);
        wall_by_scheme[def.name].push_back(r.wall_ms);
        iters_by_scheme[def.name].push_back(static_cast<double>(r.iterations));
        cost_by_scheme[def.name].push_back(r.cost);
      }
      out << def.name << ',' << k << ',' << wall.size() << ',' << mean_of(wall) << ','
          << stderr_of(wall) << ',' << mean_of(iters) << ',' << stderr_of(iters) << ','
          << mean_of(cost) << ',' << stderr_of(cost) << "\n";
    }
    all.insert(all.end(), results.begin(), results.end());
  }
  std::ofstream summary(exp.cfg.out_dir / "bench_init_summary.csv");
  summary.precision(12);
  summary << "scheme,mean_wall_ms,stderr_wall_ms,mean_iterations,stderr_iterations,"
             "mean_cost,stderr_cost\n";
  for (const SchemeDef& def : schemes) {
    summary << def.name << ',' << mean_of(wall_by_scheme[def.name]) << ','
            << stderr_of(wall_by_scheme[def.name]) << ',' << mean_of(iters_by_scheme[def.name])
            << ',' << stderr_of(iters_by_scheme[def.name]) << ','
            << mean_of(cost_by_scheme[def.name]) << ',' << stderr_of(cost_by_scheme[def.name])
            << "\n";
  }
  write_records_jsonl(exp.cfg.out_dir / "bench_init_records.jsonl", all,
                      exp.dataset.group_names);
  std::cout << "wrote init benchmark to " << exp.cfg.out_dir << "\n";
  return any_infeasible ? 3 : 0;
}

int cmd_bench_prefix(const std::filesystem::path& config_path,
                     const std::filesystem::path& out_dir, std::optional<std::size_t> scale,
                     int jobs, std::uint64_t seed_base) {
  LoadedExperiment exp;
  const int rc = load_experiment(config_path, out_dir, scale, seed_base, exp);
  if (rc != 0) return rc;

  Method method = Method::MiniRelEqOp;
  for (Method m : exp.cfg.methods) {
    if (m != Method::KMeans) {
      method = m;
      break;
    }
  }
  struct StrategyDef {
    std::string name;
    PrefixMode mode;
    PrefixObjective objective;
  };
  const std::vector<StrategyDef> strategies{
      {"naive", PrefixMode::Naive, PrefixObjective::Local},
      {"proportion", PrefixMode::Ip, PrefixObjective::Proportion},
      {"weighted", PrefixMode::Ip, PrefixObjective::Weighted},
      {"local", PrefixMode::Ip, PrefixObjective::Local},
      {"full", PrefixMode::Off, PrefixObjective::Local}};

  std::map<std::string, std::vector<double>> wall_by_strategy, iters_by_strategy, cost_by_strategy;
  std::vector<CellResult> all;
  std::ofstream out(exp.cfg.out_dir / "bench_prefix.csv");
  out.precision(12);
  out << "strategy,K,seeds,mean_wall_ms,stderr_wall_ms,mean_iterations,stderr_iterations,"
         "mean_cost,stderr_cost\n";
  bool any_infeasible = false;
  for (const StrategyDef& def : strategies) {
    ExperimentConfig cfg = exp.cfg;
    cfg.prefix = def.mode;
    cfg.prefix_objective = def.objective;
    cfg.methods = {method};
    const std::vector<CellResult> results = run_grid(exp.dataset, exp.name, cfg, jobs);
    for (int k : cfg.k_values) {
      std::vector<double> wall, iters, cost;
      for (const CellResult& r : results) {
        if (r.K != k) continue;
        if (r.status == "infeasible") {
          any_infeasible = true;
          continue;
        }
        wall.push_back(r.wall_ms);
        iters.push_back(static_cast<double>(r.iterations));
        cost.push_back(r.cost);
        wall_by_strategy[def.name].push_back(r.wall_ms);
        iters_by_strategy[def.name].push_back(static_cast<double>(r.iterations));
        cost_by_strategy[def.name].push_back(r.cost);
      }
      out << def.name << ',' << k << ',' << wall.size() << ',' << mean_of(wall) << ','
          << stderr_of(wall) << ',' << mean_of(iters) << ',' << stderr_of(iters) << ','
          << mean_of(cost) << ',' << stderr_of(cost) << "\n";
    }
    all.insert(all.end(), results.begin(), results.end());
  }
  const double median_full = median_of(wall_by_strategy["full"]);
  std::ofstream summary(exp.cfg.out_dir / "bench_prefix_summary.csv");
  summary.precision(12);
  summary << "strategy,mean_wall_ms,median_wall_ms,mean_iterations,mean_cost,speedup_vs_full\n";
  for (const StrategyDef& def : strategies) {
    const double median_wall = median_of(wall_by_strategy[def.name]);
    summary << def.name << ',' << mean_of(wall_by_strategy[def.name]) << ',' << median_wall << ','
            << mean_of(iters_by_strategy[def.name]) << ',' << mean_of(cost_by_strategy[def.name])
            << ',' << (median_wall > 0.0 ? median_full / median_wall : 0.0) << "\n";
  }
  write_records_jsonl(exp.cfg.out_dir / "bench_prefix_records.jsonl", all,
                      exp.dataset.group_names);
  std::cout << "wrote prefix benchmark to " << exp.cfg.out_dir << "\n";
  return any_infeasible ? 3 : 0;
}

}  // namespace minirel
