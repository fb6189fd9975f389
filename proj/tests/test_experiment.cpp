#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "minirel/experiment.hpp"

using namespace minirel;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

const fs::path kIris = fs::path(TEST_DATA_DIR) / "iris.csv";

json small_config(const fs::path& out) {
  return json{{"dataset", {{"path", kIris.string()}, {"sensitive", "species"}}},
              {"k_values", {3, 4}},
              {"alpha", 0.51},
              {"methods", {"kmeans", "minirel-eqop"}},
              {"seeds", 2},
              {"init", {{"scheme", "warmstart"}, {"restarts", 3}}},
              {"out", out.string()}};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write_json(const fs::path& dir, const std::string& name, const json& j) {
  const fs::path p = dir / name;
  std::ofstream out(p);
  out << j.dump(2);
  return p;
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("config validation reports every problem at once") {
  json bad{{"dataset", {{"path", "x.csv"}}},     // missing sensitive
           {"k_values", {0}},                    // K below 1
           {"alpha", 1.7},                       // out of range
           {"methods", {"kmeans", "mystery"}},   // unknown method
           {"init", {{"scheme", "psychic"}}},    // unknown scheme
           {"prefix", {{"mode", "sometimes"}}},  // unknown mode
           {"l", 0}};
  std::vector<std::string> errors;
  (void)parse_experiment_config(bad, errors);
  CHECK(errors.size() >= 6);
  bool mentions_allowed = false;
  for (const auto& e : errors) {
    if (e.find("mystery") != std::string::npos && e.find("minirel-eqop") != std::string::npos) {
      mentions_allowed = true;
    }
  }
  CHECK(mentions_allowed);
}

TEST_CASE("defaults fill in when optional keys are absent") {
  json minimal{{"dataset", {{"path", "x.csv"}, {"sensitive", "s"}}}, {"k_values", {2}}};
  std::vector<std::string> errors;
  const ExperimentConfig cfg = parse_experiment_config(minimal, errors);
  CHECK(errors.empty());
  CHECK(cfg.methods.size() == 3);
  CHECK(cfg.seeds.size() == 10);
  CHECK(cfg.alpha == Rational(51, 100));
  CHECK(cfg.init == InitScheme::WarmStart);
  CHECK(cfg.prefix == PrefixMode::Auto);
  CHECK(cfg.iteration_limit == 100);
}

TEST_CASE("cmd_run writes the full output set and is deterministic") {
  const fs::path dir_a = fresh_dir("mr_exp_a");
  const fs::path dir_b = fresh_dir("mr_exp_b");
  const fs::path cfg_dir = fresh_dir("mr_exp_cfg");
  const fs::path cfg_a = write_json(cfg_dir, "a.json", small_config(dir_a));
  const fs::path cfg_b = write_json(cfg_dir, "b.json", small_config(dir_b));

  CHECK(cmd_run(cfg_a, "", std::nullopt, 2, 0) == 0);
  CHECK(cmd_run(cfg_b, "", std::nullopt, 1, 0) == 0);

  for (const auto* name : {"results.csv", "records.jsonl", "traces.jsonl",
                           "plot_lambda_vs_k.csv", "plot_cost_vs_k.csv",
                           "resolved_config.json"}) {
    CHECK_MESSAGE(fs::exists(dir_a / name), name);
  }

  // byte-identical modulo the timing column: compare after stripping it
  const auto strip_wall = [](const std::string& csv) {
    std::istringstream in(csv);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
      out << line.substr(0, line.rfind(',')) << "\n";
    }
    return out.str();
  };
  CHECK(strip_wall(slurp(dir_a / "results.csv")) == strip_wall(slurp(dir_b / "results.csv")));
}

TEST_CASE("audit round-trips a run record") {
  const fs::path dir = fresh_dir("mr_exp_audit");
  const fs::path cfg_dir = fresh_dir("mr_exp_audit_cfg");
  json cfg = small_config(dir);
  cfg["methods"] = {"minirel-eqop"};
  cfg["k_values"] = {4};
  cfg["seeds"] = 1;
  const fs::path cfg_path = write_json(cfg_dir, "c.json", cfg);
  REQUIRE(cmd_run(cfg_path, "", std::nullopt, 1, 0) == 0);

  // rebuild the clustering from the trace-free route: rerun the cell
  Schema schema;
  schema.sensitive_column = "species";
  const Dataset ds = preprocess(load_csv(kIris, schema));
  std::vector<std::string> errors;
  std::ifstream cfg_in(cfg_path);
  json cfg_json;
  cfg_in >> cfg_json;
  const ExperimentConfig parsed = parse_experiment_config(cfg_json, errors);
  REQUIRE(errors.empty());
  const CellResult cell = run_cell(ds, "iris", Method::MiniRelEqOp, 4, 0, parsed);
  REQUIRE(cell.status == "ok");

  // the recorded lambda matches what audit recomputes from the assignment
  MiniRelConfig mc;
  mc.K = 4;
  mc.spec.alpha = parsed.alpha;
  mc.spec.num_groups = ds.num_groups();
  mc.spec.num_clusters = 4;
  mc.spec.beta = beta_equality_of_opportunity(ds, parsed.alpha, 4);
  mc.spec.allowed = FairnessSpec::full_w(ds.num_groups(), 4);
  mc.seed = 0;
  mc.init = parsed.init;
  mc.restarts = parsed.restarts;
  const MiniRelTrace trace = run(ds, mc);
  REQUIRE(trace.status == RunStatus::Success);
  const fs::path clustering_path = dir / "clustering.json";
  {
    std::ofstream out(clustering_path);
    out << json{{"assignment", trace.clustering.assignment}}.dump();
  }
  std::ostringstream report_text;
  REQUIRE(cmd_audit(clustering_path, kIris, "species", std::nullopt, 0.51, "eqop",
                    report_text) == 0);
  const json report = json::parse(report_text.str());
  CHECK(report.at("satisfied").get<bool>());
  for (std::size_t g = 0; g < cell.lambda.size(); ++g) {
    CHECK(report.at("per_group").at(g).at("lambda").get<long long>() == cell.lambda[g]);
  }
}

TEST_CASE("audit rejects unknown notions") {
  const fs::path dir = fresh_dir("mr_exp_audit2");
  const fs::path clustering_path = dir / "c.json";
  {
    std::ofstream out(clustering_path);
    json j;
    j["assignment"] = std::vector<int>(150, 0);
    out << j.dump();
  }
  std::ostringstream sink;
  CHECK(cmd_audit(clustering_path, kIris, "species", std::nullopt, 0.51, "quantum", sink) == 2);
}

TEST_CASE("missing config file exits with code 2") {
  CHECK(cmd_run("/nonexistent/config.json", "", std::nullopt, 1, 0) == 2);
}

TEST_CASE("infeasible cells exit 3 but still write results") {
  const fs::path dir = fresh_dir("mr_exp_infeasible");
  const fs::path cfg_dir = fresh_dir("mr_exp_infeasible_cfg");
  json cfg = small_config(dir);
  cfg["methods"] = {"minirel-sp"};
  cfg["k_values"] = {4};
  cfg["seeds"] = 1;
  cfg["alpha"] = 0.51;
  cfg["u"] = 2;  // 4 clusters x at most 2 points cannot hold 150 points
  const fs::path cfg_path = write_json(cfg_dir, "c.json", cfg);
  CHECK(cmd_run(cfg_path, "", std::nullopt, 1, 0) == 3);
  CHECK(fs::exists(dir / "results.csv"));
  const std::string csv = slurp(dir / "results.csv");
  CHECK(csv.find("infeasible") != std::string::npos);
}

}  // TEST_SUITE
