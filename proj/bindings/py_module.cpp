#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "minirel/dataset.hpp"
#include "minirel/fair_assign.hpp"
#include "minirel/fairness.hpp"
#include "minirel/kmeans.hpp"
#include "minirel/milp.hpp"
#include "minirel/minirel.hpp"
#include "minirel/oracle.hpp"
#include "minirel/prefix.hpp"
#include "minirel/synthetic.hpp"

namespace py = pybind11;
using namespace minirel;

namespace {

milp::Sense sense_from(const std::string& s) {
  if (s == "<=") return milp::Sense::LessEqual;
  if (s == ">=") return milp::Sense::GreaterEqual;
  if (s == "=" || s == "==") return milp::Sense::Equal;
  throw std::invalid_argument("sense must be one of <=, >=, =");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Minimum-representation-fair k-means (MiniReL) with an exact 0-1 MILP solver";

  py::class_<Rational>(m, "Rational")
      .def(py::init<long long, long long>(), py::arg("num"), py::arg("den"))
      .def_static("from_float", &Rational::from_double)
      .def_readonly("num", &Rational::num)
      .def_readonly("den", &Rational::den)
      .def("value", &Rational::value)
      .def("floor_inverse", &Rational::floor_inverse)
      .def("__repr__", [](const Rational& r) {
        return "Rational(" + std::to_string(r.num) + "/" + std::to_string(r.den) + ")";
      });

  py::class_<Schema>(m, "Schema")
      .def(py::init<>())
      .def_readwrite("sensitive_column", &Schema::sensitive_column)
      .def_readwrite("target_column", &Schema::target_column)
      .def_readwrite("drop_columns", &Schema::drop_columns)
      .def_readwrite("delimiter", &Schema::delimiter);

  py::class_<RawTable>(m, "RawTable")
      .def_readonly("columns", &RawTable::columns)
      .def_readonly("rows", &RawTable::rows)
      .def_readonly("skipped_rows", &RawTable::skipped_rows);

  py::class_<Dataset>(m, "Dataset")
      .def_readonly("points", &Dataset::points)
      .def_readonly("groups", &Dataset::groups)
      .def_readonly("group_names", &Dataset::group_names)
      .def_readonly("feature_names", &Dataset::feature_names)
      .def_property_readonly("n", &Dataset::n)
      .def_property_readonly("m", &Dataset::m);

  m.def("load_csv", &load_csv, py::arg("path"), py::arg("schema"));
  m.def("make_table", &make_table, py::arg("columns"), py::arg("rows"), py::arg("schema"));
  m.def("preprocess", &preprocess, py::arg("raw"));
  m.def("subsample", &subsample, py::arg("dataset"), py::arg("size"), py::arg("seed"));
  m.def("dataset_from_matrix", &dataset_from_matrix, py::arg("points"), py::arg("groups"),
        py::arg("group_names") = std::vector<std::string>{});
  m.def("synthetic_census", &synthetic_census, py::arg("rows"), py::arg("seed") = 0);
  m.def("synthetic_blobs", &synthetic_blobs, py::arg("rows_per_blob"), py::arg("blobs") = 2,
        py::arg("dim") = 2, py::arg("separation") = 6.0, py::arg("seed") = 0);

  py::class_<Clustering>(m, "Clustering")
      .def_readonly("assignment", &Clustering::assignment)
      .def_readonly("centers", &Clustering::centers)
      .def_readonly("cost", &Clustering::cost)
      .def("cluster_sizes", &Clustering::cluster_sizes);

  m.def("kmeanspp_init", &kmeanspp_init, py::arg("dataset"), py::arg("k"), py::arg("seed"));
  m.def("random_init", &random_init, py::arg("dataset"), py::arg("k"), py::arg("seed"));
  m.def("lloyd", &lloyd, py::arg("dataset"), py::arg("init"), py::arg("max_iters") = 300);
  m.def("best_of", &best_of, py::arg("dataset"), py::arg("k"), py::arg("restarts"),
        py::arg("seed"));
  m.def("clustering_cost", &clustering_cost);
  m.def("squared_distances", &squared_distances);

  py::class_<FairnessSpec>(m, "FairnessSpec")
      .def(py::init<>())
      .def_readwrite("alpha", &FairnessSpec::alpha)
      .def_readwrite("alpha_per_group", &FairnessSpec::alpha_per_group)
      .def_readwrite("beta", &FairnessSpec::beta)
      .def_readwrite("allowed", &FairnessSpec::allowed)
      .def_readwrite("size_lower", &FairnessSpec::size_lower)
      .def_readwrite("size_upper", &FairnessSpec::size_upper)
      .def_readwrite("num_groups", &FairnessSpec::num_groups)
      .def_readwrite("num_clusters", &FairnessSpec::num_clusters)
      .def_static("full_w", &FairnessSpec::full_w);

  m.def("is_alpha_represented", &is_alpha_represented, py::arg("cluster_size"),
        py::arg("group_in_cluster"), py::arg("alpha"));
  m.def("lambda_count", &lambda_count);
  m.def("lambda_counts", &lambda_counts);
  m.def("beta_statistical_parity", &beta_statistical_parity, py::arg("num_groups"),
        py::arg("alpha"), py::arg("k"));
  m.def("beta_equality_of_opportunity", &beta_equality_of_opportunity, py::arg("dataset"),
        py::arg("alpha"), py::arg("k"));

  py::class_<ValidationReport>(m, "ValidationReport")
      .def_readonly("lambda_counts", &ValidationReport::lambda)
      .def_readonly("beta", &ValidationReport::beta)
      .def_readonly("group_ok", &ValidationReport::group_ok)
      .def_readonly("cluster_sizes", &ValidationReport::cluster_sizes)
      .def_readonly("sizes_ok", &ValidationReport::sizes_ok)
      .def_readonly("cost", &ValidationReport::cost)
      .def_readonly("satisfied", &ValidationReport::satisfied);
  m.def("validate", &validate, py::arg("clustering"), py::arg("dataset"), py::arg("spec"));

  auto milp_mod = m.def_submodule("milp", "exact 0-1 MILP solver");
  py::class_<milp::Model>(milp_mod, "Model")
      .def(py::init<>())
      .def("add_variable", &milp::Model::add_variable, py::arg("lower"), py::arg("upper"),
           py::arg("is_integer"), py::arg("objective"))
      .def("add_row",
           [](milp::Model& model, std::vector<std::pair<int, double>> coeffs,
              const std::string& sense, double rhs) {
             model.add_row(std::move(coeffs), sense_from(sense), rhs);
           },
           py::arg("coeffs"), py::arg("sense"), py::arg("rhs"))
      .def("objective_value", &milp::Model::objective_value)
      .def_property_readonly("num_vars", &milp::Model::num_vars)
      .def_property_readonly("num_rows", &milp::Model::num_rows);
  py::class_<milp::Budgets>(milp_mod, "Budgets")
      .def(py::init<>())
      .def_readwrite("time_seconds", &milp::Budgets::time_seconds)
      .def_readwrite("nodes", &milp::Budgets::nodes);
  py::class_<milp::LpSolution>(milp_mod, "LpSolution")
      .def_property_readonly("status",
                             [](const milp::LpSolution& s) { return milp::to_string(s.status); })
      .def_readonly("x", &milp::LpSolution::x)
      .def_readonly("objective", &milp::LpSolution::objective)
      .def_readonly("iterations", &milp::LpSolution::iterations);
  py::class_<milp::Solution>(milp_mod, "Solution")
      .def_property_readonly("status",
                             [](const milp::Solution& s) { return milp::to_string(s.status); })
      .def_readonly("values", &milp::Solution::values)
      .def_readonly("objective", &milp::Solution::objective)
      .def_readonly("gap", &milp::Solution::gap)
      .def_readonly("nodes", &milp::Solution::nodes)
      .def_readonly("hint_accepted", &milp::Solution::hint_accepted);
  milp_mod.def("solve_lp", &milp::solve_lp);
  milp_mod.def(
      "solve_milp",
      [](const milp::Model& model, double time_seconds, long long nodes,
         std::optional<std::vector<double>> hint) {
        milp::Options options;
        options.budgets.time_seconds = time_seconds;
        options.budgets.nodes = nodes;
        options.hint = std::move(hint);
        return milp::solve_milp(model, options);
      },
      py::arg("model"), py::arg("time_seconds") = std::numeric_limits<double>::infinity(),
      py::arg("nodes") = std::numeric_limits<long long>::max(),
      py::arg("hint") = std::nullopt);
  milp_mod.def("dump_lp_format", &milp::dump_lp_format);

  py::class_<FairAssignInstance>(m, "FairAssignInstance")
      .def(py::init<>())
      .def_readwrite("distances", &FairAssignInstance::distances)
      .def_readwrite("spec", &FairAssignInstance::spec)
      .def_readwrite("groups", &FairAssignInstance::groups)
      .def_readwrite("plan", &FairAssignInstance::plan);
  m.def("big_m", &big_m, py::arg("spec"), py::arg("n"));
  m.def("build_full", &build_full);
  m.def("build_prefixed", &build_prefixed);
  py::class_<AssignResult>(m, "AssignResult")
      .def_property_readonly("status",
                             [](const AssignResult& r) { return milp::to_string(r.status); })
      .def_readonly("assignment", &AssignResult::assignment)
      .def_readonly("objective", &AssignResult::objective)
      .def_readonly("nodes", &AssignResult::nodes)
      .def_readonly("hint_accepted", &AssignResult::hint_accepted);
  m.def(
      "fair_assign",
      [](const FairAssignInstance& instance, double time_seconds, long long nodes,
         std::optional<std::vector<int>> hint) {
        milp::Options options;
        options.budgets.time_seconds = time_seconds;
        options.budgets.nodes = nodes;
        return solve(instance, options, hint);
      },
      py::arg("instance"), py::arg("time_seconds") = std::numeric_limits<double>::infinity(),
      py::arg("nodes") = std::numeric_limits<long long>::max(), py::arg("hint") = std::nullopt);

  py::class_<PrefixPlan>(m, "PrefixPlan")
      .def_readonly("obligations", &PrefixPlan::obligations)
      .def_readonly("objective", &PrefixPlan::objective);
  py::enum_<PrefixObjective>(m, "PrefixObjective")
      .value("Proportion", PrefixObjective::Proportion)
      .value("Weighted", PrefixObjective::Weighted)
      .value("Local", PrefixObjective::Local);
  m.def("cost_proportion", &cost_proportion);
  m.def("cost_weighted", &cost_weighted);
  m.def("cost_local", &cost_local);
  m.def("required_moves", &required_moves, py::arg("p_gk"), py::arg("cluster_size"),
        py::arg("alpha"));
  m.def("prefix_costs", &prefix_costs);
  m.def("solve_prefix_ip", &solve_prefix_ip);
  m.def("naive_prefix", &naive_prefix, py::arg("spec"), py::arg("seed"));

  py::enum_<InitScheme>(m, "InitScheme")
      .value("Random", InitScheme::Random)
      .value("KMeansPP", InitScheme::KMeansPP)
      .value("WarmStart", InitScheme::WarmStart);
  py::enum_<PrefixMode>(m, "PrefixMode")
      .value("Off", PrefixMode::Off)
      .value("Auto", PrefixMode::Auto)
      .value("Ip", PrefixMode::Ip)
      .value("Naive", PrefixMode::Naive);

  py::class_<MiniRelConfig>(m, "MiniRelConfig")
      .def(py::init<>())
      .def_readwrite("K", &MiniRelConfig::K)
      .def_readwrite("spec", &MiniRelConfig::spec)
      .def_readwrite("init", &MiniRelConfig::init)
      .def_readwrite("restarts", &MiniRelConfig::restarts)
      .def_readwrite("iteration_limit", &MiniRelConfig::iteration_limit)
      .def_readwrite("prefix", &MiniRelConfig::prefix)
      .def_readwrite("prefix_objective", &MiniRelConfig::prefix_objective)
      .def_readwrite("seed", &MiniRelConfig::seed)
      .def_readwrite("budgets", &MiniRelConfig::budgets);

  py::class_<IterationRecord>(m, "IterationRecord")
      .def_readonly("iter", &IterationRecord::iter)
      .def_readonly("ip_objective", &IterationRecord::ip_objective)
      .def_readonly("cost", &IterationRecord::cost)
      .def_readonly("changed", &IterationRecord::changed)
      .def_readonly("nodes", &IterationRecord::nodes)
      .def_readonly("wall_ms", &IterationRecord::wall_ms)
      .def_readonly("budget_hit", &IterationRecord::budget_hit);

  py::class_<MiniRelTrace>(m, "MiniRelTrace")
      .def_readonly("iterations", &MiniRelTrace::iterations)
      .def_readonly("clustering", &MiniRelTrace::clustering)
      .def_readonly("report", &MiniRelTrace::report)
      .def_property_readonly("status",
                             [](const MiniRelTrace& t) {
                               switch (t.status) {
                                 case RunStatus::Success: return "success";
                                 case RunStatus::Infeasible: return "infeasible";
                                 case RunStatus::SolverLimit: return "solver-limit";
                               }
                               return "unknown";
                             })
      .def_readonly("message", &MiniRelTrace::message)
      .def_readonly("fixed_point", &MiniRelTrace::fixed_point)
      .def_readonly("used_prefix", &MiniRelTrace::used_prefix)
      .def_readonly("total_wall_ms", &MiniRelTrace::total_wall_ms);

  m.def("initialize", &initialize, py::arg("dataset"), py::arg("config"));
  m.def("run", &run, py::arg("dataset"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>());

  auto oracle_mod = m.def_submodule("oracle", "exhaustive ground-truth solvers");
  py::class_<oracle::BruteForceResult>(oracle_mod, "BruteForceResult")
      .def_readonly("feasible", &oracle::BruteForceResult::feasible)
      .def_readonly("assignment", &oracle::BruteForceResult::assignment)
      .def_readonly("objective", &oracle::BruteForceResult::objective);
  oracle_mod.def("brute_force_fair_assignment", &oracle::brute_force_fair_assignment);
  oracle_mod.def("brute_force_kmeans", &oracle::brute_force_kmeans);
  py::class_<oracle::Cnf>(oracle_mod, "Cnf")
      .def_readonly("num_vars", &oracle::Cnf::num_vars)
      .def_readonly("clauses", &oracle::Cnf::clauses);
  oracle_mod.def("parse_dimacs", &oracle::parse_dimacs);
  oracle_mod.def("brute_force_sat", &oracle::brute_force_sat);
  py::class_<oracle::SatReduction>(oracle_mod, "SatReduction")
      .def_readonly("instance", &oracle::SatReduction::instance)
      .def_readonly("num_vars", &oracle::SatReduction::num_vars);
  oracle_mod.def("sat_to_fair_assignment", &oracle::sat_to_fair_assignment);
  oracle_mod.def("decode_assignment", &oracle::decode_assignment);
}
