#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace minirel::milp {

enum class Sense { LessEqual, GreaterEqual, Equal };

struct Variable {
  double lower = 0.0;
  double upper = 1.0;
  bool is_integer = false;
  double objective = 0.0;
};

struct Row {
  std::vector<std::pair<int, double>> coeffs;  // (variable index, coefficient)
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
};

// A minimization MILP. Integer variables must be 0-1 after bound tightening.
struct Model {
  std::vector<Variable> vars;
  std::vector<Row> rows;

  int add_variable(double lower, double upper, bool is_integer, double objective);
  void add_row(std::vector<std::pair<int, double>> coeffs, Sense sense, double rhs);
  int num_vars() const { return static_cast<int>(vars.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  double objective_value(const std::vector<double>& x) const;
  // max violation over rows and bounds
  double max_infeasibility(const std::vector<double>& x) const;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, Limit, Numerical };

std::string to_string(SolveStatus s);

constexpr double kFeasTol = 1e-7;   // LP feasibility
constexpr double kIntTol = 1e-6;    // integrality
constexpr double kGapTol = 1e-9;    // branch-and-bound pruning slack

struct LpSolution {
  SolveStatus status = SolveStatus::Numerical;
  std::vector<double> x;
  double objective = std::numeric_limits<double>::quiet_NaN();
  long long iterations = 0;
};

// Bounded-variable primal simplex on the LP relaxation (integrality flags
// ignored). Deterministic: Dantzig pricing with lowest-index ties and a
// Bland fallback after 500 consecutive degenerate pivots.
LpSolution solve_lp(const Model& model);

struct Budgets {
  double time_seconds = std::numeric_limits<double>::infinity();
  long long nodes = std::numeric_limits<long long>::max();
};

struct NodeInfo {
  long long id = 0;
  int depth = 0;
  // dual bound inherited when the node is taken up; in best-first order this
  // sequence is non-decreasing and stays below the incumbent
  double lower_bound = 0.0;
  double incumbent = std::numeric_limits<double>::infinity();
};

struct Options {
  Budgets budgets;
  // Feasible hints become the initial incumbent; infeasible hints are
  // ignored (hint_accepted reports which happened).
  std::optional<std::vector<double>> hint;
  std::function<void(const NodeInfo&)> node_callback;  // test/diagnostic hook
};

struct Solution {
  SolveStatus status = SolveStatus::Numerical;
  std::vector<double> values;
  double objective = std::numeric_limits<double>::quiet_NaN();
  double gap = std::numeric_limits<double>::infinity();  // |incumbent - bound| / max(1, |incumbent|)
  long long nodes = 0;
  bool hint_accepted = false;
};

// Exact 0-1 branch and bound: best-first on the dual bound (ties -> depth,
// then node id), branching on the most fractional variable (ties -> lowest
// index). status Optimal means the incumbent is the true optimum; running
// out of budget returns the best incumbent with its gap.
Solution solve_milp(const Model& model, const Options& options = {});

// Plain-text dump in an LP-format-like grammar, stable ordering:
//   minimize
//     obj: <coef> x<j> ...
//   subject to
//     c<i>: <coef> x<j> ... <= | >= | = <rhs>
//   bounds
//     <lb> <= x<j> <= <ub>
//   binaries
//     x<j> ...
//   end
std::string dump_lp_format(const Model& model);

}  // namespace minirel::milp
