#include "minirel/milp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <queue>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

namespace minirel::milp {

int Model::add_variable(double lower, double upper, bool is_integer, double objective) {
  vars.push_back(Variable{lower, upper, is_integer, objective});
  return static_cast<int>(vars.size()) - 1;
}

void Model::add_row(std::vector<std::pair<int, double>> coeffs, Sense sense, double rhs) {
  for (const auto& [j, v] : coeffs) {
    (void)v;
    if (j < 0 || j >= num_vars()) throw std::out_of_range("row references unknown variable");
  }
  rows.push_back(Row{std::move(coeffs), sense, rhs});
}

double Model::objective_value(const std::vector<double>& x) const {
  double obj = 0.0;
  for (std::size_t j = 0; j < vars.size(); ++j) obj += vars[j].objective * x[j];
  return obj;
}

double Model::max_infeasibility(const std::vector<double>& x) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < vars.size(); ++j) {
    worst = std::max(worst, vars[j].lower - x[j]);
    worst = std::max(worst, x[j] - vars[j].upper);
  }
  for (const Row& row : rows) {
    double activity = 0.0;
    for (const auto& [j, v] : row.coeffs) activity += v * x[static_cast<std::size_t>(j)];
    switch (row.sense) {
      case Sense::LessEqual: worst = std::max(worst, activity - row.rhs); break;
      case Sense::GreaterEqual: worst = std::max(worst, row.rhs - activity); break;
      case Sense::Equal: worst = std::max(worst, std::abs(activity - row.rhs)); break;
    }
  }
  return worst;
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::Limit: return "limit";
    case SolveStatus::Numerical: return "numerical";
  }
  return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDualTol = 1e-9;    // reduced-cost threshold for entering
constexpr double kPivotTol = 1e-9;   // smallest usable pivot element
constexpr double kDegenTol = 1e-12;  // step below this counts as a degenerate pivot
constexpr int kBlandTrigger = 500;   // consecutive degenerate pivots before Bland's rule
constexpr int kRefactorEvery = 100;  // eta updates between refactorizations

enum class VStat : std::uint8_t { Basic, Lower, Upper, Free };

struct Basis {
  std::vector<VStat> stat;  // per column: structural variables then slacks
  std::vector<int> basic;   // basic column per row position
};

// LP in computational form: A x + s = rhs where the slack bounds encode the
// row sense (<=: s in [0,inf), >=: s in (-inf,0], =: s fixed at 0).
struct CompForm {
  int n = 0;  // structural columns
  int m = 0;  // rows
  std::vector<std::vector<std::pair<int, double>>> cols;  // structural columns, sparse
  std::vector<double> cost;                               // size n + m (slacks cost 0)
  std::vector<double> slack_lb, slack_ub;                 // size m
  std::vector<double> rhs;

  int total() const { return n + m; }

  static CompForm build(const Model& model) {
    CompForm f;
    f.n = model.num_vars();
    f.m = model.num_rows();
    f.cols.resize(static_cast<std::size_t>(f.n));
    f.cost.assign(static_cast<std::size_t>(f.total()), 0.0);
    f.slack_lb.resize(static_cast<std::size_t>(f.m));
    f.slack_ub.resize(static_cast<std::size_t>(f.m));
    f.rhs.resize(static_cast<std::size_t>(f.m));
    for (int j = 0; j < f.n; ++j) {
      f.cost[static_cast<std::size_t>(j)] = model.vars[static_cast<std::size_t>(j)].objective;
    }
    for (int r = 0; r < f.m; ++r) {
      const Row& row = model.rows[static_cast<std::size_t>(r)];
      for (const auto& [j, v] : row.coeffs) {
        if (v != 0.0) f.cols[static_cast<std::size_t>(j)].emplace_back(r, v);
      }
      f.rhs[static_cast<std::size_t>(r)] = row.rhs;
      const std::size_t sr = static_cast<std::size_t>(r);
      switch (row.sense) {
        case Sense::LessEqual: f.slack_lb[sr] = 0.0; f.slack_ub[sr] = kInf; break;
        case Sense::GreaterEqual: f.slack_lb[sr] = -kInf; f.slack_ub[sr] = 0.0; break;
        case Sense::Equal: f.slack_lb[sr] = 0.0; f.slack_ub[sr] = 0.0; break;
      }
    }
    return f;
  }
};

struct Eta {
  int row = 0;
  Eigen::VectorXd w;
};

// Bounded-variable revised primal simplex with a composite phase 1 (dynamic
// +/-1 costs on out-of-bounds basics). The basis inverse is kept as a dense
// LU plus an eta file, refactorized periodically.
class Simplex {
 public:
  // `lb`/`ub` cover the structural columns only; slack bounds come from the form.
  Simplex(const CompForm& form, const std::vector<double>& lb, const std::vector<double>& ub)
      : f_(form), slb_(lb), sub_(ub) {}

  SolveStatus solve(Basis& basis, long long iter_limit, long long& iterations) {
    b_ = &basis;
    iterations = 0;
    if (f_.m == 0) return solve_no_rows();
    if (!setup()) {
      default_basis(f_, slb_, sub_, basis);
      if (!setup()) return SolveStatus::Numerical;
    }
    int degenerate_run = 0;
    bool bland = false;
    int verify_retries = 0;
    while (iterations < iter_limit) {
      const bool phase1 = max_basic_violation() > 0.0;
      const Eigen::VectorXd y = duals(phase1);
      int enter = -1, dir = 0;
      price(y, phase1, bland, enter, dir);
      if (enter < 0) {
        // no candidate: refresh the factorization before trusting the verdict
        if (!fresh_ && verify_retries < 3) {
          if (!refactorize()) return SolveStatus::Numerical;
          ++verify_retries;
          continue;
        }
        return phase1 ? SolveStatus::Infeasible : SolveStatus::Optimal;
      }
      fresh_ = false;
      ++iterations;

      const Eigen::VectorXd w = ftran(column(enter));
      int leave_pos = -2;
      double leave_target = 0.0;
      const double step = ratio_test(enter, dir, w, phase1, bland, leave_pos, leave_target);
      if (step == kInf) {
        return phase1 ? SolveStatus::Numerical : SolveStatus::Unbounded;
      }
      if (step <= kDegenTol) {
        if (++degenerate_run >= kBlandTrigger) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }
      apply_step(enter, dir, step, w, leave_pos, leave_target);
      if (static_cast<int>(etas_.size()) >= kRefactorEvery) {
        if (!refactorize()) return SolveStatus::Numerical;
      }
    }
    return SolveStatus::Limit;
  }

  double objective() const {
    double obj = 0.0;
    for (int j = 0; j < f_.n; ++j) obj += f_.cost[static_cast<std::size_t>(j)] * value(j);
    return obj;
  }

  double value(int j) const {
    const int pos = pos_of_[static_cast<std::size_t>(j)];
    if (pos >= 0) return x_b_[pos];
    switch (b_->stat[static_cast<std::size_t>(j)]) {
      case VStat::Lower: return lower(j);
      case VStat::Upper: return upper(j);
      default: return 0.0;
    }
  }

  std::vector<double> structural_values() const {
    std::vector<double> x(static_cast<std::size_t>(f_.n));
    for (int j = 0; j < f_.n; ++j) x[static_cast<std::size_t>(j)] = value(j);
    return x;
  }

  static void default_basis(const CompForm& f, const std::vector<double>& lb,
                            const std::vector<double>& ub, Basis& basis) {
    basis.stat.assign(static_cast<std::size_t>(f.total()), VStat::Lower);
    basis.basic.resize(static_cast<std::size_t>(f.m));
    for (int j = 0; j < f.n; ++j) {
      const std::size_t sj = static_cast<std::size_t>(j);
      if (std::isfinite(lb[sj])) basis.stat[sj] = VStat::Lower;
      else if (std::isfinite(ub[sj])) basis.stat[sj] = VStat::Upper;
      else basis.stat[sj] = VStat::Free;
    }
    for (int r = 0; r < f.m; ++r) {
      basis.stat[static_cast<std::size_t>(f.n + r)] = VStat::Basic;
      basis.basic[static_cast<std::size_t>(r)] = f.n + r;
    }
  }

 private:
  double lower(int j) const {
    return j < f_.n ? slb_[static_cast<std::size_t>(j)] : f_.slack_lb[static_cast<std::size_t>(j - f_.n)];
  }
  double upper(int j) const {
    return j < f_.n ? sub_[static_cast<std::size_t>(j)] : f_.slack_ub[static_cast<std::size_t>(j - f_.n)];
  }

  SolveStatus solve_no_rows() {
    pos_of_.assign(static_cast<std::size_t>(f_.total()), -1);
    for (int j = 0; j < f_.n; ++j) {
      const std::size_t sj = static_cast<std::size_t>(j);
      if (lower(j) > upper(j)) return SolveStatus::Infeasible;
      const double c = f_.cost[sj];
      if (c > 0.0 || (c == 0.0 && std::isfinite(lower(j)))) {
        if (!std::isfinite(lower(j))) return SolveStatus::Unbounded;
        b_->stat[sj] = VStat::Lower;
      } else if (c < 0.0 || (c == 0.0 && std::isfinite(upper(j)))) {
        if (!std::isfinite(upper(j))) return SolveStatus::Unbounded;
        b_->stat[sj] = VStat::Upper;
      } else {
        b_->stat[sj] = VStat::Free;
      }
    }
    return SolveStatus::Optimal;
  }

  bool setup() {
    if (static_cast<int>(b_->stat.size()) != f_.total() ||
        static_cast<int>(b_->basic.size()) != f_.m) {
      default_basis(f_, slb_, sub_, *b_);
    }
    pos_of_.assign(static_cast<std::size_t>(f_.total()), -1);
    for (int r = 0; r < f_.m; ++r) pos_of_[static_cast<std::size_t>(b_->basic[r])] = r;
    // nonbasic columns must rest on finite bounds
    for (int j = 0; j < f_.total(); ++j) {
      const std::size_t sj = static_cast<std::size_t>(j);
      if (b_->stat[sj] == VStat::Basic) {
        if (pos_of_[sj] < 0) b_->stat[sj] = VStat::Lower;  // stale status from caller
        else continue;
      }
      if (b_->stat[sj] == VStat::Lower && !std::isfinite(lower(j))) {
        b_->stat[sj] = std::isfinite(upper(j)) ? VStat::Upper : VStat::Free;
      } else if (b_->stat[sj] == VStat::Upper && !std::isfinite(upper(j))) {
        b_->stat[sj] = std::isfinite(lower(j)) ? VStat::Lower : VStat::Free;
      }
    }
    return refactorize();
  }

  bool refactorize() {
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(f_.m, f_.m);
    for (int r = 0; r < f_.m; ++r) {
      const int j = b_->basic[static_cast<std::size_t>(r)];
      if (j >= f_.n) {
        B(j - f_.n, r) = 1.0;
      } else {
        for (const auto& [row, v] : f_.cols[static_cast<std::size_t>(j)]) B(row, r) = v;
      }
    }
    lu_.compute(B);
    const Eigen::VectorXd d = lu_.matrixLU().diagonal().cwiseAbs();
    const double dmax = std::max(d.size() > 0 ? d.maxCoeff() : 1.0, 1.0);
    if (d.size() > 0 && d.minCoeff() <= 1e-13 * dmax) return false;
    etas_.clear();
    recompute_basics();
    fresh_ = true;
    return true;
  }

  void recompute_basics() {
    Eigen::VectorXd r = Eigen::Map<const Eigen::VectorXd>(f_.rhs.data(), f_.m);
    for (int j = 0; j < f_.total(); ++j) {
      const std::size_t sj = static_cast<std::size_t>(j);
      if (b_->stat[sj] == VStat::Basic) continue;
      double v = 0.0;
      if (b_->stat[sj] == VStat::Lower) v = lower(j);
      else if (b_->stat[sj] == VStat::Upper) v = upper(j);
      if (v == 0.0) continue;
      if (j >= f_.n) {
        r[j - f_.n] -= v;
      } else {
        for (const auto& [row, coef] : f_.cols[sj]) r[row] -= coef * v;
      }
    }
    x_b_ = ftran_nofactor_check(r);
  }

  Eigen::VectorXd ftran_nofactor_check(const Eigen::VectorXd& v) const {
    Eigen::VectorXd x = lu_.solve(v);
    for (const Eta& e : etas_) {
      const double t = x[e.row] / e.w[e.row];
      x.noalias() -= e.w * t;
      x[e.row] = t;
    }
    return x;
  }

  Eigen::VectorXd ftran(const Eigen::VectorXd& v) const { return ftran_nofactor_check(v); }

  Eigen::VectorXd btran(const Eigen::VectorXd& v) const {
    Eigen::VectorXd y = v;
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      const double dot = it->w.dot(y);
      y[it->row] = (y[it->row] - (dot - it->w[it->row] * y[it->row])) / it->w[it->row];
    }
    return lu_.transpose().solve(y);
  }

  double bound_tol(int j) const {
    const double lo = lower(j), hi = upper(j);
    double scale = 0.0;
    if (std::isfinite(lo)) scale = std::max(scale, std::abs(lo));
    if (std::isfinite(hi)) scale = std::max(scale, std::abs(hi));
    return kFeasTol * (1.0 + scale);
  }

  double max_basic_violation() const {
    double worst = 0.0;
    for (int r = 0; r < f_.m; ++r) {
      const int j = b_->basic[static_cast<std::size_t>(r)];
      const double x = x_b_[r];
      const double tol = bound_tol(j);
      const double lo = lower(j), hi = upper(j);
      if (std::isfinite(lo)) worst = std::max(worst, lo - x - tol);
      if (std::isfinite(hi)) worst = std::max(worst, x - hi - tol);
    }
    return std::max(worst, 0.0);
  }

  Eigen::VectorXd duals(bool phase1) const {
    Eigen::VectorXd cb(f_.m);
    for (int r = 0; r < f_.m; ++r) {
      const int j = b_->basic[static_cast<std::size_t>(r)];
      if (phase1) {
        const double tol = bound_tol(j);
        if (x_b_[r] < lower(j) - tol) cb[r] = -1.0;
        else if (x_b_[r] > upper(j) + tol) cb[r] = 1.0;
        else cb[r] = 0.0;
      } else {
        cb[r] = f_.cost[static_cast<std::size_t>(j)];
      }
    }
    return btran(cb);
  }

  void price(const Eigen::VectorXd& y, bool phase1, bool bland, int& enter, int& dir) const {
    enter = -1;
    dir = 0;
    double best = kDualTol;
    for (int j = 0; j < f_.total(); ++j) {
      const std::size_t sj = static_cast<std::size_t>(j);
      const VStat st = b_->stat[sj];
      if (st == VStat::Basic) continue;
      if (lower(j) == upper(j)) continue;  // fixed column
      double d = phase1 ? 0.0 : f_.cost[sj];
      if (j >= f_.n) {
        d -= y[j - f_.n];
      } else {
        for (const auto& [row, v] : f_.cols[sj]) d -= y[row] * v;
      }
      int cand = 0;
      if (st == VStat::Lower && d < -kDualTol) cand = +1;
      else if (st == VStat::Upper && d > kDualTol) cand = -1;
      else if (st == VStat::Free && std::abs(d) > kDualTol) cand = d < 0.0 ? +1 : -1;
      if (cand == 0) continue;
      if (bland) {
        enter = j;
        dir = cand;
        return;
      }
      if (std::abs(d) > best) {
        best = std::abs(d);
        enter = j;
        dir = cand;
      }
    }
  }

  // Step length along the entering direction. leave_pos == -1 encodes a bound
  // flip of the entering column; otherwise the basic at leave_pos exits onto
  // leave_target. kInf means no blocking bound exists.
  double ratio_test(int enter, int dir, const Eigen::VectorXd& w, bool phase1, bool bland,
                    int& leave_pos, double& leave_target) const {
    double t_own = kInf;
    if (std::isfinite(lower(enter)) && std::isfinite(upper(enter))) {
      t_own = upper(enter) - lower(enter);
    }

    struct Block {
      int pos;
      double ratio;
      double target;
      double pivot;
      int var;
    };
    std::vector<Block> blocks;
    for (int r = 0; r < f_.m; ++r) {
      if (std::abs(w[r]) <= kPivotTol) continue;
      const double delta = -static_cast<double>(dir) * w[r];
      const int j = b_->basic[static_cast<std::size_t>(r)];
      const double x = x_b_[r];
      const double lo = lower(j), hi = upper(j);
      const double tol = bound_tol(j);
      double ratio = kInf, target = 0.0;
      if (phase1 && x < lo - tol) {
        // infeasible below: blocks only when moving up, at the violated bound
        if (delta > 0.0) { ratio = (lo - x) / delta; target = lo; }
      } else if (phase1 && x > hi + tol) {
        if (delta < 0.0) { ratio = (x - hi) / (-delta); target = hi; }
      } else if (delta > 0.0) {
        if (std::isfinite(hi)) { ratio = std::max(0.0, (hi - x) / delta); target = hi; }
      } else {
        if (std::isfinite(lo)) { ratio = std::max(0.0, (x - lo) / (-delta)); target = lo; }
      }
      if (ratio < kInf) blocks.push_back(Block{r, std::max(ratio, 0.0), target, std::abs(w[r]), j});
    }

    double t_min = t_own;
    for (const Block& blk : blocks) t_min = std::min(t_min, blk.ratio);
    if (t_min == kInf) return kInf;

    const Block* chosen = nullptr;
    for (const Block& blk : blocks) {
      if (blk.ratio > t_min + 1e-9) continue;
      if (chosen == nullptr) {
        chosen = &blk;
      } else if (bland) {
        if (blk.var < chosen->var) chosen = &blk;
      } else if (blk.pivot > chosen->pivot + 1e-12 ||
                 (std::abs(blk.pivot - chosen->pivot) <= 1e-12 && blk.var < chosen->var)) {
        chosen = &blk;
      }
    }
    if (chosen == nullptr || t_own <= chosen->ratio) {
      leave_pos = -1;  // the entering column flips to its other bound
      return t_own;
    }
    leave_pos = chosen->pos;
    leave_target = chosen->target;
    return chosen->ratio;
  }

  void apply_step(int enter, int dir, double step, const Eigen::VectorXd& w, int leave_pos,
                  double leave_target) {
    const std::size_t se = static_cast<std::size_t>(enter);
    if (step > 0.0) x_b_.noalias() -= (static_cast<double>(dir) * step) * w;
    if (leave_pos < 0) {
      b_->stat[se] = b_->stat[se] == VStat::Lower ? VStat::Upper : VStat::Lower;
      return;
    }
    double enter_value = 0.0;
    if (b_->stat[se] == VStat::Lower) enter_value = lower(enter);
    else if (b_->stat[se] == VStat::Upper) enter_value = upper(enter);
    enter_value += static_cast<double>(dir) * step;

    const int leaving = b_->basic[static_cast<std::size_t>(leave_pos)];
    const std::size_t sl = static_cast<std::size_t>(leaving);
    b_->stat[sl] = leave_target == lower(leaving) ? VStat::Lower : VStat::Upper;
    b_->stat[se] = VStat::Basic;
    b_->basic[static_cast<std::size_t>(leave_pos)] = enter;
    pos_of_[sl] = -1;
    pos_of_[se] = leave_pos;
    x_b_[leave_pos] = enter_value;
    etas_.push_back(Eta{leave_pos, w});
  }

  Eigen::VectorXd column(int j) const {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(f_.m);
    if (j >= f_.n) {
      a[j - f_.n] = 1.0;
    } else {
      for (const auto& [row, v] : f_.cols[static_cast<std::size_t>(j)]) a[row] = v;
    }
    return a;
  }

  const CompForm& f_;
  const std::vector<double>& slb_;  // structural lower bounds
  const std::vector<double>& sub_;  // structural upper bounds
  Basis* b_ = nullptr;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  std::vector<Eta> etas_;
  Eigen::VectorXd x_b_;
  std::vector<int> pos_of_;
  bool fresh_ = false;
};

long long lp_iteration_limit(const CompForm& f) {
  return 20000 + 50LL * (f.m + 1) + 2LL * f.n;
}

struct BoundVectors {
  std::vector<double> lb, ub;
};

// Integer bound tightening; throws if an integer variable is not 0-1 after
// rounding inward. Returns false when some integer domain is empty.
bool tighten_bounds(const Model& model, BoundVectors& out) {
  const std::size_t n = model.vars.size();
  out.lb.resize(n);
  out.ub.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Variable& v = model.vars[j];
    double lo = v.lower, hi = v.upper;
    if (v.is_integer) {
      if (!std::isfinite(lo) || !std::isfinite(hi)) {
        throw std::invalid_argument("integer variables require finite bounds");
      }
      lo = std::ceil(lo - kIntTol);
      hi = std::floor(hi + kIntTol);
      if (lo < -kIntTol || hi > 1.0 + kIntTol) {
        throw std::invalid_argument("integer variables must be 0-1 after bound tightening");
      }
      if (lo > hi) return false;
    }
    out.lb[j] = lo;
    out.ub[j] = hi;
  }
  return true;
}

struct BnbNode {
  double bound = -kInf;
  int depth = 0;
  long long id = 0;
  std::vector<std::pair<int, std::int8_t>> fixes;  // (variable, 0 or 1) from the root
  std::shared_ptr<Basis> start;
};

struct NodeOrder {
  bool operator()(const BnbNode& a, const BnbNode& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // smallest bound first
    if (a.depth != b.depth) return a.depth < b.depth;  // then deepest
    return a.id > b.id;                                // then creation order
  }
};

bool integral_solution(const Model& model, const std::vector<double>& x, int& branch_var,
                       double& branch_frac) {
  branch_var = -1;
  branch_frac = 0.0;
  for (std::size_t j = 0; j < model.vars.size(); ++j) {
    if (!model.vars[j].is_integer) continue;
    const double f = std::abs(x[j] - std::round(x[j]));
    if (f <= kIntTol) continue;
    const double dist = std::min(x[j] - std::floor(x[j]), std::ceil(x[j]) - x[j]);
    if (dist > branch_frac) {  // most fractional, ties -> lowest index
      branch_frac = dist;
      branch_var = static_cast<int>(j);
    }
  }
  return branch_var < 0;
}

std::vector<double> snap_integers(const Model& model, std::vector<double> x) {
  for (std::size_t j = 0; j < model.vars.size(); ++j) {
    if (model.vars[j].is_integer) x[j] = std::round(x[j]);
  }
  return x;
}

bool hint_feasible(const Model& model, const std::vector<double>& hint) {
  if (hint.size() != model.vars.size()) return false;
  for (std::size_t j = 0; j < model.vars.size(); ++j) {
    if (model.vars[j].is_integer &&
        std::abs(hint[j] - std::round(hint[j])) > kIntTol) {
      return false;
    }
  }
  return model.max_infeasibility(snap_integers(model, hint)) <= 1e-6;
}

}  // namespace

LpSolution solve_lp(const Model& model) {
  LpSolution sol;
  const CompForm form = CompForm::build(model);
  std::vector<double> lb(model.vars.size()), ub(model.vars.size());
  for (std::size_t j = 0; j < model.vars.size(); ++j) {
    lb[j] = model.vars[j].lower;
    ub[j] = model.vars[j].upper;
    if (lb[j] > ub[j]) {
      sol.status = SolveStatus::Infeasible;
      return sol;
    }
  }
  Simplex simplex(form, lb, ub);
  Basis basis;
  Simplex::default_basis(form, lb, ub, basis);
  sol.status = simplex.solve(basis, lp_iteration_limit(form), sol.iterations);
  if (sol.status == SolveStatus::Optimal) {
    sol.x = simplex.structural_values();
    sol.objective = model.objective_value(sol.x);
  }
  return sol;
}

Solution solve_milp(const Model& model, const Options& options) {
  Solution sol;
  const auto started = std::chrono::steady_clock::now();
  const auto out_of_time = [&] {
    if (!std::isfinite(options.budgets.time_seconds)) return false;
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return elapsed >= options.budgets.time_seconds;
  };

  BoundVectors root_bounds;
  if (!tighten_bounds(model, root_bounds)) {
    sol.status = SolveStatus::Infeasible;
    return sol;
  }
  const CompForm form = CompForm::build(model);

  double incumbent_obj = kInf;
  std::vector<double> incumbent;
  if (options.hint && hint_feasible(model, *options.hint)) {
    incumbent = snap_integers(model, *options.hint);
    incumbent_obj = model.objective_value(incumbent);
    sol.hint_accepted = true;
  }

  std::priority_queue<BnbNode, std::vector<BnbNode>, NodeOrder> open;
  auto root_basis = std::make_shared<Basis>();
  Simplex::default_basis(form, root_bounds.lb, root_bounds.ub, *root_basis);
  open.push(BnbNode{-kInf, 0, 0, {}, root_basis});
  long long next_id = 1;
  long long processed = 0;
  bool node_failed = false;
  bool saw_unbounded = false;
  double best_open_bound = -kInf;

  std::vector<double> lb = root_bounds.lb, ub = root_bounds.ub;
  while (!open.empty()) {
    if (processed >= options.budgets.nodes || out_of_time()) break;
    const BnbNode node = open.top();
    open.pop();
    if (node.bound >= incumbent_obj - kGapTol) continue;  // pruned by bound
    if (options.node_callback) {
      options.node_callback(NodeInfo{node.id, node.depth, node.bound, incumbent_obj});
    }

    // node bounds = root bounds + branching fixes
    lb = root_bounds.lb;
    ub = root_bounds.ub;
    for (const auto& [j, v] : node.fixes) {
      lb[static_cast<std::size_t>(j)] = v;
      ub[static_cast<std::size_t>(j)] = v;
    }

    Basis basis = *node.start;
    Simplex simplex(form, lb, ub);
    long long iters = 0;
    const SolveStatus st = simplex.solve(basis, lp_iteration_limit(form), iters);
    ++processed;

    if (st == SolveStatus::Infeasible) continue;
    if (st == SolveStatus::Unbounded) {
      saw_unbounded = true;
      break;
    }
    if (st != SolveStatus::Optimal) {
      node_failed = true;
      break;
    }
    const double bound = simplex.objective();
    if (bound >= incumbent_obj - kGapTol) continue;

    const std::vector<double> x = simplex.structural_values();
    int branch_var = -1;
    double frac = 0.0;
    if (integral_solution(model, x, branch_var, frac)) {
      std::vector<double> candidate = snap_integers(model, x);
      const double obj = model.objective_value(candidate);
      if (obj < incumbent_obj) {
        incumbent_obj = obj;
        incumbent = std::move(candidate);
      }
      continue;
    }

    auto basis_copy = std::make_shared<Basis>(std::move(basis));
    for (const std::int8_t v : {std::int8_t{0}, std::int8_t{1}}) {
      BnbNode child;
      child.bound = bound;
      child.depth = node.depth + 1;
      child.id = next_id++;
      child.fixes = node.fixes;
      child.fixes.emplace_back(branch_var, v);
      child.start = basis_copy;
      open.push(child);
    }
  }

  sol.nodes = processed;
  if (saw_unbounded) {
    sol.status = SolveStatus::Unbounded;
    return sol;
  }
  if (node_failed) {
    sol.status = SolveStatus::Numerical;
    return sol;
  }
  if (open.empty()) {
    if (incumbent.empty()) {
      sol.status = SolveStatus::Infeasible;
    } else {
      sol.status = SolveStatus::Optimal;
      sol.values = std::move(incumbent);
      sol.objective = incumbent_obj;
      sol.gap = 0.0;
    }
    return sol;
  }
  // budget exhausted: report the best incumbent with its optimality gap
  best_open_bound = std::min(open.top().bound, incumbent_obj);
  sol.status = SolveStatus::Limit;
  if (!incumbent.empty()) {
    sol.values = std::move(incumbent);
    sol.objective = incumbent_obj;
    sol.gap = (incumbent_obj - best_open_bound) / std::max(1.0, std::abs(incumbent_obj));
  }
  return sol;
}

std::string dump_lp_format(const Model& model) {
  std::ostringstream os;
  os.precision(17);
  os << "minimize\n obj:";
  for (int j = 0; j < model.num_vars(); ++j) {
    const double c = model.vars[static_cast<std::size_t>(j)].objective;
    if (c != 0.0) os << ' ' << c << " x" << j;
  }
  os << "\nsubject to\n";
  for (int r = 0; r < model.num_rows(); ++r) {
    const Row& row = model.rows[static_cast<std::size_t>(r)];
    os << " c" << r << ':';
    for (const auto& [j, v] : row.coeffs) os << ' ' << v << " x" << j;
    switch (row.sense) {
      case Sense::LessEqual: os << " <= "; break;
      case Sense::GreaterEqual: os << " >= "; break;
      case Sense::Equal: os << " = "; break;
    }
    os << row.rhs << '\n';
  }
  os << "bounds\n";
  for (int j = 0; j < model.num_vars(); ++j) {
    const Variable& v = model.vars[static_cast<std::size_t>(j)];
    os << ' ' << v.lower << " <= x" << j << " <= " << v.upper << '\n';
  }
  os << "binaries\n";
  bool any = false;
  for (int j = 0; j < model.num_vars(); ++j) {
    if (model.vars[static_cast<std::size_t>(j)].is_integer) {
      os << " x" << j;
      any = true;
    }
  }
  if (any) os << '\n';
  os << "end\n";
  return os.str();
}

}  // namespace minirel::milp
