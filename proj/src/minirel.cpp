#include "minirel/minirel.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "minirel/fair_assign.hpp"

namespace minirel {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

bool groups_disjoint(const Dataset& ds) {
  std::vector<int> owner(ds.n(), -1);
  for (std::size_t g = 0; g < ds.groups.size(); ++g) {
    for (std::size_t i : ds.groups[g]) {
      if (owner[i] >= 0) return false;
      owner[i] = static_cast<int>(g);
    }
  }
  return true;
}

bool alpha_above_half(const FairnessSpec& spec) {
  for (int g = 0; g < spec.num_groups; ++g) {
    const Rational a = spec.alpha_of(g);
    if (2 * a.num <= a.den) return false;
  }
  return true;
}

// nearest-center clustering used as the pre-fix cost reference
Clustering assign_greedy(const Dataset& ds, const Centers& centers) {
  Clustering c;
  c.centers = centers;
  const Eigen::MatrixXd d = squared_distances(ds, centers);
  c.assignment.resize(ds.n());
  for (std::size_t i = 0; i < ds.n(); ++i) {
    int best = 0;
    for (int k = 1; k < centers.rows(); ++k) {
      if (d(static_cast<Eigen::Index>(i), k) < d(static_cast<Eigen::Index>(i), best)) best = k;
    }
    c.assignment[i] = best;
  }
  c.cost = clustering_cost(ds, c.assignment, c.centers);
  return c;
}

}  // namespace

nlohmann::json IterationRecord::to_json() const {
  return nlohmann::json{{"iter", iter},
                        {"ip_objective", ip_objective},
                        {"cost", cost},
                        {"changed", changed},
                        {"nodes", nodes},
                        {"wall_ms", wall_ms},
                        {"budget_hit", budget_hit}};
}

Centers initialize(const Dataset& ds, const MiniRelConfig& cfg) {
  switch (cfg.init) {
    case InitScheme::Random: return random_init(ds, cfg.K, cfg.seed);
    case InitScheme::KMeansPP: return kmeanspp_init(ds, cfg.K, cfg.seed);
    case InitScheme::WarmStart: return best_of(ds, cfg.K, cfg.restarts, cfg.seed).centers;
  }
  throw std::logic_error("unknown init scheme");
}

MiniRelTrace run(const Dataset& ds, const MiniRelConfig& cfg) {
  if (cfg.iteration_limit < 1) throw std::invalid_argument("iteration limit must be >= 1");
  if (static_cast<int>(ds.groups.size()) != cfg.spec.num_groups ||
      cfg.K != cfg.spec.num_clusters) {
    throw std::invalid_argument("config spec does not match dataset/K");
  }

  MiniRelTrace trace;
  const auto t_start = Clock::now();
  const bool disjoint = groups_disjoint(ds);

  const auto reasons = cfg.spec.quick_infeasibility_reasons(disjoint);
  if (!reasons.empty()) {
    trace.status = RunStatus::Infeasible;
    trace.message = reasons.front();
    for (std::size_t i = 1; i < reasons.size(); ++i) trace.message += "; " + reasons[i];
    return trace;
  }

  Centers centers = initialize(ds, cfg);
  trace.init_wall_ms = ms_since(t_start);

  FairAssignInstance instance;
  instance.spec = cfg.spec;
  instance.groups = ds.groups;

  // pre-fix plan, decided once against the initial clustering
  const bool prefix_preserving = disjoint && alpha_above_half(cfg.spec);
  bool use_prefix = false;
  switch (cfg.prefix) {
    case PrefixMode::Off: use_prefix = false; break;
    case PrefixMode::Auto: use_prefix = prefix_preserving; break;
    case PrefixMode::Ip:
    case PrefixMode::Naive: use_prefix = true; break;
  }
  if (use_prefix) {
    try {
      if (cfg.prefix == PrefixMode::Naive) {
        trace.plan = naive_prefix(cfg.spec, cfg.seed);
      } else {
        const Clustering reference = assign_greedy(ds, centers);
        const Eigen::MatrixXd costs = prefix_costs(reference, ds, cfg.spec, cfg.prefix_objective);
        trace.plan = solve_prefix_ip(costs, cfg.spec);
      }
      instance.plan = trace.plan.obligations;
      trace.used_prefix = true;
    } catch (const std::runtime_error& e) {
      if (cfg.prefix == PrefixMode::Auto) {
        // fall back to the full model; it decides feasibility for real
        instance.plan.reset();
        trace.used_prefix = false;
      } else {
        trace.status = RunStatus::Infeasible;
        trace.message = e.what();
        return trace;
      }
    }
  }

  milp::Options solver_options;
  solver_options.budgets = cfg.budgets;

  std::optional<std::vector<int>> previous;
  bool any_budget_hit = false;
  for (int iter = 0; iter < cfg.iteration_limit; ++iter) {
    const auto t_iter = Clock::now();
    instance.distances = squared_distances(ds, centers);
    // at iteration 0 there is no feasible previous assignment; a greedy
    // repair gives the solver a starting incumbent so budget-capped solves
    // never come back empty-handed
    std::optional<std::vector<int>> hint = previous;
    if (!hint) hint = heuristic_assignment(instance);
    AssignResult assign = minirel::solve(instance, solver_options, hint);
    if (assign.status == milp::SolveStatus::Infeasible && iter == 0 && !instance.plan &&
        instance.spec.allowed.size() <
            static_cast<std::size_t>(cfg.spec.num_groups) * static_cast<std::size_t>(cfg.K)) {
      // a restricted W is the usual misconfiguration: retry once with W = G x K
      instance.spec.allowed = FairnessSpec::full_w(cfg.spec.num_groups, cfg.K);
      assign = minirel::solve(instance, solver_options, heuristic_assignment(instance));
      if (assign.status != milp::SolveStatus::Infeasible) {
        trace.message = "restricted W was infeasible; solved with W widened to all pairs";
      }
    }

    if (assign.status == milp::SolveStatus::Infeasible) {
      trace.status = RunStatus::Infeasible;
      std::string diag = "fair assignment infeasible";
      const auto more = instance.spec.quick_infeasibility_reasons(disjoint);
      for (const auto& r : more) diag += "; " + r;
      trace.message = diag;
      return trace;
    }
    const bool budget_hit = assign.status == milp::SolveStatus::Limit;
    any_budget_hit = any_budget_hit || budget_hit;
    if (assign.assignment.empty()) {
      trace.status = RunStatus::SolverLimit;
      trace.message = "solver budget exhausted before any feasible assignment was found";
      return trace;
    }

    IterationRecord rec;
    rec.iter = iter;
    rec.ip_objective = assign.objective;
    rec.nodes = assign.nodes;
    rec.budget_hit = budget_hit;

    int changed = 0;
    if (previous) {
      for (std::size_t i = 0; i < ds.n(); ++i) {
        if ((*previous)[i] != assign.assignment[i]) ++changed;
      }
    } else {
      changed = static_cast<int>(ds.n());
    }
    rec.changed = changed;

    // center update: means of the new clusters
    Centers next = Centers::Zero(cfg.K, ds.points.cols());
    std::vector<long long> sizes(static_cast<std::size_t>(cfg.K), 0);
    for (std::size_t i = 0; i < ds.n(); ++i) {
      next.row(assign.assignment[i]) += ds.points.row(static_cast<Eigen::Index>(i));
      sizes[static_cast<std::size_t>(assign.assignment[i])]++;
    }
    for (int k = 0; k < cfg.K; ++k) {
      if (sizes[static_cast<std::size_t>(k)] > 0) {
        next.row(k) /= static_cast<double>(sizes[static_cast<std::size_t>(k)]);
      } else {
        next.row(k) = centers.row(k);
      }
    }
    centers = next;
    rec.cost = clustering_cost(ds, assign.assignment, centers);
    rec.wall_ms = ms_since(t_iter);
    trace.iterations.push_back(rec);

    const bool fixed_point = previous && *previous == assign.assignment;
    previous = assign.assignment;
    if (fixed_point) {
      trace.fixed_point = true;
      break;
    }
  }

  trace.clustering.assignment = *previous;
  trace.clustering.centers = centers;
  trace.clustering.cost = clustering_cost(ds, trace.clustering.assignment, centers);
  trace.report = validate(trace.clustering, ds, cfg.spec);
  trace.status = RunStatus::Success;
  if (any_budget_hit && !trace.fixed_point) trace.status = RunStatus::SolverLimit;
  if (!trace.report.satisfied) {
    // can only happen when a budget stop returned a sub-optimal incumbent
    // from an infeasible-start hint chain; surface it rather than mask it
    trace.status = RunStatus::SolverLimit;
    trace.message = "final clustering does not satisfy the fairness spec";
  }
  trace.total_wall_ms = ms_since(t_start);
  return trace;
}

}  // namespace minirel
