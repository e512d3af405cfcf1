#include "hcr/mip.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace hcr::optim {

namespace {

constexpr double kPruneMargin = 1e-7;

struct Node {
  double bound = 0.0;
  long id = 0;
  // Tightened bounds accumulated along the branch, applied over the base.
  std::vector<std::pair<int, double>> lo_changes;
  std::vector<std::pair<int, double>> hi_changes;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
    return a.id > b.id;                                // then FIFO
  }
};

}  // namespace

SolveResult solve_mip(const LinearModel& model, const MipOptions& opt) {
  model.validate();
  for (int j = 0; j < model.num_vars(); ++j) {
    if (model.is_integer[j] && (!std::isfinite(model.lo[j]) || !std::isfinite(model.hi[j]))) {
      throw ValidationError("mip: integer variables must have finite bounds");
    }
  }
  const double sign = model.sense == Sense::minimize ? 1.0 : -1.0;

  SolveResult best;
  best.status = SolveStatus::infeasible;
  bool have_incumbent = false;
  double incumbent = kInf;  // sense-adjusted

  if (opt.initial_solution != nullptr) {
    const auto& x0 = *opt.initial_solution;
    if (static_cast<int>(x0.size()) == model.num_vars() &&
        model.max_violation(x0) <= opt.tol.feasibility * 10) {
      bool integral = true;
      for (int j = 0; j < model.num_vars() && integral; ++j) {
        if (model.is_integer[j]) integral = is_integral(x0[static_cast<std::size_t>(j)], opt.tol.integrality);
      }
      if (integral) {
        have_incumbent = true;
        incumbent = sign * model.objective_value(x0);
        best.status = SolveStatus::optimal;
        best.objective = model.objective_value(x0);
        best.x = x0;
        for (int j = 0; j < model.num_vars(); ++j) {
          if (model.is_integer[j]) {
            best.x[static_cast<std::size_t>(j)] = std::round(best.x[static_cast<std::size_t>(j)]);
          }
        }
      }
    }
  }

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  long next_id = 0;
  long nodes = 0;
  bool hit_node_limit = false;
  bool any_lp_feasible = false;

  open.push(Node{-kInf, next_id++, {}, {}});

  std::vector<double> lo = model.lo;
  std::vector<double> hi = model.hi;

  while (!open.empty()) {
    if (nodes >= opt.max_nodes) {
      hit_node_limit = true;
      break;
    }
    Node node = open.top();
    open.pop();
    if (have_incumbent && node.bound >= incumbent - kPruneMargin) continue;
    ++nodes;

    lo = model.lo;
    hi = model.hi;
    for (const auto& [j, v] : node.lo_changes) lo[static_cast<std::size_t>(j)] = v;
    for (const auto& [j, v] : node.hi_changes) hi[static_cast<std::size_t>(j)] = v;
    bool consistent = true;
    for (int j = 0; j < model.num_vars() && consistent; ++j) {
      consistent = lo[static_cast<std::size_t>(j)] <= hi[static_cast<std::size_t>(j)];
    }
    if (!consistent) continue;

    const SolveResult lp = solve_lp_with_bounds(model, lo, hi, opt.lp);
    if (lp.status == SolveStatus::unbounded) {
      // A relaxation without a finite bound cannot be pruned; with bounded
      // integers this only happens through continuous rays.
      SolveResult res;
      res.status = SolveStatus::unbounded;
      res.iterations = nodes;
      return res;
    }
    if (lp.status != SolveStatus::optimal) continue;
    any_lp_feasible = true;
    const double bound = sign * lp.objective;
    if (have_incumbent && bound >= incumbent - kPruneMargin) continue;

    // Most fractional integer variable.
    int branch_var = -1;
    double branch_score = -1.0;
    for (int j = 0; j < model.num_vars(); ++j) {
      if (!model.is_integer[j]) continue;
      const double v = lp.x[static_cast<std::size_t>(j)];
      const double frac = v - std::floor(v);
      const double score = std::min(frac, 1.0 - frac);
      if (score > opt.tol.integrality && score > branch_score + 1e-12) {
        branch_score = score;
        branch_var = j;
      }
    }

    if (branch_var < 0) {
      // Integral: candidate incumbent.
      if (!have_incumbent || bound < incumbent - 1e-12) {
        have_incumbent = true;
        incumbent = bound;
        best.status = SolveStatus::optimal;
        best.objective = lp.objective;
        best.x = lp.x;
        for (int j = 0; j < model.num_vars(); ++j) {
          if (model.is_integer[j]) {
            best.x[static_cast<std::size_t>(j)] = std::round(best.x[static_cast<std::size_t>(j)]);
          }
        }
      }
      continue;
    }

    const double v = lp.x[static_cast<std::size_t>(branch_var)];
    Node down{bound, next_id++, node.lo_changes, node.hi_changes};
    down.hi_changes.emplace_back(branch_var, std::floor(v));
    Node up{bound, next_id++, std::move(node.lo_changes), std::move(node.hi_changes)};
    up.lo_changes.emplace_back(branch_var, std::ceil(v));
    open.push(std::move(down));
    open.push(std::move(up));
  }

  best.iterations = nodes;
  if (hit_node_limit && !open.empty()) {
    best.status = SolveStatus::node_limit;
    return best;
  }
  if (!have_incumbent) {
    best.status = any_lp_feasible ? SolveStatus::infeasible : SolveStatus::infeasible;
  }
  return best;
}

}  // namespace hcr::optim
