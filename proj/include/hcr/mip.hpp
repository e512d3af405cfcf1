#pragma once

#include "hcr/linear_model.hpp"
#include "hcr/simplex.hpp"

namespace hcr::optim {

struct MipOptions {
  long max_nodes = 500000;
  Tolerances tol;
  SimplexOptions lp;
  /// Optional known feasible point used to seed the incumbent.
  const std::vector<double>* initial_solution = nullptr;
};

/// Branch-and-bound over LP relaxations: best-first on the relaxation bound,
/// branching on the most fractional integer variable (ties to the lowest
/// index). Integer variables must have finite bounds. Guarantees an absolute
/// optimality gap of at most 1e-7 on completion; returns node_limit with the
/// incumbent when the node budget runs out.
SolveResult solve_mip(const LinearModel& model, const MipOptions& opt = {});

}  // namespace hcr::optim
