#pragma once

#include <memory>

#include "hcr/linear_model.hpp"

namespace hcr::optim {

struct SimplexOptions {
  long max_iterations = 500000;
  Tolerances tol;
};

/// Solve an LP by bounded-variable revised primal simplex (two-phase, dense
/// basis inverse, Dantzig pricing with a Bland fallback after a run of
/// degenerate steps). Duals are reported per row as the sensitivity of the
/// optimal objective to that row's right-hand side, in the model's sense.
SolveResult solve_lp(const LinearModel& model, const SimplexOptions& opt = {});

/// As solve_lp but with the variable bounds overridden (used by the
/// branch-and-bound driver). Sizes must match the model.
SolveResult solve_lp_with_bounds(const LinearModel& model, const std::vector<double>& lo,
                                 const std::vector<double>& hi,
                                 const SimplexOptions& opt = {});

/// Incremental interface for column generation: keeps the factorized basis
/// between solves, so adding a column and re-solving resumes from the
/// current optimal basis instead of starting over.
class IncrementalSimplex {
 public:
  IncrementalSimplex(const LinearModel& base, const SimplexOptions& opt = {});
  ~IncrementalSimplex();
  IncrementalSimplex(IncrementalSimplex&&) noexcept;
  IncrementalSimplex& operator=(IncrementalSimplex&&) noexcept;

  /// Append a continuous variable with the given bounds. Returns its index.
  int add_column(double cost, const std::vector<std::pair<int, double>>& row_coeffs,
                 double lower, double upper);

  /// (Re-)solve; warm-starts from the previous basis when one exists.
  SolveResult solve();

  int num_vars() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace hcr::optim
