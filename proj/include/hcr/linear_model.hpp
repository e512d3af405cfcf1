#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hcr/common.hpp"

namespace hcr::optim {

enum class Sense { minimize, maximize };
enum class Rel { le, eq, ge };

/// General linear (and mixed-integer) model in natural bounds form:
///   optimize c'x + c0  subject to  row_i : a_i'x {<=,=,>=} b_i,  lo <= x <= hi.
struct LinearModel {
  Sense sense = Sense::minimize;
  double objective_constant = 0.0;
  std::vector<double> obj;
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<std::uint8_t> is_integer;
  std::vector<std::string> var_names;

  struct Row {
    std::vector<std::pair<int, double>> terms;
    Rel rel = Rel::le;
    double rhs = 0.0;
    std::string name;
  };
  std::vector<Row> rows;

  int add_var(double lower, double upper, double cost, bool integer = false,
              std::string name = {});
  int add_row(std::vector<std::pair<int, double>> terms, Rel rel, double rhs,
              std::string name = {});

  int num_vars() const { return static_cast<int>(obj.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  /// Structural sanity: finite coefficients, lo <= hi, indices in range.
  /// Throws ValidationError on the first problem found.
  void validate() const;

  /// Objective value of a point (no feasibility check).
  double objective_value(const std::vector<double>& x) const;

  /// Worst constraint violation of a point (0 when feasible).
  double max_violation(const std::vector<double>& x) const;

  /// Human-readable LP-format dump for debugging.
  std::string to_lp_format() const;
};

enum class SolveStatus { optimal, infeasible, unbounded, iteration_limit, node_limit };

struct SolveResult {
  SolveStatus status = SolveStatus::optimal;
  double objective = 0.0;
  std::vector<double> x;
  /// Per-row duals, LP solves only: derivative of the optimal objective with
  /// respect to the row's right-hand side, in the model's own sense.
  std::vector<double> duals;
  long iterations = 0;  ///< simplex pivots, or branch-and-bound nodes
  bool used_fallback = false;  ///< anti-cycling rule engaged at some point
};

}  // namespace hcr::optim
