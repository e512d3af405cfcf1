#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace hcr {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Numeric tolerances used consistently across solvers and checks.
struct Tolerances {
  double feasibility = 1e-7;  ///< constraint residual considered satisfied
  double optimality = 1e-6;   ///< reduced-cost / duality-gap threshold
  double integrality = 1e-6;  ///< distance from nearest integer considered integral
};

/// Thrown when input data fails schema or semantic validation.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline bool nearly_equal(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

inline bool is_integral(double v, double tol = 1e-6) {
  return std::fabs(v - std::round(v)) <= tol;
}

/// floor() with a small guard so values that are integral up to rounding noise
/// do not get truncated one step too low.
inline long long guarded_floor(double v) {
  return static_cast<long long>(std::floor(v + 1e-9));
}

}  // namespace hcr
