#pragma once

#include <string>
#include <vector>

namespace hcr {

/// Specification of the random total number of visits a referral requires.
struct VisitDistSpec {
  enum class Kind { deterministic, truncated_poisson, discrete_uniform };
  Kind kind = Kind::deterministic;
  double mean = 1.0;  ///< requested mean (deterministic and truncated-Poisson)
  int max = 1;        ///< support upper end (truncated-Poisson, discrete-uniform)
};

/// Realized visit-count distribution together with the per-visit
/// continuation probabilities it induces.
struct VisitDistribution {
  std::vector<double> pmf;  ///< pmf[v-1] = P(total visits = v), v = 1..max_visits
  double mean = 0.0;        ///< exact mean of pmf
  int max_visits = 0;

  /// survival[j] = P(visits >= j | visits >= j-1) for j = 1..max_visits;
  /// index 0 is unused. Values beyond max_visits are 0 (see p()).
  std::vector<double> survival;

  /// Continuation probability p_j; p(1) = 1 and p(max_visits + 1) = 0.
  double p(int j) const {
    if (j < 1) return 1.0;
    if (j > max_visits) return 0.0;
    return survival[static_cast<std::size_t>(j)];
  }
};

/// Build the visit-count pmf and continuation probabilities for a spec.
///
/// deterministic: point mass at round(mean).
/// truncated-Poisson: support {1..max}; the underlying Poisson rate is
/// calibrated by bisection so the truncated mean matches the requested
/// mean within 1e-6.
/// discrete-uniform: uniform on {1..max} (mean implied).
VisitDistribution continuation_probabilities(const VisitDistSpec& spec);

/// One service type: care pattern, visit duration, wait-time target and
/// visit-count distribution.
struct ServiceType {
  int h = 1;          ///< days between consecutive visits
  double e = 0.0;     ///< visit duration in hours
  int wait_target = 1;///< latest admissible start day for a new referral
  VisitDistSpec dist_spec;
  VisitDistribution dist;
  int typical_visits = 1;  ///< nearest integer to the mean visit count

  double p(int j) const { return dist.p(j); }
  int max_visits() const { return dist.max_visits; }
};

}  // namespace hcr
