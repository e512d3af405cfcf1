#include "hcr/service.hpp"

#include <cmath>
#include <numeric>

#include "hcr/common.hpp"

namespace hcr {

namespace {

double truncated_poisson_mean(double rate, int max) {
  // pmf on {1..max} proportional to rate^v / v!
  double term = rate;  // v = 1 term up to the common factor e^-rate
  double total = 0.0, weighted = 0.0;
  for (int v = 1; v <= max; ++v) {
    if (v > 1) term *= rate / v;
    total += term;
    weighted += v * term;
  }
  return weighted / total;
}

VisitDistribution finalize(std::vector<double> pmf) {
  VisitDistribution d;
  d.pmf = std::move(pmf);
  d.max_visits = static_cast<int>(d.pmf.size());
  double mean = 0.0;
  for (int v = 1; v <= d.max_visits; ++v) mean += v * d.pmf[static_cast<std::size_t>(v - 1)];
  d.mean = mean;
  d.survival.assign(static_cast<std::size_t>(d.max_visits) + 1, 0.0);
  // tail[j] = P(visits >= j)
  std::vector<double> tail(static_cast<std::size_t>(d.max_visits) + 2, 0.0);
  for (int j = d.max_visits; j >= 1; --j) {
    tail[static_cast<std::size_t>(j)] =
        tail[static_cast<std::size_t>(j) + 1] + d.pmf[static_cast<std::size_t>(j - 1)];
  }
  d.survival[1] = 1.0;
  for (int j = 2; j <= d.max_visits; ++j) {
    const double prev = tail[static_cast<std::size_t>(j - 1)];
    d.survival[static_cast<std::size_t>(j)] = prev > 0 ? tail[static_cast<std::size_t>(j)] / prev : 0.0;
  }
  return d;
}

}  // namespace

VisitDistribution continuation_probabilities(const VisitDistSpec& spec) {
  switch (spec.kind) {
    case VisitDistSpec::Kind::deterministic: {
      const double r = std::round(spec.mean);
      if (!(spec.mean >= 1.0) || std::fabs(spec.mean - r) > 1e-9) {
        throw ValidationError("visit distribution: deterministic mean must be an integer >= 1");
      }
      std::vector<double> pmf(static_cast<std::size_t>(r), 0.0);
      pmf.back() = 1.0;
      return finalize(std::move(pmf));
    }
    case VisitDistSpec::Kind::truncated_poisson: {
      if (spec.max < 1) throw ValidationError("visit distribution: max must be >= 1");
      if (spec.max == 1) {
        if (std::fabs(spec.mean - 1.0) > 1e-9) {
          throw ValidationError("visit distribution: max 1 forces mean 1");
        }
        return finalize({1.0});
      }
      if (!(spec.mean >= 1.0) || !(spec.mean < spec.max)) {
        throw ValidationError("visit distribution: truncated-Poisson mean must lie in [1, max)");
      }
      // Bisect the underlying rate so the truncated mean hits the target.
      double lo = 1e-9, hi = 1.0;
      while (truncated_poisson_mean(hi, spec.max) < spec.mean) hi *= 2.0;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (truncated_poisson_mean(mid, spec.max) < spec.mean) lo = mid; else hi = mid;
        if (hi - lo < 1e-13 * std::max(1.0, hi)) break;
      }
      const double rate = 0.5 * (lo + hi);
      if (std::fabs(truncated_poisson_mean(rate, spec.max) - spec.mean) > 1e-6) {
        throw ValidationError("visit distribution: mean calibration did not converge");
      }
      std::vector<double> pmf(static_cast<std::size_t>(spec.max), 0.0);
      double term = rate, total = 0.0;
      for (int v = 1; v <= spec.max; ++v) {
        if (v > 1) term *= rate / v;
        pmf[static_cast<std::size_t>(v - 1)] = term;
        total += term;
      }
      for (auto& w : pmf) w /= total;
      return finalize(std::move(pmf));
    }
    case VisitDistSpec::Kind::discrete_uniform: {
      if (spec.max < 1) throw ValidationError("visit distribution: max must be >= 1");
      std::vector<double> pmf(static_cast<std::size_t>(spec.max),
                              1.0 / static_cast<double>(spec.max));
      return finalize(std::move(pmf));
    }
  }
  throw ValidationError("visit distribution: unknown kind");
}

}  // namespace hcr
