#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>

#include "hcr/alp.hpp"
#include "hcr/common.hpp"

namespace hcr::alp {

namespace {

bool params_same(const AlpParams& a, const AlpParams& b, double tol) {
  auto close = [tol](double x, double y) {
    return std::fabs(x - y) <= tol * std::max({1.0, std::fabs(x), std::fabs(y)});
  };
  if (a.tau.size() != b.tau.size() || a.rho.size() != b.rho.size()) return false;
  if (!close(a.eta, b.eta)) return false;
  for (std::size_t i = 0; i < a.tau.size(); ++i)
    if (!close(a.tau[i], b.tau[i])) return false;
  for (std::size_t i = 0; i < a.rho.size(); ++i)
    if (!close(a.rho[i], b.rho[i])) return false;
  return true;
}

}  // namespace

TuneResult tune_epsilon(const ProblemInstance& inst, Variant variant, const SimulateFn& simulate,
                        const TuneOptions& opts) {
  if (!simulate) throw ValidationError("epsilon tuning needs a simulation callback");

  std::map<double, AlpParams> cache;
  auto params_at = [&](double eps) -> const AlpParams& {
    auto it = cache.find(eps);
    if (it == cache.end())
      it = cache.emplace(eps, column_generation(inst, eps, variant, opts.column_gen).params)
               .first;
    return it->second;
  };
  auto same = [&](double lo, double hi) {
    return params_same(params_at(lo), params_at(hi), opts.param_tol);
  };

  TuneResult out;
  auto record = [&](double eps) -> const SimulationOutcome& {
    out.trace.push_back({eps, simulate(params_at(eps))});
    return out.trace.back().outcome;
  };

  // Beyond x_cap/(1-gamma) the parameter LP turns unbounded and no column
  // set can cover the relevance weights; probing instead of pre-computing
  // the edge keeps the 1D proxies and cap scales out of the picture.
  double edge = kInf;
  auto exists = [&](double eps) {
    if (eps >= edge) return false;
    try {
      params_at(eps);
      return true;
    } catch (const ValidationError&) {
      edge = std::min(edge, eps);
      return false;
    }
  };

  double init = 0.0;
  for (int k = 0; k < inst.K(); ++k)
    for (int l = 0; l < inst.L(); ++l) init += inst.rate(k, l);
  init /= static_cast<double>(inst.K() * inst.L());
  if (init <= 0.0) init = 1.0;
  const double ceiling = opts.ceiling_factor * init;

  double e1 = 0.0;
  double e2 = init;
  while (exists(e2) && same(e1, e2)) {
    e1 = e2;
    e2 *= 2.0;
    if (e2 > ceiling) {
      // one regime all the way up: nothing to trade off
      record(e1);
      out.ceiling_hit = true;
      out.best_epsilon = e1;
      out.best_params = params_at(e1);
      return out;
    }
  }
  if (e2 >= edge) {
    record(e1);
    out.ceiling_hit = true;
    out.best_epsilon = e1;
    out.best_params = params_at(e1);
    return out;
  }

  record(e1);

  while (true) {
    if (!exists(e2)) {
      // pull the bracket's top back inside the workable range
      double lo = e1, hi = e2;
      for (int guard = 0; guard < 100; ++guard) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (exists(mid) ? lo : hi) = mid;
      }
      if (lo - e1 <= 1e-9 * std::max(1.0, lo)) {
        out.ceiling_hit = true;
        break;
      }
      e2 = lo;
    }
    // shrink (e1, e2] to the smallest epsilon whose parameters match e2's
    for (int guard = 0; guard < 200; ++guard) {
      const double mid = 0.5 * (e1 + e2);
      if (same(mid, e2)) break;
      if (same(mid, e1))
        e1 = mid;
      else
        e2 = mid;
    }
    const double delta = e2 - e1;
    const double cur = e2;

    if (same(cur, e1)) {
      // the bracket collapsed into one regime: widen the search outward
      e1 = cur;
      e2 = cur + 2.0 * delta;
      if (e2 > ceiling) {
        out.ceiling_hit = true;
        break;
      }
      continue;
    }
    if (static_cast<int>(out.trace.size()) >= opts.max_breakpoints) {
      out.budget_exhausted = true;
      break;
    }
    const SimulationOutcome& outcome = record(cur);
    if (outcome.all_reject) break;
    e1 = cur;
    e2 = cur + delta;
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < out.trace.size(); ++i)
    if (out.trace[i].outcome.average_value < out.trace[best].outcome.average_value) best = i;
  out.best_epsilon = out.trace[best].epsilon;
  out.best_params = params_at(out.best_epsilon);
  return out;
}

}  // namespace hcr::alp
