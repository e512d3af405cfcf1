#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "hcr/alp.hpp"
#include "hcr/common.hpp"

namespace hcr::alp {

namespace {

/// Shared gate for the closed form and its certificate: no overtime, no
/// rejections, diversion weight at least 100x the travel weight, symmetric
/// distances, one visit duration across types.
double require_restricted_setting(const ProblemInstance& inst) {
  if (inst.chi_prime != 0.0)
    throw ValidationError("closed form requires a shift without overtime");
  if (inst.allow_rejection)
    throw ValidationError("closed form requires an instance that accepts every referral");
  if (inst.weights.z < 100.0 * inst.weights.q)
    throw ValidationError("closed form requires the diversion weight to dominate travel "
                          "(at least 100x)");
  const int nodes = inst.L() + 1;
  for (int a = 0; a < nodes; ++a)
    for (int b = a + 1; b < nodes; ++b)
      if (std::abs(inst.geo.node_dist(a, b) - inst.geo.node_dist(b, a)) > 1e-12)
        throw ValidationError("closed form requires symmetric travel times");
  const double e = inst.types.front().e;
  for (const ServiceType& svc : inst.types)
    if (std::abs(svc.e - e) > 1e-12)
      throw ValidationError("closed form requires a uniform visit duration");
  return e;
}

std::vector<int> day_one_capacity(const ProblemInstance& inst, double e) {
  std::vector<int> x_m(static_cast<std::size_t>(inst.L()));
  for (int l = 0; l < inst.L(); ++l) {
    const double slack = inst.chi - 2.0 * inst.geo.depot_dist(l);
    const int cap = static_cast<int>(std::floor(slack / e + 1e-12));
    if (cap < 1) {
      std::ostringstream msg;
      msg << "region " << l << " cannot host a single visit within the shift";
      throw ValidationError(msg.str());
    }
    x_m[static_cast<std::size_t>(l)] = cap;
  }
  return x_m;
}

}  // namespace

AlpParams closed_form_params(const ProblemInstance& inst) {
  const double e = require_restricted_setting(inst);
  const std::vector<int> x_m = day_one_capacity(inst, e);
  const StateSpace space(inst);

  AlpParams params;
  params.tau.assign(static_cast<std::size_t>(space.x_size()), 0.0);
  params.rho.assign(static_cast<std::size_t>(space.kl_size()), 0.0);

  std::vector<double> base(static_cast<std::size_t>(inst.L()));
  for (int l = 0; l < inst.L(); ++l)
    base[static_cast<std::size_t>(l)] =
        inst.weights.q * 2.0 * inst.geo.depot_dist(l) / x_m[static_cast<std::size_t>(l)];

  for (int k = 0; k < inst.K(); ++k) {
    const ServiceType& svc = inst.types[static_cast<std::size_t>(k)];
    const auto delta = delta_coefficients(inst, k);
    for (int l = 0; l < inst.L(); ++l) {
      const double b = base[static_cast<std::size_t>(l)];
      for (int t = 1; t <= inst.horizon; ++t)
        for (int j = 0; j < svc.max_visits(); ++j) {
          const int idx = space.x_index(t, k, l, j);
          if (idx >= 0)
            params.tau[static_cast<std::size_t>(idx)] =
                delta[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)] * b;
        }
      params.rho[static_cast<std::size_t>(space.kl_index(k, l))] =
          delta[static_cast<std::size_t>(svc.wait_target)][0] * b;
    }
  }

  double eta = 0.0;
  for (int k = 0; k < inst.K(); ++k)
    for (int l = 0; l < inst.L(); ++l)
      eta += params.rho[static_cast<std::size_t>(space.kl_index(k, l))] * inst.rate(k, l);
  params.eta = inst.gamma / (1.0 - inst.gamma) * eta;

  params.meta.variant = "closed-form";
  return params;
}

DualCertificate dual_certificate(const ProblemInstance& inst, const AlpParams& params) {
  const double e = require_restricted_setting(inst);
  const StateSpace space(inst);
  if (static_cast<int>(params.tau.size()) != space.x_size() ||
      static_cast<int>(params.rho.size()) != space.kl_size())
    throw ValidationError("parameter dimensions do not match the instance");

  const double g = inst.gamma;
  const double eps = params.meta.epsilon;
  DualCertificate cert;
  cert.x_m = day_one_capacity(inst, e);
  cert.beta_x.assign(static_cast<std::size_t>(space.x_size()), 0.0);
  cert.beta_n1.assign(static_cast<std::size_t>(space.kl_size()), 0.0);
  cert.beta_y.assign(static_cast<std::size_t>(space.kl_size()), 0.0);

  for (int k = 0; k < inst.K(); ++k) {
    const ServiceType& svc = inst.types[static_cast<std::size_t>(k)];
    for (int l = 0; l < inst.L(); ++l) {
      const int kl = space.kl_index(k, l);
      const double lam = inst.rate(k, l);
      const double xm = cert.x_m[static_cast<std::size_t>(l)];
      const double xcap = inst.x_cap_of(l);
      const double ycap = inst.y_cap_of(l);
      if (svc.wait_target == 1) {
        cert.beta_y[static_cast<std::size_t>(kl)] = lam / ((1.0 - g) * xm);
        cert.beta_n1[static_cast<std::size_t>(kl)] = lam / ((1.0 - g) * xm);
      } else {
        cert.beta_y[static_cast<std::size_t>(kl)] = lam / ((1.0 - g) * ycap);
      }

      // First-visit slots, latest first. The day after the last slot is the
      // start day of freshly assigned referrals, whose binding pair sits at
      // the pending-referral cap.
      for (int t = svc.wait_target - 1; t >= 1; --t) {
        const int idx = space.x_index(t, k, l, 0);
        const double next_mass =
            t + 1 <= svc.wait_target - 1
                ? xcap * cert.beta_x[static_cast<std::size_t>(space.x_index(t + 1, k, l, 0))]
                : ycap * cert.beta_y[static_cast<std::size_t>(kl)];
        cert.beta_x[static_cast<std::size_t>(idx)] =
            (eps + g * next_mass) / (t == 1 ? xm : xcap);
      }

      // Follow-up slots, level by level. The feeder of the day-h slot is the
      // day-1 mass of the previous level (plus same-day assignments at the
      // first level), scaled by the continuation probability.
      for (int j = 1; j < svc.max_visits(); ++j) {
        double fed = j == 1 ? cert.beta_n1[static_cast<std::size_t>(kl)] : 0.0;
        const int prev = space.x_index(1, k, l, j - 1);
        if (prev >= 0) fed += cert.beta_x[static_cast<std::size_t>(prev)];
        const double prev_mass = xm * fed;
        const int idx_h = space.x_index(svc.h, k, l, j);
        cert.beta_x[static_cast<std::size_t>(idx_h)] =
            (eps + g * inst.p(k, j + 1) * prev_mass) / (svc.h == 1 ? xm : xcap);
        for (int t = svc.h - 1; t >= 2; --t) {
          const int idx = space.x_index(t, k, l, j);
          const double above =
              cert.beta_x[static_cast<std::size_t>(space.x_index(t + 1, k, l, j))];
          cert.beta_x[static_cast<std::size_t>(idx)] = (eps + g * xcap * above) / xcap;
        }
        if (svc.h >= 2) {
          const int idx = space.x_index(1, k, l, j);
          const double above =
              cert.beta_x[static_cast<std::size_t>(space.x_index(2, k, l, j))];
          cert.beta_x[static_cast<std::size_t>(idx)] = (eps + g * xcap * above) / xm;
        }
      }
    }
  }

  double sum_x = 0.0, sum_day1 = 0.0;
  for (int i = 0; i < space.x_size(); ++i) {
    sum_x += cert.beta_x[static_cast<std::size_t>(i)];
    if (space.x_keys()[static_cast<std::size_t>(i)].t == 1)
      sum_day1 += cert.beta_x[static_cast<std::size_t>(i)];
  }
  double sum_n1 = 0.0, sum_y2 = 0.0, sum_n_all = 0.0;
  for (int k = 0; k < inst.K(); ++k)
    for (int l = 0; l < inst.L(); ++l) {
      const int kl = space.kl_index(k, l);
      sum_n_all += cert.beta_n1[static_cast<std::size_t>(kl)];
      if (inst.types[static_cast<std::size_t>(k)].wait_target == 1)
        sum_n1 += cert.beta_n1[static_cast<std::size_t>(kl)];
      else
        sum_y2 += cert.beta_y[static_cast<std::size_t>(kl)];
    }

  cert.condition_lhs = sum_day1 + sum_n_all;
  cert.condition_rhs = 1.0 / (1.0 - inst.gamma);
  cert.beta0 = cert.condition_rhs - (sum_x + sum_n1 + sum_y2);
  cert.beta0_limit = cert.condition_rhs - cert.condition_lhs;
  cert.valid = cert.condition_lhs < cert.condition_rhs && cert.beta0_limit >= 0.0;
  return cert;
}

Projection1D project_to_1d(const ProblemInstance& inst) {
  Projection1D out;
  std::vector<double> distances;
  for (int l = 0; l < inst.L(); ++l) {
    const double d = inst.geo.depot_dist(l);
    const auto it = std::find_if(distances.begin(), distances.end(),
                                 [d](double v) { return std::abs(v - d) <= 1e-9; });
    if (it == distances.end()) distances.push_back(d);
  }
  std::sort(distances.begin(), distances.end());

  const int classes = static_cast<int>(distances.size());
  out.class_of.assign(static_cast<std::size_t>(inst.L()), -1);
  out.members.assign(static_cast<std::size_t>(classes), {});
  for (int l = 0; l < inst.L(); ++l) {
    const double d = inst.geo.depot_dist(l);
    for (int c = 0; c < classes; ++c)
      if (std::abs(distances[static_cast<std::size_t>(c)] - d) <= 1e-9) {
        out.class_of[static_cast<std::size_t>(l)] = c;
        out.members[static_cast<std::size_t>(c)].push_back(l);
        break;
      }
  }

  out.proxy = inst;
  out.proxy.geo = build_array1d_geometry(distances);
  out.proxy.lambda.assign(static_cast<std::size_t>(inst.K()),
                          std::vector<double>(static_cast<std::size_t>(classes), 0.0));
  out.proxy.cap_scale.assign(static_cast<std::size_t>(classes), 0);
  for (int l = 0; l < inst.L(); ++l) {
    const int c = out.class_of[static_cast<std::size_t>(l)];
    for (int k = 0; k < inst.K(); ++k)
      out.proxy.lambda[static_cast<std::size_t>(k)][static_cast<std::size_t>(c)] +=
          inst.rate(k, l);
    out.proxy.cap_scale[static_cast<std::size_t>(c)] +=
        inst.cap_scale[static_cast<std::size_t>(l)];
  }
  out.proxy.refresh_derived();
  return out;
}

}  // namespace hcr::alp
