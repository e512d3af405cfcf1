#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <vector>

#include "hcr/common.hpp"
#include "hcr/mdp.hpp"
#include "hcr/policies.hpp"

namespace hcr::policies {

namespace {

using alp::AlpParams;

void require_dims(const AlpParams& params, const StateSpace& space) {
  if (static_cast<int>(params.tau.size()) != space.x_size() ||
      static_cast<int>(params.rho.size()) != space.kl_size())
    throw ValidationError("parameter vector does not match the instance layout");
}

/// Divert-everything fallback: accept every referral into its latest day,
/// hand all of today's visits to the on-call nurse. Always feasible, and a
/// warm incumbent that keeps branch-and-bound from starting empty-handed.
std::vector<double> warm_start(const alp::SubproblemModel& sub, const ProblemInstance& inst,
                               const StateSpace& space, const State& s) {
  std::vector<double> v(static_cast<std::size_t>(sub.model.num_vars()), 0.0);
  for (int i = 0; i < space.x_size(); ++i)
    v[static_cast<std::size_t>(sub.x_var[static_cast<std::size_t>(i)])] =
        s.x[static_cast<std::size_t>(i)];
  for (int k = 0; k < inst.K(); ++k)
    for (int l = 0; l < inst.L(); ++l) {
      const int kl = space.kl_index(k, l);
      const int y = s.y[static_cast<std::size_t>(kl)];
      v[static_cast<std::size_t>(sub.y_var[static_cast<std::size_t>(kl)])] = y;
      const int last = inst.types[static_cast<std::size_t>(k)].wait_target;
      v[static_cast<std::size_t>(sub.n_var[static_cast<std::size_t>(space.n_index(last, k, l))])] +=
          y;
      int day1 = last == 1 ? y : 0;
      for (int j = 0; j < space.max_j(); ++j) day1 += s.x_at(space, 1, k, l, j);
      v[static_cast<std::size_t>(sub.z_var[static_cast<std::size_t>(kl)])] = day1;
    }
  for (int l = 0; l < inst.L(); ++l)
    v[static_cast<std::size_t>(sub.f_var[static_cast<std::size_t>(l)])] = inst.geo.depot_dist(l);
  return v;
}

std::string describe_choices(const ProblemInstance& inst, const StateSpace& space,
                             const State& s, const ActionPlan& a, int k, int l) {
  const int kl = space.kl_index(k, l);
  std::ostringstream line;
  line << "type " << k << " region " << l << ": " << s.y[static_cast<std::size_t>(kl)]
       << " referral(s) ->";
  if (a.reject[static_cast<std::size_t>(kl)] > 0)
    line << " reject " << a.reject[static_cast<std::size_t>(kl)];
  for (int t = 1; t <= inst.types[static_cast<std::size_t>(k)].wait_target; ++t) {
    const int n = a.assign[static_cast<std::size_t>(space.n_index(t, k, l))];
    if (n > 0) line << " day" << t << " x" << n;
  }
  return line.str();
}

}  // namespace

PolicyDecision alp_action(const State& s, const AlpParams& params, const ProblemInstance& inst,
                          long mip_max_nodes) {
  const auto start = std::chrono::steady_clock::now();
  const StateSpace space(inst);
  require_dims(params, space);
  validate_state(space, inst, s);

  // At a fixed state the pricing model's action-dependent terms are exactly
  // the one-step objective, so reuse it with the state variables pinned.
  const auto weights = alp::StateRelevanceWeights::uniform(inst, space, 0.0);
  alp::SubproblemModel sub = alp::build_subproblem(params, weights, inst, alp::Variant::full);
  for (int i = 0; i < space.x_size(); ++i) {
    const auto var = static_cast<std::size_t>(sub.x_var[static_cast<std::size_t>(i)]);
    sub.model.lo[var] = sub.model.hi[var] = s.x[static_cast<std::size_t>(i)];
  }
  for (int kl = 0; kl < space.kl_size(); ++kl) {
    const auto var = static_cast<std::size_t>(sub.y_var[static_cast<std::size_t>(kl)]);
    sub.model.lo[var] = sub.model.hi[var] = s.y[static_cast<std::size_t>(kl)];
  }

  const std::vector<double> incumbent = warm_start(sub, inst, space, s);
  optim::MipOptions opts;
  opts.max_nodes = mip_max_nodes;
  opts.initial_solution = &incumbent;
  const optim::SolveResult solved = optim::solve_mip(sub.model, opts);
  if (solved.status != optim::SolveStatus::optimal &&
      solved.status != optim::SolveStatus::node_limit)
    throw ValidationError("policy MIP did not produce an action");
  const alp::Column col = alp::decode_subproblem(sub, inst, space, solved.x);
  if (!(col.state == s)) throw ValidationError("policy MIP drifted from the given state");

  PolicyDecision decision;
  decision.action = col.action;
  decision.heuristic = solved.status == optim::SolveStatus::node_limit;
  const auto tags = check_action(space, inst, s, decision.action);
  if (!tags.empty()) {
    std::string joined = "policy action infeasible:";
    for (const auto& t : tags) joined += " " + t;
    throw ValidationError(joined);
  }

  // Report the approximate cost-to-go rather than the shifted MIP value.
  const std::vector<double> next = expected_next_x(space, inst, s, decision.action);
  double value = params.eta;
  for (int i = 0; i < space.x_size(); ++i)
    value += params.tau[static_cast<std::size_t>(i)] * next[static_cast<std::size_t>(i)];
  for (int k = 0; k < inst.K(); ++k)
    for (int l = 0; l < inst.L(); ++l)
      value += params.rho[static_cast<std::size_t>(space.kl_index(k, l))] * inst.rate(k, l);
  decision.objective =
      immediate_cost_unchecked(inst, space, s, decision.action) + inst.gamma * value;

  for (int k = 0; k < inst.K(); ++k)
    for (int l = 0; l < inst.L(); ++l)
      if (s.y[static_cast<std::size_t>(space.kl_index(k, l))] > 0)
        decision.choices.push_back(describe_choices(inst, space, s, decision.action, k, l));
  decision.solve_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return decision;
}

SbTuneResult tune_sb_threshold(const SbEvaluateFn& evaluate, std::vector<int> candidates,
                               const std::vector<std::uint64_t>& seeds) {
  if (!evaluate) throw ValidationError("threshold tuning needs an evaluation callback");
  if (seeds.empty()) throw ValidationError("threshold tuning needs at least one seed");
  if (candidates.empty())
    for (int c = 0; c <= 100; c += 10) candidates.push_back(c);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  SbTuneResult out;
  double best = kInf;
  for (const int threshold : candidates) {
    double total = 0.0;
    for (const std::uint64_t seed : seeds) total += evaluate(threshold, seed);
    const double mean = total / static_cast<double>(seeds.size());
    out.grid.emplace_back(threshold, mean);
    if (mean < best) {
      best = mean;
      out.best_threshold = threshold;
    }
  }
  return out;
}

std::string label_name(RegionLabel label) {
  switch (label) {
    case RegionLabel::always_accept: return "always-accept";
    case RegionLabel::maybe: return "maybe";
    case RegionLabel::always_reject: return "always-reject";
  }
  return "?";
}

std::vector<RegionLabel> classify_regions(const alp::AlpParams& params,
                                          const ProblemInstance& inst) {
  const StateSpace space(inst);
  require_dims(params, space);
  std::vector<RegionLabel> labels(static_cast<std::size_t>(space.kl_size()),
                                  RegionLabel::maybe);
  for (int k = 0; k < inst.K(); ++k) {
    const ServiceType& type = inst.types[static_cast<std::size_t>(k)];
    const double reject = inst.reject_cost[static_cast<std::size_t>(k)];
    for (int l = 0; l < inst.L(); ++l) {
      // cheapest booking choices the policy could take: serve on day 1 and
      // pay only the discounted follow-up price, or book a later-day slot
      double day1 = 0.0;
      const int follow = space.x_index(type.h, k, l, 1);
      if (follow >= 0)
        day1 = inst.gamma * inst.p(k, 2) * params.tau[static_cast<std::size_t>(follow)];
      double later = kInf;
      for (int t = 1; t <= type.wait_target - 1; ++t)
        later = std::min(later,
                         inst.gamma * params.tau[static_cast<std::size_t>(
                                          space.x_index(t, k, l, 0))]);
      RegionLabel label = RegionLabel::maybe;
      if (later < reject)
        label = RegionLabel::always_accept;
      else if (std::min(day1, later) > reject)
        label = RegionLabel::always_reject;
      labels[static_cast<std::size_t>(space.kl_index(k, l))] = label;
    }
  }
  return labels;
}

}  // namespace hcr::policies
