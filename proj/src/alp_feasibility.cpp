#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "hcr/alp.hpp"
#include "hcr/common.hpp"
#include "hcr/mdp.hpp"
#include "hcr/rng.hpp"
#include "hcr/tour.hpp"

namespace hcr::alp {

namespace {

constexpr long long kPairLimit = 10'000'000;

class PairEvaluator {
 public:
  PairEvaluator(const ProblemInstance& inst, const StateSpace& space, const AlpParams& params,
                FeasibilityReport& report, bool throw_on_limit)
      : inst_(inst), space_(space), params_(params), report_(report),
        throw_on_limit_(throw_on_limit) {}

  void operator()(const State& s, const ActionPlan& a) {
    if (throw_on_limit_ && report_.pairs_checked >= kPairLimit)
      throw ValidationError("exhaustive feasibility check exceeds the pair budget");
    const std::vector<double> ex = expected_next_x(space_, inst_, s, a);
    double v = (1.0 - inst_.gamma) * params_.eta;
    for (int i = 0; i < space_.x_size(); ++i)
      v += params_.tau[static_cast<std::size_t>(i)] *
           (s.x[static_cast<std::size_t>(i)] - inst_.gamma * ex[static_cast<std::size_t>(i)]);
    for (int k = 0; k < inst_.K(); ++k)
      for (int l = 0; l < inst_.L(); ++l) {
        const int kl = space_.kl_index(k, l);
        v += params_.rho[static_cast<std::size_t>(kl)] *
             (s.y[static_cast<std::size_t>(kl)] - inst_.gamma * inst_.rate(k, l));
      }
    v -= immediate_cost_unchecked(inst_, space_, s, a);
    ++report_.pairs_checked;
    if (v > report_.max_violation) {
      report_.max_violation = v;
      report_.worst_state = s;
      report_.worst_action = a;
    }
  }

 private:
  const ProblemInstance& inst_;
  const StateSpace& space_;
  const AlpParams& params_;
  FeasibilityReport& report_;
  bool throw_on_limit_;
};

/// Route + overtime completion for a fixed (assignments, diversions) choice.
/// The completion minimizes cost at unchanged transition terms, so taking it
/// is exact when maximizing the constraint violation. Returns false when no
/// completion fits inside the shift plus overtime.
bool complete_action(const ProblemInstance& inst, const StateSpace& space, const State& s,
                     ActionPlan& a) {
  const std::vector<int> served = day_one_served(space, s, a);
  std::vector<int> visited;
  std::vector<char> seen(static_cast<std::size_t>(inst.L()), 0);
  double service = 0.0;
  for (int k = 0; k < inst.K(); ++k)
    for (int l = 0; l < inst.L(); ++l) {
      const int cnt = served[static_cast<std::size_t>(space.kl_index(k, l))];
      if (cnt < 0) return false;
      service += inst.types[static_cast<std::size_t>(k)].e * cnt;
      if (cnt > 0 && !seen[static_cast<std::size_t>(l)]) {
        seen[static_cast<std::size_t>(l)] = 1;
        visited.push_back(l);
      }
    }
  const optim::TourResult tour = optim::best_tour(inst, visited);
  const double over = tour.length + service - inst.chi;
  if (over > inst.chi_prime + 1e-9) return false;
  a.route = tour.order;
  a.overtime = std::max(0.0, over);
  return true;
}

void enumerate_all(const ProblemInstance& inst, const StateSpace& space, PairEvaluator& eval) {
  double states = 1.0;
  for (const XKey& key : space.x_keys()) states *= inst.x_cap_of(key.l) + 1;
  for (int k = 0; k < inst.K(); ++k)
    for (int l = 0; l < inst.L(); ++l) states *= inst.y_cap_of(l) + 1;
  if (states > static_cast<double>(kPairLimit))
    throw ValidationError("exhaustive feasibility check exceeds the pair budget");

  const int kl_size = space.kl_size();
  std::vector<std::vector<int>> n_slots(static_cast<std::size_t>(kl_size));
  for (int k = 0; k < inst.K(); ++k)
    for (int l = 0; l < inst.L(); ++l) {
      auto& slots = n_slots[static_cast<std::size_t>(space.kl_index(k, l))];
      for (int t = 1; t <= inst.types[static_cast<std::size_t>(k)].wait_target; ++t)
        slots.push_back(space.n_index(t, k, l));
    }

  State s = State::zero(space);
  ActionPlan a = ActionPlan::zero(space);

  // all assignment splits of y_kl over the admissible start days,
  // short splits only when the remainder may be rejected
  std::vector<std::vector<std::vector<int>>> splits(static_cast<std::size_t>(kl_size));
  auto build_splits = [&](int kl) {
    auto& out = splits[static_cast<std::size_t>(kl)];
    out.clear();
    const int parts = static_cast<int>(n_slots[static_cast<std::size_t>(kl)].size());
    std::vector<int> cur(static_cast<std::size_t>(parts), 0);
    std::function<void(int, int)> rec = [&](int idx, int remaining) {
      if (idx == parts) {
        if (inst.allow_rejection || remaining == 0) out.push_back(cur);
        return;
      }
      for (int v = 0; v <= remaining; ++v) {
        cur[static_cast<std::size_t>(idx)] = v;
        rec(idx + 1, remaining - v);
      }
      cur[static_cast<std::size_t>(idx)] = 0;
    };
    rec(0, s.y[static_cast<std::size_t>(kl)]);
  };

  std::function<void(int)> divert_rec = [&](int kl) {
    if (kl == kl_size) {
      ActionPlan full = a;
      if (complete_action(inst, space, s, full)) eval(s, full);
      return;
    }
    const int k = kl / inst.L();
    const int l = kl % inst.L();
    int day1 = a.assign[static_cast<std::size_t>(space.n_index(1, k, l))];
    for (int j = 0; j < space.max_j(); ++j) day1 += s.x_at(space, 1, k, l, j);
    for (int z = 0; z <= day1; ++z) {
      a.divert[static_cast<std::size_t>(kl)] = z;
      divert_rec(kl + 1);
    }
    a.divert[static_cast<std::size_t>(kl)] = 0;
  };

  std::function<void(int)> assign_rec = [&](int kl) {
    if (kl == kl_size) {
      divert_rec(0);
      return;
    }
    const auto& options = splits[static_cast<std::size_t>(kl)];
    const auto& slots = n_slots[static_cast<std::size_t>(kl)];
    for (const auto& opt : options) {
      int total = 0;
      for (std::size_t i = 0; i < slots.size(); ++i) {
        a.assign[static_cast<std::size_t>(slots[i])] = opt[i];
        total += opt[i];
      }
      a.reject[static_cast<std::size_t>(kl)] = s.y[static_cast<std::size_t>(kl)] - total;
      assign_rec(kl + 1);
    }
    for (int idx : slots) a.assign[static_cast<std::size_t>(idx)] = 0;
    a.reject[static_cast<std::size_t>(kl)] = 0;
  };

  // odometer over the state vector
  const int dims = space.x_size() + kl_size;
  auto cap_of = [&](int d) {
    if (d < space.x_size()) return inst.x_cap_of(space.x_keys()[static_cast<std::size_t>(d)].l);
    return inst.y_cap_of((d - space.x_size()) % inst.L());
  };
  auto cell = [&](int d) -> int& {
    if (d < space.x_size()) return s.x[static_cast<std::size_t>(d)];
    return s.y[static_cast<std::size_t>(d - space.x_size())];
  };
  while (true) {
    for (int kl = 0; kl < kl_size; ++kl) build_splits(kl);
    assign_rec(0);
    int d = 0;
    while (d < dims) {
      if (cell(d) < cap_of(d)) {
        ++cell(d);
        break;
      }
      cell(d) = 0;
      ++d;
    }
    if (d == dims) break;
  }
}

/// Serve-everything day-one completion for a hand-built pair; falls back to
/// diverting the whole day when the shift cannot absorb it.
void complete_or_divert(const ProblemInstance& inst, const StateSpace& space, const State& s,
                        ActionPlan a, PairEvaluator& eval) {
  ActionPlan serve = a;
  if (complete_action(inst, space, s, serve)) {
    eval(s, serve);
    return;
  }
  for (int k = 0; k < inst.K(); ++k)
    for (int l = 0; l < inst.L(); ++l) {
      const int kl = space.kl_index(k, l);
      int day1 = a.assign[static_cast<std::size_t>(space.n_index(1, k, l))];
      for (int j = 0; j < space.max_j(); ++j) day1 += s.x_at(space, 1, k, l, j);
      a.divert[static_cast<std::size_t>(kl)] = day1;
    }
  a.route.clear();
  a.overtime = 0.0;
  eval(s, a);
}

void extreme_pairs(const ProblemInstance& inst, const StateSpace& space, PairEvaluator& eval) {
  eval(State::zero(space), ActionPlan::zero(space));

  for (int i = 0; i < space.x_size(); ++i) {
    const XKey key = space.x_keys()[static_cast<std::size_t>(i)];
    const double e = inst.types[static_cast<std::size_t>(key.k)].e;
    if (key.t >= 2) {
      State s = State::zero(space);
      s.x[static_cast<std::size_t>(i)] = inst.x_cap_of(key.l);
      eval(s, ActionPlan::zero(space));
      continue;
    }
    // today's slot: once at the booking cap, once at what one shift can serve
    const double slack = inst.chi + inst.chi_prime - 2.0 * inst.geo.depot_dist(key.l);
    const int fits = e > 0.0 ? static_cast<int>(std::floor(slack / e + 1e-9)) : 0;
    for (int v : {inst.x_cap_of(key.l), std::clamp(fits, 0, inst.x_cap_of(key.l))}) {
      if (v <= 0) continue;
      State s = State::zero(space);
      s.x[static_cast<std::size_t>(i)] = v;
      complete_or_divert(inst, space, s, ActionPlan::zero(space), eval);
    }
  }

  for (int k = 0; k < inst.K(); ++k)
    for (int l = 0; l < inst.L(); ++l) {
      const int kl = space.kl_index(k, l);
      const int y = inst.y_cap_of(l);
      if (y <= 0) continue;
      State s = State::zero(space);
      s.y[static_cast<std::size_t>(kl)] = y;
      if (inst.allow_rejection) {
        ActionPlan rej = ActionPlan::zero(space);
        rej.reject[static_cast<std::size_t>(kl)] = y;
        eval(s, rej);
      }
      ActionPlan a = ActionPlan::zero(space);
      const int last = inst.types[static_cast<std::size_t>(k)].wait_target;
      a.assign[static_cast<std::size_t>(space.n_index(last, k, l))] = y;
      if (last == 1) {
        complete_or_divert(inst, space, s, a, eval);
      } else {
        eval(s, a);
      }
    }
}

void sampled_pairs(const ProblemInstance& inst, const StateSpace& space, PairEvaluator& eval,
                   std::uint64_t seed) {
  extreme_pairs(inst, space, eval);

  Rng rng(derive_seed(seed, {stream_tag("alp-feasibility")}));
  constexpr int kSamples = 100000;
  for (int it = 0; it < kSamples; ++it) {
    const double density = rng.uniform();
    State s = State::zero(space);
    for (int i = 0; i < space.x_size(); ++i)
      if (rng.uniform() < density)
        s.x[static_cast<std::size_t>(i)] =
            rng.uniform_int(0, inst.x_cap_of(space.x_keys()[static_cast<std::size_t>(i)].l));
    for (int k = 0; k < inst.K(); ++k)
      for (int l = 0; l < inst.L(); ++l)
        if (rng.uniform() < density)
          s.y[static_cast<std::size_t>(space.kl_index(k, l))] =
              rng.uniform_int(0, inst.y_cap_of(l));

    ActionPlan a = ActionPlan::zero(space);
    for (int k = 0; k < inst.K(); ++k)
      for (int l = 0; l < inst.L(); ++l) {
        const int kl = space.kl_index(k, l);
        const int y = s.y[static_cast<std::size_t>(kl)];
        int rest = y;
        if (inst.allow_rejection) {
          a.reject[static_cast<std::size_t>(kl)] = rng.uniform_int(0, y);
          rest = y - a.reject[static_cast<std::size_t>(kl)];
        }
        const int last = inst.types[static_cast<std::size_t>(k)].wait_target;
        for (int unit = 0; unit < rest; ++unit) {
          const int t = rng.uniform_int(1, last);
          ++a.assign[static_cast<std::size_t>(space.n_index(t, k, l))];
        }
        int day1 = a.assign[static_cast<std::size_t>(space.n_index(1, k, l))];
        for (int j = 0; j < space.max_j(); ++j) day1 += s.x_at(space, 1, k, l, j);
        a.divert[static_cast<std::size_t>(kl)] = rng.uniform_int(0, day1);
      }
    complete_or_divert(inst, space, s, a, eval);
  }
}

}  // namespace

FeasibilityReport check_feasibility(const AlpParams& params, const ProblemInstance& inst,
                                    FeasibilityMode mode, std::uint64_t seed) {
  const StateSpace space(inst);
  if (static_cast<int>(params.tau.size()) != space.x_size() ||
      static_cast<int>(params.rho.size()) != space.kl_size())
    throw ValidationError("parameter vector does not match the instance layout");

  FeasibilityReport report;
  report.mode = mode == FeasibilityMode::exhaustive ? "exhaustive" : "sampled";
  report.max_violation = -kInf;
  report.worst_state = State::zero(space);
  report.worst_action = ActionPlan::zero(space);

  PairEvaluator eval(inst, space, params, report, mode == FeasibilityMode::exhaustive);
  if (mode == FeasibilityMode::exhaustive)
    enumerate_all(inst, space, eval);
  else
    sampled_pairs(inst, space, eval, seed);

  if (report.pairs_checked == 0) report.max_violation = 0.0;
  report.feasible = report.max_violation <= 1e-6;
  return report;
}

}  // namespace hcr::alp
