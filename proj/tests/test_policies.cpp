#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <json.hpp>

#include "hcr/alp.hpp"
#include "hcr/common.hpp"
#include "hcr/instance.hpp"
#include "hcr/layout.hpp"
#include "hcr/mdp.hpp"
#include "hcr/policies.hpp"
#include "hcr/rng.hpp"
#include "hcr/tour.hpp"

using namespace hcr;
using namespace hcr::policies;
using nlohmann::json;

namespace {

bool close(double a, double b, double tol = 1e-9) { return std::fabs(a - b) <= tol; }

// Single region, same-day starts, at most two visits per patient.
ProblemInstance same_day_toy() {
  return load_instance(json{
      {"geometry", {{"shape", "array1d"}, {"depot_distances", {0.25}}}},
      {"services",
       {{{"h", 1}, {"e", 1.0}, {"T", 1}, {"dist", {{"kind", "uniform"}, {"max", 2}}}}}},
      {"arrivals", {{"mode", "explicit"}, {"matrix", {{0.4}}}}},
      {"shift", {{"chi", 2.0}, {"chi_prime", 1.0}}},
      {"weights", {{"r", 5.0}, {"z", 10.0}, {"u", 2.0}, {"q", 0.1}}},
      {"gamma", 0.9},
      {"caps", {{"x_max", 2}, {"y_max", 2}}}});
}

// Single region, starts up to two days out, repeat visits two days apart.
ProblemInstance two_day_toy() {
  return load_instance(json{
      {"geometry", {{"shape", "array1d"}, {"depot_distances", {0.25}}}},
      {"services",
       {{{"h", 2}, {"e", 1.0}, {"T", 2}, {"dist", {{"kind", "uniform"}, {"max", 2}}}}}},
      {"arrivals", {{"mode", "explicit"}, {"matrix", {{0.3}}}}},
      {"shift", {{"chi", 2.0}, {"chi_prime", 1.0}}},
      {"weights", {{"r", 5.0}, {"z", 10.0}, {"u", 2.0}, {"q", 0.1}}},
      {"gamma", 0.9},
      {"caps", {{"x_max", 2}, {"y_max", 2}}}});
}

// Three regions at distances 0.2 / 0.2 / 0.35, tight afternoon shift.
ProblemInstance classes_toy() {
  return load_instance(json{
      {"geometry", {{"shape", "array1d"}, {"depot_distances", {0.2, 0.2, 0.35}}}},
      {"services",
       {{{"h", 1}, {"e", 0.6}, {"T", 1}, {"dist", {{"kind", "uniform"}, {"max", 2}}}}}},
      {"arrivals", {{"mode", "explicit"}, {"matrix", {{0.25, 0.15, 0.2}}}}},
      {"shift", {{"chi", 3.0}, {"chi_prime", 1.0}}},
      {"weights", {{"r", 5.0}, {"z", 10.0}, {"u", 2.0}, {"q", 0.1}}},
      {"gamma", 0.9},
      {"caps", {{"x_max", 2}, {"y_max", 2}}}});
}

// One far region, deterministic two-visit patients, roomy shift. The chain
// arithmetic of the myopic policy is small enough to do by hand here.
ProblemInstance hand_instance(double travel_weight, double reject_weight) {
  return load_instance(json{
      {"geometry", {{"shape", "array1d"}, {"depot_distances", {1.0}}}},
      {"services",
       {{{"h", 1}, {"e", 1.0}, {"T", 2}, {"dist", {{"kind", "deterministic"}, {"mean", 2.0}}}}}},
      {"arrivals", {{"mode", "explicit"}, {"matrix", {{0.2}}}}},
      {"shift", {{"chi", 8.0}, {"chi_prime", 1.0}}},
      {"weights",
       {{"r", reject_weight}, {"z", 10.0}, {"u", 2.0}, {"q", travel_weight}}},
      {"gamma", 0.9},
      {"caps", {{"x_max", 3}, {"y_max", 3}}}});
}

// Two regions, no arrivals ever: scenario sampling degenerates.
ProblemInstance silent_toy() {
  return load_instance(json{
      {"geometry", {{"shape", "array1d"}, {"depot_distances", {0.3, 0.5}}}},
      {"services",
       {{{"h", 1}, {"e", 1.0}, {"T", 2}, {"dist", {{"kind", "uniform"}, {"max", 2}}}}}},
      {"arrivals", {{"mode", "explicit"}, {"matrix", {{0.0, 0.0}}}}},
      {"shift", {{"chi", 4.0}, {"chi_prime", 1.0}}},
      {"weights", {{"r", 5.0}, {"z", 10.0}, {"u", 2.0}, {"q", 0.1}}},
      {"gamma", 0.9},
      {"caps", {{"x_max", 2}, {"y_max", 2}}}});
}

// No overtime, mandatory acceptance, travel-dominated diversion weight:
// the setting where the parameter vector has a closed form.
ProblemInstance restricted_toy() {
  return load_instance(json{
      {"geometry", {{"shape", "array1d"}, {"depot_distances", {0.25, 0.4}}}},
      {"services",
       {{{"h", 1}, {"e", 0.5}, {"T", 3}, {"dist", {{"kind", "uniform"}, {"max", 2}}}}}},
      {"arrivals", {{"mode", "explicit"}, {"matrix", {{0.3, 0.2}}}}},
      {"shift", {{"chi", 8.0}, {"chi_prime", 0.0}}},
      {"weights", {{"r", 5.0}, {"z", 10.0}, {"u", 2.0}, {"q", 0.1}}},
      {"gamma", 0.9},
      {"caps", {{"x_max", 3}, {"y_max", 3}}},
      {"allow_rejection", false}});
}

State random_state(const ProblemInstance& inst, const StateSpace& space, Rng& rng) {
  State s = State::zero(space);
  for (int i = 0; i < space.x_size(); ++i) {
    const XKey key = space.x_keys()[static_cast<std::size_t>(i)];
    s.x[static_cast<std::size_t>(i)] = rng.uniform_int(0, inst.x_cap_of(key.l));
  }
  for (int k = 0; k < inst.K(); ++k)
    for (int l = 0; l < inst.L(); ++l)
      s.y[static_cast<std::size_t>(space.kl_index(k, l))] =
          rng.uniform_int(0, inst.y_cap_of(l));
  return s;
}

alp::AlpParams random_params(const ProblemInstance&, const StateSpace& space, Rng& rng) {
  alp::AlpParams p;
  p.eta = 10.0 * (rng.uniform() - 0.5);
  p.tau.resize(static_cast<std::size_t>(space.x_size()));
  for (double& v : p.tau) v = 3.0 * rng.uniform();
  p.rho.resize(static_cast<std::size_t>(space.kl_size()));
  for (double& v : p.rho) v = 3.0 * rng.uniform();
  return p;
}

// One-step objective under a parameter vector: today's cost plus the
// discounted parameter value of the expected next state.
double policy_objective(const ProblemInstance& inst, const StateSpace& space, const State& s,
                        const ActionPlan& a, const alp::AlpParams& params) {
  double value = params.eta;
  const std::vector<double> next = expected_next_x(space, inst, s, a);
  for (int i = 0; i < space.x_size(); ++i)
    value += params.tau[static_cast<std::size_t>(i)] * next[static_cast<std::size_t>(i)];
  for (int k = 0; k < inst.K(); ++k)
    for (int l = 0; l < inst.L(); ++l)
      value += params.rho[static_cast<std::size_t>(space.kl_index(k, l))] * inst.rate(k, l);
  return immediate_cost_unchecked(inst, space, s, a) + inst.gamma * value;
}

// Visit every feasible action of a state, routes taken as the best tour
// over the served regions and overtime at its minimum.
void for_each_action(const ProblemInstance& inst, const StateSpace& space, const State& s,
                     const std::function<void(const ActionPlan&)>& fn) {
  ActionPlan a = ActionPlan::zero(space);

  std::function<void(int)> pick_divert = [&](int kl) {
    if (kl == space.kl_size()) {
      std::vector<int> regions;
      double hours = 0.0;
      for (int k = 0; k < inst.K(); ++k)
        for (int l = 0; l < inst.L(); ++l) {
          int served = a.assign_at(space, 1, k, l) -
                       a.divert[static_cast<std::size_t>(space.kl_index(k, l))];
          for (int j = 0; j < space.max_j(); ++j) served += s.x_at(space, 1, k, l, j);
          if (served > 0) {
            if (std::find(regions.begin(), regions.end(), l) == regions.end())
              regions.push_back(l);
            hours += served * inst.types[static_cast<std::size_t>(k)].e;
          }
        }
      const optim::TourResult tour = optim::best_tour(inst, regions);
      const double len = tour.length + hours;
      const double over = std::max(0.0, len - inst.chi);
      if (over > inst.chi_prime + 1e-9) return;
      a.route = tour.order;
      a.overtime = over;
      fn(a);
      a.route.clear();
      a.overtime = 0.0;
      return;
    }
    const int k = kl / inst.L(), l = kl % inst.L();
    int day1 = a.assign_at(space, 1, k, l);
    for (int j = 0; j < space.max_j(); ++j) day1 += s.x_at(space, 1, k, l, j);
    for (int d = 0; d <= day1; ++d) {
      a.divert[static_cast<std::size_t>(kl)] = d;
      pick_divert(kl + 1);
    }
    a.divert[static_cast<std::size_t>(kl)] = 0;
  };

  std::function<void(int)> pick_assign = [&](int kl) {
    if (kl == space.kl_size()) {
      pick_divert(0);
      return;
    }
    const int k = kl / inst.L(), l = kl % inst.L();
    const int target = inst.types[static_cast<std::size_t>(k)].wait_target;
    std::function<void(int, int)> comp = [&](int t, int left) {
      if (t > target) {
        if (left > 0 && !inst.allow_rejection) return;
        a.reject[static_cast<std::size_t>(kl)] = left;
        pick_assign(kl + 1);
        a.reject[static_cast<std::size_t>(kl)] = 0;
        return;
      }
      const int idx = space.n_index(t, k, l);
      for (int n = 0; n <= left; ++n) {
        a.assign[static_cast<std::size_t>(idx)] = n;
        comp(t + 1, left - n);
      }
      a.assign[static_cast<std::size_t>(idx)] = 0;
    };
    comp(1, s.y[static_cast<std::size_t>(kl)]);
  };

  pick_assign(0);
}

int total(const std::vector<int>& v) {
  int sum = 0;
  for (int x : v) sum += x;
  return sum;
}

}  // namespace

TEST_CASE("policies: alp action on the empty state is empty") {
  for (const auto& inst : {same_day_toy(), two_day_toy()}) {
    const StateSpace space(inst);
    Rng rng(derive_seed(20260816, {stream_tag("alp-empty")}));
    const alp::AlpParams params = random_params(inst, space, rng);
    const State s = State::zero(space);
    const PolicyDecision d = alp_action(s, params, inst);
    CHECK(total(d.action.reject) == 0);
    CHECK(total(d.action.assign) == 0);
    CHECK(total(d.action.divert) == 0);
    CHECK(d.action.route.empty());
    CHECK(close(d.action.overtime, 0.0));
    CHECK_FALSE(d.heuristic);
    CHECK(d.choices.empty());
    double constant = params.eta;
    for (int k = 0; k < inst.K(); ++k)
      for (int l = 0; l < inst.L(); ++l)
        constant +=
            params.rho[static_cast<std::size_t>(space.kl_index(k, l))] * inst.rate(k, l);
    CHECK(close(d.objective, inst.gamma * constant, 1e-9));
  }
}

TEST_CASE("policies: alp action minimizes the one-step parameter objective") {
  for (const auto& inst : {same_day_toy(), two_day_toy()}) {
    const StateSpace space(inst);
    Rng rng(derive_seed(20260816, {stream_tag("alp-enum")}));
    for (int rep = 0; rep < 12; ++rep) {
      const alp::AlpParams params = random_params(inst, space, rng);
      const State s = random_state(inst, space, rng);
      double best = kInf;
      for_each_action(inst, space, s, [&](const ActionPlan& a) {
        best = std::min(best, policy_objective(inst, space, s, a, params));
      });
      const PolicyDecision d = alp_action(s, params, inst);
      CHECK(check_action(space, inst, s, d.action).empty());
      CHECK(close(d.objective, policy_objective(inst, space, s, d.action, params), 1e-9));
      CHECK(close(d.objective, best, 1e-6));
    }
  }
}

TEST_CASE("policies: alp action follows the acceptance classification") {
  const auto inst = two_day_toy();
  const StateSpace space(inst);
  const int slot10 = space.x_index(1, 0, 0, 0);
  const int slot21 = space.x_index(2, 0, 0, 1);
  REQUIRE(slot10 >= 0);
  REQUIRE(slot21 >= 0);
  // Rejecting costs 5 * 1.5 visits * 1h = 7.5.

  alp::AlpParams cheap;
  cheap.eta = 0.0;
  cheap.tau.assign(static_cast<std::size_t>(space.x_size()), 2.0);
  cheap.rho.assign(static_cast<std::size_t>(space.kl_size()), 0.0);
  CHECK(classify_regions(cheap, inst) ==
        std::vector<RegionLabel>{RegionLabel::always_accept});

  alp::AlpParams dear;
  dear.eta = 0.0;
  dear.tau.assign(static_cast<std::size_t>(space.x_size()), 100.0);
  dear.rho.assign(static_cast<std::size_t>(space.kl_size()), 0.0);
  CHECK(classify_regions(dear, inst) ==
        std::vector<RegionLabel>{RegionLabel::always_reject});

  alp::AlpParams mixed;
  mixed.eta = 0.0;
  mixed.tau.assign(static_cast<std::size_t>(space.x_size()), 0.0);
  mixed.rho.assign(static_cast<std::size_t>(space.kl_size()), 0.0);
  mixed.tau[static_cast<std::size_t>(slot10)] = 100.0;  // later-day price high
  // day-1 price stays zero, so neither proposition condition holds
  CHECK(classify_regions(mixed, inst) == std::vector<RegionLabel>{RegionLabel::maybe});

  for (int y = 1; y <= 2; ++y) {
    State s = State::zero(space);
    s.y[0] = y;
    CHECK(total(alp_action(s, cheap, inst).action.reject) == 0);
    CHECK(total(alp_action(s, dear, inst).action.reject) == y);
  }

  // Random parameter vectors never contradict their own labels.
  Rng rng(derive_seed(20260816, {stream_tag("alp-labels")}));
  for (int rep = 0; rep < 20; ++rep) {
    alp::AlpParams params = random_params(inst, space, rng);
    for (double& v : params.tau) v *= 5.0;
    const auto labels = classify_regions(params, inst);
    State s = State::zero(space);
    s.y[0] = 1 + rep % 2;
    const int rejected = total(alp_action(s, params, inst).action.reject);
    if (labels[0] == RegionLabel::always_accept) CHECK(rejected == 0);
    if (labels[0] == RegionLabel::always_reject) CHECK(rejected == s.y[0]);
  }
}

TEST_CASE("policies: geometric prices book day one or the wait target") {
  const auto inst = restricted_toy();
  const StateSpace space(inst);
  const alp::AlpParams params = alp::closed_form_params(inst);
  Rng rng(derive_seed(20260816, {stream_tag("alp-geometric")}));
  for (int rep = 0; rep < 10; ++rep) {
    State s = random_state(inst, space, rng);
    const PolicyDecision d = alp_action(s, params, inst);
    CHECK(check_action(space, inst, s, d.action).empty());
    for (int k = 0; k < inst.K(); ++k)
      for (int l = 0; l < inst.L(); ++l) {
        const int target = inst.types[static_cast<std::size_t>(k)].wait_target;
        for (int t = 2; t <= target - 1; ++t)
          CHECK(d.action.assign_at(space, t, k, l) == 0);
      }
  }
}

TEST_CASE("policies: label names") {
  CHECK(label_name(RegionLabel::always_accept) == "always-accept");
  CHECK(label_name(RegionLabel::maybe) == "maybe");
  CHECK(label_name(RegionLabel::always_reject) == "always-reject");
}

TEST_CASE("policies: classification edge cases") {
  // Same-day-only service: no later-day slot exists, so a zero price means
  // neither sure acceptance nor sure rejection.
  const auto inst = same_day_toy();
  const StateSpace space(inst);
  alp::AlpParams zero;
  zero.eta = 0.0;
  zero.tau.assign(static_cast<std::size_t>(space.x_size()), 0.0);
  zero.rho.assign(static_cast<std::size_t>(space.kl_size()), 0.0);
  CHECK(classify_regions(zero, inst) == std::vector<RegionLabel>{RegionLabel::maybe});

  // Closed-form prices grow with depot distance, so labels can only get
  // stricter as regions move outward.
  const auto far = restricted_toy();
  const auto labels = classify_regions(alp::closed_form_params(far), far);
  REQUIRE(labels.size() == 2);
  CHECK(static_cast<int>(labels[0]) <= static_cast<int>(labels[1]));
}

TEST_CASE("policies: myopic leaves a referral-free state alone") {
  const auto inst = same_day_toy();
  const StateSpace space(inst);
  State s = State::zero(space);
  s.x[static_cast<std::size_t>(space.x_index(1, 0, 0, 1))] = 2;
  const PolicyDecision d = myopic_action(s, inst);
  CHECK(check_action(space, inst, s, d.action).empty());
  CHECK(total(d.action.reject) == 0);
  CHECK(total(d.action.assign) == 0);
  CHECK(total(d.action.divert) == 0);
  CHECK(d.action.route == std::vector<int>{0});
  CHECK(close(d.action.overtime, 0.5));  // 2 visits + 0.5h travel against chi = 2
  CHECK(close(d.objective, 2.0 * 0.5 + 0.1 * 0.5));  // overtime + travel weights
  CHECK(d.choices.empty());
}

TEST_CASE("policies: myopic sheds the farthest region first when day one overflows") {
  const auto inst = classes_toy();
  const StateSpace space(inst);
  State s = State::zero(space);
  for (int l = 0; l < 3; ++l)
    s.x[static_cast<std::size_t>(space.x_index(1, 0, l, 1))] = 2;
  const PolicyDecision d = myopic_action(s, inst);
  CHECK(check_action(space, inst, s, d.action).empty());
  const int dropped = total(d.action.divert);
  CHECK(dropped > 0);
  // Diversions hit region 2 (distance 0.35) before the 0.2-distance pair.
  if (d.action.divert[2] < 2) {
    CHECK(d.action.divert[0] == 0);
    CHECK(d.action.divert[1] == 0);
  }
  const double len = route_travel_time(inst, d.action.route) + 0.6 * (6 - dropped);
  CHECK(len <= inst.chi + inst.chi_prime + 1e-9);
  CHECK(close(d.action.overtime, std::max(0.0, len - inst.chi)));
}

TEST_CASE("policies: myopic books the cheapest discounted day") {
  // Two-visit chains from a single region 1h out; day 1 would cost
  // q * 2 * (1 + 0.9), starting tomorrow instead costs 0.9 times that.
  const auto inst = hand_instance(1.0, 5.0);
  const StateSpace space(inst);
  State s = State::zero(space);
  s.y[0] = 1;
  const PolicyDecision d = myopic_action(s, inst);
  CHECK(total(d.action.reject) == 0);
  CHECK(d.action.assign_at(space, 1, 0, 0) == 0);
  CHECK(d.action.assign_at(space, 2, 0, 0) == 1);
  REQUIRE(d.choices.size() == 1);
  CHECK(d.choices[0].find("start day 2") != std::string::npos);
  // Nothing happens today: referral waits, no route.
  CHECK(d.action.route.empty());
  CHECK(close(d.objective, 0.0));
}

TEST_CASE("policies: myopic rejects when rejection is cheapest") {
  const auto inst = hand_instance(1.0, 0.001);  // rejecting costs 0.001 * 2 * 1h
  const StateSpace space(inst);
  State s = State::zero(space);
  s.y[0] = 1;
  const PolicyDecision d = myopic_action(s, inst);
  CHECK(total(d.action.reject) == 1);
  CHECK(total(d.action.assign) == 0);
  REQUIRE(d.choices.size() == 1);
  CHECK(d.choices[0].find("reject") != std::string::npos);
  CHECK(close(d.objective, 0.001 * 2.0));
}

TEST_CASE("policies: myopic picks the earliest day on ties") {
  // Zero travel weight and a roomy shift price every day at exactly zero.
  const auto inst = hand_instance(0.0, 5.0);
  const StateSpace space(inst);
  State s = State::zero(space);
  s.y[0] = 1;
  const PolicyDecision d = myopic_action(s, inst);
  CHECK(d.action.assign_at(space, 1, 0, 0) == 1);
  CHECK(d.action.route == std::vector<int>{0});
}

TEST_CASE("policies: scenario policy threshold extremes") {
  const auto inst = two_day_toy();
  const StateSpace space(inst);
  State s = State::zero(space);
  s.y[0] = 2;

  SbConfig cfg;
  cfg.scenarios = 3;
  cfg.threshold = 0;
  Rng accept_rng(derive_seed(20260816, {stream_tag("sb-accept")}));
  const PolicyDecision all_in = sb_action(s, inst, cfg, accept_rng);
  CHECK(check_action(space, inst, s, all_in.action).empty());
  CHECK(total(all_in.action.reject) == 0);
  CHECK(total(all_in.action.assign) == 2);

  cfg.threshold = cfg.scenarios + 1;
  Rng reject_rng(derive_seed(20260816, {stream_tag("sb-reject")}));
  const PolicyDecision all_out = sb_action(s, inst, cfg, reject_rng);
  CHECK(total(all_out.action.reject) == 2);
  CHECK(total(all_out.action.assign) == 0);
}

TEST_CASE("policies: scenario policy is deterministic given the stream") {
  const auto inst = classes_toy();
  const StateSpace space(inst);
  Rng state_rng(derive_seed(20260816, {stream_tag("sb-determinism")}));
  for (int rep = 0; rep < 3; ++rep) {
    const State s = random_state(inst, space, state_rng);
    SbConfig cfg;
    cfg.scenarios = 5;
    cfg.threshold = 2;
    Rng a(derive_seed(7, {stream_tag("sb"), static_cast<std::uint64_t>(rep)}));
    Rng b(derive_seed(7, {stream_tag("sb"), static_cast<std::uint64_t>(rep)}));
    const PolicyDecision da = sb_action(s, inst, cfg, a);
    const PolicyDecision db = sb_action(s, inst, cfg, b);
    CHECK(check_action(space, inst, s, da.action).empty());
    CHECK(da.action.reject == db.action.reject);
    CHECK(da.action.assign == db.action.assign);
    CHECK(da.action.divert == db.action.divert);
    CHECK(da.action.route == db.action.route);
    CHECK(close(da.action.overtime, db.action.overtime));
  }
}

TEST_CASE("policies: scenario policy without arrivals matches myopic") {
  const auto inst = silent_toy();
  const StateSpace space(inst);
  for (int l = 0; l < 2; ++l)
    for (int y = 1; y <= 2; ++y) {
      State s = State::zero(space);
      s.y[static_cast<std::size_t>(space.kl_index(0, l))] = y;
      s.x[static_cast<std::size_t>(space.x_index(1, 0, 0, 1))] = 1;

      const PolicyDecision myo = myopic_action(s, inst);
      SbConfig cfg;
      cfg.scenarios = 1;
      cfg.threshold = 1;
      Rng rng(derive_seed(20260816, {stream_tag("sb-degenerate")}));
      const PolicyDecision sb = sb_action(s, inst, cfg, rng);
      CHECK(sb.action.reject == myo.action.reject);
      CHECK(sb.action.assign == myo.action.assign);
      CHECK(sb.action.divert == myo.action.divert);
      CHECK(sb.action.route == myo.action.route);
      CHECK(close(sb.action.overtime, myo.action.overtime));
    }
}

TEST_CASE("policies: scenario policy rejects bad configs") {
  const auto inst = same_day_toy();
  const StateSpace space(inst);
  const State s = State::zero(space);
  SbConfig cfg;
  cfg.scenarios = 0;
  Rng rng(1);
  CHECK_THROWS_AS(sb_action(s, inst, cfg, rng), ValidationError);
}

TEST_CASE("policies: threshold tuning evaluates the whole grid") {
  std::vector<std::pair<int, std::uint64_t>> calls;
  const SbEvaluateFn fn = [&](int threshold, std::uint64_t seed) {
    calls.emplace_back(threshold, seed);
    return threshold == 30 || threshold == 50 ? 1.0 : 2.0;
  };
  const std::vector<std::uint64_t> seeds{11, 22, 33};
  const SbTuneResult tuned = tune_sb_threshold(fn, {50, 10, 30}, seeds);
  CHECK(calls.size() == 9);  // every candidate on every seed
  CHECK(tuned.best_threshold == 30);  // tie with 50 broken downward
  REQUIRE(tuned.grid.size() == 3);
  CHECK(tuned.grid[0].first == 10);
  CHECK(close(tuned.grid[0].second, 2.0));
  CHECK(close(tuned.grid[1].second, 1.0));

  calls.clear();
  const SbTuneResult wide = tune_sb_threshold(fn, {}, {5});
  CHECK(calls.size() == 11);  // default candidates 0, 10, ..., 100
  CHECK(wide.best_threshold == 30);

  CHECK_THROWS_AS(tune_sb_threshold(fn, {0}, {}), ValidationError);
  CHECK_THROWS_AS(tune_sb_threshold(SbEvaluateFn{}, {0}, {1}), ValidationError);
}

TEST_CASE("policies: every decision passes the action check") {
  const auto inst = classes_toy();
  const StateSpace space(inst);
  Rng rng(derive_seed(20260816, {stream_tag("policy-feasibility")}));
  const alp::AlpParams params = random_params(inst, space, rng);
  for (int rep = 0; rep < 8; ++rep) {
    const State s = random_state(inst, space, rng);
    CHECK(check_action(space, inst, s, alp_action(s, params, inst).action).empty());
    CHECK(check_action(space, inst, s, myopic_action(s, inst).action).empty());
    SbConfig cfg;
    cfg.scenarios = 4;
    cfg.threshold = 2;
    Rng sb_rng(derive_seed(99, {static_cast<std::uint64_t>(rep)}));
    CHECK(check_action(space, inst, s, sb_action(s, inst, cfg, sb_rng).action).empty());
  }
}
