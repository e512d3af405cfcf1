#include "hcr/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "hcr/common.hpp"

namespace hcr {

namespace {

constexpr double kFeasTol = 1e-7;

void require_dims(const StateSpace& space, const State& s, const ActionPlan& a) {
  if (static_cast<int>(s.x.size()) != space.x_size() ||
      static_cast<int>(s.y.size()) != space.kl_size()) {
    throw std::invalid_argument("state dimensions do not match the state space");
  }
  if (static_cast<int>(a.reject.size()) != space.kl_size() ||
      static_cast<int>(a.divert.size()) != space.kl_size() ||
      static_cast<int>(a.assign.size()) != space.n_size()) {
    throw std::invalid_argument("action dimensions do not match the state space");
  }
}

}  // namespace

double route_travel_time(const ProblemInstance& inst, const std::vector<int>& route) {
  if (route.empty()) return 0.0;
  double q = inst.geo.depot_dist(route.front());
  for (std::size_t i = 0; i + 1 < route.size(); ++i) {
    q += inst.geo.between(route[i], route[i + 1]);
  }
  q += inst.geo.depot_dist(route.back());
  return q;
}

std::vector<int> day_one_served(const StateSpace& space, const State& s, const ActionPlan& a) {
  std::vector<int> served(static_cast<std::size_t>(space.kl_size()), 0);
  for (int k = 0; k < space.K(); ++k) {
    for (int l = 0; l < space.L(); ++l) {
      int cnt = a.assign_at(space, 1, k, l) - a.divert[static_cast<std::size_t>(space.kl_index(k, l))];
      for (int j = 0; j < space.max_j(); ++j) {
        const int idx = space.x_index(1, k, l, j);
        if (idx >= 0) cnt += s.x[static_cast<std::size_t>(idx)];
      }
      served[static_cast<std::size_t>(space.kl_index(k, l))] = cnt;
    }
  }
  return served;
}

void validate_state(const StateSpace& space, const ProblemInstance& inst, const State& s) {
  if (static_cast<int>(s.x.size()) != space.x_size() ||
      static_cast<int>(s.y.size()) != space.kl_size()) {
    throw ValidationError("state dimensions do not match the state space");
  }
  for (int i = 0; i < space.x_size(); ++i) {
    const auto& key = space.x_keys()[static_cast<std::size_t>(i)];
    const int v = s.x[static_cast<std::size_t>(i)];
    if (v < 0) throw ValidationError("state: negative booked-visit count");
    if (v > inst.x_cap_of(key.l)) throw ValidationError("state: booked-visit count above cap");
  }
  for (int k = 0; k < space.K(); ++k) {
    for (int l = 0; l < space.L(); ++l) {
      const int v = s.y[static_cast<std::size_t>(space.kl_index(k, l))];
      if (v < 0) throw ValidationError("state: negative pending count");
      if (v > inst.y_cap_of(l)) throw ValidationError("state: pending count above cap");
    }
  }
}

std::vector<std::string> check_action(const StateSpace& space, const ProblemInstance& inst,
                                      const State& s, const ActionPlan& a) {
  require_dims(space, s, a);
  std::vector<std::string> bad;
  auto flag = [&bad](const std::string& tag) {
    if (std::find(bad.begin(), bad.end(), tag) == bad.end()) bad.push_back(tag);
  };

  for (int v : a.reject) {
    if (v < 0) flag("nonnegativity");
  }
  for (int v : a.assign) {
    if (v < 0) flag("nonnegativity");
  }
  for (int v : a.divert) {
    if (v < 0) flag("nonnegativity");
  }
  if (a.overtime < -kFeasTol) flag("nonnegativity");

  for (int k = 0; k < space.K(); ++k) {
    const auto& svc = inst.types[static_cast<std::size_t>(k)];
    for (int l = 0; l < space.L(); ++l) {
      const int kl = space.kl_index(k, l);
      int assigned = 0;
      for (int t = 1; t <= svc.wait_target; ++t) assigned += a.assign_at(space, t, k, l);
      if (assigned + a.reject[static_cast<std::size_t>(kl)] !=
          s.y[static_cast<std::size_t>(kl)]) {
        flag("referral-balance");
      }
      if (!inst.allow_rejection && a.reject[static_cast<std::size_t>(kl)] > 0) {
        flag("rejection-disabled");
      }
      int day1 = a.assign_at(space, 1, k, l);
      const int idx0 = space.x_index(1, k, l, 0);
      if (idx0 >= 0) day1 += s.x[static_cast<std::size_t>(idx0)];
      for (int j = 1; j < svc.max_visits(); ++j) {
        const int idx = space.x_index(1, k, l, j);
        if (idx >= 0) day1 += s.x[static_cast<std::size_t>(idx)];
      }
      if (a.divert[static_cast<std::size_t>(kl)] > day1) flag("diversion-limit");
    }
  }

  const auto served = day_one_served(space, s, a);
  std::set<int> need;
  for (int k = 0; k < space.K(); ++k) {
    for (int l = 0; l < space.L(); ++l) {
      if (served[static_cast<std::size_t>(space.kl_index(k, l))] > 0) need.insert(l);
    }
  }
  std::set<int> visited;
  for (int l : a.route) {
    if (l < 0 || l >= space.L()) {
      flag("route-coverage");
      continue;
    }
    if (!visited.insert(l).second) flag("route-duplicate");
  }
  if (visited != need) flag("route-coverage");

  const double q = route_travel_time(inst, a.route);
  double load = q;
  for (int k = 0; k < space.K(); ++k) {
    for (int l = 0; l < space.L(); ++l) {
      load += inst.types[static_cast<std::size_t>(k)].e *
              served[static_cast<std::size_t>(space.kl_index(k, l))];
    }
  }
  if (load > inst.chi + a.overtime + kFeasTol) flag("shift-capacity");
  if (a.overtime > inst.chi_prime + kFeasTol) flag("overtime-cap");

  return bad;
}

double immediate_cost_unchecked(const ProblemInstance& inst, const StateSpace& space,
                                const State& s, const ActionPlan& a) {
  (void)s;
  double c = 0.0;
  for (int k = 0; k < space.K(); ++k) {
    for (int l = 0; l < space.L(); ++l) {
      const int kl = space.kl_index(k, l);
      c += inst.reject_cost[static_cast<std::size_t>(k)] *
           a.reject[static_cast<std::size_t>(kl)];
      c += inst.divert_cost[static_cast<std::size_t>(k)] *
           a.divert[static_cast<std::size_t>(kl)];
    }
  }
  c += inst.weights.u * a.overtime;
  c += inst.weights.q * route_travel_time(inst, a.route);
  return c;
}

double immediate_cost(const StateSpace& space, const ProblemInstance& inst, const State& s,
                      const ActionPlan& a) {
  const auto bad = check_action(space, inst, s, a);
  if (!bad.empty()) {
    std::string msg = "infeasible action:";
    for (const auto& tag : bad) msg += " " + tag;
    throw std::invalid_argument(msg);
  }
  return immediate_cost_unchecked(inst, space, s, a);
}

std::vector<double> expected_next_x(const StateSpace& space, const ProblemInstance& inst,
                                    const State& s, const ActionPlan& a) {
  require_dims(space, s, a);
  std::vector<double> ex(static_cast<std::size_t>(space.x_size()), 0.0);
  for (int i = 0; i < space.x_size(); ++i) {
    const auto& key = space.x_keys()[static_cast<std::size_t>(i)];
    const auto& svc = inst.types[static_cast<std::size_t>(key.k)];
    double v = 0.0;
    if (key.j >= 1 && key.t == svc.h) {
      if (key.j == 1) {
        v = (s.x_at(space, 1, key.k, key.l, 0) + a.assign_at(space, 1, key.k, key.l)) *
            svc.p(2);
      } else {
        v = s.x_at(space, 1, key.k, key.l, key.j - 1) * svc.p(key.j + 1);
      }
    } else if (key.j >= 1) {  // t < h: shift forward
      v = s.x_at(space, key.t + 1, key.k, key.l, key.j);
    } else {  // j == 0, t <= wait_target - 1
      v = s.x_at(space, key.t + 1, key.k, key.l, 0) +
          a.assign_at(space, key.t + 1, key.k, key.l);
    }
    ex[static_cast<std::size_t>(i)] = v;
  }
  return ex;
}

TransitionSample sample_transition(const StateSpace& space, const ProblemInstance& inst,
                                   const State& s, const ActionPlan& a,
                                   TransitionRandomness& random) {
  require_dims(space, s, a);
  TransitionSample out;
  out.next = State::zero(space);
  out.continuations.assign(
      static_cast<std::size_t>(space.kl_size()) * space.max_j(), 0);
  out.arrivals.assign(static_cast<std::size_t>(space.kl_size()), 0);

  // Continuation draws, one per (k,l,j) with a live target slot at t = h_k.
  for (int k = 0; k < space.K(); ++k) {
    const auto& svc = inst.types[static_cast<std::size_t>(k)];
    for (int l = 0; l < space.L(); ++l) {
      for (int j = 1; j < svc.max_visits(); ++j) {
        if (space.x_index(svc.h, k, l, j) < 0) continue;
        const int trials = (j == 1)
                               ? s.x_at(space, 1, k, l, 0) + a.assign_at(space, 1, k, l)
                               : s.x_at(space, 1, k, l, j - 1);
        const int hits = random.continuations(k, l, j, trials, svc.p(j + 1));
        out.continuations[static_cast<std::size_t>(space.kl_index(k, l)) * space.max_j() + j] =
            hits;
      }
    }
  }

  for (int i = 0; i < space.x_size(); ++i) {
    const auto& key = space.x_keys()[static_cast<std::size_t>(i)];
    const auto& svc = inst.types[static_cast<std::size_t>(key.k)];
    int v = 0;
    if (key.j >= 1 && key.t == svc.h) {
      v = out.continuations[static_cast<std::size_t>(space.kl_index(key.k, key.l)) *
                                space.max_j() +
                            key.j];
    } else if (key.j >= 1) {
      v = s.x_at(space, key.t + 1, key.k, key.l, key.j);
    } else {
      v = s.x_at(space, key.t + 1, key.k, key.l, 0) +
          a.assign_at(space, key.t + 1, key.k, key.l);
    }
    const int cap = inst.x_cap_of(key.l);
    if (v > cap) {
      out.overflow_x += v - cap;
      v = cap;
    }
    out.next.x[static_cast<std::size_t>(i)] = v;
  }

  for (int k = 0; k < space.K(); ++k) {
    for (int l = 0; l < space.L(); ++l) {
      const int kl = space.kl_index(k, l);
      int arr = random.arrivals(k, l, inst.rate(k, l));
      out.arrivals[static_cast<std::size_t>(kl)] = arr;
      const int cap = inst.y_cap_of(l);
      if (arr > cap) {
        out.overflow_y += arr - cap;
        arr = cap;
      }
      out.next.y[static_cast<std::size_t>(kl)] = arr;
    }
  }
  return out;
}

double rejected_hours(const ProblemInstance& inst, const ActionPlan& a) {
  double h = 0.0;
  const int L = inst.L();
  for (int k = 0; k < inst.K(); ++k) {
    const auto& svc = inst.types[static_cast<std::size_t>(k)];
    for (int l = 0; l < L; ++l) {
      h += svc.typical_visits * svc.e * a.reject[static_cast<std::size_t>(k * L + l)];
    }
  }
  return h;
}

double diverted_hours(const ProblemInstance& inst, const ActionPlan& a) {
  double h = 0.0;
  const int L = inst.L();
  for (int k = 0; k < inst.K(); ++k) {
    for (int l = 0; l < L; ++l) {
      h += inst.types[static_cast<std::size_t>(k)].e *
           a.divert[static_cast<std::size_t>(k * L + l)];
    }
  }
  return h;
}

}  // namespace hcr
