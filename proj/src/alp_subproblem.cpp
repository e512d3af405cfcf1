#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hcr/alp.hpp"
#include "hcr/common.hpp"
#include "hcr/mdp.hpp"
#include "hcr/tour.hpp"

namespace hcr::alp {

namespace {

std::string coord_name(const char* base, std::initializer_list<int> parts) {
  std::string s(base);
  s.push_back('(');
  bool first = true;
  for (int p : parts) {
    if (!first) s.push_back(',');
    s += std::to_string(p);
    first = false;
  }
  s.push_back(')');
  return s;
}

/// Slot prices actually used by the pricing objective: the 2I variants tie
/// every slot to its (k,l) base through the decay coefficients.
std::vector<double> effective_tau(const AlpParams& params, const ProblemInstance& inst,
                                  const StateSpace& space, Variant variant) {
  if (variant == Variant::full || variant == Variant::one_d) return params.tau;
  std::vector<double> tau(static_cast<std::size_t>(space.x_size()), 0.0);
  for (int k = 0; k < inst.K(); ++k) {
    const ServiceType& svc = inst.types[static_cast<std::size_t>(k)];
    const auto delta = delta_coefficients(inst, k);
    for (int l = 0; l < inst.L(); ++l) {
      const int base_idx = space.x_index(1, k, l, svc.max_visits() - 1);
      const double base = base_idx >= 0 ? params.tau[static_cast<std::size_t>(base_idx)] : 0.0;
      for (int t = 1; t <= inst.horizon; ++t)
        for (int j = 0; j < svc.max_visits(); ++j) {
          const int idx = space.x_index(t, k, l, j);
          if (idx >= 0)
            tau[static_cast<std::size_t>(idx)] =
                delta[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)] * base;
        }
    }
  }
  return tau;
}

}  // namespace

SubproblemModel build_subproblem(const AlpParams& params, const StateRelevanceWeights& weights,
                                 const ProblemInstance& inst, Variant variant) {
  const StateSpace space(inst);
  if (static_cast<int>(params.tau.size()) != space.x_size() ||
      static_cast<int>(params.rho.size()) != space.kl_size())
    throw ValidationError("parameter dimensions do not match the instance");
  const std::vector<double> tau = effective_tau(params, inst, space, variant);
  const double g = inst.gamma;
  const int L = inst.L();

  SubproblemModel sub;
  optim::LinearModel& m = sub.model;
  m.sense = optim::Sense::minimize;

  double sum_loop = 0.0, max_leg = 0.0;
  for (int l = 0; l < L; ++l) sum_loop += 2.0 * inst.geo.depot_dist(l);
  for (int a = 0; a <= L; ++a)
    for (int b = 0; b <= L; ++b) max_leg = std::max(max_leg, inst.geo.node_dist(a, b));
  const double route_cap = sum_loop + 1.0;
  const double big_m = route_cap + max_leg + 1.0;

  // Booked visits. A slot's price is paid on today's holdings and earned
  // back, discounted, on the slots it feeds tomorrow.
  sub.x_var.assign(static_cast<std::size_t>(space.x_size()), -1);
  for (int i = 0; i < space.x_size(); ++i) {
    const XKey key = space.x_keys()[static_cast<std::size_t>(i)];
    double obj = -tau[static_cast<std::size_t>(i)];
    if (key.t >= 2) {
      const int prev = space.x_index(key.t - 1, key.k, key.l, key.j);
      obj += g * tau[static_cast<std::size_t>(prev)];
    } else {
      const int up = space.x_index(inst.types[static_cast<std::size_t>(key.k)].h, key.k, key.l,
                                   key.j + 1);
      if (up >= 0) obj += g * inst.p(key.k, key.j + 2) * tau[static_cast<std::size_t>(up)];
    }
    sub.x_var[static_cast<std::size_t>(i)] =
        m.add_var(0.0, inst.x_cap_of(key.l), obj, true,
                  coord_name("x", {key.t, key.k, key.l, key.j}));
  }

  // Pending referrals and their assignments; rejections are the balance
  // slack, priced through the referral cost on y and its negation on n.
  sub.y_var.assign(static_cast<std::size_t>(space.kl_size()), -1);
  for (int k = 0; k < inst.K(); ++k)
    for (int l = 0; l < L; ++l) {
      const int kl = space.kl_index(k, l);
      sub.y_var[static_cast<std::size_t>(kl)] =
          m.add_var(0.0, inst.y_cap_of(l),
                    inst.reject_cost[static_cast<std::size_t>(k)] -
                        params.rho[static_cast<std::size_t>(kl)],
                    true, coord_name("y", {k, l}));
    }
  sub.n_var.assign(static_cast<std::size_t>(space.n_size()), -1);
  for (int i = 0; i < space.n_size(); ++i) {
    const NKey key = space.n_keys()[static_cast<std::size_t>(i)];
    double obj = -inst.reject_cost[static_cast<std::size_t>(key.k)];
    if (key.t == 1) {
      const int up =
          space.x_index(inst.types[static_cast<std::size_t>(key.k)].h, key.k, key.l, 1);
      if (up >= 0) obj += g * inst.p(key.k, 2) * tau[static_cast<std::size_t>(up)];
    } else {
      const int prev = space.x_index(key.t - 1, key.k, key.l, 0);
      obj += g * tau[static_cast<std::size_t>(prev)];
    }
    sub.n_var[static_cast<std::size_t>(i)] = m.add_var(
        0.0, inst.y_cap_of(key.l), obj, true, coord_name("n", {key.t, key.k, key.l}));
  }

  // Diversions, visited flags, ordering binaries and travel clocks.
  std::vector<int> t1_slots(static_cast<std::size_t>(inst.K()), 0);
  for (int k = 0; k < inst.K(); ++k) {
    const ServiceType& svc = inst.types[static_cast<std::size_t>(k)];
    for (int j = 0; j < svc.max_visits(); ++j)
      if (space.x_live(1, k, 0, j)) ++t1_slots[static_cast<std::size_t>(k)];
  }
  sub.z_var.assign(static_cast<std::size_t>(space.kl_size()), -1);
  for (int k = 0; k < inst.K(); ++k)
    for (int l = 0; l < L; ++l) {
      const int cap =
          t1_slots[static_cast<std::size_t>(k)] * inst.x_cap_of(l) + inst.y_cap_of(l);
      sub.z_var[static_cast<std::size_t>(space.kl_index(k, l))] =
          m.add_var(0.0, cap, inst.divert_cost[static_cast<std::size_t>(k)], true,
                    coord_name("z", {k, l}));
    }
  sub.w_var.assign(static_cast<std::size_t>(L), -1);
  for (int l = 0; l < L; ++l)
    sub.w_var[static_cast<std::size_t>(l)] =
        m.add_var(0.0, 1.0, 0.0, true, coord_name("w", {l}));
  sub.pair_var.assign(static_cast<std::size_t>(L * (L - 1) / 2), -1);
  for (int a = 0; a < L; ++a)
    for (int b = a + 1; b < L; ++b)
      sub.pair_var[static_cast<std::size_t>(sub.pair_index(a, b, L))] =
          m.add_var(0.0, 1.0, 0.0, true, coord_name("v", {a, b}));
  sub.f_var.assign(static_cast<std::size_t>(L), -1);
  for (int l = 0; l < L; ++l)
    sub.f_var[static_cast<std::size_t>(l)] =
        m.add_var(inst.geo.depot_dist(l), route_cap, 0.0, false, coord_name("f", {l}));
  sub.q_var = m.add_var(0.0, std::min(inst.chi + inst.chi_prime, route_cap), inst.weights.q,
                        false, "q");
  sub.u_var = m.add_var(0.0, inst.chi_prime, inst.weights.u, false, "u");

  double constant = -(1.0 - g) * params.eta;
  for (int kl = 0; kl < space.kl_size(); ++kl)
    constant += g * params.rho[static_cast<std::size_t>(kl)] *
                weights.y[static_cast<std::size_t>(kl)];
  m.objective_constant = constant;

  // Assignments cannot exceed the pending referrals (and must exhaust them
  // when rejection is disallowed).
  for (int k = 0; k < inst.K(); ++k)
    for (int l = 0; l < L; ++l) {
      std::vector<std::pair<int, double>> terms;
      const ServiceType& svc = inst.types[static_cast<std::size_t>(k)];
      for (int t = 1; t <= svc.wait_target; ++t)
        terms.emplace_back(sub.n_var[static_cast<std::size_t>(space.n_index(t, k, l))], 1.0);
      terms.emplace_back(sub.y_var[static_cast<std::size_t>(space.kl_index(k, l))], -1.0);
      m.add_row(std::move(terms), inst.allow_rejection ? optim::Rel::le : optim::Rel::eq, 0.0,
                coord_name("balance", {k, l}));
    }

  auto day1_terms = [&](int k, int l, double scale,
                        std::vector<std::pair<int, double>>& terms) {
    const ServiceType& svc = inst.types[static_cast<std::size_t>(k)];
    for (int j = 0; j < svc.max_visits(); ++j) {
      const int idx = space.x_index(1, k, l, j);
      if (idx >= 0) terms.emplace_back(sub.x_var[static_cast<std::size_t>(idx)], scale);
    }
    terms.emplace_back(sub.n_var[static_cast<std::size_t>(space.n_index(1, k, l))], scale);
  };

  // Diversions cannot exceed the day-1 load of their (type, region).
  for (int k = 0; k < inst.K(); ++k)
    for (int l = 0; l < L; ++l) {
      std::vector<std::pair<int, double>> terms;
      terms.emplace_back(sub.z_var[static_cast<std::size_t>(space.kl_index(k, l))], 1.0);
      day1_terms(k, l, -1.0, terms);
      m.add_row(std::move(terms), optim::Rel::le, 0.0, coord_name("divert", {k, l}));
    }

  // A region with any visit served today must be on the route.
  for (int l = 0; l < L; ++l) {
    std::vector<std::pair<int, double>> terms;
    double served_cap = 0.0;
    for (int k = 0; k < inst.K(); ++k) {
      day1_terms(k, l, 1.0, terms);
      terms.emplace_back(sub.z_var[static_cast<std::size_t>(space.kl_index(k, l))], -1.0);
      served_cap +=
          t1_slots[static_cast<std::size_t>(k)] * inst.x_cap_of(l) + inst.y_cap_of(l);
    }
    terms.emplace_back(sub.w_var[static_cast<std::size_t>(l)], -served_cap);
    m.add_row(std::move(terms), optim::Rel::le, 0.0, coord_name("cover", {l}));
  }

  // Travel clocks respect the chosen order between each visited pair.
  for (int a = 0; a < L; ++a)
    for (int b = a + 1; b < L; ++b) {
      const int v = sub.pair_var[static_cast<std::size_t>(sub.pair_index(a, b, L))];
      const int fa = sub.f_var[static_cast<std::size_t>(a)];
      const int fb = sub.f_var[static_cast<std::size_t>(b)];
      const int wa = sub.w_var[static_cast<std::size_t>(a)];
      const int wb = sub.w_var[static_cast<std::size_t>(b)];
      m.add_row({{fa, 1.0}, {fb, -1.0}, {v, big_m}, {wa, -big_m}, {wb, -big_m}},
                optim::Rel::ge, inst.geo.between(b, a) - 2.0 * big_m,
                coord_name("order_ba", {a, b}));
      m.add_row({{fb, 1.0}, {fa, -1.0}, {v, -big_m}, {wa, -big_m}, {wb, -big_m}},
                optim::Rel::ge, inst.geo.between(a, b) - 3.0 * big_m,
                coord_name("order_ab", {a, b}));
    }

  // The route duration covers the return leg of every visited region.
  for (int l = 0; l < L; ++l)
    m.add_row({{sub.f_var[static_cast<std::size_t>(l)], 1.0},
               {sub.q_var, -1.0},
               {sub.w_var[static_cast<std::size_t>(l)], big_m}},
              optim::Rel::le, big_m - inst.geo.depot_dist(l), coord_name("return", {l}));

  // Shift capacity: travel plus service fits the day, overtime as relief.
  {
    std::vector<std::pair<int, double>> terms{{sub.q_var, 1.0}, {sub.u_var, -1.0}};
    for (int k = 0; k < inst.K(); ++k) {
      const double e = inst.types[static_cast<std::size_t>(k)].e;
      for (int l = 0; l < L; ++l) {
        day1_terms(k, l, e, terms);
        terms.emplace_back(sub.z_var[static_cast<std::size_t>(space.kl_index(k, l))], -e);
      }
    }
    m.add_row(std::move(terms), optim::Rel::le, inst.chi, "shift");
  }

  return sub;
}

Column decode_subproblem(const SubproblemModel& sub, const ProblemInstance& inst,
                         const StateSpace& space, const std::vector<double>& solution) {
  auto at = [&](int var) { return solution[static_cast<std::size_t>(var)]; };
  auto count = [&](int var) {
    return std::max(0, static_cast<int>(std::llround(at(var))));
  };

  State s = State::zero(space);
  ActionPlan a = ActionPlan::zero(space);
  for (int i = 0; i < space.x_size(); ++i)
    s.x[static_cast<std::size_t>(i)] = count(sub.x_var[static_cast<std::size_t>(i)]);
  for (int kl = 0; kl < space.kl_size(); ++kl) {
    s.y[static_cast<std::size_t>(kl)] = count(sub.y_var[static_cast<std::size_t>(kl)]);
    a.divert[static_cast<std::size_t>(kl)] = count(sub.z_var[static_cast<std::size_t>(kl)]);
  }
  for (int i = 0; i < space.n_size(); ++i)
    a.assign[static_cast<std::size_t>(i)] = count(sub.n_var[static_cast<std::size_t>(i)]);
  for (int k = 0; k < space.K(); ++k)
    for (int l = 0; l < space.L(); ++l) {
      const ServiceType& svc = inst.types[static_cast<std::size_t>(k)];
      int accepted = 0;
      for (int t = 1; t <= svc.wait_target; ++t) accepted += a.assign_at(space, t, k, l);
      const int kl = space.kl_index(k, l);
      a.reject[static_cast<std::size_t>(kl)] =
          std::max(0, s.y[static_cast<std::size_t>(kl)] - accepted);
    }

  const std::vector<int> served = day_one_served(space, s, a);
  std::vector<int> visited;
  for (int l = 0; l < space.L(); ++l) {
    int total = 0;
    for (int k = 0; k < space.K(); ++k) total += served[static_cast<std::size_t>(space.kl_index(k, l))];
    if (total > 0) visited.push_back(l);
  }
  // Order by the model's travel clocks, then keep the exact tour when it is
  // at least as short, so the decoded cost never exceeds the model's.
  std::vector<int> by_clock = visited;
  std::sort(by_clock.begin(), by_clock.end(), [&](int l1, int l2) {
    const double f1 = at(sub.f_var[static_cast<std::size_t>(l1)]);
    const double f2 = at(sub.f_var[static_cast<std::size_t>(l2)]);
    return f1 != f2 ? f1 < f2 : l1 < l2;
  });
  const optim::TourResult tour = optim::best_tour(inst, visited, 20);
  a.route = tour.length <= route_travel_time(inst, by_clock) + 1e-12 ? tour.order : by_clock;

  const double travel = route_travel_time(inst, a.route);
  double service = 0.0;
  for (int k = 0; k < space.K(); ++k)
    for (int l = 0; l < space.L(); ++l)
      service += inst.types[static_cast<std::size_t>(k)].e *
                 served[static_cast<std::size_t>(space.kl_index(k, l))];
  a.overtime = std::max(0.0, travel + service - inst.chi);
  return make_column(inst, space, s, a);
}

}  // namespace hcr::alp
