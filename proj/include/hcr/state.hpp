#pragma once

#include <vector>

#include "hcr/layout.hpp"

namespace hcr {

/// System state: booked visits per live slot and pending referrals per
/// (type, region). Sized by a StateSpace.
struct State {
  std::vector<int> x;  ///< one entry per StateSpace x slot
  std::vector<int> y;  ///< one entry per (type, region), kl index

  static State zero(const StateSpace& space) {
    State s;
    s.x.assign(static_cast<std::size_t>(space.x_size()), 0);
    s.y.assign(static_cast<std::size_t>(space.kl_size()), 0);
    return s;
  }

  int x_at(const StateSpace& space, int t, int k, int l, int j) const {
    const int idx = space.x_index(t, k, l, j);
    return idx >= 0 ? x[static_cast<std::size_t>(idx)] : 0;
  }
  int y_at(const StateSpace& space, int k, int l) const {
    return y[static_cast<std::size_t>(space.kl_index(k, l))];
  }

  bool operator==(const State& o) const { return x == o.x && y == o.y; }
};

/// One-day decision: per (type, region) rejections and diversions, referral
/// assignments per day slot, the route for today's visits and overtime.
struct ActionPlan {
  std::vector<int> reject;  ///< kl index
  std::vector<int> assign;  ///< one entry per StateSpace n slot
  std::vector<int> divert;  ///< kl index
  std::vector<int> route;   ///< region ids in service order (depot implicit)
  double overtime = 0.0;

  static ActionPlan zero(const StateSpace& space) {
    ActionPlan a;
    a.reject.assign(static_cast<std::size_t>(space.kl_size()), 0);
    a.assign.assign(static_cast<std::size_t>(space.n_size()), 0);
    a.divert.assign(static_cast<std::size_t>(space.kl_size()), 0);
    return a;
  }

  int assign_at(const StateSpace& space, int t, int k, int l) const {
    const int idx = space.n_index(t, k, l);
    return idx >= 0 ? assign[static_cast<std::size_t>(idx)] : 0;
  }
};

}  // namespace hcr
