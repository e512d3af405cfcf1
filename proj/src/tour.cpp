#include "hcr/tour.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "hcr/common.hpp"

namespace hcr::optim {

namespace {

void check_regions(const ProblemInstance& inst, const std::vector<int>& regions) {
  std::set<int> seen;
  for (int l : regions) {
    if (l < 0 || l >= inst.L()) throw std::invalid_argument("tour: region id out of range");
    if (!seen.insert(l).second) throw std::invalid_argument("tour: duplicate region");
  }
}

}  // namespace

TourResult optimal_tour(const ProblemInstance& inst, const std::vector<int>& regions) {
  check_regions(inst, regions);
  TourResult res;
  if (regions.empty()) return res;
  const int n = static_cast<int>(regions.size());
  if (n > 20) throw std::invalid_argument("tour: subset too large for exact search");

  // Local nodes sorted ascending so index order equals region-id order; the
  // greedy reconstruction below then yields the lexicographically smallest
  // optimal sequence.
  std::vector<int> nodes = regions;
  std::sort(nodes.begin(), nodes.end());

  auto d = [&](int i, int j) {
    // i, j in 0..n where 0 is the depot and i-1 indexes nodes.
    const int a = i == 0 ? -1 : nodes[static_cast<std::size_t>(i - 1)];
    const int b = j == 0 ? -1 : nodes[static_cast<std::size_t>(j - 1)];
    if (a < 0 && b < 0) return 0.0;
    if (a < 0) return inst.geo.depot_dist(b);
    if (b < 0) return inst.geo.depot_dist(a);
    return inst.geo.between(a, b);
  };

  // g[S][i] = shortest path starting at node i (1-based; 0 = depot start),
  // visiting exactly the set S, then returning to the depot. Flat layout
  // g[S * (n+1) + i].
  const std::size_t full = static_cast<std::size_t>(1) << n;
  const std::size_t stride = static_cast<std::size_t>(n) + 1;
  std::vector<double> g(full * stride, 0.0);
  for (int i = 0; i <= n; ++i) g[static_cast<std::size_t>(i)] = d(i, 0);
  for (std::size_t s = 1; s < full; ++s) {
    for (int i = 0; i <= n; ++i) {
      if (i > 0 && (s & (static_cast<std::size_t>(1) << (i - 1)))) continue;  // i outside S
      double bestv = std::numeric_limits<double>::infinity();
      for (int j = 1; j <= n; ++j) {
        const std::size_t bit = static_cast<std::size_t>(1) << (j - 1);
        if (!(s & bit)) continue;
        const double v = d(i, j) + g[(s ^ bit) * stride + static_cast<std::size_t>(j)];
        if (v < bestv) bestv = v;
      }
      g[s * stride + static_cast<std::size_t>(i)] = bestv;
    }
  }

  res.length = g[(full - 1) * stride];
  std::size_t s = full - 1;
  int cur = 0;
  while (s != 0) {
    for (int j = 1; j <= n; ++j) {
      const std::size_t bit = static_cast<std::size_t>(1) << (j - 1);
      if (!(s & bit)) continue;
      if (d(cur, j) + g[(s ^ bit) * stride + static_cast<std::size_t>(j)] <=
          g[s * stride + static_cast<std::size_t>(cur)] + 1e-12) {
        res.order.push_back(nodes[static_cast<std::size_t>(j - 1)]);
        s ^= bit;
        cur = j;
        break;
      }
    }
  }
  res.exact = true;
  return res;
}

TourResult heuristic_tour(const ProblemInstance& inst, const std::vector<int>& regions) {
  check_regions(inst, regions);
  TourResult res;
  res.exact = false;
  if (regions.empty()) return res;

  std::vector<int> pending = regions;
  std::sort(pending.begin(), pending.end());
  std::vector<int> order;
  int cur = -1;  // depot
  while (!pending.empty()) {
    std::size_t pick = 0;
    double bestd = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pending.size(); ++i) {
      const double dd = cur < 0 ? inst.geo.depot_dist(pending[i])
                                : inst.geo.between(cur, pending[i]);
      if (dd < bestd - 1e-15) {
        bestd = dd;
        pick = i;
      }
    }
    cur = pending[pick];
    order.push_back(cur);
    pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(pick));
  }

  auto tour_len = [&](const std::vector<int>& o) {
    double len = inst.geo.depot_dist(o.front());
    for (std::size_t i = 0; i + 1 < o.size(); ++i) len += inst.geo.between(o[i], o[i + 1]);
    len += inst.geo.depot_dist(o.back());
    return len;
  };

  // 2-opt, first improvement, repeated to a fixed point.
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t i = 0; i < order.size() && !improved; ++i) {
      for (std::size_t j = i + 1; j < order.size() && !improved; ++j) {
        std::vector<int> cand = order;
        std::reverse(cand.begin() + static_cast<std::ptrdiff_t>(i),
                     cand.begin() + static_cast<std::ptrdiff_t>(j) + 1);
        if (tour_len(cand) < tour_len(order) - 1e-12) {
          order = std::move(cand);
          improved = true;
        }
      }
    }
  }
  res.order = std::move(order);
  res.length = tour_len(res.order);
  return res;
}

TourResult best_tour(const ProblemInstance& inst, const std::vector<int>& regions,
                     int exact_limit) {
  if (static_cast<int>(regions.size()) <= exact_limit) return optimal_tour(inst, regions);
  return heuristic_tour(inst, regions);
}

Insertion cheapest_insertion(const ProblemInstance& inst, const std::vector<int>& route,
                             int region) {
  if (region < 0 || region >= inst.L()) throw std::invalid_argument("insertion: bad region");
  Insertion ins;
  for (int l : route) {
    if (l == region) return ins;  // already served, no extra travel
  }
  if (route.empty()) {
    ins.delta = 2.0 * inst.geo.depot_dist(region);
    ins.position = 0;
    return ins;
  }
  double best = kInf;
  int pos = 0;
  for (std::size_t i = 0; i <= route.size(); ++i) {
    const double before = i == 0 ? inst.geo.depot_dist(region)
                                 : inst.geo.between(route[i - 1], region);
    const double after = i == route.size() ? inst.geo.depot_dist(region)
                                           : inst.geo.between(region, route[i]);
    const double removed = (i == 0 ? (route.empty() ? 0.0 : inst.geo.depot_dist(route[0]))
                                   : (i == route.size() ? inst.geo.depot_dist(route[i - 1])
                                                        : inst.geo.between(route[i - 1], route[i])));
    const double delta = before + after - removed;
    if (delta < best - 1e-15) {
      best = delta;
      pos = static_cast<int>(i);
    }
  }
  ins.delta = best;
  ins.position = pos;
  return ins;
}

}  // namespace hcr::optim
