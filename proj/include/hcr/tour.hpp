#pragma once

#include <functional>
#include <vector>

#include "hcr/instance.hpp"

namespace hcr::optim {

struct TourResult {
  double length = 0.0;
  std::vector<int> order;  ///< region ids in visit sequence
  bool exact = true;       ///< false when the 2-opt heuristic produced it
};

/// Exact shortest depot-anchored tour over a set of distinct regions by
/// dynamic programming over subsets. Among optimal tours the
/// lexicographically smallest region sequence is returned. Throws
/// std::invalid_argument for more than 20 regions or duplicate entries.
TourResult optimal_tour(const ProblemInstance& inst, const std::vector<int>& regions);

/// Nearest-neighbour construction plus 2-opt improvement; deterministic.
/// Used when a set is too large for the exact method.
TourResult heuristic_tour(const ProblemInstance& inst, const std::vector<int>& regions);

/// Exact tour when the set is small enough, heuristic beyond `exact_limit`.
TourResult best_tour(const ProblemInstance& inst, const std::vector<int>& regions,
                     int exact_limit = 12);

/// Cheapest insertion of a region into an existing route. Returns the added
/// travel time and the insertion position; a region already on the route
/// costs nothing and keeps the route unchanged (position -1).
struct Insertion {
  double delta = 0.0;
  int position = -1;
};
Insertion cheapest_insertion(const ProblemInstance& inst, const std::vector<int>& route,
                             int region);

}  // namespace hcr::optim
