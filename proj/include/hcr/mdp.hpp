#pragma once

#include <string>
#include <vector>

#include "hcr/rng.hpp"
#include "hcr/state.hpp"

namespace hcr {

/// Exact travel time of a route: depot -> route[0] -> ... -> depot.
double route_travel_time(const ProblemInstance& inst, const std::vector<int>& route);

/// Visits served today at (k,l): booked day-1 visits plus same-day
/// assignments minus diversions. Negative values indicate an invalid action.
std::vector<int> day_one_served(const StateSpace& space, const State& s, const ActionPlan& a);

/// Validate state dimensions, bounds and caps; throws ValidationError.
void validate_state(const StateSpace& space, const ProblemInstance& inst, const State& s);

/// Check every action-feasibility requirement against a state. Returns a
/// list of violated constraint tags (empty when the action is feasible).
/// Throws std::invalid_argument on dimension mismatches.
std::vector<std::string> check_action(const StateSpace& space, const ProblemInstance& inst,
                                      const State& s, const ActionPlan& a);

/// One-day cost: rejection + diversion penalties, overtime and travel.
/// Throws std::invalid_argument when the action is infeasible.
double immediate_cost(const StateSpace& space, const ProblemInstance& inst, const State& s,
                      const ActionPlan& a);

/// Same cost expression without feasibility checking (hot paths).
double immediate_cost_unchecked(const ProblemInstance& inst, const StateSpace& space,
                                const State& s, const ActionPlan& a);

/// Conditional expectation of the next booked-visit vector given (s, a).
/// Returns one value per StateSpace x slot.
std::vector<double> expected_next_x(const StateSpace& space, const ProblemInstance& inst,
                                    const State& s, const ActionPlan& a);

/// Source of transition randomness. Keyed per coordinate so simulation can
/// couple draws across policies (common random numbers).
class TransitionRandomness {
 public:
  virtual ~TransitionRandomness() = default;
  /// Number of continuing patients out of `trials` served today at (k,l)
  /// moving into completed-visit level j (j >= 1).
  virtual int continuations(int k, int l, int j, int trials, double p) = 0;
  /// Referrals arriving at (k,l) today.
  virtual int arrivals(int k, int l, double mean) = 0;
};

/// Plain adapter drawing from a single stream in deterministic slot order.
class SingleStreamRandomness : public TransitionRandomness {
 public:
  explicit SingleStreamRandomness(Rng& rng) : rng_(rng) {}
  int continuations(int, int, int, int trials, double p) override {
    return rng_.binomial(trials, p);
  }
  int arrivals(int, int, double mean) override { return rng_.poisson(mean); }

 private:
  Rng& rng_;
};

struct TransitionSample {
  State next;
  /// continuations[(k*L+l)*max_j + j] = patients moving into level j at (k,l).
  std::vector<int> continuations;
  std::vector<int> arrivals;  ///< kl index
  int overflow_x = 0;         ///< booked visits clamped away by slot caps
  int overflow_y = 0;         ///< arrivals clamped away by pending caps
};

/// Sample the next state. The booked-visit part follows the deterministic
/// shift dynamics plus binomial continuation draws; pending referrals are
/// fresh Poisson arrivals. Values are clamped to the instance caps and any
/// clamped amount is reported in the overflow counters.
TransitionSample sample_transition(const StateSpace& space, const ProblemInstance& inst,
                                   const State& s, const ActionPlan& a,
                                   TransitionRandomness& random);

/// Service hours attached to rejections of this action (typical visit count
/// times duration per rejected referral).
double rejected_hours(const ProblemInstance& inst, const ActionPlan& a);

/// Service hours diverted to agency nurses today.
double diverted_hours(const ProblemInstance& inst, const ActionPlan& a);

}  // namespace hcr
