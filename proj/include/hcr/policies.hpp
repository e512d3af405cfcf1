#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hcr/alp.hpp"
#include "hcr/instance.hpp"
#include "hcr/rng.hpp"
#include "hcr/state.hpp"

namespace hcr::policies {

struct PolicyDecision {
  ActionPlan action;
  double objective = 0.0;  ///< approximate cost-to-go (ALP) or one-day cost (benchmarks)
  double solve_seconds = 0.0;
  bool heuristic = false;  ///< incumbent after a node limit, or heuristic tours involved
  std::vector<std::string> choices;  ///< one line per referral decision
};

/// Greedy one-step policy on the affine value approximation: minimize the
/// one-day cost plus the discounted parameter value of the expected next
/// state, by MIP over the action set of `s`. Deterministic; proven optimal
/// unless the node budget runs out, in which case the best incumbent is
/// returned with `heuristic` set.
PolicyDecision alp_action(const State& s, const alp::AlpParams& params,
                          const ProblemInstance& inst, long mip_max_nodes = 200000);

/// Referral-by-referral greedy policy. New referrals are processed in
/// non-decreasing depot distance; each is rejected or booked on the day
/// minimizing the discounted incremental cost of inserting its expected
/// visit chain into the planning calendar (cheapest insertion per day;
/// overflowing days divert the visit instead).
PolicyDecision myopic_action(const State& s, const ProblemInstance& inst);

struct SbConfig {
  int scenarios = 100;  ///< sampled futures per decision
  int threshold = 0;    ///< minimum scenario acceptances to accept a referral
};

/// Scenario-based policy: samples `scenarios` futures of new referrals over
/// the lookahead window, books each scenario greedily (cheapest referral
/// first, same day-cost machinery as the myopic policy), then accepts a
/// real referral only if at least `threshold` scenarios accepted it,
/// booking it on its modal assignment day.
PolicyDecision sb_action(const State& s, const ProblemInstance& inst, const SbConfig& config,
                         Rng& rng);

/// Mean estimated policy value for one (threshold, seed) pair.
using SbEvaluateFn = std::function<double(int threshold, std::uint64_t seed)>;

struct SbTuneResult {
  int best_threshold = 0;
  std::vector<std::pair<int, double>> grid;  ///< (threshold, mean value)
};

/// Evaluate every candidate threshold on every seed (exactly
/// |candidates| * |seeds| calls) and pick the candidate with the smallest
/// mean value; ties go to the smaller threshold. An empty candidate list
/// defaults to {0, 10, ..., 100}.
SbTuneResult tune_sb_threshold(const SbEvaluateFn& evaluate, std::vector<int> candidates,
                               const std::vector<std::uint64_t>& seeds);

enum class RegionLabel { always_accept, maybe, always_reject };
std::string label_name(RegionLabel label);

/// Structural acceptance classes of the ALP policy, per (type, region):
/// a referral is always rejected when even the cheapest booking choice
/// (day-1 service at the discounted follow-up price, or a later-day slot
/// price) exceeds the rejection cost, and always accepted when some
/// later-day slot price is below it.
std::vector<RegionLabel> classify_regions(const alp::AlpParams& params,
                                          const ProblemInstance& inst);

}  // namespace hcr::policies
