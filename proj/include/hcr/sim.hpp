#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hcr/alp.hpp"
#include "hcr/instance.hpp"
#include "hcr/mdp.hpp"
#include "hcr/policies.hpp"
#include "hcr/rng.hpp"
#include "hcr/state.hpp"

namespace hcr::sim {

/// A policy under simulation: any callable producing today's decision.
using Policy = std::function<policies::PolicyDecision(const State&)>;

Policy myopic_policy(const ProblemInstance& inst);
Policy alp_policy(const ProblemInstance& inst, const alp::AlpParams& params);
/// Scenario-based policy with its own internal sampling stream.
Policy sb_policy(const ProblemInstance& inst, const policies::SbConfig& config,
                 std::uint64_t seed);
/// Turns every referral away and serves only the visits already booked.
Policy reject_all_policy(const ProblemInstance& inst);
/// Accepts every referral for today and hands every visit to agency nurses.
Policy accept_divert_policy(const ProblemInstance& inst);

struct SimConfig {
  int initial_states = 25;  ///< random starting states compared on
  int warmup_days = 20;     ///< days simulated to produce each starting state
  int eval_days = 365;      ///< days accumulated into each value estimate
  std::uint64_t seed = 1;
  /// Couple the transition draws across policies so that value differences
  /// come from the decisions, not the randomness.
  bool common_random_numbers = true;
  int jobs = 1;  ///< parallel (state, policy) evaluations
};

struct DayMetrics {
  double cost = 0.0;
  double rejection_hours = 0.0;  ///< typical visits x duration per rejection
  double diversion_hours = 0.0;  ///< duration per diverted visit
  double overtime_hours = 0.0;
  double travel_time = 0.0;
  double tour_length = 0.0;  ///< travel plus service time of the day
  int accepted = 0;
  int rejected = 0;
};

struct ValueEstimate {
  double value = 0.0;             ///< discounted cost over the horizon
  std::vector<DayMetrics> days;
  DayMetrics daily_mean;          ///< averages (counts become per-day rates)
};

/// Transition randomness drawn from streams keyed by (seed, day, slot), so
/// trajectories are reproducible under any evaluation order and can be
/// coupled across policies that share the seed.
class KeyedRandomness : public TransitionRandomness {
 public:
  explicit KeyedRandomness(std::uint64_t seed) : seed_(seed) {}
  void set_day(int day) { day_ = day; }
  int continuations(int k, int l, int j, int trials, double p) override;
  int arrivals(int k, int l, double mean) override;

 private:
  std::uint64_t seed_ = 0;
  int day_ = 0;
};

/// Simulate `days` from the empty state and return where the system lands.
State warmup(const ProblemInstance& inst, const Policy& policy, int days, Rng& rng);

/// Discounted cost of following `policy` for `days` days from `start`,
/// with per-day operational metrics. Transition draws come from streams
/// keyed by (seed, day, slot). Policy errors are rethrown with the day.
ValueEstimate estimate_value(const ProblemInstance& inst, const State& start,
                             const Policy& policy, int days, double gamma,
                             std::uint64_t seed);

struct PolicyReport {
  std::string name;
  std::vector<double> values;            ///< per initial state
  std::vector<DayMetrics> state_metrics; ///< daily means per initial state
  DayMetrics daily_mean;                 ///< averaged over states and days
  std::vector<double> gap_percent;       ///< vs reference, empty for the reference
  double gap_mean = 0.0;
  double gap_sd = 0.0;
  double t_stat = 0.0;                   ///< paired t of the gaps against zero
  bool significant = false;              ///< 95%, two-sided
};

/// Significance of the gap difference between two non-reference policies.
struct PairTest {
  std::size_t a = 0, b = 0;  ///< indices into SimReport::policies
  double t_stat = 0.0;
  bool significant = false;
};

struct SimReport {
  std::vector<PolicyReport> policies;
  std::size_t reference = 0;
  std::vector<PairTest> pairs;
  SimConfig config;
};

/// A named policy; `make` builds a fresh instance for one (state, policy)
/// cell from a derived seed, so internally random policies stay reproducible.
struct PolicySpec {
  std::string name;
  std::function<Policy(std::uint64_t seed)> make;
};

PolicySpec make_spec(std::string name, Policy policy);

/// Protocol: warm up `initial_states` starting states under the myopic
/// policy, estimate every policy's value from each, report percentage gaps
/// against the reference with paired significance tests.
SimReport compare_policies(const ProblemInstance& inst, const std::vector<PolicySpec>& specs,
                           std::size_t reference, const SimConfig& config);

/// Two-sided 95% critical value of Student's t.
double t_critical_95(int df);

/// Evaluation bridge for the epsilon tuner: solve-free simulation of the
/// parameter-guided policy under this protocol, reduced to the tuner's
/// outcome summary.
alp::SimulateFn make_tuner_simulator(const ProblemInstance& inst, const SimConfig& config);

/// One row per (initial state, policy): values, gaps and daily metric
/// means, numbers fixed to six decimals.
std::string report_csv(const SimReport& report);

/// Summary table, one policy per row, gaps as "mean (sd)" with the
/// significantly best non-reference policies in bold.
std::string report_markdown(const SimReport& report);

}  // namespace hcr::sim
