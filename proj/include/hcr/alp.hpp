#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hcr/instance.hpp"
#include "hcr/layout.hpp"
#include "hcr/linear_model.hpp"
#include "hcr/mip.hpp"
#include "hcr/state.hpp"

namespace hcr::alp {

/// Which relaxation of the parameter LP to solve.
///
/// full      one booking-slot price per (t,k,l,j)
/// 2I        slot prices tied across days and visit levels by the decay
///           coefficients, one free price per (k,l)
/// 1D        regions merged by depot distance, solved on the line proxy,
///           prices copied back to every region of each class
/// 1D-2I     both reductions combined
enum class Variant { full, two_i, one_d, one_d_two_i };

std::string variant_name(Variant v);
Variant parse_variant(const std::string& name);

struct AlpMetadata {
  std::string variant;
  double epsilon = 0.0;
  int iterations = 0;
  double solve_seconds = 0.0;
  int columns = 0;
};

/// Affine value-function parameters: v(s) = eta + sum tau*x + sum rho*y.
/// tau holds one entry per live StateSpace slot (dead coordinates carry no
/// price) and rho one entry per (type, region).
struct AlpParams {
  double eta = 0.0;
  std::vector<double> tau;
  std::vector<double> rho;
  AlpMetadata meta;
};

nlohmann::json params_to_json(const AlpParams& params, const StateSpace& space);
AlpParams params_from_json(const nlohmann::json& doc, const StateSpace& space);

/// State-relevance weights of the parameter LP objective: x holds the
/// weight of every live booking slot (uniformly `epsilon` unless scaled by
/// the distance-class proxy) and y the weight per (type, region), which
/// defaults to the arrival rate.
struct StateRelevanceWeights {
  double epsilon = 0.0;
  std::vector<double> x;
  std::vector<double> y;

  static StateRelevanceWeights uniform(const ProblemInstance& inst, const StateSpace& space,
                                       double epsilon);
};

/// One state-action pair with its one-day cost and the coefficients it
/// contributes to the restricted dual LP.
struct Column {
  State state;
  ActionPlan action;
  double cost = 0.0;
  std::vector<double> x_coeff;  ///< x - gamma E[X' | s,a], per live slot
  std::vector<double> y_coeff;  ///< y - gamma E[Y], per (type, region)
};

Column make_column(const ProblemInstance& inst, const StateSpace& space, const State& s,
                   const ActionPlan& a);

/// cost - (1-gamma) eta - tau'x_coeff - rho'y_coeff.
double reduced_cost(const Column& col, const AlpParams& params, double gamma);

/// Feasible starting column: every referral is accepted into its latest
/// allowed day, every day-1 visit is diverted, and the booking levels are
/// the smallest integers that keep the column's dual rows satisfiable at
/// weight 1/(1-gamma). Throws ValidationError when the instance caps are
/// too tight to host it.
Column initial_column(const ProblemInstance& inst, const StateSpace& space,
                      const StateRelevanceWeights& weights);

/// Decay coefficients tying later-day and later-visit slot prices to the
/// base slot of type k:
///   delta[t][j] = gamma^(t-1) * sum_{i=0}^{J_k-1-j} gamma^(i h_k)
///                 * prod_{i'=0}^{i-1} p_{k, j+2+i'}
/// Row 0 is unused; rows run t = 1..horizon, columns j = 0..J_k-1.
std::vector<std::vector<double>> delta_coefficients(const ProblemInstance& inst, int k);

/// Distance-class proxy: regions with equal depot distance are merged into
/// one region on a line, arrival rates and cap multipliers summed.
struct Projection1D {
  ProblemInstance proxy;
  std::vector<int> class_of;              ///< region -> class index
  std::vector<std::vector<int>> members;  ///< class index -> region ids
};
Projection1D project_to_1d(const ProblemInstance& inst);

/// Closed-form parameters for the restricted setting: no overtime, no
/// rejections, diversion priced far above travel (weight ratio >= 100),
/// symmetric distances and uniform visit duration. Throws ValidationError
/// when the instance is outside the setting or a region cannot host a
/// single visit within the shift.
AlpParams closed_form_params(const ProblemInstance& inst);

/// Certificate that the closed-form parameters solve the parameter LP:
/// the dual weights recovered from the binding state-action pairs, the
/// normalization residual beta0 and its large-cap limit. `valid` requires
/// the day-1 mass condition (sum below strictly under 1/(1-gamma)) and a
/// nonnegative limit residual.
struct DualCertificate {
  std::vector<double> beta_x;   ///< per live slot
  std::vector<double> beta_n1;  ///< per (type, region); zero unless T_k = 1
  std::vector<double> beta_y;   ///< per (type, region)
  double beta0 = 0.0;
  double beta0_limit = 0.0;
  double condition_lhs = 0.0;  ///< sum of day-1 beta_x and beta_n1
  double condition_rhs = 0.0;  ///< 1/(1-gamma)
  bool valid = false;
  std::vector<int> x_m;  ///< per region: floor((chi - 2 d_0l)/e)
};
DualCertificate dual_certificate(const ProblemInstance& inst, const AlpParams& params);

struct SubproblemModel {
  optim::LinearModel model;
  // Decode maps from model variables back to state/action coordinates.
  std::vector<int> x_var;     ///< per live slot
  std::vector<int> y_var;     ///< per (type, region)
  std::vector<int> n_var;     ///< per assignment slot
  std::vector<int> z_var;     ///< per (type, region)
  std::vector<int> w_var;     ///< per region: 1 when the route visits it
  std::vector<int> pair_var;  ///< per region pair a < b: 1 when a precedes b
  std::vector<int> f_var;     ///< per region: travel clock at its visit
  int q_var = -1;
  int u_var = -1;

  int pair_index(int a, int b, int L) const { return a * L - a * (a + 1) / 2 + (b - a - 1); }
};

/// Pricing problem: a MIP over one state-action pair minimizing the
/// reduced cost of its dual column under `params`. Under the 2I variants
/// the slot prices are first re-expanded from the per-(k,l) base slot
/// through the decay coefficients.
SubproblemModel build_subproblem(const AlpParams& params, const StateRelevanceWeights& weights,
                                 const ProblemInstance& inst, Variant variant);

/// Rebuild the state-action pair of a pricing solution. The route is the
/// visited set ordered by the travel clocks, replaced by a shorter exact
/// tour when one exists, so the decoded cost never exceeds the model's.
Column decode_subproblem(const SubproblemModel& sub, const ProblemInstance& inst,
                         const StateSpace& space, const std::vector<double>& solution);

struct ColumnGenOptions {
  int max_columns = 10000;
  double tolerance = 1e-6;  ///< convergence threshold on the reduced cost
  long mip_max_nodes = 200000;
};

struct ColumnGenResult {
  AlpParams params;
  int iterations = 0;  ///< master LP solves
  int columns = 0;     ///< columns in the final restricted LP
  double master_objective = 0.0;
  bool converged = false;  ///< pricing proved no constraint beats -tolerance
};

/// Delayed column generation on the dual of the parameter LP. The 1D
/// variants run on the distance-class proxy (relevance weights scaled by
/// class size) and the resulting prices are copied to every member region.
/// Throws ValidationError if the column budget runs out or the restricted
/// LP turns infeasible.
ColumnGenResult column_generation(const ProblemInstance& inst, double epsilon, Variant variant,
                                  const ColumnGenOptions& opts = {});

enum class FeasibilityMode { exhaustive, sampled };

struct FeasibilityReport {
  double max_violation = 0.0;
  long long pairs_checked = 0;
  bool feasible = false;  ///< max_violation <= 1e-6
  std::string mode;
  State worst_state;
  ActionPlan worst_action;
};

/// Largest violation of the parameter-LP constraint
///   (1-gamma) eta + tau'(x - gamma E[X']) + rho'(y - gamma E[Y]) <= c(s,a)
/// over all state-action pairs (exhaustive; throws when the enumeration
/// exceeds 1e7 pairs) or over random pairs plus the single-coordinate
/// extreme pairs (sampled).
FeasibilityReport check_feasibility(const AlpParams& params, const ProblemInstance& inst,
                                    FeasibilityMode mode, std::uint64_t seed = 1);

/// What one policy simulation reports back to the tuner.
struct SimulationOutcome {
  double average_value = 0.0;
  double rejection_hours = 0.0;
  double diversion_hours = 0.0;
  double rejection_se = 0.0;
  double diversion_se = 0.0;
  bool all_reject = false;  ///< the run accepted no referral at all
};
using SimulateFn = std::function<SimulationOutcome(const AlpParams&)>;

struct TuneOptions {
  int max_breakpoints = 50;       ///< simulated parameter regimes before giving up
  double ceiling_factor = 1e4;    ///< stop doubling at ceiling_factor * initial bracket
  double param_tol = 1e-7;        ///< two parameter sets within this are "the same"
  ColumnGenOptions column_gen;
};

struct TunePoint {
  double epsilon = 0.0;
  SimulationOutcome outcome;
};

struct TuneResult {
  double best_epsilon = 0.0;
  AlpParams best_params;
  std::vector<TunePoint> trace;  ///< simulated breakpoints, increasing epsilon
  bool ceiling_hit = false;      ///< doubling never changed the parameters
  bool budget_exhausted = false; ///< breakpoint budget ran out; best-so-far returned
};

/// Walk epsilon upward through the (finitely many) parameter regimes:
/// double until the parameters change, bisect to each change point,
/// simulate one policy per regime, and stop at the regime that rejects
/// everything. Returns the epsilon with the smallest estimated average
/// value. Parameter solves are memoized; a regime equal to the previous
/// one reuses its simulation.
TuneResult tune_epsilon(const ProblemInstance& inst, Variant variant,
                        const SimulateFn& simulate, const TuneOptions& opts = {});

}  // namespace hcr::alp
