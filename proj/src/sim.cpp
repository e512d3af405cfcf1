#include "hcr/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <sstream>
#include <utility>

#include "hcr/common.hpp"
#include "hcr/layout.hpp"
#include "hcr/mdp.hpp"
#include "hcr/parallel.hpp"

namespace hcr::sim {

namespace {

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

struct TTest {
  double t = 0.0;
  bool significant = false;
};

/// Paired t of `diffs` against zero, two-sided at 95%.
TTest paired_t(const std::vector<double>& diffs) {
  TTest out;
  const int n = static_cast<int>(diffs.size());
  if (n < 2) return out;
  const double m = mean_of(diffs);
  const double sd = sd_of(diffs);
  if (sd == 0.0) {
    out.t = (m == 0.0) ? 0.0 : (m > 0.0 ? kInf : -kInf);
    out.significant = m != 0.0;
    return out;
  }
  out.t = m / (sd / std::sqrt(static_cast<double>(n)));
  out.significant = std::abs(out.t) >= t_critical_95(n - 1);
  return out;
}

DayMetrics average_days(const std::vector<DayMetrics>& days) {
  DayMetrics m;
  if (days.empty()) return m;
  double acc = 0.0, rej = 0.0;
  for (const auto& d : days) {
    m.cost += d.cost;
    m.rejection_hours += d.rejection_hours;
    m.diversion_hours += d.diversion_hours;
    m.overtime_hours += d.overtime_hours;
    m.travel_time += d.travel_time;
    m.tour_length += d.tour_length;
    acc += d.accepted;
    rej += d.rejected;
  }
  const double n = static_cast<double>(days.size());
  m.cost /= n;
  m.rejection_hours /= n;
  m.diversion_hours /= n;
  m.overtime_hours /= n;
  m.travel_time /= n;
  m.tour_length /= n;
  m.accepted = static_cast<int>(std::lround(acc));
  m.rejected = static_cast<int>(std::lround(rej));
  return m;
}

std::string fixed6(double v) {
  if (v == 0.0) v = 0.0;  // avoid "-0.000000"
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string fixed2(double v) {
  if (v == 0.0) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

Policy myopic_policy(const ProblemInstance& inst) {
  return [&inst](const State& s) { return policies::myopic_action(s, inst); };
}

Policy alp_policy(const ProblemInstance& inst, const alp::AlpParams& params) {
  return [&inst, params](const State& s) { return policies::alp_action(s, params, inst); };
}

Policy sb_policy(const ProblemInstance& inst, const policies::SbConfig& config,
                 std::uint64_t seed) {
  auto rng = std::make_shared<Rng>(seed);
  return [&inst, config, rng](const State& s) {
    return policies::sb_action(s, inst, config, *rng);
  };
}

Policy reject_all_policy(const ProblemInstance& inst) {
  auto space = std::make_shared<StateSpace>(inst);
  return [&inst, space](const State& s) {
    State stripped = s;
    stripped.y.assign(stripped.y.size(), 0);
    auto base = policies::myopic_action(stripped, inst);
    policies::PolicyDecision out;
    out.action = base.action;
    out.action.reject = s.y;
    out.heuristic = base.heuristic;
    out.solve_seconds = base.solve_seconds;
    out.objective = immediate_cost_unchecked(inst, *space, s, out.action);
    return out;
  };
}

Policy accept_divert_policy(const ProblemInstance& inst) {
  auto space = std::make_shared<StateSpace>(inst);
  return [&inst, space](const State& s) {
    const StateSpace& sp = *space;
    ActionPlan a = ActionPlan::zero(sp);
    for (int k = 0; k < sp.K(); ++k) {
      for (int l = 0; l < sp.L(); ++l) {
        const int kl = sp.kl_index(k, l);
        const int y = s.y[static_cast<std::size_t>(kl)];
        a.assign[static_cast<std::size_t>(sp.n_index(1, k, l))] = y;
        int load = y;
        for (int j = 0; j < sp.max_j(); ++j) {
          const int idx = sp.x_index(1, k, l, j);
          if (idx >= 0) load += s.x[static_cast<std::size_t>(idx)];
        }
        a.divert[static_cast<std::size_t>(kl)] = load;
      }
    }
    policies::PolicyDecision out;
    out.action = std::move(a);
    out.objective = immediate_cost_unchecked(inst, sp, s, out.action);
    return out;
  };
}

int KeyedRandomness::continuations(int k, int l, int j, int trials, double p) {
  Rng rng(derive_seed(seed_, {stream_tag("day-cont"), static_cast<std::uint64_t>(day_),
                              static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(l),
                              static_cast<std::uint64_t>(j)}));
  return rng.binomial(trials, p);
}

int KeyedRandomness::arrivals(int k, int l, double mean) {
  Rng rng(derive_seed(seed_, {stream_tag("day-arr"), static_cast<std::uint64_t>(day_),
                              static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(l)}));
  return rng.poisson(mean);
}

State warmup(const ProblemInstance& inst, const Policy& policy, int days, Rng& rng) {
  if (!policy) throw ValidationError("warmup: policy is empty");
  if (days < 0) throw ValidationError("warmup: days must be nonnegative");
  StateSpace space(inst);
  State s = State::zero(space);
  SingleStreamRandomness random(rng);
  for (int i = 0; i < days; ++i) {
    policies::PolicyDecision d;
    try {
      d = policy(s);
    } catch (const std::exception& ex) {
      throw ValidationError("warmup day " + std::to_string(i + 1) + ": " + ex.what());
    }
    s = sample_transition(space, inst, s, d.action, random).next;
  }
  return s;
}

ValueEstimate estimate_value(const ProblemInstance& inst, const State& start,
                             const Policy& policy, int days, double gamma,
                             std::uint64_t seed) {
  if (!policy) throw ValidationError("estimate_value: policy is empty");
  if (days < 0) throw ValidationError("estimate_value: days must be nonnegative");
  if (gamma < 0.0 || gamma > 1.0) throw ValidationError("estimate_value: gamma outside [0, 1]");
  StateSpace space(inst);
  validate_state(space, inst, start);

  ValueEstimate out;
  out.days.reserve(static_cast<std::size_t>(days));
  State s = start;
  KeyedRandomness random(seed);
  double disc = 1.0;
  for (int i = 0; i < days; ++i) {
    random.set_day(i);
    policies::PolicyDecision d;
    try {
      d = policy(s);
    } catch (const std::exception& ex) {
      throw ValidationError("day " + std::to_string(i + 1) + ": " + ex.what());
    }
    DayMetrics m;
    try {
      m.cost = immediate_cost(space, inst, s, d.action);
    } catch (const std::exception& ex) {
      throw ValidationError("day " + std::to_string(i + 1) + ": " + ex.what());
    }
    m.rejection_hours = rejected_hours(inst, d.action);
    m.diversion_hours = diverted_hours(inst, d.action);
    m.overtime_hours = d.action.overtime;
    m.travel_time = route_travel_time(inst, d.action.route);
    const auto served = day_one_served(space, s, d.action);
    double service = 0.0;
    for (int k = 0; k < space.K(); ++k) {
      for (int l = 0; l < space.L(); ++l) {
        service += inst.types[static_cast<std::size_t>(k)].e *
                   served[static_cast<std::size_t>(space.kl_index(k, l))];
      }
    }
    m.tour_length = m.travel_time + service;
    for (int v : d.action.assign) m.accepted += v;
    for (int v : d.action.reject) m.rejected += v;

    out.value += disc * m.cost;
    disc *= gamma;
    out.days.push_back(m);
    s = sample_transition(space, inst, s, d.action, random).next;
  }
  out.daily_mean = average_days(out.days);
  return out;
}

PolicySpec make_spec(std::string name, Policy policy) {
  PolicySpec spec;
  spec.name = std::move(name);
  spec.make = [policy = std::move(policy)](std::uint64_t) { return policy; };
  return spec;
}

SimReport compare_policies(const ProblemInstance& inst, const std::vector<PolicySpec>& specs,
                           std::size_t reference, const SimConfig& config) {
  if (specs.size() < 2) throw ValidationError("compare_policies: need at least two policies");
  if (reference >= specs.size()) throw ValidationError("compare_policies: reference out of range");
  if (config.initial_states < 1) throw ValidationError("compare_policies: initial_states must be positive");
  if (config.warmup_days < 0) throw ValidationError("compare_policies: warmup_days must be nonnegative");
  if (config.eval_days < 1) throw ValidationError("compare_policies: eval_days must be positive");
  for (const auto& spec : specs) {
    if (!spec.make) throw ValidationError("compare_policies: policy '" + spec.name + "' has no factory");
  }

  const int S = config.initial_states;
  const std::size_t P = specs.size();

  std::vector<State> starts(static_cast<std::size_t>(S));
  parallel_for(S, config.jobs, [&](int si) {
    Rng wrng(derive_seed(config.seed, {stream_tag("warm"), static_cast<std::uint64_t>(si)}));
    starts[static_cast<std::size_t>(si)] =
        warmup(inst, myopic_policy(inst), config.warmup_days, wrng);
  });

  std::vector<std::vector<ValueEstimate>> est(P, std::vector<ValueEstimate>(static_cast<std::size_t>(S)));
  parallel_for(S * static_cast<int>(P), config.jobs, [&](int cell) {
    const std::size_t pi = static_cast<std::size_t>(cell) / static_cast<std::size_t>(S);
    const int si = cell % S;
    const std::uint64_t cell_seed =
        config.common_random_numbers
            ? derive_seed(config.seed, {stream_tag("eval"), static_cast<std::uint64_t>(si)})
            : derive_seed(config.seed, {stream_tag("eval"), static_cast<std::uint64_t>(si),
                                        static_cast<std::uint64_t>(pi) + 1});
    Policy pol = specs[pi].make(
        derive_seed(config.seed, {stream_tag("policy"), static_cast<std::uint64_t>(si),
                                  static_cast<std::uint64_t>(pi)}));
    est[pi][static_cast<std::size_t>(si)] =
        estimate_value(inst, starts[static_cast<std::size_t>(si)], pol, config.eval_days,
                       inst.gamma, cell_seed);
  });

  SimReport report;
  report.reference = reference;
  report.config = config;
  report.policies.resize(P);
  for (std::size_t pi = 0; pi < P; ++pi) {
    auto& pr = report.policies[pi];
    pr.name = specs[pi].name;
    pr.values.resize(static_cast<std::size_t>(S));
    pr.state_metrics.resize(static_cast<std::size_t>(S));
    std::vector<DayMetrics> all_days;
    for (int si = 0; si < S; ++si) {
      const auto& e = est[pi][static_cast<std::size_t>(si)];
      pr.values[static_cast<std::size_t>(si)] = e.value;
      pr.state_metrics[static_cast<std::size_t>(si)] = e.daily_mean;
      all_days.insert(all_days.end(), e.days.begin(), e.days.end());
    }
    pr.daily_mean = average_days(all_days);
    if (pi != reference) {
      pr.gap_percent.resize(static_cast<std::size_t>(S));
      for (int si = 0; si < S; ++si) {
        const double vr = est[reference][static_cast<std::size_t>(si)].value;
        const double vp = pr.values[static_cast<std::size_t>(si)];
        pr.gap_percent[static_cast<std::size_t>(si)] =
            std::abs(vr) < 1e-12 ? 0.0 : 100.0 * (vr - vp) / vr;
      }
      pr.gap_mean = mean_of(pr.gap_percent);
      pr.gap_sd = sd_of(pr.gap_percent);
      const TTest tt = paired_t(pr.gap_percent);
      pr.t_stat = tt.t;
      pr.significant = tt.significant;
    }
  }

  for (std::size_t a = 0; a < P; ++a) {
    if (a == reference) continue;
    for (std::size_t b = a + 1; b < P; ++b) {
      if (b == reference) continue;
      std::vector<double> diffs(static_cast<std::size_t>(S));
      for (int si = 0; si < S; ++si) {
        diffs[static_cast<std::size_t>(si)] =
            report.policies[a].gap_percent[static_cast<std::size_t>(si)] -
            report.policies[b].gap_percent[static_cast<std::size_t>(si)];
      }
      const TTest tt = paired_t(diffs);
      report.pairs.push_back({a, b, tt.t, tt.significant});
    }
  }
  return report;
}

double t_critical_95(int df) {
  static const double table[30] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306,
                                   2.262,  2.228, 2.201, 2.179, 2.160, 2.145, 2.131, 2.120,
                                   2.110,  2.101, 2.093, 2.086, 2.080, 2.074, 2.069, 2.064,
                                   2.060,  2.056, 2.052, 2.048, 2.045, 2.042};
  if (df < 1) throw ValidationError("t_critical_95: df must be positive");
  if (df <= 30) return table[df - 1];
  if (df <= 40) return 2.042;  // rounded up to the df=30 value
  if (df <= 60) return 2.021;
  if (df <= 120) return 2.000;
  return 1.980;
}

alp::SimulateFn make_tuner_simulator(const ProblemInstance& inst, const SimConfig& config) {
  if (config.initial_states < 1) throw ValidationError("tuner simulator: initial_states must be positive");
  if (config.warmup_days < 0) throw ValidationError("tuner simulator: warmup_days must be nonnegative");
  if (config.eval_days < 1) throw ValidationError("tuner simulator: eval_days must be positive");
  return [&inst, config](const alp::AlpParams& params) {
    const int S = config.initial_states;
    std::vector<double> values(static_cast<std::size_t>(S));
    std::vector<double> rej(static_cast<std::size_t>(S));
    std::vector<double> div(static_cast<std::size_t>(S));
    std::vector<long long> accepted(static_cast<std::size_t>(S), 0);
    std::vector<long long> rejected(static_cast<std::size_t>(S), 0);
    parallel_for(S, config.jobs, [&](int si) {
      Rng wrng(derive_seed(config.seed, {stream_tag("warm"), static_cast<std::uint64_t>(si)}));
      const State start = warmup(inst, myopic_policy(inst), config.warmup_days, wrng);
      const std::uint64_t cell_seed =
          derive_seed(config.seed, {stream_tag("eval"), static_cast<std::uint64_t>(si)});
      const ValueEstimate e = estimate_value(inst, start, alp_policy(inst, params),
                                             config.eval_days, inst.gamma, cell_seed);
      values[static_cast<std::size_t>(si)] = e.value;
      rej[static_cast<std::size_t>(si)] = e.daily_mean.rejection_hours;
      div[static_cast<std::size_t>(si)] = e.daily_mean.diversion_hours;
      for (const auto& d : e.days) {
        accepted[static_cast<std::size_t>(si)] += d.accepted;
        rejected[static_cast<std::size_t>(si)] += d.rejected;
      }
    });
    long long acc_total = 0, rej_total = 0;
    for (int si = 0; si < S; ++si) {
      acc_total += accepted[static_cast<std::size_t>(si)];
      rej_total += rejected[static_cast<std::size_t>(si)];
    }
    alp::SimulationOutcome out;
    out.average_value = mean_of(values);
    out.rejection_hours = mean_of(rej);
    out.diversion_hours = mean_of(div);
    const double root_s = std::sqrt(static_cast<double>(S));
    out.rejection_se = sd_of(rej) / root_s;
    out.diversion_se = sd_of(div) / root_s;
    out.all_reject = rej_total > 0 && acc_total == 0;
    return out;
  };
}

std::string report_csv(const SimReport& report) {
  std::ostringstream out;
  out << "state,policy,value,gap_percent,rejection_hours,diversion_hours,"
         "overtime_hours,travel_time,tour_length\n";
  const int S = report.config.initial_states;
  for (int si = 0; si < S; ++si) {
    for (std::size_t pi = 0; pi < report.policies.size(); ++pi) {
      const auto& pr = report.policies[pi];
      const auto& m = pr.state_metrics[static_cast<std::size_t>(si)];
      out << si << ',' << pr.name << ',' << fixed6(pr.values[static_cast<std::size_t>(si)])
          << ',';
      if (pi != report.reference) out << fixed6(pr.gap_percent[static_cast<std::size_t>(si)]);
      out << ',' << fixed6(m.rejection_hours) << ',' << fixed6(m.diversion_hours) << ','
          << fixed6(m.overtime_hours) << ',' << fixed6(m.travel_time) << ','
          << fixed6(m.tour_length) << '\n';
    }
  }
  return out.str();
}

std::string report_markdown(const SimReport& report) {
  const std::size_t P = report.policies.size();
  // A non-reference policy is highlighted unless some pair test says it is
  // significantly behind another one.
  std::vector<bool> behind(P, false);
  for (const auto& pt : report.pairs) {
    if (!pt.significant) continue;
    const double ga = report.policies[pt.a].gap_mean;
    const double gb = report.policies[pt.b].gap_mean;
    if (ga < gb) {
      behind[pt.a] = true;
    } else if (gb < ga) {
      behind[pt.b] = true;
    }
  }
  std::ostringstream out;
  out << "| Policy | Mean value | Gap % (SD) | Rejection h | Diversion h | Overtime h "
         "| Travel h | Tour h |\n";
  out << "|---|---|---|---|---|---|---|---|\n";
  for (std::size_t pi = 0; pi < P; ++pi) {
    const auto& pr = report.policies[pi];
    const bool bold = pi != report.reference && !behind[pi];
    const std::string name = bold ? "**" + pr.name + "**" : pr.name;
    out << "| " << name << " | " << fixed2(mean_of(pr.values)) << " | ";
    if (pi == report.reference) {
      out << "reference";
    } else {
      out << fixed2(pr.gap_mean) << " (" << fixed2(pr.gap_sd) << ")";
      if (pr.significant) out << "*";
    }
    out << " | " << fixed2(pr.daily_mean.rejection_hours) << " | "
        << fixed2(pr.daily_mean.diversion_hours) << " | "
        << fixed2(pr.daily_mean.overtime_hours) << " | " << fixed2(pr.daily_mean.travel_time)
        << " | " << fixed2(pr.daily_mean.tour_length) << " |\n";
  }
  out << "\n\\* gap significant at 95% (paired t vs reference).\n";
  return out.str();
}

}  // namespace hcr::sim
