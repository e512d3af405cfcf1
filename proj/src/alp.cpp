#include "hcr/alp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "hcr/common.hpp"
#include "hcr/mdp.hpp"

namespace hcr::alp {

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::full: return "full";
    case Variant::two_i: return "2I";
    case Variant::one_d: return "1D";
    case Variant::one_d_two_i: return "1D-2I";
  }
  return "full";
}

Variant parse_variant(const std::string& name) {
  std::string s;
  s.reserve(name.size());
  for (char c : name) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (s == "full") return Variant::full;
  if (s == "2i") return Variant::two_i;
  if (s == "1d") return Variant::one_d;
  if (s == "1d-2i" || s == "1d2i") return Variant::one_d_two_i;
  throw ValidationError("unknown variant '" + name + "' (expected full, 2I, 1D or 1D-2I)");
}

StateRelevanceWeights StateRelevanceWeights::uniform(const ProblemInstance& inst,
                                                     const StateSpace& space, double epsilon) {
  if (epsilon < 0.0) throw ValidationError("relevance weight epsilon must be nonnegative");
  StateRelevanceWeights w;
  w.epsilon = epsilon;
  w.x.assign(static_cast<std::size_t>(space.x_size()), epsilon);
  w.y.resize(static_cast<std::size_t>(space.kl_size()));
  for (int k = 0; k < space.K(); ++k)
    for (int l = 0; l < space.L(); ++l)
      w.y[static_cast<std::size_t>(space.kl_index(k, l))] = inst.rate(k, l);
  return w;
}

Column make_column(const ProblemInstance& inst, const StateSpace& space, const State& s,
                   const ActionPlan& a) {
  Column col;
  col.state = s;
  col.action = a;
  col.cost = immediate_cost(space, inst, s, a);
  const std::vector<double> ex = expected_next_x(space, inst, s, a);
  col.x_coeff.resize(static_cast<std::size_t>(space.x_size()));
  for (int i = 0; i < space.x_size(); ++i)
    col.x_coeff[static_cast<std::size_t>(i)] =
        s.x[static_cast<std::size_t>(i)] - inst.gamma * ex[static_cast<std::size_t>(i)];
  col.y_coeff.resize(static_cast<std::size_t>(space.kl_size()));
  for (int k = 0; k < space.K(); ++k)
    for (int l = 0; l < space.L(); ++l) {
      const int kl = space.kl_index(k, l);
      col.y_coeff[static_cast<std::size_t>(kl)] =
          s.y[static_cast<std::size_t>(kl)] - inst.gamma * inst.rate(k, l);
    }
  return col;
}

double reduced_cost(const Column& col, const AlpParams& params, double gamma) {
  double v = col.cost - (1.0 - gamma) * params.eta;
  for (std::size_t i = 0; i < col.x_coeff.size(); ++i) v -= params.tau[i] * col.x_coeff[i];
  for (std::size_t i = 0; i < col.y_coeff.size(); ++i) v -= params.rho[i] * col.y_coeff[i];
  return v;
}

namespace {

int ceil_count(double v) {
  const double c = std::ceil(v - 1e-12);
  return c <= 0.0 ? 0 : static_cast<int>(c);
}

}  // namespace

std::vector<std::vector<double>> delta_coefficients(const ProblemInstance& inst, int k) {
  if (k < 0 || k >= inst.K()) throw ValidationError("service type index out of range");
  const ServiceType& svc = inst.types[static_cast<std::size_t>(k)];
  const int J = svc.max_visits();
  std::vector<std::vector<double>> delta(static_cast<std::size_t>(inst.horizon) + 1);
  for (int t = 1; t <= inst.horizon; ++t) {
    auto& row = delta[static_cast<std::size_t>(t)];
    row.assign(static_cast<std::size_t>(J), 0.0);
    for (int j = 0; j < J; ++j) {
      double sum = 0.0;
      double survive = 1.0;  // prod_{i'=0}^{i-1} p_{k, j+2+i'}
      for (int i = 0; i <= J - 1 - j; ++i) {
        sum += std::pow(inst.gamma, i * svc.h) * survive;
        survive *= inst.p(k, j + 2 + i);
      }
      row[static_cast<std::size_t>(j)] = std::pow(inst.gamma, t - 1) * sum;
    }
  }
  return delta;
}

Column initial_column(const ProblemInstance& inst, const StateSpace& space,
                      const StateRelevanceWeights& weights) {
  State s = State::zero(space);
  ActionPlan a = ActionPlan::zero(space);
  const double g = inst.gamma;

  for (int k = 0; k < inst.K(); ++k) {
    const ServiceType& svc = inst.types[static_cast<std::size_t>(k)];
    for (int l = 0; l < inst.L(); ++l) {
      const int kl = space.kl_index(k, l);
      const int y = ceil_count(g * inst.rate(k, l) +
                               (1.0 - g) * weights.y[static_cast<std::size_t>(kl)]);
      if (y > inst.y_cap_of(l)) {
        std::ostringstream msg;
        msg << "initial column needs " << y << " pending referrals at (k=" << k << ", l=" << l
            << ") but the cap is " << inst.y_cap_of(l);
        throw ValidationError(msg.str());
      }
      s.y[static_cast<std::size_t>(kl)] = y;
      a.assign[static_cast<std::size_t>(space.n_index(svc.wait_target, k, l))] = y;
    }
  }

  auto place = [&](int idx, double value, int l) {
    const int v = ceil_count(value);
    if (v > inst.x_cap_of(l)) {
      const XKey key = space.x_keys()[static_cast<std::size_t>(idx)];
      std::ostringstream msg;
      msg << "initial column needs " << v << " booked visits in slot (t=" << key.t
          << ", k=" << key.k << ", l=" << key.l << ", j=" << key.j << ") but the cap is "
          << inst.x_cap_of(l);
      throw ValidationError(msg.str());
    }
    s.x[static_cast<std::size_t>(idx)] = v;
  };

  for (int k = 0; k < inst.K(); ++k) {
    const ServiceType& svc = inst.types[static_cast<std::size_t>(k)];
    const int J = svc.max_visits();
    for (int l = 0; l < inst.L(); ++l) {
      // First-visit slots, latest day first: each must cover tomorrow's
      // bookings plus the referrals assigned to start then.
      for (int t = svc.wait_target - 1; t >= 1; --t) {
        const int idx = space.x_index(t, k, l, 0);
        const double next = s.x_at(space, t + 1, k, l, 0) + a.assign_at(space, t + 1, k, l);
        place(idx, g * next + (1.0 - g) * weights.x[static_cast<std::size_t>(idx)], l);
      }
      // Follow-up slots, level by level: the day-h slot is fed by level
      // j-1 visits served today, the earlier days by the day above.
      for (int j = 1; j < J; ++j) {
        const int idx_h = space.x_index(svc.h, k, l, j);
        const double fed = s.x_at(space, 1, k, l, j - 1) +
                           (j == 1 ? a.assign_at(space, 1, k, l) : 0);
        place(idx_h, g * inst.p(k, j + 1) * fed +
                         (1.0 - g) * weights.x[static_cast<std::size_t>(idx_h)],
              l);
        for (int t = svc.h - 1; t >= 1; --t) {
          const int idx = space.x_index(t, k, l, j);
          place(idx, g * s.x_at(space, t + 1, k, l, j) +
                         (1.0 - g) * weights.x[static_cast<std::size_t>(idx)],
                l);
        }
      }
    }
  }

  // Divert everything due today; the nurse stays at the depot.
  const std::vector<int> day1 = day_one_served(space, s, a);
  for (int kl = 0; kl < space.kl_size(); ++kl)
    a.divert[static_cast<std::size_t>(kl)] = day1[static_cast<std::size_t>(kl)];

  validate_state(space, inst, s);
  const std::vector<std::string> tags = check_action(space, inst, s, a);
  if (!tags.empty()) {
    std::string joined;
    for (const auto& t : tags) joined += (joined.empty() ? "" : ", ") + t;
    throw ValidationError("initial column is infeasible: " + joined);
  }
  return make_column(inst, space, s, a);
}

nlohmann::json params_to_json(const AlpParams& params, const StateSpace& space) {
  nlohmann::json doc;
  doc["eta"] = params.eta;
  nlohmann::json tau = nlohmann::json::array();
  for (int i = 0; i < space.x_size(); ++i) {
    const XKey key = space.x_keys()[static_cast<std::size_t>(i)];
    tau.push_back({{"t", key.t},
                   {"k", key.k},
                   {"l", key.l},
                   {"j", key.j},
                   {"value", params.tau[static_cast<std::size_t>(i)]}});
  }
  doc["tau"] = std::move(tau);
  nlohmann::json rho = nlohmann::json::array();
  for (int k = 0; k < space.K(); ++k) {
    nlohmann::json row = nlohmann::json::array();
    for (int l = 0; l < space.L(); ++l)
      row.push_back(params.rho[static_cast<std::size_t>(space.kl_index(k, l))]);
    rho.push_back(std::move(row));
  }
  doc["rho"] = std::move(rho);
  doc["metadata"] = {{"variant", params.meta.variant},
                     {"epsilon", params.meta.epsilon},
                     {"iterations", params.meta.iterations},
                     {"solve_seconds", params.meta.solve_seconds},
                     {"columns", params.meta.columns}};
  return doc;
}

AlpParams params_from_json(const nlohmann::json& doc, const StateSpace& space) {
  AlpParams params;
  params.eta = doc.at("eta").get<double>();
  params.tau.assign(static_cast<std::size_t>(space.x_size()), 0.0);
  for (const auto& entry : doc.at("tau")) {
    const int idx = space.x_index(entry.at("t").get<int>(), entry.at("k").get<int>(),
                                  entry.at("l").get<int>(), entry.at("j").get<int>());
    if (idx < 0) throw ValidationError("tau entry addresses a structurally zero slot");
    params.tau[static_cast<std::size_t>(idx)] = entry.at("value").get<double>();
  }
  const auto& rho = doc.at("rho");
  if (static_cast<int>(rho.size()) != space.K())
    throw ValidationError("rho has the wrong number of service types");
  params.rho.assign(static_cast<std::size_t>(space.kl_size()), 0.0);
  for (int k = 0; k < space.K(); ++k) {
    const auto& row = rho[static_cast<std::size_t>(k)];
    if (static_cast<int>(row.size()) != space.L())
      throw ValidationError("rho has the wrong number of regions");
    for (int l = 0; l < space.L(); ++l)
      params.rho[static_cast<std::size_t>(space.kl_index(k, l))] =
          row[static_cast<std::size_t>(l)].get<double>();
  }
  if (doc.contains("metadata")) {
    const auto& meta = doc.at("metadata");
    params.meta.variant = meta.value("variant", std::string{});
    params.meta.epsilon = meta.value("epsilon", 0.0);
    params.meta.iterations = meta.value("iterations", 0);
    params.meta.solve_seconds = meta.value("solve_seconds", 0.0);
    params.meta.columns = meta.value("columns", 0);
  }
  return params;
}

}  // namespace hcr::alp
