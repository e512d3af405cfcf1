#include "hcr/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "hcr/common.hpp"
#include "hcr/rng.hpp"

namespace hcr {

namespace {

using nlohmann::json;

double require_number(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw ValidationError(std::string("instance: missing numeric field '") + key + "'");
  }
  return j[key].get<double>();
}

int require_int(const json& j, const char* key) {
  const double v = require_number(j, key);
  if (std::fabs(v - std::round(v)) > 1e-9) {
    throw ValidationError(std::string("instance: field '") + key + "' must be an integer");
  }
  return static_cast<int>(std::llround(v));
}

std::string require_string(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw ValidationError(std::string("instance: missing string field '") + key + "'");
  }
  return j[key].get<std::string>();
}

Geometry parse_geometry(const json& g) {
  const std::string shape = require_string(g, "shape");
  if (shape == "circular") {
    return build_circular_geometry(require_int(g, "rings"), require_number(g, "diameter_h"));
  }
  if (shape == "rectangular") {
    return build_rectangular_geometry(require_int(g, "rows"), require_int(g, "cols"),
                                      require_number(g, "diameter_h"));
  }
  if (shape == "array1d") {
    if (!g.contains("depot_distances") || !g["depot_distances"].is_array()) {
      throw ValidationError("instance: array1d geometry needs 'depot_distances'");
    }
    return build_array1d_geometry(g["depot_distances"].get<std::vector<double>>());
  }
  throw ValidationError("instance: unknown geometry shape '" + shape + "'");
}

VisitDistSpec parse_dist(const json& d) {
  VisitDistSpec spec;
  const std::string kind = require_string(d, "kind");
  if (kind == "deterministic") {
    spec.kind = VisitDistSpec::Kind::deterministic;
    spec.mean = require_number(d, "mean");
    spec.max = static_cast<int>(std::llround(spec.mean));
  } else if (kind == "truncated-poisson" || kind == "poisson") {
    spec.kind = VisitDistSpec::Kind::truncated_poisson;
    spec.mean = require_number(d, "mean");
    spec.max = require_int(d, "max");
  } else if (kind == "discrete-uniform" || kind == "uniform") {
    spec.kind = VisitDistSpec::Kind::discrete_uniform;
    spec.max = require_int(d, "max");
    spec.mean = 0.5 * (1.0 + spec.max);
  } else {
    throw ValidationError("instance: unknown visit distribution kind '" + kind + "'");
  }
  return spec;
}

}  // namespace

void ProblemInstance::refresh_derived() {
  int t = 1;
  for (const auto& s : types) t = std::max({t, s.h, s.wait_target});
  horizon = t;
  reject_cost.resize(types.size());
  divert_cost.resize(types.size());
  for (std::size_t k = 0; k < types.size(); ++k) {
    reject_cost[k] = weights.r * types[k].dist.mean * types[k].e;
    divert_cost[k] = weights.z * types[k].e;
  }
  double demand = 0.0;
  for (int k = 0; k < K(); ++k) {
    for (int l = 0; l < L(); ++l) {
      demand += rate(k, l) * types[static_cast<std::size_t>(k)].e *
                types[static_cast<std::size_t>(k)].typical_visits;
    }
  }
  daily_demand = demand;
  if (cap_scale.empty()) cap_scale.assign(static_cast<std::size_t>(L()), 1);
}

ProblemInstance load_instance(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ValidationError("instance: document must be a JSON object");
  ProblemInstance inst;

  if (!doc.contains("geometry")) throw ValidationError("instance: missing 'geometry'");
  inst.geo = parse_geometry(doc["geometry"]);

  if (!doc.contains("services") || !doc["services"].is_array() || doc["services"].empty()) {
    throw ValidationError("instance: 'services' must be a non-empty array");
  }
  for (const auto& sj : doc["services"]) {
    ServiceType s;
    s.h = require_int(sj, "h");
    s.e = require_number(sj, "e");
    s.wait_target = require_int(sj, "T");
    if (s.h < 1) throw ValidationError("instance: service h must be >= 1");
    if (!(s.e > 0)) throw ValidationError("instance: service e must be positive");
    if (s.wait_target < 1) throw ValidationError("instance: service T must be >= 1");
    if (!sj.contains("dist")) throw ValidationError("instance: service missing 'dist'");
    s.dist_spec = parse_dist(sj["dist"]);
    s.dist = continuation_probabilities(s.dist_spec);
    s.typical_visits = static_cast<int>(std::llround(s.dist.mean));
    if (s.typical_visits < 1) s.typical_visits = 1;
    inst.types.push_back(std::move(s));
  }

  if (!doc.contains("shift")) throw ValidationError("instance: missing 'shift'");
  inst.chi = require_number(doc["shift"], "chi");
  inst.chi_prime = require_number(doc["shift"], "chi_prime");
  if (!(inst.chi > 0)) throw ValidationError("instance: chi must be positive");
  if (inst.chi_prime < 0) throw ValidationError("instance: chi_prime must be nonnegative");

  if (!doc.contains("weights")) throw ValidationError("instance: missing 'weights'");
  inst.weights.r = require_number(doc["weights"], "r");
  inst.weights.z = require_number(doc["weights"], "z");
  inst.weights.u = require_number(doc["weights"], "u");
  inst.weights.q = require_number(doc["weights"], "q");
  if (inst.weights.r < 0 || inst.weights.z < 0 || inst.weights.u < 0 || inst.weights.q < 0) {
    throw ValidationError("instance: cost weights must be nonnegative");
  }

  inst.gamma = require_number(doc, "gamma");
  if (!(inst.gamma > 0 && inst.gamma < 1)) {
    throw ValidationError("instance: gamma must lie in (0, 1)");
  }

  if (doc.contains("caps")) {
    inst.x_cap = require_int(doc["caps"], "x_max");
    inst.y_cap = require_int(doc["caps"], "y_max");
    if (inst.x_cap < 1 || inst.y_cap < 1) {
      throw ValidationError("instance: caps must be >= 1");
    }
    if (doc["caps"].contains("scale")) {
      inst.cap_scale = doc["caps"]["scale"].get<std::vector<int>>();
      if (static_cast<int>(inst.cap_scale.size()) != inst.L()) {
        throw ValidationError("instance: caps.scale length must equal region count");
      }
      for (int s : inst.cap_scale) {
        if (s < 1) throw ValidationError("instance: caps.scale entries must be >= 1");
      }
    }
  }

  if (doc.contains("allow_rejection")) {
    if (!doc["allow_rejection"].is_boolean()) {
      throw ValidationError("instance: allow_rejection must be a boolean");
    }
    inst.allow_rejection = doc["allow_rejection"].get<bool>();
  }

  // Arrival rates.
  if (!doc.contains("arrivals")) throw ValidationError("instance: missing 'arrivals'");
  const json& arr = doc["arrivals"];
  const std::string mode = require_string(arr, "mode");
  const int K = inst.K();
  const int L = inst.L();
  inst.lambda.assign(static_cast<std::size_t>(K), std::vector<double>(static_cast<std::size_t>(L), 0.0));

  double hours_per_referral = 0.0;  // sum over types of e_k * typical visits
  for (const auto& s : inst.types) hours_per_referral += s.e * s.typical_visits;

  if (mode == "fixed") {
    const double target = require_number(arr, "target_daily_demand_h");
    if (!(target > 0)) throw ValidationError("instance: target_daily_demand_h must be positive");
    const double lam = target / (L * hours_per_referral);
    for (auto& row : inst.lambda) std::fill(row.begin(), row.end(), lam);
  } else if (mode == "random") {
    const double target = require_number(arr, "target_daily_demand_h");
    if (!(target > 0)) throw ValidationError("instance: target_daily_demand_h must be positive");
    const auto seed = static_cast<std::uint64_t>(require_int(arr, "seed"));
    Rng rng(derive_seed(seed, {stream_tag("arrival-rates")}));
    const double lam_bar = target / (L * hours_per_referral);
    double demand = 0.0;
    for (int k = 0; k < K; ++k) {
      for (int l = 0; l < L; ++l) {
        const double v = rng.uniform() * 2.0 * lam_bar;
        inst.lambda[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] = v;
        demand += v * inst.types[static_cast<std::size_t>(k)].e *
                  inst.types[static_cast<std::size_t>(k)].typical_visits;
      }
    }
    if (!(demand > 0)) throw ValidationError("instance: drawn arrival rates sum to zero");
    const double scale = target / demand;
    for (auto& row : inst.lambda) {
      for (auto& v : row) v *= scale;
    }
  } else if (mode == "explicit") {
    if (!arr.contains("matrix") || !arr["matrix"].is_array()) {
      throw ValidationError("instance: explicit arrivals need 'matrix'");
    }
    const auto m = arr["matrix"].get<std::vector<std::vector<double>>>();
    if (static_cast<int>(m.size()) != K) {
      throw ValidationError("instance: arrival matrix must have one row per service type");
    }
    for (int k = 0; k < K; ++k) {
      if (static_cast<int>(m[static_cast<std::size_t>(k)].size()) != L) {
        throw ValidationError("instance: arrival matrix row length must equal region count");
      }
      for (double v : m[static_cast<std::size_t>(k)]) {
        if (!(v >= 0) || !std::isfinite(v)) {
          throw ValidationError("instance: arrival rates must be finite and nonnegative");
        }
      }
      inst.lambda[static_cast<std::size_t>(k)] = m[static_cast<std::size_t>(k)];
    }
    if (arr.contains("target_daily_demand_h")) {
      const double target = require_number(arr, "target_daily_demand_h");
      double demand = 0.0;
      for (int k = 0; k < K; ++k) {
        for (int l = 0; l < L; ++l) {
          demand += inst.lambda[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] *
                    inst.types[static_cast<std::size_t>(k)].e *
                    inst.types[static_cast<std::size_t>(k)].typical_visits;
        }
      }
      if (target > 0 && demand > 0) {
        const double scale = target / demand;
        for (auto& row : inst.lambda) {
          for (auto& v : row) v *= scale;
        }
      }
    }
  } else {
    throw ValidationError("instance: unknown arrivals mode '" + mode + "'");
  }

  inst.refresh_derived();
  return inst;
}

ProblemInstance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("instance: cannot open file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("instance: JSON parse error: ") + e.what());
  }
  return load_instance(doc);
}

nlohmann::json instance_to_json(const ProblemInstance& inst) {
  json g;
  switch (inst.geo.shape) {
    case Geometry::Shape::circular:
      g = {{"shape", "circular"}, {"rings", inst.geo.rings}, {"diameter_h", inst.geo.diameter_h}};
      break;
    case Geometry::Shape::rectangular:
      g = {{"shape", "rectangular"},
           {"rows", inst.geo.rows},
           {"cols", inst.geo.cols},
           {"diameter_h", inst.geo.diameter_h}};
      break;
    case Geometry::Shape::array1d:
      g = {{"shape", "array1d"}, {"depot_distances", inst.geo.depot_distances}};
      break;
  }
  json services = json::array();
  for (const auto& s : inst.types) {
    json d;
    switch (s.dist_spec.kind) {
      case VisitDistSpec::Kind::deterministic:
        d = {{"kind", "deterministic"}, {"mean", s.dist_spec.mean}};
        break;
      case VisitDistSpec::Kind::truncated_poisson:
        d = {{"kind", "truncated-poisson"}, {"mean", s.dist_spec.mean}, {"max", s.dist_spec.max}};
        break;
      case VisitDistSpec::Kind::discrete_uniform:
        d = {{"kind", "discrete-uniform"}, {"max", s.dist_spec.max}};
        break;
    }
    services.push_back({{"h", s.h}, {"e", s.e}, {"T", s.wait_target}, {"dist", d}});
  }
  json caps = {{"x_max", inst.x_cap}, {"y_max", inst.y_cap}};
  bool scaled = false;
  for (int s : inst.cap_scale) scaled = scaled || s != 1;
  if (scaled) caps["scale"] = inst.cap_scale;
  return json{{"geometry", g},
              {"services", services},
              {"arrivals", {{"mode", "explicit"}, {"matrix", inst.lambda}}},
              {"shift", {{"chi", inst.chi}, {"chi_prime", inst.chi_prime}}},
              {"weights",
               {{"r", inst.weights.r}, {"z", inst.weights.z}, {"u", inst.weights.u}, {"q", inst.weights.q}}},
              {"gamma", inst.gamma},
              {"caps", caps},
              {"allow_rejection", inst.allow_rejection}};
}

}  // namespace hcr
