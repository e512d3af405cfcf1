#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "hcr/geometry.hpp"
#include "hcr/service.hpp"

namespace hcr {

struct CostWeights {
  double r = 0.0;  ///< per rejected expected service hour
  double z = 0.0;  ///< per diverted service hour
  double u = 0.0;  ///< per overtime hour
  double q = 0.0;  ///< per travel hour
};

/// Complete problem data: geometry, service types, arrival rates, shift
/// limits, cost weights and state-space caps, plus derived quantities.
struct ProblemInstance {
  Geometry geo;
  std::vector<ServiceType> types;
  std::vector<std::vector<double>> lambda;  ///< arrival rate per [type][region]
  double chi = 8.0;        ///< regular shift hours
  double chi_prime = 0.0;  ///< maximum overtime hours
  CostWeights weights;
  double gamma = 0.99;
  int x_cap = 30;  ///< per-slot cap on booked visits
  int y_cap = 30;  ///< per-(type,region) cap on pending referrals
  /// Per-region cap multiplier, default 1. Distance-class proxies built by
  /// the reduction use values > 1 so that one proxy region can hold the
  /// bookings of a whole class of regions.
  std::vector<int> cap_scale;
  bool allow_rejection = true;

  // Derived on load.
  int horizon = 1;             ///< planning days tracked in the state
  std::vector<double> reject_cost;  ///< per type: weights.r * mean visits * e
  std::vector<double> divert_cost;  ///< per type: weights.z * e
  double daily_demand = 0.0;        ///< sum over (k,l) of lambda * e * typical visits

  int K() const { return static_cast<int>(types.size()); }
  int L() const { return geo.L; }
  int x_cap_of(int l) const { return x_cap * cap_scale[static_cast<std::size_t>(l)]; }
  int y_cap_of(int l) const { return y_cap * cap_scale[static_cast<std::size_t>(l)]; }
  double p(int k, int j) const { return types[static_cast<std::size_t>(k)].p(j); }
  double rate(int k, int l) const {
    return lambda[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
  }

  /// Recompute horizon, costs and daily demand after a field change.
  void refresh_derived();
};

/// Parse, validate and complete an instance from its JSON description.
/// Arrival matrices for the "fixed" and "random" modes are generated here
/// so that the returned instance is fully specified.
ProblemInstance load_instance(const nlohmann::json& doc);

/// Convenience wrapper: read the file and call load_instance.
ProblemInstance load_instance_file(const std::string& path);

/// Serialize an instance back to JSON (explicit arrival matrix).
nlohmann::json instance_to_json(const ProblemInstance& inst);

}  // namespace hcr
