#include "doctest.h"

#include <cmath>

#include <json.hpp>

#include "hcr/common.hpp"
#include "hcr/geometry.hpp"
#include "hcr/instance.hpp"
#include "hcr/service.hpp"

using namespace hcr;
using nlohmann::json;

namespace {

json base_instance() {
  return json{
      {"geometry", {{"shape", "circular"}, {"rings", 3}, {"diameter_h", 0.5}}},
      {"services",
       {{{"h", 1},
         {"e", 0.5},
         {"T", 5},
         {"dist", {{"kind", "poisson"}, {"mean", 8.0}, {"max", 24}}}}}},
      {"arrivals", {{"mode", "fixed"}, {"target_daily_demand_h", 8.5}, {"seed", 1}}},
      {"shift", {{"chi", 8.0}, {"chi_prime", 0.0}}},
      {"weights", {{"r", 5.0}, {"z", 10.0}, {"u", 2.0}, {"q", 0.1}}},
      {"gamma", 0.99}};
}

}  // namespace

TEST_CASE("geometry: circular ring counts and distances") {
  const auto g = build_circular_geometry(3, 0.5);
  CHECK(g.L == 24);  // 2R(R+1)
  CHECK(g.cell_length == doctest::Approx(0.25 / 3.0));
  // Innermost ring cells sit one step from the depot.
  CHECK(g.depot_dist(0) == doctest::Approx(1.0 / 12.0));
  // Distances are symmetric, zero on the diagonal, triangle holds.
  for (int a = 0; a < g.L; ++a) {
    CHECK(g.between(a, a) == 0.0);
    for (int b = 0; b < g.L; ++b) {
      CHECK(g.between(a, b) == doctest::Approx(g.between(b, a)));
      CHECK(g.between(a, b) <= g.depot_dist(a) + g.depot_dist(b) + 1e-12);
    }
  }
  const auto g2 = build_circular_geometry(2, 0.5);
  CHECK(g2.L == 12);
}

TEST_CASE("geometry: rectangular grid") {
  const auto g = build_rectangular_geometry(2, 3, 0.5);
  CHECK(g.L == 6);
  CHECK(g.cell_length == doctest::Approx(0.25 / 3.0));
  // Depot at the corner; first cell center is half a step in each direction.
  CHECK(g.depot_dist(0) == doctest::Approx(1.0 / 12.0));
  // Opposite corner cell: (2.5 + 1.5) steps.
  CHECK(g.depot_dist(5) == doctest::Approx(4.0 * 0.25 / 3.0));
}

TEST_CASE("geometry: explicit depot distances") {
  const auto g = build_array1d_geometry({0.2, 0.4, 0.2});
  CHECK(g.L == 3);
  CHECK(g.depot_dist(1) == doctest::Approx(0.4));
  CHECK(g.between(0, 2) == doctest::Approx(0.0));  // same radius collapses
  CHECK(g.between(0, 1) == doctest::Approx(0.2));
}

TEST_CASE("service: continuation probabilities") {
  VisitDistSpec det{VisitDistSpec::Kind::deterministic, 6.0, 0};
  const auto d = continuation_probabilities(det);
  CHECK(d.mean == doctest::Approx(6.0));
  CHECK(d.p(1) == 1.0);
  for (int j = 2; j <= 6; ++j) CHECK(d.p(j) == doctest::Approx(1.0));
  CHECK(d.p(7) == 0.0);

  VisitDistSpec uni{VisitDistSpec::Kind::discrete_uniform, 0.0, 5};
  const auto u = continuation_probabilities(uni);
  CHECK(u.mean == doctest::Approx(3.0));
  CHECK(u.p(1) == 1.0);
  CHECK(u.p(2) == doctest::Approx(4.0 / 5.0));
  CHECK(u.p(3) == doctest::Approx(3.0 / 4.0));
  CHECK(u.p(6) == 0.0);

  VisitDistSpec poi{VisitDistSpec::Kind::truncated_poisson, 8.0, 24};
  const auto p = continuation_probabilities(poi);
  CHECK(p.mean == doctest::Approx(8.0).epsilon(1e-6));
  CHECK(p.p(1) == 1.0);
  CHECK(p.p(25) == 0.0);
  double mean = 0.0;
  for (int v = 1; v <= 24; ++v) mean += v * p.pmf[static_cast<std::size_t>(v - 1)];
  CHECK(mean == doctest::Approx(8.0).epsilon(1e-6));
  // Survival identity: P(J >= j+1) = P(J >= j) * p(j+1).
  double surv = 1.0;
  for (int j = 1; j <= 24; ++j) {
    double tail = 0.0;
    for (int v = j; v <= 24; ++v) tail += p.pmf[static_cast<std::size_t>(v - 1)];
    CHECK(surv == doctest::Approx(tail).epsilon(1e-9));
    surv *= p.p(j + 1);
  }
}

TEST_CASE("instance: fixed arrivals hit the demand target") {
  const auto inst = load_instance(base_instance());
  CHECK(inst.K() == 1);
  CHECK(inst.L() == 24);
  CHECK(inst.daily_demand == doctest::Approx(8.5).epsilon(1e-9));
  // Uniform rates over regions.
  for (int l = 1; l < inst.L(); ++l) {
    CHECK(inst.rate(0, l) == doctest::Approx(inst.rate(0, 0)));
  }
  CHECK(inst.reject_cost[0] == doctest::Approx(5.0 * 8.0 * 0.5));
  CHECK(inst.divert_cost[0] == doctest::Approx(10.0 * 0.5));
  CHECK(inst.horizon == 5);  // max(h, wait targets)
}

TEST_CASE("instance: random arrivals rescale exactly and are reproducible") {
  json j = base_instance();
  j["arrivals"]["mode"] = "random";
  const auto a = load_instance(j);
  const auto b = load_instance(j);
  CHECK(a.daily_demand == doctest::Approx(8.5).epsilon(1e-9));
  bool uneven = false;
  for (int l = 0; l < a.L(); ++l) {
    CHECK(a.rate(0, l) == b.rate(0, l));
    uneven = uneven || std::abs(a.rate(0, l) - a.rate(0, 0)) > 1e-12;
  }
  CHECK(uneven);
  j["arrivals"]["seed"] = 2;
  const auto c = load_instance(j);
  bool moved = false;
  for (int l = 0; l < a.L(); ++l) moved = moved || std::abs(a.rate(0, l) - c.rate(0, l)) > 1e-12;
  CHECK(moved);
}

TEST_CASE("instance: demand target independent of rate layout") {
  json j = base_instance();
  j["arrivals"]["mode"] = "random";
  for (int seed = 1; seed <= 4; ++seed) {
    j["arrivals"]["seed"] = seed;
    CHECK(load_instance(j).daily_demand == doctest::Approx(8.5).epsilon(1e-9));
  }
}

TEST_CASE("instance: explicit arrivals kept verbatim") {
  json j = base_instance();
  j["geometry"] = {{"shape", "array1d"}, {"depot_distances", {0.1, 0.2}}};
  j["arrivals"] = {{"mode", "explicit"}, {"matrix", {{0.3, 0.7}}}};
  const auto inst = load_instance(j);
  CHECK(inst.rate(0, 0) == doctest::Approx(0.3));
  CHECK(inst.rate(0, 1) == doctest::Approx(0.7));
}

TEST_CASE("instance: validation failures") {
  auto expect_reject = [](json j) {
    CHECK_THROWS_AS((void)load_instance(j), ValidationError);
  };
  {
    json j = base_instance();
    j["gamma"] = 1.0;
    expect_reject(j);
  }
  {
    json j = base_instance();
    j["shift"]["chi"] = 0.0;
    expect_reject(j);
  }
  {
    json j = base_instance();
    j["services"][0]["h"] = 0;
    expect_reject(j);
  }
  {
    json j = base_instance();
    j["weights"]["q"] = -0.1;
    expect_reject(j);
  }
  {
    json j = base_instance();
    j["geometry"]["rings"] = 6;  // 84 regions, above the supported count
    expect_reject(j);
  }
  {
    json j = base_instance();
    j["arrivals"] = {{"mode", "explicit"}, {"matrix", {{1.0}}}};  // wrong width
    expect_reject(j);
  }
}

TEST_CASE("instance: json round trip") {
  json j = base_instance();
  j["caps"] = {{"x_max", 12}, {"y_max", 7}};
  j["allow_rejection"] = false;
  const auto inst = load_instance(j);
  CHECK(inst.x_cap == 12);
  CHECK(inst.y_cap == 7);
  CHECK_FALSE(inst.allow_rejection);
  const auto back = load_instance(instance_to_json(inst));
  CHECK(back.L() == inst.L());
  CHECK(back.x_cap == inst.x_cap);
  CHECK(back.allow_rejection == inst.allow_rejection);
  CHECK(back.gamma == doctest::Approx(inst.gamma));
  for (int l = 0; l < inst.L(); ++l) {
    CHECK(back.rate(0, l) == doctest::Approx(inst.rate(0, l)).epsilon(1e-12));
    CHECK(back.geo.depot_dist(l) == doctest::Approx(inst.geo.depot_dist(l)));
  }
  CHECK(back.types[0].dist.mean == doctest::Approx(inst.types[0].dist.mean));
}
