#include "hcr/geometry.hpp"

#include <cmath>
#include <cstdlib>

#include "hcr/common.hpp"

namespace hcr {

namespace {

constexpr int kMaxRegions = 60;

void fill_distances_from_centers(Geometry& g) {
  const int n = g.L + 1;
  g.dist.assign(static_cast<std::size_t>(n) * n, 0.0);
  g.depot_distances.resize(g.L);
  auto manhattan = [](std::pair<double, double> a, std::pair<double, double> b) {
    return std::fabs(a.first - b.first) + std::fabs(a.second - b.second);
  };
  const std::pair<double, double> depot{0.0, 0.0};
  for (int l = 0; l < g.L; ++l) {
    const double d = manhattan(depot, g.centers[l]) * g.cell_length;
    g.dist[static_cast<std::size_t>(l + 1)] = d;
    g.dist[static_cast<std::size_t>(l + 1) * n] = d;
    g.depot_distances[l] = d;
    for (int m = 0; m < g.L; ++m) {
      const double dd = manhattan(g.centers[l], g.centers[m]) * g.cell_length;
      g.dist[static_cast<std::size_t>(l + 1) * n + (m + 1)] = dd;
    }
  }
}

void check_region_count(int L) {
  if (L < 1) throw ValidationError("geometry: no regions");
  if (L > kMaxRegions) {
    throw ValidationError("geometry: region count " + std::to_string(L) + " exceeds cap " +
                          std::to_string(kMaxRegions));
  }
}

}  // namespace

Geometry build_circular_geometry(int rings, double diameter_h) {
  if (rings < 1) throw ValidationError("geometry: rings must be >= 1");
  if (!(diameter_h > 0)) throw ValidationError("geometry: diameter must be positive");
  Geometry g;
  g.shape = Geometry::Shape::circular;
  g.rings = rings;
  g.diameter_h = diameter_h;
  g.L = 2 * rings * (rings + 1);
  check_region_count(g.L);
  g.cell_length = (diameter_h / 2.0) / rings;
  g.centers.reserve(g.L);
  for (int r = 1; r <= rings; ++r) {
    for (int a = r - 1; a >= 0; --a) {
      const int b = r - 1 - a;
      const double xa = a + 0.5;
      const double yb = b + 0.5;
      g.centers.emplace_back(xa, yb);
      g.centers.emplace_back(xa, -yb);
      g.centers.emplace_back(-xa, yb);
      g.centers.emplace_back(-xa, -yb);
    }
  }
  fill_distances_from_centers(g);
  return g;
}

Geometry build_rectangular_geometry(int rows, int cols, double diameter_h) {
  if (rows < 1 || cols < 1) throw ValidationError("geometry: rows and cols must be >= 1");
  if (!(diameter_h > 0)) throw ValidationError("geometry: diameter must be positive");
  Geometry g;
  g.shape = Geometry::Shape::rectangular;
  g.rows = rows;
  g.cols = cols;
  g.diameter_h = diameter_h;
  g.L = rows * cols;
  check_region_count(g.L);
  g.cell_length = (diameter_h / 2.0) / std::max(rows, cols);
  g.centers.reserve(g.L);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      g.centers.emplace_back(c + 0.5, r + 0.5);
    }
  }
  fill_distances_from_centers(g);
  return g;
}

Geometry build_array1d_geometry(const std::vector<double>& depot_distances) {
  Geometry g;
  g.shape = Geometry::Shape::array1d;
  g.L = static_cast<int>(depot_distances.size());
  check_region_count(g.L);
  for (double d : depot_distances) {
    if (!(d >= 0) || !std::isfinite(d)) {
      throw ValidationError("geometry: depot distances must be finite and nonnegative");
    }
  }
  g.depot_distances = depot_distances;
  const int n = g.L + 1;
  g.dist.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int l = 0; l < g.L; ++l) {
    g.dist[static_cast<std::size_t>(l + 1)] = depot_distances[l];
    g.dist[static_cast<std::size_t>(l + 1) * n] = depot_distances[l];
    for (int m = 0; m < g.L; ++m) {
      g.dist[static_cast<std::size_t>(l + 1) * n + (m + 1)] =
          std::fabs(depot_distances[l] - depot_distances[m]);
    }
  }
  return g;
}

}  // namespace hcr
