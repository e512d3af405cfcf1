#pragma once

#include <string>
#include <utility>
#include <vector>

namespace hcr {

/// Service area discretized into regions plus a depot.
///
/// Distances are Manhattan (grid street network), expressed in travel hours,
/// and stored as a dense (L+1) x (L+1) matrix whose row and column 0 is the
/// depot. Regions are indexed 0..L-1 in the public API.
struct Geometry {
  enum class Shape { circular, rectangular, array1d };

  Shape shape = Shape::circular;
  int rings = 0;
  int rows = 0;
  int cols = 0;
  double diameter_h = 0.0;  ///< service-area diameter in travel hours
  double cell_length = 0.0; ///< physical edge length of one cell, in hours
  int L = 0;                ///< number of regions

  /// Cell centers in cell units (circular and rectangular shapes only).
  std::vector<std::pair<double, double>> centers;

  /// Depot distance per region; for array1d this is the defining data.
  std::vector<double> depot_distances;

  /// Dense symmetric distance matrix, row-major, size (L+1)^2, index 0 = depot.
  std::vector<double> dist;

  double depot_dist(int l) const { return dist[static_cast<std::size_t>(l + 1)]; }
  double between(int a, int b) const {
    return dist[static_cast<std::size_t>(a + 1) * (L + 1) + (b + 1)];
  }
  /// Distance between matrix nodes where 0 is the depot and l+1 is region l.
  double node_dist(int node_a, int node_b) const {
    return dist[static_cast<std::size_t>(node_a) * (L + 1) + node_b];
  }
};

/// Build a diamond-shaped (circular under Manhattan metric) area.
///
/// Ring r (1-based) holds the 4r cells whose centers are at
/// (±(a+0.5), ±(b+0.5)) with a+b = r-1, so L = 2R(R+1) for R rings. The cell
/// edge is (diameter/2)/R hours and the depot sits at the origin.
Geometry build_circular_geometry(int rings, double diameter_h);

/// Build a rows x cols rectangular area with the depot at the grid corner
/// (0,0) and cell centers at (c+0.5, r+0.5). The cell edge is
/// (diameter/2)/max(rows, cols) hours.
Geometry build_rectangular_geometry(int rows, int cols, double diameter_h);

/// Build a one-dimensional array of regions given their depot distances;
/// the distance between two regions is the absolute difference of their
/// depot distances. Used by the distance-class reduction.
Geometry build_array1d_geometry(const std::vector<double>& depot_distances);

}  // namespace hcr
