#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "locomp/point.hpp"
#include "locomp/space.hpp"

namespace locomp {

enum class Metric { bergman, euclidean };
std::string to_string(Metric m);

/// One cell F_j.
///
/// Ball cells (n = 1) are polar rectangles in Bergman coordinates: points with
/// beta(0, z) in [b_inner, b_outer) and arg z in [theta0, theta1); a "disk" cell
/// is the centered disk beta(0, z) < b_outer.  Plane cells are half-open cubes
/// [lo_i, lo_i + side) in the 2n real coordinates.
struct Cell {
  enum class Type { disk, sector, cube };
  Type type = Type::cube;
  std::vector<double> params;  // disk: {b_outer}; sector: {b_inner, b_outer, theta0, theta1}; cube: {side, lo...}

  std::string type_name() const;
  bool contains(const Point& z) const;
  /// Distance from z to the cell in the covering metric (0 inside).
  double distance(const Point& z) const;
  /// Boundary samples used for the diameter estimate.
  std::vector<Point> boundary_samples(int n, int per_edge) const;
};

/// Disjoint cells covering the metric ball of radius `region_radius` about 0.
/// The enlargement G_j is the closed r-neighbourhood of F_j.
struct Covering {
  Metric metric = Metric::euclidean;
  int n = 1;
  double r = 1.0;
  double region_radius = 1.0;
  int overlap_bound = 1;  // N
  std::vector<Cell> cells;

  bool in_region(const Point& z) const;
  /// Index of the cell containing z, or -1.
  int locate(const Point& z) const;
  bool in_enlargement(std::size_t j, const Point& z) const { return cells[j].distance(z) <= r; }
};

/// Ball (Bergman metric, n = 1): a central disk of beta-radius r/2 and annuli of
/// width r/2, each split into the fewest equal sectors with beta-diameter <= 2r.
/// Plane (Euclidean, n = 1 or 2): cubes of side 2r / sqrt(2n) on a grid anchored at
/// -region_radius, keeping those that meet the region.
Covering build_covering(const SpaceDescriptor& space, double r, double region_radius);

struct CoveringReport {
  int max_overlap = 0;        // max number of G_j containing a sample point
  double max_diameter = 0.0;  // max over cells of the boundary-sample diameter
  bool gaps_found = false;    // some sample in the region lies in no cell
  bool overlaps_found = false;  // some sample lies in two cells
  int samples = 0;
  bool ok(const Covering& c) const {
    return !gaps_found && !overlaps_found && max_overlap <= c.overlap_bound && max_diameter <= 2.0 * c.r + 1e-9;
  }
};

/// Deterministic polar grid plus `samples` seeded Monte-Carlo points over the region.
CoveringReport verify_covering(const Covering& c, int samples, std::uint64_t seed = 1);

/// beta-distance between two points at Bergman radius b separated by angle dtheta.
double bergman_arc_distance(double b, double dtheta);

}  // namespace locomp
