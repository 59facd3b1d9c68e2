#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace orlicz::hull {

/// Counter-clockwise indices of the extreme points (collinear points dropped).
std::vector<int> convex_hull_2d(const std::vector<Eigen::Vector2d>& pts);

struct Hull3 {
  std::vector<std::array<int, 3>> faces;  // outward (counter-clockwise seen from outside)
  std::vector<int> vertices;              // sorted indices of points on the hull
};

/// Incremental hull. Throws on fewer than four affinely independent points.
Hull3 convex_hull_3d(const std::vector<Eigen::Vector3d>& pts, double rel_eps = 1e-11);

/// Hull of points p_i = r_i * u_i given on distinct rays around the origin, used
/// for polar bodies conv{u_i / h_i}.  The origin must be interior.
struct StarHull {
  double volume = 0.0;
  std::vector<double> tight;  // radial function of the hull along each u_i (>= r_i)
  std::vector<double> fan;    // sum of cone volumes incident to point i (0 if not a vertex)
  bool origin_interior = true;
};

/// 2D version: `dirs` must be sorted by angle (counter-clockwise).
StarHull star_hull_2d(const std::vector<Eigen::Vector2d>& dirs, const std::vector<double>& r);
StarHull star_hull_3d(const std::vector<Eigen::Vector3d>& dirs, const std::vector<double>& r);

}  // namespace orlicz::hull
