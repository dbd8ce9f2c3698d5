#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

namespace morpho {

/// Convex hull by Andrew's monotone chain, counter-clockwise, collinear
/// points dropped.
std::vector<Eigen::Vector2d> convex_hull(std::span<const Eigen::Vector2d> points);

/// Shoelace area of the convex hull; 0 for fewer than three non-collinear points.
double hull_area(std::span<const Eigen::Vector2d> points);

struct SymmetricEigen3 {
  Eigen::Vector3d values;   // ascending
  Eigen::Matrix3d vectors;  // column i pairs with values[i]
};

/// Eigen-decomposition of a symmetric 3x3 matrix.
SymmetricEigen3 symmetric_eigen3(const Eigen::Matrix3d& m);

}  // namespace morpho
