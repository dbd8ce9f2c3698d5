#pragma once

// Independent reference implementations used only by tests. Each one is
// deliberately naive: brute force, enumeration, or a closed form that shares
// no code with the library routine it checks.

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "morpho/dynamics.hpp"
#include "morpho/nsga2.hpp"
#include "morpho/objectives.hpp"

namespace oracle {

/// Fronts by repeatedly peeling the set of members that nothing remaining
/// dominates. O(N^3) pairwise checks.
std::vector<std::vector<std::size_t>> peel_fronts(std::span<const morpho::Individual> pop);

/// Tiered domination written out from the rule, without the library helper.
bool dominates(const morpho::ObjectiveVector& a, const morpho::ObjectiveVector& b);

struct GridHover {
  bool static_feasible = false;
  bool spinning_feasible = false;
};

/// Samples every command on a uniform grid of [0,1]^n and accepts a point
/// whose thrust is within `tol` of g and whose moment (static) or moment
/// component normal to the thrust (spinning) has norm within `moment_tol`
/// (defaults to `tol`).
GridHover grid_hover(const morpho::ActuatorMatrices& b, double g, double step, double tol,
                     double moment_tol = -1.0);

/// Eigenvalues of a symmetric 3x3 matrix as roots of its characteristic
/// polynomial (trigonometric cubic formula in long double, then Newton
/// polishing on det(W - x I)). Ascending.
Eigen::Vector3d char_poly_eigenvalues(const Eigen::Matrix3d& w);
/// Same, for the Gramian m m^T accumulated in extended precision.
Eigen::Vector3d gramian_eigenvalues(const Eigen::Matrix3Xd& m);

/// Hypervolume by inclusion-exclusion over all subsets. Only for small sets.
double inclusion_exclusion_hypervolume(std::span<const morpho::ObjectiveVector> points,
                                       double reference_size);

/// Argmax of the angular acceleration kernel on a uniform grid.
double grid_argmax_arm_length(const morpho::PhysicalParams& params, double lo, double hi,
                              double step);

/// Pairwise planar distances between propeller centers, smallest first.
double min_center_distance(const morpho::Phenotype& ph);

}  // namespace oracle
