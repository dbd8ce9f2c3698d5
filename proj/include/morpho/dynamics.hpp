#pragma once

#include <Eigen/Core>

#include "morpho/params.hpp"
#include "morpho/phenotype.hpp"

namespace morpho {

struct MassProperties {
  double total_mass = 0.0;                          // kg
  Eigen::Vector3d cg = Eigen::Vector3d::Zero();     // m, body frame
  Eigen::Matrix3d inertia = Eigen::Matrix3d::Zero();  // kg m^2 about the CG
};

/// Linear maps from the command vector eta in [0,1]^n to specific force
/// (m/s^2) and specific moment (rad/s^2). A command of 1 means omega_max^2.
struct ActuatorMatrices {
  Eigen::Matrix3Xd force;   // B_f
  Eigen::Matrix3Xd moment;  // B_m

  int count() const { return static_cast<int>(force.cols()); }
};

/// Stack as a uniform cuboid at the origin, motors as point masses, arms as
/// slender rods from the origin to each motor. Inertia is taken about the CG.
MassProperties mass_properties(const Phenotype& ph, const PhysicalParams& params);

/// Force and moment effectiveness about the CG. Throws std::logic_error if
/// the inertia tensor cannot be inverted.
ActuatorMatrices effectiveness(const Phenotype& ph, const MassProperties& mp,
                               const PhysicalParams& params);

/// Per-propeller angular acceleration kernel l / (m l^2 + mu/3 l^3 + I_fc).
double angular_accel_diagnostic(double arm_length, const PhysicalParams& params);

/// Arm length maximizing angular_accel_diagnostic, by golden-section search.
double best_diagnostic_arm_length(const PhysicalParams& params, double tol = 1e-9);

}  // namespace morpho
