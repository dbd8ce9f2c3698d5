#pragma once

#include <array>

namespace morpho {

/// Physical constants of the airframe components. SI units throughout.
///
/// Defaults describe a 5-inch propeller build with a 4s 2200 mAh stack; the
/// propeller coefficients give roughly 15 N of thrust per motor at full
/// command.
struct PhysicalParams {
  double k_f = 2.4e-6;            // N/(rad/s)^2
  double k_m = 3.84e-8;           // N m/(rad/s)^2
  double omega_max = 2500.0;      // rad/s
  double m_motor = 0.035;         // kg, motor + propeller
  double mu_arm = 0.10;           // kg/m
  double m_fc = 0.250;            // kg, flight controller + battery stack
  std::array<double, 3> fc_dims{0.105, 0.035, 0.030};  // m, long axis on body x
  double prop_radius = 0.0635;    // m
  double clearance_margin = 0.01; // m
  double g = 9.81;                // m/s^2

  /// Thrust of one motor at full command, N.
  double max_thrust() const { return k_f * omega_max * omega_max; }
  /// Reaction torque of one motor at full command, N m.
  double max_torque() const { return k_m * omega_max * omega_max; }
  /// Minimum allowed distance between two propeller centers, m.
  double min_separation() const { return 2.0 * prop_radius + clearance_margin; }
  /// Stack inertia about body y, kg m^2 (uniform cuboid).
  double fc_inertia_yy() const {
    return m_fc / 12.0 * (fc_dims[0] * fc_dims[0] + fc_dims[2] * fc_dims[2]);
  }
};

/// Throws std::invalid_argument naming the first non-positive field.
void validate(const PhysicalParams& params);

}  // namespace morpho
