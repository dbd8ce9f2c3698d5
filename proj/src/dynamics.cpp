#include "morpho/dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Geometry>

namespace morpho {

void validate(const PhysicalParams& p) {
  auto check = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string(name) + " must be strictly positive");
    }
  };
  check(p.k_f, "k_f");
  check(p.k_m, "k_m");
  check(p.omega_max, "omega_max");
  check(p.m_motor, "m_motor");
  check(p.mu_arm, "mu_arm");
  check(p.m_fc, "m_fc");
  check(p.fc_dims[0], "fc_dims");
  check(p.fc_dims[1], "fc_dims");
  check(p.fc_dims[2], "fc_dims");
  check(p.prop_radius, "prop_radius");
  check(p.clearance_margin, "clearance_margin");
  check(p.g, "g");
}

namespace {

// (|r|^2 I - r r^T), the inertia of a unit point mass at r about the origin.
Eigen::Matrix3d point_tensor(const Eigen::Vector3d& r) {
  return r.squaredNorm() * Eigen::Matrix3d::Identity() - r * r.transpose();
}

}  // namespace

MassProperties mass_properties(const Phenotype& ph, const PhysicalParams& params) {
  const auto& [a, b, c] = params.fc_dims;
  Eigen::Matrix3d inertia_origin = Eigen::Vector3d(b * b + c * c, a * a + c * c, a * a + b * b)
                                       .asDiagonal();
  inertia_origin *= params.m_fc / 12.0;

  double mass = params.m_fc;
  Eigen::Vector3d moment = Eigen::Vector3d::Zero();
  for (const auto& prop : ph.props) {
    const Eigen::Vector3d p = position(prop);
    const double arm_mass = params.mu_arm * prop.arm_length;
    mass += params.m_motor + arm_mass;
    moment += params.m_motor * p + arm_mass * 0.5 * p;
    // A uniform rod from 0 to p integrates to (m/3)(|p|^2 I - p p^T).
    inertia_origin += (params.m_motor + arm_mass / 3.0) * point_tensor(p);
  }

  MassProperties mp;
  mp.total_mass = mass;
  mp.cg = moment / mass;
  mp.inertia = inertia_origin - mass * point_tensor(mp.cg);
  mp.inertia = 0.5 * (mp.inertia + mp.inertia.transpose());
  return mp;
}

ActuatorMatrices effectiveness(const Phenotype& ph, const MassProperties& mp,
                               const PhysicalParams& params) {
  const Eigen::LDLT<Eigen::Matrix3d> ldlt(mp.inertia);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      !(ldlt.vectorD().minCoeff() > 0.0)) {
    throw std::logic_error("inertia tensor is singular");
  }
  const int n = ph.count();
  const double thrust = params.max_thrust();
  const double torque = params.max_torque();

  ActuatorMatrices out;
  out.force.resize(3, n);
  out.moment.resize(3, n);
  for (int i = 0; i < n; ++i) {
    const auto& prop = ph.props[i];
    const Eigen::Vector3d d = thrust_axis(prop);
    const Eigen::Vector3d arm = position(prop) - mp.cg;
    out.force.col(i) = (thrust / mp.total_mass) * d;
    const Eigen::Vector3d tau = arm.cross(thrust * d) + reaction_sign(prop.direction) * torque * d;
    out.moment.col(i) = ldlt.solve(tau);
  }
  return out;
}

double angular_accel_diagnostic(double arm_length, const PhysicalParams& params) {
  const double l = arm_length;
  return l / (params.m_motor * l * l + params.mu_arm / 3.0 * l * l * l + params.fc_inertia_yy());
}

double best_diagnostic_arm_length(const PhysicalParams& params, double tol) {
  // The kernel is unimodal on (0, inf); bracket until it starts to fall.
  double lo = 0.0;
  double hi = 0.05;
  while (angular_accel_diagnostic(2.0 * hi, params) > angular_accel_diagnostic(hi, params)) {
    lo = hi;
    hi *= 2.0;
  }
  hi *= 2.0;

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = angular_accel_diagnostic(x1, params);
  double f2 = angular_accel_diagnostic(x2, params);
  while (hi - lo > tol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = angular_accel_diagnostic(x2, params);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = angular_accel_diagnostic(x1, params);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace morpho
