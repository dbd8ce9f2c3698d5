#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "morpho/params.hpp"

namespace morpho {

inline constexpr int kMaxPropellers = 8;
inline constexpr int kMinPropellers = 4;
inline constexpr int kGenesPerPropeller = 5;
inline constexpr std::size_t kGenotypeLength = 1 + kMaxPropellers * kGenesPerPropeller;

/// Fixed-length real encoding of a drone. Gene 0 selects the propeller
/// count; genes 1 + 5k .. 5 + 5k hold propeller k as
/// (arm length, arm angle, inclination, azimuth, direction).
/// Blocks past the active count are carried along as phantom propellers.
struct Genotype {
  std::array<double, kGenotypeLength> genes{};

  bool operator==(const Genotype&) const = default;
};

/// True when every gene lies in [-1, 1] and is finite.
bool is_valid(const Genotype& genotype);

enum class SpinDirection { CCW, CW };

/// Reaction torque sign about the thrust axis: -1 for CCW, +1 for CW.
inline double reaction_sign(SpinDirection dir) { return dir == SpinDirection::CCW ? -1.0 : 1.0; }

struct PropellerSpec {
  double arm_length = 0.1;   // m
  double arm_angle = 0.0;    // deg, position angle about body z
  double inclination = 0.0;  // deg, tilt about body y before the z rotation
  double azimuth = 0.0;      // deg, tilt plane relative to the arm
  SpinDirection direction = SpinDirection::CCW;

  bool operator==(const PropellerSpec&) const = default;
};

/// Parameter ranges reached by the genotype mapping.
struct PhenotypeRanges {
  static constexpr double arm_length_min = 0.1, arm_length_max = 0.3;
  static constexpr double arm_angle_min = -180.0, arm_angle_max = 180.0;
  static constexpr double inclination_min = 0.0, inclination_max = 15.0;
  static constexpr double azimuth_min = -90.0, azimuth_max = 90.0;
};

struct Phenotype {
  std::vector<PropellerSpec> props;
  /// Uniform arm-length factor applied to separate intersecting propellers.
  double scale_applied = 1.0;
  /// Set when two propellers coincide so no scaling can separate them.
  bool invalid_layout = false;

  int count() const { return static_cast<int>(props.size()); }
  bool operator==(const Phenotype&) const = default;
};

/// Propeller center in the body frame (z = 0).
Eigen::Vector3d position(const PropellerSpec& prop);

/// Unit thrust axis: tilt by the inclination about body y, then rotate
/// about body z by arm angle + azimuth.
Eigen::Vector3d thrust_axis(const PropellerSpec& prop);

/// Maps a genotype onto a phenotype, including collision scaling.
/// Degenerate layouts come back with invalid_layout set.
Phenotype decode(const Genotype& genotype, const PhysicalParams& params);

/// Same mapping, without the collision scaling step.
Phenotype decode_raw(const Genotype& genotype);

/// Scales every arm by max(1, max_pairs(min_separation / distance)).
/// Pairs closer than 1e-6 m mark the layout invalid and leave it unscaled.
Phenotype resolve_collisions(Phenotype raw, const PhysicalParams& params);

/// Smallest planar distance between any two propeller centers.
double min_pair_distance(const Phenotype& ph);

/// 5-inch quadcopter with a 220 mm wheelbase in X configuration.
Phenotype quadcopter_baseline(const PhysicalParams& params = {});

/// Genotype that decodes to the baseline quadcopter.
Genotype quadcopter_baseline_genotype();

/// Rotates every arm by delta_deg about body z, wrapping into [-180, 180].
Phenotype rotated(const Phenotype& ph, double delta_deg);

}  // namespace morpho
