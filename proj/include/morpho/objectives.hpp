#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "morpho/dynamics.hpp"
#include "morpho/hover.hpp"
#include "morpho/phenotype.hpp"

namespace morpho {

/// Objectives of one design: maximize alpha and lambda, minimize size.
/// The hover tier (and the invalid flag) outranks all three.
struct ObjectiveVector {
  double alpha = 0.0;    // thrust-to-weight ratio
  double lambda = 0.0;   // smallest Gramian eigenvalue, (rad/s^2)^2
  double size = 0.0;     // planform convex hull area, m^2
  HoverClass hover_class = HoverClass::None;
  bool invalid = false;
  double hover_residual = 0.0;  // closest approach when hover_class is None

  bool operator==(const ObjectiveVector&) const = default;
};

/// alpha = ||B_f eta_max|| / g with eta_max = eta_hat / max_i eta_hat_i.
/// Throws std::invalid_argument when eta_hat has no positive entry.
double thrust_to_weight(const Eigen::Matrix3Xd& force, const Eigen::VectorXd& eta_hat, double g);

/// Smallest eigenvalue of W_c = B_m B_m^T.
double maneuverability(const Eigen::Matrix3Xd& moment);

/// Area of the convex hull of the propeller centers.
double planform_size(const Phenotype& ph);

/// Full pipeline for one phenotype: mass model, effectiveness, hover
/// classification, and the three objectives.
struct Evaluation {
  Phenotype phenotype;
  MassProperties mass;
  ActuatorMatrices matrices;
  HoverSolution hover;
  ObjectiveVector objectives;
};

Evaluation evaluate_phenotype(const Phenotype& ph, const PhysicalParams& params,
                              const HoverOptions& options = {});

/// decode -> mass -> effectiveness -> hover -> objectives. Never throws on a
/// valid genotype; degenerate layouts come back flagged invalid.
ObjectiveVector evaluate(const Genotype& genotype, const PhysicalParams& params,
                         const HoverOptions& options = {});

}  // namespace morpho
