#include "morpho/objectives.hpp"

#include <stdexcept>

#include "morpho/geometry.hpp"

namespace morpho {

double thrust_to_weight(const Eigen::Matrix3Xd& force, const Eigen::VectorXd& eta_hat, double g) {
  const double peak = eta_hat.size() > 0 ? eta_hat.maxCoeff() : 0.0;
  if (!(peak > 0.0)) throw std::invalid_argument("hover command produces no thrust");
  return (force * (eta_hat / peak)).norm() / g;
}

double maneuverability(const Eigen::Matrix3Xd& moment) {
  const Eigen::Matrix3d gramian = moment * moment.transpose();
  const Eigen::Vector3d v = symmetric_eigen3(gramian).vectors.col(0).normalized();
  // Rayleigh quotient through the factor keeps small eigenvalues relatively accurate.
  return (moment.transpose() * v).squaredNorm();
}

double planform_size(const Phenotype& ph) {
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(ph.props.size());
  for (const auto& p : ph.props) pts.push_back(position(p).head<2>());
  return hull_area(pts);
}

Evaluation evaluate_phenotype(const Phenotype& ph, const PhysicalParams& params,
                              const HoverOptions& options) {
  Evaluation ev;
  ev.phenotype = ph;
  ev.objectives.size = planform_size(ph);
  if (ph.invalid_layout || ph.count() < kMinPropellers) {
    ev.objectives.invalid = true;
    return ev;
  }
  ev.mass = mass_properties(ph, params);
  ev.matrices = effectiveness(ph, ev.mass, params);
  ev.hover = classify_hover(ev.matrices, params.g, options);

  auto& obj = ev.objectives;
  obj.hover_class = ev.hover.hover_class;
  obj.lambda = maneuverability(ev.matrices.moment);
  if (obj.hover_class == HoverClass::None) {
    obj.hover_residual = ev.hover.residual();
  } else {
    obj.alpha = thrust_to_weight(ev.matrices.force, ev.hover.eta_hat, params.g);
  }
  return ev;
}

ObjectiveVector evaluate(const Genotype& genotype, const PhysicalParams& params,
                         const HoverOptions& options) {
  return evaluate_phenotype(decode(genotype, params), params, options).objectives;
}

}  // namespace morpho
