#include "morpho/phenotype.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace morpho {

namespace {

constexpr double kDegenerateDistance = 1e-6;

double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }

double lerp_gene(double gene, double lo, double hi) { return lo + 0.5 * (gene + 1.0) * (hi - lo); }

double to_gene(double value, double lo, double hi) { return 2.0 * (value - lo) / (hi - lo) - 1.0; }

int count_from_gene(double gene) {
  const int bins = kMaxPropellers - kMinPropellers + 1;
  const int bin = std::min(bins - 1, static_cast<int>(std::floor(0.5 * (gene + 1.0) * bins)));
  return kMinPropellers + std::max(0, bin);
}

double wrap_degrees(double deg) {
  double w = std::fmod(deg + 180.0, 360.0);
  if (w < 0.0) w += 360.0;
  return w - 180.0;
}

}  // namespace

bool is_valid(const Genotype& genotype) {
  return std::all_of(genotype.genes.begin(), genotype.genes.end(),
                     [](double g) { return std::isfinite(g) && g >= -1.0 && g <= 1.0; });
}

Eigen::Vector3d position(const PropellerSpec& prop) {
  const double theta = deg2rad(prop.arm_angle);
  return {prop.arm_length * std::cos(theta), prop.arm_length * std::sin(theta), 0.0};
}

Eigen::Vector3d thrust_axis(const PropellerSpec& prop) {
  const double phi = deg2rad(prop.inclination);
  const double yaw = deg2rad(prop.arm_angle + prop.azimuth);
  // Ry(phi) e_z = (sin phi, 0, cos phi), then Rz(yaw).
  const double s = std::sin(phi);
  return {std::cos(yaw) * s, std::sin(yaw) * s, std::cos(phi)};
}

Phenotype decode_raw(const Genotype& genotype) {
  if (!is_valid(genotype)) throw std::invalid_argument("genotype has genes outside [-1, 1]");
  using R = PhenotypeRanges;
  const auto& g = genotype.genes;
  Phenotype ph;
  const int n = count_from_gene(g[0]);
  ph.props.reserve(n);
  for (int k = 0; k < n; ++k) {
    const std::size_t b = 1 + static_cast<std::size_t>(k) * kGenesPerPropeller;
    PropellerSpec p;
    p.arm_length = lerp_gene(g[b], R::arm_length_min, R::arm_length_max);
    p.arm_angle = lerp_gene(g[b + 1], R::arm_angle_min, R::arm_angle_max);
    p.inclination = lerp_gene(g[b + 2], R::inclination_min, R::inclination_max);
    p.azimuth = lerp_gene(g[b + 3], R::azimuth_min, R::azimuth_max);
    p.direction = g[b + 4] < 0.0 ? SpinDirection::CCW : SpinDirection::CW;
    ph.props.push_back(p);
  }
  return ph;
}

Phenotype decode(const Genotype& genotype, const PhysicalParams& params) {
  return resolve_collisions(decode_raw(genotype), params);
}

double min_pair_distance(const Phenotype& ph) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ph.props.size(); ++i) {
    const Eigen::Vector3d pi = position(ph.props[i]);
    for (std::size_t j = i + 1; j < ph.props.size(); ++j) {
      best = std::min(best, (pi - position(ph.props[j])).head<2>().norm());
    }
  }
  return best;
}

Phenotype resolve_collisions(Phenotype raw, const PhysicalParams& params) {
  if (raw.props.size() < 2) return raw;
  const double closest = min_pair_distance(raw);
  if (closest < kDegenerateDistance) {
    raw.invalid_layout = true;
    return raw;
  }
  const double s = std::max(1.0, params.min_separation() / closest);
  if (s > 1.0) {
    for (auto& p : raw.props) p.arm_length *= s;
  }
  raw.scale_applied *= s;
  return raw;
}

Phenotype quadcopter_baseline(const PhysicalParams& /*params*/) {
  Phenotype ph;
  const double angles[4] = {45.0, 135.0, -135.0, -45.0};
  for (int i = 0; i < 4; ++i) {
    PropellerSpec p;
    p.arm_length = 0.110;
    p.arm_angle = angles[i];
    p.direction = (i % 2 == 0) ? SpinDirection::CCW : SpinDirection::CW;
    ph.props.push_back(p);
  }
  return ph;
}

Genotype quadcopter_baseline_genotype() {
  using R = PhenotypeRanges;
  Genotype g;
  g.genes[0] = -1.0;
  const Phenotype ph = quadcopter_baseline();
  for (int k = 0; k < 4; ++k) {
    const auto& p = ph.props[k];
    const std::size_t b = 1 + static_cast<std::size_t>(k) * kGenesPerPropeller;
    g.genes[b] = to_gene(p.arm_length, R::arm_length_min, R::arm_length_max);
    g.genes[b + 1] = to_gene(p.arm_angle, R::arm_angle_min, R::arm_angle_max);
    g.genes[b + 2] = to_gene(p.inclination, R::inclination_min, R::inclination_max);
    g.genes[b + 3] = to_gene(p.azimuth, R::azimuth_min, R::azimuth_max);
    g.genes[b + 4] = p.direction == SpinDirection::CCW ? -1.0 : 1.0;
  }
  return g;
}

Phenotype rotated(const Phenotype& ph, double delta_deg) {
  Phenotype out = ph;
  for (auto& p : out.props) p.arm_angle = wrap_degrees(p.arm_angle + delta_deg);
  return out;
}

}  // namespace morpho
