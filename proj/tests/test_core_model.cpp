#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include "morpho/dynamics.hpp"
#include "morpho/nsga2.hpp"
#include "morpho/objectives.hpp"
#include "morpho/phenotype.hpp"
#include "morpho/rng.hpp"
#include "support/oracles.hpp"

using namespace morpho;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

Genotype uniform_genotype(double value) {
  Genotype g;
  g.genes.fill(value);
  return g;
}

Genotype random_genotype(Rng& rng) {
  Genotype g;
  for (double& x : g.genes) x = rng.uniform(-1.0, 1.0);
  return g;
}

Phenotype flat_ring(int n, double arm, const PhysicalParams& params) {
  Phenotype ph;
  for (int i = 0; i < n; ++i) {
    PropellerSpec p;
    p.arm_length = arm;
    p.arm_angle = -180.0 + 360.0 * (i + 0.5) / n;
    p.direction = i % 2 == 0 ? SpinDirection::CCW : SpinDirection::CW;
    ph.props.push_back(p);
  }
  return resolve_collisions(ph, params);
}

}  // namespace

TEST_SUITE("decode") {
  TEST_CASE("all-zero genotype maps to the midpoint of every range") {
    const Phenotype raw = decode_raw(uniform_genotype(0.0));
    REQUIRE(raw.count() == 6);
    for (const auto& p : raw.props) {
      CHECK(p.arm_length == doctest::Approx(0.2).epsilon(1e-15));
      CHECK(p.arm_angle == doctest::Approx(0.0));
      CHECK(p.inclination == doctest::Approx(7.5).epsilon(1e-15));
      CHECK(p.azimuth == doctest::Approx(0.0));
      CHECK(p.direction == SpinDirection::CW);
    }
    // Six coincident propellers cannot be separated by scaling.
    CHECK(decode(uniform_genotype(0.0), PhysicalParams{}).invalid_layout);
  }

  TEST_CASE("all-minus-one genotype maps to the lower bound of every range") {
    const Phenotype raw = decode_raw(uniform_genotype(-1.0));
    REQUIRE(raw.count() == 4);
    for (const auto& p : raw.props) {
      CHECK(p.arm_length == doctest::Approx(0.1).epsilon(1e-15));
      CHECK(p.arm_angle == doctest::Approx(-180.0));
      CHECK(p.inclination == doctest::Approx(0.0));
      CHECK(p.azimuth == doctest::Approx(-90.0));
      CHECK(p.direction == SpinDirection::CCW);
    }
  }

  TEST_CASE("count gene at +1 selects eight propellers") {
    Genotype g = uniform_genotype(0.3);
    g.genes[0] = 1.0;
    CHECK(decode_raw(g).count() == 8);
  }

  TEST_CASE("count bins split [-1, 1] evenly") {
    Genotype g = uniform_genotype(0.0);
    const double edges[] = {-1.0, -0.6, -0.2, 0.2, 0.6};
    for (int k = 0; k < 5; ++k) {
      g.genes[0] = edges[k] + 1e-9;
      CHECK(decode_raw(g).count() == 4 + k);
      if (k > 0) {
        g.genes[0] = edges[k] - 1e-9;
        CHECK(decode_raw(g).count() == 3 + k);
      }
    }
  }

  TEST_CASE("phantom blocks do not affect the phenotype") {
    Rng rng(11);
    Genotype g = random_genotype(rng);
    g.genes[0] = -0.9;  // four propellers
    Genotype h = g;
    for (std::size_t i = 1 + 4 * kGenesPerPropeller; i < kGenotypeLength; ++i) {
      h.genes[i] = rng.uniform(-1.0, 1.0);
    }
    CHECK(decode(g, PhysicalParams{}) == decode(h, PhysicalParams{}));
  }

  TEST_CASE("decode is total and separates propellers") {
    const PhysicalParams params;
    Rng rng(2024);
    int invalid = 0;
    for (int trial = 0; trial < 5000; ++trial) {
      const Genotype g = random_genotype(rng);
      const Genotype copy = g;
      const Phenotype ph = decode(g, params);
      CHECK(g == copy);
      REQUIRE(ph.count() >= kMinPropellers);
      REQUIRE(ph.count() <= kMaxPropellers);
      CHECK(ph.scale_applied >= 1.0);
      if (ph.invalid_layout) {
        ++invalid;
        continue;
      }
      for (const auto& p : ph.props) {
        CHECK(p.arm_length >= 0.1);
        CHECK(p.inclination >= 0.0);
        CHECK(p.inclination <= 15.0);
      }
      CHECK(oracle::min_center_distance(ph) >= params.min_separation() * (1.0 - 1e-12));
    }
    CHECK(invalid == 0);  // random genes never coincide exactly
  }
}

TEST_SUITE("resolve_collisions") {
  TEST_CASE("baseline quad needs no scaling") {
    const PhysicalParams params;
    const Phenotype ph = quadcopter_baseline(params);
    CHECK(oracle::min_center_distance(ph) == doctest::Approx(0.11 * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(ph.scale_applied == 1.0);
    CHECK(ph.props[0].arm_length == 0.11);
  }

  TEST_CASE("close pair scales every arm by the separation ratio") {
    const PhysicalParams params;
    Phenotype raw;
    for (double theta : {0.0, 10.0, 120.0, -120.0}) {
      PropellerSpec p;
      p.arm_length = 0.2;
      p.arm_angle = theta;
      raw.props.push_back(p);
    }
    const double d = oracle::min_center_distance(raw);
    CHECK(d == doctest::Approx(0.0349).epsilon(1e-3));
    const double expected = params.min_separation() / d;
    CHECK(expected == doctest::Approx(3.93).epsilon(1e-3));
    const Phenotype ph = resolve_collisions(raw, params);
    CHECK(ph.scale_applied == doctest::Approx(expected).epsilon(1e-12));
    for (std::size_t i = 0; i < ph.props.size(); ++i) {
      CHECK(ph.props[i].arm_length == doctest::Approx(0.2 * expected).epsilon(1e-12));
    }
    CHECK(oracle::min_center_distance(ph) == doctest::Approx(params.min_separation()).epsilon(1e-12));
  }

  TEST_CASE("pair already at the minimum separation is left alone") {
    const PhysicalParams params;
    Phenotype raw;
    for (double theta : {0.0, 180.0}) {
      PropellerSpec p;
      p.arm_length = params.min_separation() / 2.0;
      p.arm_angle = theta;
      raw.props.push_back(p);
    }
    CHECK(resolve_collisions(raw, params).scale_applied == 1.0);
  }

  TEST_CASE("coincident propellers are flagged, not scaled") {
    Phenotype raw = quadcopter_baseline();
    raw.props[1] = raw.props[0];
    const Phenotype ph = resolve_collisions(raw, PhysicalParams{});
    CHECK(ph.invalid_layout);
    CHECK(ph.scale_applied == 1.0);
  }
}

TEST_SUITE("mass_properties") {
  TEST_CASE("baseline total mass") {
    const PhysicalParams params;
    const auto mp = mass_properties(quadcopter_baseline(params), params);
    CHECK(mp.total_mass == doctest::Approx(0.250 + 4 * 0.035 + 4 * 0.11 * 0.10).epsilon(1e-15));
    CHECK(mp.total_mass == doctest::Approx(0.434).epsilon(1e-15));
  }

  TEST_CASE("symmetric layout has its CG at the origin") {
    const PhysicalParams params;
    for (int n : {4, 5, 6, 8}) {
      const auto mp = mass_properties(flat_ring(n, 0.15, params), params);
      CHECK(mp.cg.norm() < 1e-15);
    }
  }

  TEST_CASE("doubling the arms increases every diagonal inertia term") {
    const PhysicalParams params;
    Phenotype ph = quadcopter_baseline(params);
    const auto before = mass_properties(ph, params);
    for (auto& p : ph.props) p.arm_length *= 2.0;
    const auto after = mass_properties(ph, params);
    for (int k = 0; k < 3; ++k) CHECK(after.inertia(k, k) > before.inertia(k, k));
  }

  TEST_CASE("inertia matches a hand-built baseline tensor") {
    const PhysicalParams params;
    const double l = 0.11, h = l / std::sqrt(2.0);
    const auto [a, b, c] = params.fc_dims;
    const double per_arm = params.m_motor + params.mu_arm * l / 3.0;
    const double ixx = params.m_fc / 12.0 * (b * b + c * c) + 4.0 * per_arm * h * h;
    const double iyy = params.m_fc / 12.0 * (a * a + c * c) + 4.0 * per_arm * h * h;
    const double izz = params.m_fc / 12.0 * (a * a + b * b) + 4.0 * per_arm * l * l;
    const auto mp = mass_properties(quadcopter_baseline(params), params);
    CHECK(mp.inertia(0, 0) == doctest::Approx(ixx).epsilon(1e-13));
    CHECK(mp.inertia(1, 1) == doctest::Approx(iyy).epsilon(1e-13));
    CHECK(mp.inertia(2, 2) == doctest::Approx(izz).epsilon(1e-13));
    CHECK(std::abs(mp.inertia(0, 1)) < 1e-15);
    CHECK(std::abs(mp.inertia(0, 2)) < 1e-15);
    CHECK(std::abs(mp.inertia(1, 2)) < 1e-15);
  }

  TEST_CASE("parallel-axis shift for an off-center layout") {
    const PhysicalParams params;
    Phenotype ph = quadcopter_baseline(params);
    ph.props[0].arm_length = 0.25;
    const auto mp = mass_properties(ph, params);
    CHECK(mp.cg.norm() > 0.0);
    CHECK(std::abs(mp.cg.z()) < 1e-15);
    // Inertia about the CG is the smallest over parallel axes.
    Eigen::Matrix3d about_origin = mp.inertia;
    about_origin += mp.total_mass *
                    (mp.cg.squaredNorm() * Eigen::Matrix3d::Identity() - mp.cg * mp.cg.transpose());
    for (int k = 0; k < 3; ++k) CHECK(about_origin(k, k) >= mp.inertia(k, k));
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(mp.inertia);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_SUITE("effectiveness") {
  TEST_CASE("flat quad thrust columns point along body z") {
    const PhysicalParams params;
    const Phenotype ph = quadcopter_baseline(params);
    const auto mp = mass_properties(ph, params);
    const auto b = effectiveness(ph, mp, params);
    const double expected = params.max_thrust() / mp.total_mass;
    for (int i = 0; i < 4; ++i) {
      CHECK(b.force(0, i) == 0.0);
      CHECK(b.force(1, i) == 0.0);
      CHECK(b.force(2, i) == doctest::Approx(expected).epsilon(1e-15));
    }
  }

  TEST_CASE("alternating baseline moments cancel under equal commands") {
    const PhysicalParams params;
    const Phenotype ph = quadcopter_baseline(params);
    const auto b = effectiveness(ph, mass_properties(ph, params), params);
    const Eigen::Vector3d m = b.moment * Eigen::Vector4d::Ones();
    CHECK(m.norm() < 1e-10 * b.moment.norm());
  }

  TEST_CASE("single inclination about body y") {
    PropellerSpec p;
    p.inclination = 15.0;
    const Eigen::Vector3d d = thrust_axis(p);
    CHECK(d.x() == doctest::Approx(std::sin(15.0 * kDeg)).epsilon(1e-15));
    CHECK(std::abs(d.y()) < 1e-16);
    CHECK(d.z() == doctest::Approx(std::cos(15.0 * kDeg)).epsilon(1e-15));
  }

  TEST_CASE("arm angle and azimuth rotate the tilt plane about z") {
    PropellerSpec p;
    p.inclination = 10.0;
    p.arm_angle = 30.0;
    p.azimuth = 60.0;
    const Eigen::Vector3d d = thrust_axis(p);
    CHECK(std::abs(d.x()) < 1e-15);  // tilt plane at 90 deg
    CHECK(d.y() == doctest::Approx(std::sin(10.0 * kDeg)).epsilon(1e-14));
    CHECK(d.z() == doctest::Approx(std::cos(10.0 * kDeg)).epsilon(1e-14));
  }

  TEST_CASE("moment column from first principles") {
    const PhysicalParams params;
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
      Genotype g = random_genotype(rng);
      const Phenotype ph = decode(g, params);
      if (ph.invalid_layout) continue;
      const auto mp = mass_properties(ph, params);
      const auto b = effectiveness(ph, mp, params);
      for (int i = 0; i < ph.count(); ++i) {
        const auto& p = ph.props[static_cast<std::size_t>(i)];
        const double t = p.arm_angle * kDeg, phi = p.inclination * kDeg;
        const double a = (p.arm_angle + p.azimuth) * kDeg;
        const Eigen::Vector3d pos(p.arm_length * std::cos(t), p.arm_length * std::sin(t), 0.0);
        const Eigen::Vector3d d(std::sin(phi) * std::cos(a), std::sin(phi) * std::sin(a), std::cos(phi));
        const double sigma = p.direction == SpinDirection::CCW ? -1.0 : 1.0;
        const Eigen::Vector3d tau = (pos - mp.cg).cross(params.max_thrust() * d) +
                                    sigma * params.max_torque() * d;
        const Eigen::Vector3d expected = mp.inertia.inverse() * tau;
        CHECK((b.moment.col(i) - expected).norm() <= 1e-10 * expected.norm());
      }
    }
  }

  TEST_CASE("thrust column norms are independent of tilt") {
    const PhysicalParams params;
    Rng rng(17);
    for (int trial = 0; trial < 500; ++trial) {
      const Phenotype ph = decode(random_genotype(rng), params);
      if (ph.invalid_layout) continue;
      const auto mp = mass_properties(ph, params);
      const auto b = effectiveness(ph, mp, params);
      const double expected = params.max_thrust() / mp.total_mass;
      for (int i = 0; i < b.count(); ++i) {
        CHECK(b.force.col(i).norm() == doctest::Approx(expected).epsilon(1e-14));
      }
    }
  }

  TEST_CASE("yaw rotation of the layout rotates the thrust columns") {
    const PhysicalParams params;
    Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
      const Phenotype ph = decode(random_genotype(rng), params);
      if (ph.invalid_layout) continue;
      const double delta = rng.uniform(-180.0, 180.0);
      const Phenotype turned = rotated(ph, delta);
      const auto b0 = effectiveness(ph, mass_properties(ph, params), params);
      const auto b1 = effectiveness(turned, mass_properties(turned, params), params);
      const Eigen::Matrix3d rz = Eigen::AngleAxisd(delta * kDeg, Eigen::Vector3d::UnitZ()).matrix();
      CHECK((b1.force - rz * b0.force).norm() < 1e-12 * b0.force.norm());
    }
  }

  TEST_CASE("half-turn rotation rotates the moment columns") {
    // The stack is symmetric under a half turn, so the inertia transforms
    // exactly along with the layout.
    const PhysicalParams params;
    Rng rng(29);
    for (int trial = 0; trial < 20; ++trial) {
      const Phenotype ph = decode(random_genotype(rng), params);
      if (ph.invalid_layout) continue;
      const Phenotype turned = rotated(ph, 180.0);
      const auto b0 = effectiveness(ph, mass_properties(ph, params), params);
      const auto b1 = effectiveness(turned, mass_properties(turned, params), params);
      const Eigen::Matrix3d rz = Eigen::AngleAxisd(std::numbers::pi, Eigen::Vector3d::UnitZ()).matrix();
      CHECK((b1.moment - rz * b0.moment).norm() < 1e-10 * b0.moment.norm());
    }
  }
}

TEST_SUITE("quadcopter_baseline") {
  TEST_CASE("220 mm wheelbase in X configuration") {
    const Phenotype ph = quadcopter_baseline();
    REQUIRE(ph.count() == 4);
    const Eigen::Vector3d diag = position(ph.props[0]) - position(ph.props[2]);
    CHECK(diag.norm() == doctest::Approx(0.220).epsilon(1e-15));
    CHECK(ph.props[0].arm_angle == 45.0);
    CHECK(ph.props[1].arm_angle == 135.0);
    CHECK(ph.props[2].arm_angle == -135.0);
    CHECK(ph.props[3].arm_angle == -45.0);
    CHECK(ph.props[0].direction != ph.props[1].direction);
    CHECK(ph.props[1].direction != ph.props[2].direction);
    CHECK(ph.props[2].direction != ph.props[3].direction);
  }

  TEST_CASE("baseline genotype decodes to the baseline phenotype") {
    const PhysicalParams params;
    const Phenotype ph = decode(quadcopter_baseline_genotype(), params);
    const Phenotype ref = quadcopter_baseline(params);
    REQUIRE(ph.count() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(ph.props[i].arm_length == doctest::Approx(ref.props[i].arm_length).epsilon(1e-15));
      CHECK(ph.props[i].arm_angle == doctest::Approx(ref.props[i].arm_angle).epsilon(1e-15));
      CHECK(ph.props[i].inclination == doctest::Approx(0.0));
      CHECK(ph.props[i].azimuth == doctest::Approx(0.0));
      CHECK(ph.props[i].direction == ref.props[i].direction);
    }
  }
}

TEST_SUITE("angular_accel_diagnostic") {
  TEST_CASE("vanishes at zero arm length") {
    const PhysicalParams params;
    CHECK(angular_accel_diagnostic(1e-12, params) < 1e-8);
    CHECK(angular_accel_diagnostic(0.0, params) == 0.0);
  }

  TEST_CASE("long arms are worse than short ones") {
    const PhysicalParams params;
    CHECK(angular_accel_diagnostic(1.0, params) < angular_accel_diagnostic(0.1, params));
  }

  TEST_CASE("golden-section maximizer matches a dense grid") {
    for (double m_motor : {0.02, 0.035, 0.06}) {
      PhysicalParams params;
      params.m_motor = m_motor;
      const double grid = oracle::grid_argmax_arm_length(params, 1e-5, 1.0, 1e-5);
      CHECK(std::abs(best_diagnostic_arm_length(params) - grid) < 1e-4);
    }
  }
}
