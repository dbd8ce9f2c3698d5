#include "morpho/hover.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>
#include <Eigen/SVD>

#include "box_auglag.hpp"
#include "morpho/rng.hpp"
#include "vertex_scan.hpp"

namespace morpho {

std::string_view to_string(HoverClass c) {
  switch (c) {
    case HoverClass::Static: return "static";
    case HoverClass::Spinning: return "spinning";
    case HoverClass::None: return "none";
  }
  return "none";
}

double HoverSolution::residual() const { return std::hypot(thrust_residual, moment_residual); }

namespace {

using detail::QuadraticConstraint;

enum class Program { Static, Spinning };

QuadraticConstraint thrust_constraint(const Eigen::Matrix3Xd& force, double g) {
  // ||F x|| - g. The norm form keeps a non-zero gradient near the origin,
  // where the squared form would let the iterate collapse onto eta = 0.
  const auto n = force.cols();
  QuadraticConstraint c;
  c.form = QuadraticConstraint::Form::Norm;
  c.hessian = force.transpose() * force;
  c.linear = Eigen::VectorXd::Zero(n);
  c.constant = -g;
  return c;
}

std::vector<QuadraticConstraint> build_constraints(const ActuatorMatrices& b, double g,
                                                   Program program) {
  const auto n = b.force.cols();
  std::vector<QuadraticConstraint> cons;
  cons.push_back(thrust_constraint(b.force, g));
  for (int k = 0; k < 3; ++k) {
    QuadraticConstraint c;
    if (program == Program::Static) {
      c.hessian = Eigen::MatrixXd::Zero(n, n);
      c.linear = b.moment.row(k).transpose();
    } else {
      // (f x m)_k = f_a m_b - f_b m_a with (k, a, b) cyclic.
      const int ia = (k + 1) % 3;
      const int ib = (k + 2) % 3;
      const Eigen::MatrixXd fa_mb = b.force.row(ia).transpose() * b.moment.row(ib);
      const Eigen::MatrixXd fb_ma = b.force.row(ib).transpose() * b.moment.row(ia);
      c.hessian = fa_mb + fa_mb.transpose() - fb_ma - fb_ma.transpose();
      c.linear = Eigen::VectorXd::Zero(n);
    }
    cons.push_back(std::move(c));
  }
  return cons;
}

// Scales a non-negative command so its thrust magnitude equals g, then
// clips it into the box.
Eigen::VectorXd scale_to_gravity(Eigen::VectorXd eta, const Eigen::Matrix3Xd& force, double g) {
  const double thrust = (force * eta).norm();
  if (thrust > 0.0) eta *= g / thrust;
  return eta.cwiseMax(0.0).cwiseMin(1.0);
}

HoverSolution make_solution(const ActuatorMatrices& b, double g, Program program,
                            Eigen::VectorXd eta, double tol) {
  HoverSolution s;
  const Eigen::Vector3d f = b.force * eta;
  const Eigen::Vector3d m = b.moment * eta;
  s.thrust_residual = std::abs(f.norm() - g);
  s.moment_residual = program == Program::Static ? m.norm() : f.cross(m).norm();
  s.cost = eta.squaredNorm();
  s.eta_hat = std::move(eta);
  s.feasible = s.thrust_residual <= tol && s.moment_residual <= tol;
  s.hover_class = !s.feasible ? HoverClass::None
                  : program == Program::Static ? HoverClass::Static
                                               : HoverClass::Spinning;
  return s;
}

bool better_than(const HoverSolution& candidate, const HoverSolution& best) {
  if (candidate.feasible != best.feasible) return candidate.feasible;
  if (candidate.feasible) return candidate.cost < best.cost;
  return candidate.residual() < best.residual();
}

// Thrust-maximizing command among those whose moment is s times the force,
// i.e. (B_m - s B_f) eta = 0. s = 0 is the static case.
detail::VertexMax parallel_moment_vertex(const ActuatorMatrices& b, double s) {
  const Eigen::MatrixXd constraint = b.moment - s * b.force;
  return detail::max_thrust_vertex(b.force, constraint);
}

// Real ratios s at which M - sF drops rank, in the common row space of M and F.
// Candidates are generalized eigenvalues of every square column subset.
std::vector<double> rank_drop_ratios(const ActuatorMatrices& b) {
  const auto n = b.force.cols();
  Eigen::Matrix3Xd stacked(3, 2 * n);
  stacked << b.moment, b.force;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked, Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  int r = 0;
  while (r < sv.size() && sv[r] > 1e-10 * sv[0]) ++r;
  if (r == 0 || r > n) return {};
  const Eigen::MatrixXd basis = svd.matrixU().leftCols(r);
  const Eigen::MatrixXd m = basis.transpose() * b.moment;
  const Eigen::MatrixXd f = basis.transpose() * b.force;

  std::vector<double> ratios;
  std::vector<int> cols(static_cast<std::size_t>(r));
  for (int k = 0; k < r; ++k) cols[static_cast<std::size_t>(k)] = k;
  Eigen::MatrixXd mc(r, r), fc(r, r);
  while (true) {
    for (int k = 0; k < r; ++k) {
      mc.col(k) = m.col(cols[static_cast<std::size_t>(k)]);
      fc.col(k) = f.col(cols[static_cast<std::size_t>(k)]);
    }
    Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> ges(mc, fc, false);
    if (ges.info() == Eigen::Success) {
      for (Eigen::Index k = 0; k < r; ++k) {
        const double beta = ges.betas()[k];
        const std::complex<double> alpha = ges.alphas()[k];
        if (std::abs(beta) <= 1e-12 * std::abs(alpha) || beta == 0.0) continue;
        if (std::abs(alpha.imag()) > 1e-9 * std::abs(alpha)) continue;
        const double s = alpha.real() / beta;
        const Eigen::MatrixXd pencil = m - s * f;
        const Eigen::JacobiSVD<Eigen::MatrixXd> check(pencil);
        const auto& cs = check.singularValues();
        if (cs[r - 1] <= 1e-9 * std::max(cs[0], 1e-300)) ratios.push_back(s);
      }
    }
    int k = r - 1;
    while (k >= 0 && cols[static_cast<std::size_t>(k)] == n - r + k) --k;
    if (k < 0) break;
    ++cols[static_cast<std::size_t>(k)];
    for (int j = k + 1; j < r; ++j) cols[static_cast<std::size_t>(j)] = cols[static_cast<std::size_t>(j - 1)] + 1;
  }
  std::sort(ratios.begin(), ratios.end());
  ratios.erase(std::unique(ratios.begin(), ratios.end(),
                           [](double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(std::abs(x), 1.0); }),
               ratios.end());
  return ratios;
}

// Searches moment-to-force ratios s for a command with m = s f and
// ||f|| >= g. The grid is geometric in |s| because feasible ratios cluster
// on very different scales for flat and tilted layouts.
std::pair<double, detail::VertexMax> scan_spin_ratios(const ActuatorMatrices& b, double g) {
  double bound = 0.0;
  for (Eigen::Index i = 0; i < b.moment.cols(); ++i) bound += b.moment.col(i).norm();
  bound = std::max(bound / g, 1e-12);

  std::vector<double> ratios{0.0};
  for (int k = 0; k <= 96; ++k) {
    const double s = bound * std::pow(10.0, -k / 16.0);
    ratios.push_back(s);
    ratios.push_back(-s);
  }
  std::pair<double, detail::VertexMax> best{0.0, {}};
  best.second.thrust = -1.0;
  std::size_t best_index = 0;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    auto vm = parallel_moment_vertex(b, ratios[i]);
    if (vm.thrust > best.second.thrust) {
      best = {ratios[i], std::move(vm)};
      best_index = i;
      if (best.second.thrust >= g) return best;
    }
  }

  // Ratios where M - sF loses rank are isolated and invisible to the grid
  // (e.g. all thrust in one plane); test each one directly.
  for (const double s : rank_drop_ratios(b)) {
    auto vm = parallel_moment_vertex(b, s);
    if (vm.thrust > best.second.thrust) {
      best = {s, std::move(vm)};
      if (best.second.thrust >= g) return best;
    }
  }

  // Golden-section refinement between the grid neighbours of the best ratio.
  const double s0 = ratios[best_index];
  const double step = s0 == 0.0 ? bound * 1e-6 : std::abs(s0) * (std::pow(10.0, 1.0 / 16.0) - 1.0);
  double lo = s0 - step, hi = s0 + step;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 30; ++it) {
    const double x1 = hi - inv_phi * (hi - lo);
    const double x2 = lo + inv_phi * (hi - lo);
    auto v1 = parallel_moment_vertex(b, x1);
    auto v2 = parallel_moment_vertex(b, x2);
    if (v1.thrust > best.second.thrust) best = {x1, v1};
    if (v2.thrust > best.second.thrust) best = {x2, v2};
    if (best.second.thrust >= g) break;
    if (v1.thrust >= v2.thrust) hi = x2; else lo = x1;
  }
  return best;
}

HoverSolution solve(const ActuatorMatrices& b, double g, const HoverOptions& options,
                    Program program) {
  const auto n = b.force.cols();
  if (b.moment.cols() != n || n == 0) {
    throw std::invalid_argument("actuator matrices must share a non-zero column count");
  }
  if (!b.force.allFinite() || !b.moment.allFinite()) {
    throw std::invalid_argument("actuator matrices must be finite");
  }

  // Static feasibility is decided exactly up front: the largest reachable
  // thrust with zero moment must reach g.
  detail::VertexMax static_vertex;
  if (program == Program::Static) {
    static_vertex = parallel_moment_vertex(b, 0.0);
    if (static_vertex.thrust < g - options.tol_eq) {
      return make_solution(b, g, program, static_vertex.eta, options.tol_eq);
    }
  }

  const detail::BoxAugmentedLagrangian solver(build_constraints(b, g, program),
                                              Eigen::VectorXd::Zero(n),
                                              Eigen::VectorXd::Ones(n));
  detail::AugLagSettings settings;
  settings.feasibility_tol = 0.1 * options.tol_eq;
  settings.max_outer = options.max_iterations;

  auto run = [&](const Eigen::VectorXd& x0) {
    return make_solution(b, g, program, solver.solve(x0, settings).x, options.tol_eq);
  };

  Rng rng(options.seed);
  HoverSolution best;
  for (int start = 0; start < options.starts; ++start) {
    Eigen::VectorXd x0(n);
    if (start == 0) {
      x0.setOnes();
    } else {
      for (Eigen::Index i = 0; i < n; ++i) x0[i] = rng.uniform(0.05, 1.0);
    }
    HoverSolution candidate = run(scale_to_gravity(std::move(x0), b.force, g));
    if (start == 0 || better_than(candidate, best)) best = std::move(candidate);
  }
  if (best.feasible) return best;

  // Every start stalled. Fall back to a certified point: a vertex command
  // with the right moment structure, scaled down to exactly g of thrust.
  detail::VertexMax vertex;
  if (program == Program::Static) {
    vertex = std::move(static_vertex);
  } else {
    vertex = scan_spin_ratios(b, g).second;
  }
  if (vertex.thrust >= g && vertex.thrust > 0.0) {
    const Eigen::VectorXd certified = vertex.eta * (g / vertex.thrust);
    HoverSolution polished = run(certified);
    if (polished.feasible) return polished;
    HoverSolution direct = make_solution(b, g, program, certified, options.tol_eq);
    if (direct.feasible) return direct;
  } else if (vertex.eta.size() == n) {
    HoverSolution closest = make_solution(b, g, program, vertex.eta, options.tol_eq);
    if (better_than(closest, best)) best = std::move(closest);
  }
  return best;
}

}  // namespace

HoverSolution solve_static_hover(const ActuatorMatrices& b, double g,
                                 const HoverOptions& options) {
  return solve(b, g, options, Program::Static);
}

HoverSolution solve_spinning_hover(const ActuatorMatrices& b, double g,
                                   const HoverOptions& options) {
  return solve(b, g, options, Program::Spinning);
}

HoverSolution classify_hover(const ActuatorMatrices& b, double g, const HoverOptions& options) {
  HoverSolution s = solve_static_hover(b, g, options);
  if (s.feasible) return s;
  return solve_spinning_hover(b, g, options);
}

}  // namespace morpho
