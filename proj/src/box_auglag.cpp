#include "box_auglag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace morpho::detail {

namespace {

// Below this the norm form is treated as sitting at its kink.
constexpr double kNormFloor = 1e-12;

}  // namespace

double QuadraticConstraint::value(const Eigen::VectorXd& x) const {
  const double q = x.dot(hessian * x);
  const double head = form == Form::Norm ? std::sqrt(std::max(q, 0.0)) : 0.5 * q;
  return head + linear.dot(x) + constant;
}

Eigen::VectorXd QuadraticConstraint::gradient(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd hx = hessian * x;
  if (form == Form::Quadratic) return hx + linear;
  const double r = std::sqrt(std::max(x.dot(hx), 0.0));
  if (r > kNormFloor) return hx / r + linear;
  // At the kink, use the direction of the all-ones command so the iterate
  // can leave the origin.
  const Eigen::VectorXd hu = hessian * Eigen::VectorXd::Ones(x.size());
  const double ru = std::sqrt(std::max(hu.sum(), 0.0));
  return (ru > 0.0 ? Eigen::VectorXd(hu / ru) : Eigen::VectorXd::Zero(x.size())) + linear;
}

Eigen::MatrixXd QuadraticConstraint::curvature(const Eigen::VectorXd& x) const {
  if (form == Form::Quadratic) return hessian;
  const Eigen::VectorXd hx = hessian * x;
  const double r = std::sqrt(std::max(x.dot(hx), 0.0));
  if (r <= kNormFloor) return Eigen::MatrixXd::Zero(x.size(), x.size());
  return (hessian - hx * hx.transpose() / (r * r)) / r;
}

BoxAugmentedLagrangian::BoxAugmentedLagrangian(std::vector<QuadraticConstraint> constraints,
                                               Eigen::VectorXd lower, Eigen::VectorXd upper)
    : cons_(std::move(constraints)), lower_(std::move(lower)), upper_(std::move(upper)) {
  // Normalize each constraint so its gradient is O(1) over the box; the
  // penalty parameter then means the same thing for every row.
  const double box = 0.5 * upper_.cwiseAbs().cwiseMax(lower_.cwiseAbs()).norm();
  scale_.reserve(cons_.size());
  for (auto& c : cons_) {
    const double head = c.form == QuadraticConstraint::Form::Norm ? std::sqrt(c.hessian.norm())
                                                                  : c.hessian.norm() * box;
    const double size = c.linear.norm() + head;
    const double s = size > 1e-300 ? 1.0 / size : 1.0;
    c.hessian *= c.form == QuadraticConstraint::Form::Norm ? s * s : s;
    c.linear *= s;
    c.constant *= s;
    scale_.push_back(s);
  }
}

Eigen::VectorXd BoxAugmentedLagrangian::project(Eigen::VectorXd x) const {
  return x.cwiseMax(lower_).cwiseMin(upper_);
}

BoxAugmentedLagrangian::Eval BoxAugmentedLagrangian::evaluate(const Eigen::VectorXd& x) const {
  Eval e;
  const auto m = static_cast<Eigen::Index>(cons_.size());
  e.c.resize(m);
  e.jac.resize(m, x.size());
  for (Eigen::Index k = 0; k < m; ++k) {
    const auto& con = cons_[static_cast<std::size_t>(k)];
    e.c[k] = con.value(x);
    e.jac.row(k) = con.gradient(x).transpose();
  }
  return e;
}

Eigen::VectorXd BoxAugmentedLagrangian::constraint_values(const Eigen::VectorXd& x) const {
  Eigen::VectorXd c = evaluate(x).c;
  for (Eigen::Index k = 0; k < c.size(); ++k) c[k] /= scale_[k];
  return c;
}

double BoxAugmentedLagrangian::merit(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                     double rho) const {
  double value = x.squaredNorm();
  for (std::size_t k = 0; k < cons_.size(); ++k) {
    const double c = cons_[k].value(x);
    value += y[static_cast<Eigen::Index>(k)] * c + 0.5 * rho * c * c;
  }
  return value;
}

void BoxAugmentedLagrangian::minimize_subproblem(Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                                 double rho, int max_iterations) const {
  const Eigen::Index n = x.size();
  for (int it = 0; it < max_iterations; ++it) {
    const Eval e = evaluate(x);
    const Eigen::VectorXd lam = y + rho * e.c;
    const Eigen::VectorXd grad = 2.0 * x + e.jac.transpose() * lam;
    const double pg = (project(x - grad) - x).lpNorm<Eigen::Infinity>();
    if (pg <= 1e-11) return;

    const double eps = std::min(1e-6, pg);
    std::vector<Eigen::Index> free;
    free.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
      const bool at_lower = x[i] <= lower_[i] + eps && grad[i] > 0.0;
      const bool at_upper = x[i] >= upper_[i] - eps && grad[i] < 0.0;
      if (!at_lower && !at_upper) free.push_back(i);
    }

    Eigen::VectorXd step = -grad;
    if (!free.empty()) {
      Eigen::MatrixXd hess = 2.0 * Eigen::MatrixXd::Identity(n, n) + rho * e.jac.transpose() * e.jac;
      for (std::size_t k = 0; k < cons_.size(); ++k) {
        hess += lam[static_cast<Eigen::Index>(k)] * cons_[k].curvature(x);
      }
      const auto nf = static_cast<Eigen::Index>(free.size());
      Eigen::MatrixXd hff(nf, nf);
      Eigen::VectorXd gf(nf);
      for (Eigen::Index a = 0; a < nf; ++a) {
        gf[a] = grad[free[a]];
        for (Eigen::Index b = 0; b < nf; ++b) hff(a, b) = hess(free[a], free[b]);
      }
      // Indefinite curvature from the constraint Hessians is flipped to its
      // absolute value so the step stays a descent direction.
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hff);
      Eigen::VectorXd lambda = eig.eigenvalues().cwiseAbs();
      const double floor = std::max(1e-12, 1e-10 * lambda.maxCoeff());
      lambda = lambda.cwiseMax(floor);
      const Eigen::VectorXd df =
          -eig.eigenvectors() * ((eig.eigenvectors().transpose() * gf).cwiseQuotient(lambda));
      for (Eigen::Index a = 0; a < nf; ++a) step[free[a]] = df[a];
    }

    const double f0 = merit(x, y, rho);
    double alpha = 1.0;
    bool accepted = false;
    Eigen::VectorXd trial;
    for (int ls = 0; ls < 50; ++ls) {
      trial = project(x + alpha * step);
      const double decrease = grad.dot(trial - x);
      if (merit(trial, y, rho) <= f0 + 1e-4 * decrease && decrease <= 0.0) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted || (trial - x).lpNorm<Eigen::Infinity>() == 0.0) return;
    x = std::move(trial);
  }
}

// Newton steps on the KKT system over the variables strictly inside the box,
// taken only while they reduce the KKT residual.
void BoxAugmentedLagrangian::refine_kkt(Eigen::VectorXd& x, Eigen::VectorXd& y) const {
  const Eigen::Index n = x.size();
  const auto m = static_cast<Eigen::Index>(cons_.size());
  constexpr double kBoundGap = 1e-10;

  std::vector<Eigen::Index> free;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (x[i] > lower_[i] + kBoundGap && x[i] < upper_[i] - kBoundGap) free.push_back(i);
  }
  const auto nf = static_cast<Eigen::Index>(free.size());
  if (nf == 0) return;

  auto residual = [&](const Eigen::VectorXd& xv, const Eigen::VectorXd& yv, Eval& e) {
    e = evaluate(xv);
    const Eigen::VectorXd grad = 2.0 * xv + e.jac.transpose() * yv;
    double r = e.c.lpNorm<Eigen::Infinity>();
    for (const Eigen::Index i : free) r = std::max(r, std::abs(grad[i]));
    return r;
  };

  Eval e;
  double current = residual(x, y, e);
  for (int it = 0; it < 6 && current > 1e-15; ++it) {
    Eigen::MatrixXd w = 2.0 * Eigen::MatrixXd::Identity(n, n);
    for (Eigen::Index k = 0; k < m; ++k) w += y[k] * cons_[static_cast<std::size_t>(k)].curvature(x);
    const Eigen::VectorXd grad = 2.0 * x + e.jac.transpose() * y;

    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(nf + m, nf + m);
    Eigen::VectorXd rhs(nf + m);
    for (Eigen::Index a = 0; a < nf; ++a) {
      for (Eigen::Index b = 0; b < nf; ++b) kkt(a, b) = w(free[a], free[b]);
      for (Eigen::Index k = 0; k < m; ++k) {
        kkt(a, nf + k) = e.jac(k, free[a]);
        kkt(nf + k, a) = e.jac(k, free[a]);
      }
      rhs[a] = -grad[free[a]];
    }
    rhs.tail(m) = -e.c;
    const Eigen::VectorXd step = kkt.completeOrthogonalDecomposition().solve(rhs);

    Eigen::VectorXd xn = x;
    for (Eigen::Index a = 0; a < nf; ++a) xn[free[a]] += step[a];
    if ((xn - project(xn)).lpNorm<Eigen::Infinity>() > 0.0) return;
    const Eigen::VectorXd yn = y + step.tail(m);
    Eval en;
    const double next = residual(xn, yn, en);
    if (!(next < current)) return;
    x = std::move(xn);
    y = yn;
    e = std::move(en);
    current = next;
  }
}

AugLagResult BoxAugmentedLagrangian::solve(Eigen::VectorXd x0,
                                           const AugLagSettings& settings) const {
  AugLagResult result;
  Eigen::VectorXd x = project(std::move(x0));
  Eigen::VectorXd y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cons_.size()));
  double rho = settings.penalty_init;
  double target = std::numeric_limits<double>::infinity();

  auto unscaled_violation = [&](const Eigen::VectorXd& c) {
    double v = 0.0;
    for (Eigen::Index k = 0; k < c.size(); ++k) v = std::max(v, std::abs(c[k] / scale_[k]));
    return v;
  };

  for (int outer = 1; outer <= settings.max_outer; ++outer) {
    minimize_subproblem(x, y, rho, settings.max_inner);
    const Eigen::VectorXd c = evaluate(x).c;
    result.outer_iterations = outer;
    result.violation = unscaled_violation(c);
    if (result.violation <= settings.feasibility_tol) {
      y += rho * c;
      const Eigen::VectorXd grad = 2.0 * x + evaluate(x).jac.transpose() * y;
      if ((project(x - grad) - x).lpNorm<Eigen::Infinity>() <= settings.optimality_tol) {
        refine_kkt(x, y);
        result.violation = unscaled_violation(evaluate(x).c);
        result.converged = true;
        break;
      }
      continue;
    }
    const double norm = c.lpNorm<Eigen::Infinity>();
    if (norm <= target) {
      y += rho * c;
      target = 0.25 * norm;
    } else {
      rho *= 10.0;
      if (rho > settings.penalty_max) break;
    }
  }
  result.x = std::move(x);
  result.multipliers = std::move(y);
  return result;
}

}  // namespace morpho::detail
