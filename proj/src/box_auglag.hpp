#pragma once

// Augmented Lagrangian solver for
//   min  x^T x   s.t.  c_k(x) = 0,  lower <= x <= upper
// where every c_k is either quadratic, c_k(x) = 0.5 x^T H_k x + a_k^T x + b_k,
// or a norm, c_k(x) = sqrt(x^T H_k x) + a_k^T x + b_k with H_k PSD.
// Bound constraints stay out of the Lagrangian; each subproblem is solved by
// a projected Newton method (Bertsekas) on the box.

#include <vector>

#include <Eigen/Core>

namespace morpho::detail {

struct QuadraticConstraint {
  enum class Form { Quadratic, Norm };

  Eigen::MatrixXd hessian;  // n x n, symmetric; may be zero
  Eigen::VectorXd linear;   // n
  double constant = 0.0;
  Form form = Form::Quadratic;

  double value(const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd curvature(const Eigen::VectorXd& x) const;
};

struct AugLagSettings {
  double feasibility_tol = 1e-7;  // max |c_k| at exit, unscaled
  double optimality_tol = 1e-9;   // projected Lagrangian gradient, inf-norm
  int max_outer = 200;
  int max_inner = 60;
  double penalty_init = 10.0;
  double penalty_max = 1e12;
};

struct AugLagResult {
  Eigen::VectorXd x;
  Eigen::VectorXd multipliers;
  double violation = 0.0;  // max |c_k|, unscaled
  bool converged = false;
  int outer_iterations = 0;
};

class BoxAugmentedLagrangian {
 public:
  BoxAugmentedLagrangian(std::vector<QuadraticConstraint> constraints, Eigen::VectorXd lower,
                         Eigen::VectorXd upper);

  AugLagResult solve(Eigen::VectorXd x0, const AugLagSettings& settings) const;

  /// Unscaled constraint values at x.
  Eigen::VectorXd constraint_values(const Eigen::VectorXd& x) const;

 private:
  struct Eval {
    Eigen::VectorXd c;  // scaled
    Eigen::MatrixXd jac;  // scaled, m x n
  };

  Eval evaluate(const Eigen::VectorXd& x) const;
  double merit(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double rho) const;
  Eigen::VectorXd project(Eigen::VectorXd x) const;
  void minimize_subproblem(Eigen::VectorXd& x, const Eigen::VectorXd& y, double rho,
                           int max_iterations) const;
  void refine_kkt(Eigen::VectorXd& x, Eigen::VectorXd& y) const;

  std::vector<QuadraticConstraint> cons_;  // already scaled
  std::vector<double> scale_;              // scaled = scale * unscaled
  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
};

}  // namespace morpho::detail
