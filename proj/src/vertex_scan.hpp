#pragma once

// Largest thrust magnitude ||F eta|| over the polytope
//   { eta in [0,1]^n : A eta = 0 }.
// The objective is convex, so the maximum sits on a vertex; vertices are
// enumerated as basic solutions (rank(A) basic columns, the rest at a bound).
// Because the polytope contains 0 and is connected, every thrust magnitude
// between 0 and the maximum is reachable by scaling, which turns the result
// into an exact feasibility test for the hover programs.

#include <Eigen/Core>

namespace morpho::detail {

struct VertexMax {
  Eigen::VectorXd eta;  // maximizing vertex
  double thrust = 0.0;  // ||F eta||
};

VertexMax max_thrust_vertex(const Eigen::Matrix3Xd& force, const Eigen::MatrixXd& constraint);

}  // namespace morpho::detail
