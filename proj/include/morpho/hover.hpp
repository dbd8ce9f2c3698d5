#pragma once

#include <cstdint>
#include <string_view>

#include <Eigen/Core>

#include "morpho/dynamics.hpp"

namespace morpho {

enum class HoverClass { Static, Spinning, None };

std::string_view to_string(HoverClass c);

struct HoverOptions {
  double tol_eq = 1e-6;          // m/s^2 and rad/s^2
  int starts = 5;                // one uniform start + (starts - 1) random ones
  int max_iterations = 200;      // multiplier updates per start
  std::uint64_t seed = 0x5eedULL;
};

/// Outcome of one hover program. When `feasible` is false the command is
/// the start that came closest to satisfying the constraints.
struct HoverSolution {
  Eigen::VectorXd eta_hat;
  double cost = 0.0;                      // eta^T eta
  HoverClass hover_class = HoverClass::None;
  bool feasible = false;
  double thrust_residual = 0.0;           // | ||B_f eta|| - g |
  double moment_residual = 0.0;           // ||B_m eta|| (static) or ||f x m|| (spinning)

  /// Euclidean norm of both residuals; orders non-hovering designs.
  double residual() const;
};

/// min eta^T eta  s.t.  ||B_f eta|| = g,  B_m eta = 0,  0 <= eta <= 1.
HoverSolution solve_static_hover(const ActuatorMatrices& b, double g,
                                 const HoverOptions& options = {});

/// min eta^T eta  s.t.  ||B_f eta|| = g,  (B_f eta) x (B_m eta) = 0,  0 <= eta <= 1.
HoverSolution solve_spinning_hover(const ActuatorMatrices& b, double g,
                                   const HoverOptions& options = {});

/// Static first, then spinning. A None result carries the spinning
/// program's closest approach.
HoverSolution classify_hover(const ActuatorMatrices& b, double g,
                             const HoverOptions& options = {});

}  // namespace morpho
