#pragma once

#include <functional>

#include "prcg/linalg.hpp"

namespace prcg {

enum class JacobianMode { Analytic, FiniteDifference };

// Stage solves for implicit propagators. The step test is relative:
// ||dx||_inf <= tol * max(1, ||x||_inf).
struct NewtonConfig {
  double tol = 1e-12;
  int max_iter = 50;
  JacobianMode jacobian = JacobianMode::FiniteDifference;
};

void validate(const NewtonConfig& cfg);

using ResidualFn = std::function<Vector(const Vector& x)>;
using ResidualJacobianFn = std::function<Matrix(const Vector& x)>;

struct NewtonResult {
  Vector x;
  int iterations = 0;
  double last_step = 0.0;
};

// Forward differences with step sqrt(eps) * (1 + |x_j|).
Matrix fd_jacobian(const ResidualFn& residual, const Vector& x, const Vector& fx);

// Newton's method from x0. An empty `jacobian` falls back to finite
// differences. Throws NonConvergence after max_iter steps or on a non-finite
// residual, SingularSystem when the Newton matrix cannot be factored.
NewtonResult newton_solve(const ResidualFn& residual, const ResidualJacobianFn& jacobian,
                          Vector x0, const NewtonConfig& cfg);

}  // namespace prcg
