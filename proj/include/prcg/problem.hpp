#pragma once

#include <functional>
#include <optional>
#include <string>

#include "prcg/linalg.hpp"

namespace prcg {

using Rhs = std::function<Vector(double t, const Vector& u)>;
using JacobianFn = std::function<Matrix(double t, const Vector& u)>;
using Forcing = std::function<Vector(double t)>;

// u' + A u = g(t). An empty g means g = 0.
struct LinearForm {
  Matrix A;
  Forcing g;
};

/// Initial-value problem u' = f(t, u), u(0) = u0 on [0, T].
///
/// `reference`, `jacobian` and `linear` are optional. When `linear` is set,
/// `f` must agree with it; propagators may then take direct linear solves.
/// `position_dims` > 0 marks the leading components as positions so error
/// reports can add a position-only norm.
struct IvpProblem {
  std::string name;
  int dim = 0;
  Rhs f;
  Vector u0;
  double T = 1.0;
  Forcing reference;
  JacobianFn jacobian;
  std::optional<LinearForm> linear;
  int position_dims = 0;
};

// Throws DomainError when dim, u0 and f(0, u0) are inconsistent or non-finite.
void validate(const IvpProblem& problem);

}  // namespace prcg
