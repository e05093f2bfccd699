#pragma once

#include "prcg/chebyshev.hpp"
#include "prcg/newton.hpp"
#include "prcg/problem.hpp"

namespace prcg {

/// Spectral collocation on one subinterval [a, b] with M+1 Chebyshev-Gauss
/// nodes. States are stored node-major: row m of `u_nodes` is the state at
/// node t_m, row l of `u_hat` holds the degree-l Chebyshev coefficients.
struct CollocationSolution {
  Matrix u_hat;    ///< (M+2) x dim
  Matrix u_nodes;  ///< (M+1) x dim
  Vector u_end;    ///< state at b
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;  ///< last successive-iterate max difference
};

enum class InitialGuess { ConstantInitialValue, Provided };
enum class FailurePolicy { Throw, ReturnBest };

struct PicardConfig {
  double tol = 1e-12;
  int max_iter = 100;
  InitialGuess initial_guess = InitialGuess::ConstantInitialValue;
  FailurePolicy on_failure = FailurePolicy::Throw;
};

void validate(const PicardConfig& cfg);

struct SweepResult {
  Matrix u_hat;
  Matrix u_nodes;
};

/// One Picard update: f at (t_m, u_prev_nodes row m), then
/// u_hat = U0 + dT * C_alpha * f and u_nodes = T1 * u_hat.
/// Throws SolverError carrying the node index if f is not finite there.
SweepResult picard_sweep(const CollocationOperator& op, const Rhs& f, const CgPointSet& points,
                         const Vector& u_a, const Matrix& u_prev_nodes);

/// Picard iteration to a fixed point of the collocation equations.
///
/// Stops when the max-norm change of the node values drops below cfg.tol, or
/// when it stops decreasing at the rounding floor of the data. On max_iter or
/// divergence throws NonConvergence, unless cfg.on_failure is ReturnBest, in
/// which case the last finite iterate comes back with converged = false.
/// `initial_nodes` is read only when cfg.initial_guess is Provided.
CollocationSolution solve_nonlinear(const CollocationOperator& op, const Rhs& f,
                                    const CgPointSet& points, const Vector& u_a,
                                    const PicardConfig& cfg,
                                    const Matrix* initial_nodes = nullptr);

/// Direct solve of the collocation system for u' + A u = g(t) (empty g is
/// zero forcing): one dense system of size (M+1)*dim. Throws SingularSystem
/// at a pole of the scheme's rational stability function.
CollocationSolution solve_linear(const CollocationOperator& op, const Matrix& A,
                                 const Forcing& g, const CgPointSet& points, const Vector& u_a);

/// Newton's method on the same discrete equations as solve_nonlinear.
/// Reaches the collocation solution where Picard's contraction fails.
CollocationSolution solve_newton(const CollocationOperator& op, const Rhs& f,
                                 const JacobianFn& jacobian, const CgPointSet& points,
                                 const Vector& u_a, const NewtonConfig& cfg);

/// State at the right endpoint: column sums of u_hat, since T_l(1) = 1.
Vector endpoint_value(const Matrix& u_hat);

}  // namespace prcg
