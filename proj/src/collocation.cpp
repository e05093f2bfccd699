#include "prcg/collocation.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "prcg/errors.hpp"

namespace prcg {
namespace {

void check_shapes(const CollocationOperator& op, const CgPointSet& points, const Vector& u_a) {
  if (points.M != op.M) {
    throw DomainError("collocation: point set has M = " + std::to_string(points.M) +
                      ", operator has M = " + std::to_string(op.M));
  }
  if (u_a.size() == 0) throw DomainError("collocation: empty initial state");
}

Matrix eval_rhs(const Rhs& f, const CgPointSet& points, const Matrix& nodes) {
  const Eigen::Index dim = nodes.cols();
  Matrix out(nodes.rows(), dim);
  for (Eigen::Index m = 0; m < nodes.rows(); ++m) {
    const Vector fm = f(points.t[m], nodes.row(m).transpose());
    if (fm.size() != dim) {
      throw SolverError("collocation: rhs returned wrong dimension", m);
    }
    if (!fm.allFinite()) {
      throw SolverError("collocation: non-finite rhs at node " + std::to_string(m), m);
    }
    out.row(m) = fm.transpose();
  }
  return out;
}

// u_hat = U0 + dT * C_alpha * F with U0 = [u_a; 0; ...].
Matrix coefficients(const CollocationOperator& op, double dt, const Vector& u_a, const Matrix& F) {
  Matrix u_hat = dt * (op.C_alpha * F);
  u_hat.row(0) += u_a.transpose();
  return u_hat;
}

CollocationSolution finish(const CollocationOperator& op, Matrix u_hat) {
  CollocationSolution sol;
  sol.u_nodes = op.T1 * u_hat;
  sol.u_end = endpoint_value(u_hat);
  sol.u_hat = std::move(u_hat);
  return sol;
}

}  // namespace

void validate(const PicardConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw DomainError("PicardConfig: tol must be > 0");
  if (cfg.max_iter < 1) throw DomainError("PicardConfig: max_iter must be >= 1");
}

Vector endpoint_value(const Matrix& u_hat) { return u_hat.colwise().sum().transpose(); }

SweepResult picard_sweep(const CollocationOperator& op, const Rhs& f, const CgPointSet& points,
                         const Vector& u_a, const Matrix& u_prev_nodes) {
  check_shapes(op, points, u_a);
  if (u_prev_nodes.rows() != op.nodes() || u_prev_nodes.cols() != u_a.size()) {
    throw DomainError("picard_sweep: node table has wrong shape");
  }
  const Matrix F = eval_rhs(f, points, u_prev_nodes);
  SweepResult out;
  out.u_hat = coefficients(op, points.length(), u_a, F);
  out.u_nodes = op.T1 * out.u_hat;
  return out;
}

CollocationSolution solve_nonlinear(const CollocationOperator& op, const Rhs& f,
                                    const CgPointSet& points, const Vector& u_a,
                                    const PicardConfig& cfg, const Matrix* initial_nodes) {
  validate(cfg);
  check_shapes(op, points, u_a);

  Matrix nodes;
  if (cfg.initial_guess == InitialGuess::Provided) {
    if (initial_nodes == nullptr) throw DomainError("solve_nonlinear: initial guess not provided");
    nodes = *initial_nodes;
  } else {
    nodes = u_a.transpose().replicate(op.nodes(), 1);
  }

  constexpr double eps = std::numeric_limits<double>::epsilon();
  double prev_diff = std::numeric_limits<double>::infinity();
  double diff = prev_diff;
  SweepResult best;
  for (int p = 1; p <= cfg.max_iter; ++p) {
    SweepResult next;
    try {
      next = picard_sweep(op, f, points, u_a, nodes);
    } catch (const SolverError&) {
      // A diverging iterate can push f out of its domain; the first sweep
      // failing is a genuine rhs error.
      if (p == 1 || cfg.on_failure == FailurePolicy::Throw) throw;
      break;
    }
    diff = (next.u_nodes - nodes).lpNorm<Eigen::Infinity>();
    if (!std::isfinite(diff) || !next.u_hat.allFinite()) break;
    nodes = next.u_nodes;
    best = std::move(next);

    const double scale = std::max(1.0, nodes.lpNorm<Eigen::Infinity>());
    const bool small = diff < cfg.tol;
    const bool stalled = diff >= prev_diff && diff <= 1e3 * eps * scale;
    if (small || stalled) {
      CollocationSolution sol = finish(op, std::move(best.u_hat));
      sol.iterations = p;
      sol.converged = true;
      sol.residual = diff;
      return sol;
    }
    prev_diff = diff;
  }

  if (cfg.on_failure == FailurePolicy::Throw || best.u_hat.size() == 0) {
    throw NonConvergence("picard: no convergence (last update " + std::to_string(diff) + ")", diff,
                         cfg.max_iter);
  }
  CollocationSolution sol = finish(op, std::move(best.u_hat));
  sol.iterations = cfg.max_iter;
  sol.converged = false;
  sol.residual = diff;
  return sol;
}

CollocationSolution solve_linear(const CollocationOperator& op, const Matrix& A, const Forcing& g,
                                 const CgPointSet& points, const Vector& u_a) {
  check_shapes(op, points, u_a);
  const Eigen::Index d = u_a.size();
  if (A.rows() != d || A.cols() != d) throw DomainError("solve_linear: A has wrong shape");
  const Eigen::Index n = op.nodes();
  const double dt = points.length();

  Matrix G = Matrix::Zero(n, d);
  if (g) {
    for (Eigen::Index m = 0; m < n; ++m) {
      const Vector gm = g(points.t[m]);
      if (gm.size() != d || !gm.allFinite()) {
        throw SolverError("solve_linear: bad forcing at node " + std::to_string(m), m);
      }
      G.row(m) = gm.transpose();
    }
  }

  // Column-major vec(U): block (i, j) of the system is delta_ij I + dT A(i, j) T1C.
  Matrix K = Matrix::Identity(n * d, n * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      if (A(i, j) != 0.0) K.block(i * n, j * n, n, n) += (dt * A(i, j)) * op.T1C;
    }
  }
  Matrix rhs = u_a.transpose().replicate(n, 1) + dt * (op.T1C * G);
  const Vector flat = solve_dense(K, Eigen::Map<const Vector>(rhs.data(), rhs.size()));
  const Matrix U = Eigen::Map<const Matrix>(flat.data(), n, d);

  const Matrix F = G - U * A.transpose();
  CollocationSolution sol = finish(op, coefficients(op, dt, u_a, F));
  sol.iterations = 0;
  sol.converged = true;
  sol.residual = 0.0;
  return sol;
}

CollocationSolution solve_newton(const CollocationOperator& op, const Rhs& f,
                                 const JacobianFn& jacobian, const CgPointSet& points,
                                 const Vector& u_a, const NewtonConfig& cfg) {
  check_shapes(op, points, u_a);
  const Eigen::Index d = u_a.size();
  const Eigen::Index n = op.nodes();
  const double dt = points.length();

  // Unknown: vec(U), column-major. Residual U - 1 u_a^T - dT T1C F(U).
  auto unpack = [n, d](const Vector& x) { return Matrix(Eigen::Map<const Matrix>(x.data(), n, d)); };
  const Matrix start = u_a.transpose().replicate(n, 1);
  ResidualFn residual = [&](const Vector& x) -> Vector {
    const Matrix U = unpack(x);
    Matrix r = U - start - dt * (op.T1C * eval_rhs(f, points, U));
    return Eigen::Map<const Vector>(r.data(), r.size());
  };
  ResidualJacobianFn jac;
  if (jacobian && cfg.jacobian == JacobianMode::Analytic) {
    jac = [&](const Vector& x) -> Matrix {
      const Matrix U = unpack(x);
      Matrix J = Matrix::Identity(n * d, n * d);
      for (Eigen::Index m = 0; m < n; ++m) {
        const Matrix Jm = jacobian(points.t[m], U.row(m).transpose());
        for (Eigen::Index i = 0; i < d; ++i) {
          for (Eigen::Index j = 0; j < d; ++j) {
            if (Jm(i, j) != 0.0) J.block(i * n, j * n + m, n, 1) -= (dt * Jm(i, j)) * op.T1C.col(m);
          }
        }
      }
      return J;
    };
  }
  const NewtonResult res =
      newton_solve(residual, jac, Eigen::Map<const Vector>(start.data(), start.size()), cfg);
  const Matrix U = unpack(res.x);
  CollocationSolution sol = finish(op, coefficients(op, dt, u_a, eval_rhs(f, points, U)));
  sol.iterations = res.iterations;
  sol.converged = true;
  sol.residual = res.last_step;
  return sol;
}

}  // namespace prcg
