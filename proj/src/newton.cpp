#include "prcg/newton.hpp"

#include <cmath>
#include <limits>

#include "prcg/errors.hpp"

namespace prcg {

void validate(const NewtonConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw DomainError("NewtonConfig: tol must be > 0");
  if (cfg.max_iter < 1) throw DomainError("NewtonConfig: max_iter must be >= 1");
}

Matrix fd_jacobian(const ResidualFn& residual, const Vector& x, const Vector& fx) {
  const double root_eps = std::sqrt(std::numeric_limits<double>::epsilon());
  Matrix jac(fx.size(), x.size());
  Vector xp = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double h = root_eps * (1.0 + std::abs(x[j]));
    xp[j] = x[j] + h;
    const double step = xp[j] - x[j];  // representable increment
    jac.col(j) = (residual(xp) - fx) / step;
    xp[j] = x[j];
  }
  return jac;
}

NewtonResult newton_solve(const ResidualFn& residual, const ResidualJacobianFn& jacobian,
                          Vector x0, const NewtonConfig& cfg) {
  validate(cfg);
  NewtonResult out;
  out.x = std::move(x0);
  Vector fx = residual(out.x);
  double prev_step = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= cfg.max_iter; ++it) {
    if (!fx.allFinite()) {
      throw NonConvergence("newton: non-finite residual", std::numeric_limits<double>::infinity(), it);
    }
    if (max_norm(fx) == 0.0) {
      out.iterations = it - 1;
      out.last_step = 0.0;
      return out;
    }
    const Matrix jac = jacobian ? jacobian(out.x) : fd_jacobian(residual, out.x, fx);
    Vector dx = solve_dense(jac, -fx);

    // Backtrack while the residual grows; the full step is taken whenever it helps.
    const double f0 = fx.norm();
    Vector x_try = out.x + dx;
    Vector f_try = residual(x_try);
    for (int halvings = 0; halvings < 30; ++halvings) {
      if (f_try.allFinite() && f_try.norm() <= (1.0 - 1e-4 * std::ldexp(1.0, -halvings)) * f0) break;
      if (f_try.allFinite() && max_norm(dx) <= cfg.tol * std::max(1.0, max_norm(out.x))) break;
      dx *= 0.5;
      x_try = out.x + dx;
      f_try = residual(x_try);
    }
    out.x = std::move(x_try);
    fx = std::move(f_try);
    out.iterations = it;
    out.last_step = max_norm(dx);
    const double scale = std::max(1.0, max_norm(out.x));
    if (out.last_step <= cfg.tol * scale) return out;
    // Stagnation at the rounding floor counts as converged.
    if (out.last_step >= prev_step &&
        out.last_step <= 1e3 * std::numeric_limits<double>::epsilon() * scale) {
      return out;
    }
    prev_step = out.last_step;
  }
  throw NonConvergence("newton: no convergence within max_iter", out.last_step, cfg.max_iter);
}

}  // namespace prcg
