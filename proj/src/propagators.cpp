#include "prcg/propagators.hpp"

#include <cmath>
#include <string>

#include "prcg/errors.hpp"

namespace prcg {

void validate(const PropagatorSpec& spec) {
  if (spec.substeps < 1) throw DomainError("PropagatorSpec: substeps must be >= 1");
  if (spec.cg_points < 0) throw DomainError("PropagatorSpec: cg_points must be >= 0");
  validate(spec.newton);
  validate(spec.picard);
}

std::string kind_name(PropagatorKind kind) {
  switch (kind) {
    case PropagatorKind::BackwardEuler: return "BackwardEuler";
    case PropagatorKind::ForwardEuler: return "ForwardEuler";
    case PropagatorKind::Trapezoidal: return "Trapezoidal";
    case PropagatorKind::TrBdf2: return "TrBdf2";
    case PropagatorKind::Gauss4: return "Gauss4";
    case PropagatorKind::Erk4: return "Erk4";
    case PropagatorKind::ChebyshevGauss: return "ChebyshevGauss";
  }
  return "unknown";
}

std::string describe(const PropagatorSpec& spec) {
  if (spec.kind == PropagatorKind::ChebyshevGauss) {
    return kind_name(spec.kind) + "(M=" + std::to_string(spec.cg_points) + ")";
  }
  return kind_name(spec.kind) + "(J=" + std::to_string(spec.substeps) + ")";
}

double one_step_stability(PropagatorKind kind, double z) {
  switch (kind) {
    case PropagatorKind::BackwardEuler:
      return 1.0 / (1.0 + z);
    case PropagatorKind::ForwardEuler:
      return 1.0 - z;
    case PropagatorKind::Trapezoidal:
      return (1.0 - 0.5 * z) / (1.0 + 0.5 * z);
    case PropagatorKind::TrBdf2: {
      const double g = kTrBdf2Gamma;
      const double tr = (1.0 - 0.5 * g * z) / (1.0 + 0.5 * g * z);
      const double w = g * (2.0 - g);
      return (tr / w - (1.0 - g) * (1.0 - g) / w) / (1.0 + (1.0 - g) / (2.0 - g) * z);
    }
    case PropagatorKind::Gauss4:
      return (z * z - 6.0 * z + 12.0) / (z * z + 6.0 * z + 12.0);
    case PropagatorKind::Erk4:
      return 1.0 - z + z * z / 2.0 - z * z * z / 6.0 + z * z * z * z / 24.0;
    case PropagatorKind::ChebyshevGauss:
      break;
  }
  throw DomainError("one_step_stability: not a one-step kind");
}

Propagator::Propagator(PropagatorSpec spec) : spec_(std::move(spec)) {
  validate(spec_);
  if (spec_.kind == PropagatorKind::ChebyshevGauss) {
    op_ = std::make_shared<const CollocationOperator>(build_operator(spec_.cg_points));
  }
}

double Propagator::stability(double z) const {
  if (!(z >= 0.0)) throw DomainError("stability: z must be >= 0");
  if (spec_.kind != PropagatorKind::ChebyshevGauss) {
    const int J = spec_.substeps;
    return std::pow(one_step_stability(spec_.kind, z / J), J);
  }
  const CollocationOperator& op = *op_;
  const Matrix K = Matrix::Identity(op.nodes(), op.nodes()) + z * op.T1C;
  const Vector x = solve_dense(K, op.T1.col(0));
  return 1.0 - z * (op.C_alpha * x).sum();
}

ResidualJacobianFn Propagator::stage_jacobian(const IvpProblem& problem, double t,
                                              double scale) const {
  if (spec_.newton.jacobian != JacobianMode::Analytic || !problem.jacobian) return {};
  // Residual x - (known) - scale * f(t, x).
  return [&problem, t, scale](const Vector& x) -> Matrix {
    Matrix J = -scale * problem.jacobian(t, x);
    J.diagonal().array() += 1.0;
    return J;
  };
}

Vector Propagator::step(const IvpProblem& problem, double t, const Vector& u, double h) const {
  const Rhs& f = problem.f;
  switch (spec_.kind) {
    case PropagatorKind::ForwardEuler:
      return u + h * f(t, u);

    case PropagatorKind::Erk4: {
      const Vector k1 = f(t, u);
      const Vector k2 = f(t + 0.5 * h, u + 0.5 * h * k1);
      const Vector k3 = f(t + 0.5 * h, u + 0.5 * h * k2);
      const Vector k4 = f(t + h, u + h * k3);
      return u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

    case PropagatorKind::BackwardEuler: {
      auto residual = [&](const Vector& x) -> Vector { return x - u - h * f(t + h, x); };
      return newton_solve(residual, stage_jacobian(problem, t + h, h), u, spec_.newton).x;
    }

    case PropagatorKind::Trapezoidal: {
      const Vector known = u + 0.5 * h * f(t, u);
      auto residual = [&](const Vector& x) -> Vector { return x - known - 0.5 * h * f(t + h, x); };
      return newton_solve(residual, stage_jacobian(problem, t + h, 0.5 * h), u, spec_.newton).x;
    }

    case PropagatorKind::TrBdf2: {
      const double g = kTrBdf2Gamma;
      const double hg = g * h;
      const Vector known1 = u + 0.5 * hg * f(t, u);
      auto res1 = [&](const Vector& x) -> Vector { return x - known1 - 0.5 * hg * f(t + hg, x); };
      const Vector mid =
          newton_solve(res1, stage_jacobian(problem, t + hg, 0.5 * hg), u, spec_.newton).x;
      const double w = g * (2.0 - g);
      const Vector known2 = mid / w - ((1.0 - g) * (1.0 - g) / w) * u;
      const double c = (1.0 - g) / (2.0 - g) * h;
      auto res2 = [&](const Vector& x) -> Vector { return x - known2 - c * f(t + h, x); };
      return newton_solve(res2, stage_jacobian(problem, t + h, c), mid, spec_.newton).x;
    }

    case PropagatorKind::Gauss4: {
      // Two-stage Gauss-Legendre; unknowns are the stacked stage slopes.
      const double r3 = std::sqrt(3.0);
      const double c1 = 0.5 - r3 / 6.0, c2 = 0.5 + r3 / 6.0;
      const double a11 = 0.25, a12 = 0.25 - r3 / 6.0, a21 = 0.25 + r3 / 6.0, a22 = 0.25;
      const Eigen::Index d = u.size();
      auto stages = [&](const Vector& k, Vector& y1, Vector& y2) {
        y1 = u + h * (a11 * k.head(d) + a12 * k.tail(d));
        y2 = u + h * (a21 * k.head(d) + a22 * k.tail(d));
      };
      auto residual = [&](const Vector& k) -> Vector {
        Vector y1, y2;
        stages(k, y1, y2);
        Vector r(2 * d);
        r.head(d) = k.head(d) - f(t + c1 * h, y1);
        r.tail(d) = k.tail(d) - f(t + c2 * h, y2);
        return r;
      };
      ResidualJacobianFn jac;
      if (spec_.newton.jacobian == JacobianMode::Analytic && problem.jacobian) {
        jac = [&](const Vector& k) -> Matrix {
          Vector y1, y2;
          stages(k, y1, y2);
          const Matrix J1 = problem.jacobian(t + c1 * h, y1);
          const Matrix J2 = problem.jacobian(t + c2 * h, y2);
          Matrix J = Matrix::Identity(2 * d, 2 * d);
          J.block(0, 0, d, d) -= h * a11 * J1;
          J.block(0, d, d, d) -= h * a12 * J1;
          J.block(d, 0, d, d) -= h * a21 * J2;
          J.block(d, d, d, d) -= h * a22 * J2;
          return J;
        };
      }
      const Vector f0 = f(t, u);
      Vector k0(2 * d);
      k0 << f0, f0;
      const Vector k = newton_solve(residual, jac, k0, spec_.newton).x;
      return u + (0.5 * h) * (k.head(d) + k.tail(d));
    }

    case PropagatorKind::ChebyshevGauss:
      break;
  }
  throw DomainError("step: not a one-step kind");
}

Vector Propagator::collocate(const IvpProblem& problem, double t, const Vector& u,
                             double dt) const {
  const CollocationOperator& op = *op_;
  const CgPointSet points = cg_points(op.M, t, t + dt);
  CollocationSolver solver = spec_.cg_solver;
  if (solver == CollocationSolver::Auto && problem.linear) solver = CollocationSolver::Direct;

  switch (solver) {
    case CollocationSolver::Direct:
      if (!problem.linear) throw DomainError("collocation: direct solve needs a linear problem");
      return solve_linear(op, problem.linear->A, problem.linear->g, points, u).u_end;
    case CollocationSolver::Newton:
      return solve_newton(op, problem.f, problem.jacobian, points, u, spec_.newton).u_end;
    case CollocationSolver::Picard:
      return solve_nonlinear(op, problem.f, points, u, spec_.picard).u_end;
    case CollocationSolver::Auto: {
      PicardConfig cfg = spec_.picard;
      cfg.on_failure = FailurePolicy::ReturnBest;
      CollocationSolution best;
      try {
        best = solve_nonlinear(op, problem.f, points, u, cfg);
        if (best.converged) return best.u_end;
      } catch (const NonConvergence&) {
      }
      try {
        return solve_newton(op, problem.f, problem.jacobian, points, u, spec_.newton).u_end;
      } catch (const std::exception&) {
        if (spec_.picard.on_failure == FailurePolicy::ReturnBest && best.u_end.size() > 0 &&
            best.u_end.allFinite()) {
          return best.u_end;
        }
        throw;
      }
    }
  }
  throw DomainError("collocation: unknown solver");
}

Vector Propagator::advance(const IvpProblem& problem, double t, const Vector& u, double dt) const {
  if (!(dt > 0.0)) throw DomainError("advance: dt must be > 0");
  if (u.size() != problem.dim) throw DomainError("advance: state has wrong dimension");
  if (spec_.kind == PropagatorKind::ChebyshevGauss) return collocate(problem, t, u, dt);

  const int J = spec_.substeps;
  const double h = dt / J;
  Vector state = u;
  for (int j = 0; j < J; ++j) state = step(problem, t + j * h, state, h);
  return state;
}

Vector advance(const PropagatorSpec& spec, const IvpProblem& problem, double t, const Vector& u,
               double dt) {
  return Propagator(spec).advance(problem, t, u, dt);
}

double stability(const PropagatorSpec& spec, double z) { return Propagator(spec).stability(z); }

}  // namespace prcg
