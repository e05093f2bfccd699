#pragma once

#include <memory>
#include <string>

#include "prcg/collocation.hpp"
#include "prcg/newton.hpp"
#include "prcg/problem.hpp"

namespace prcg {

enum class PropagatorKind {
  BackwardEuler,
  ForwardEuler,
  Trapezoidal,
  TrBdf2,
  Gauss4,
  Erk4,
  ChebyshevGauss,
};

// How the collocation propagator solves its discrete equations. Auto takes the
// direct linear solve when the problem is linear, otherwise Picard with a
// Newton fallback if Picard does not converge.
enum class CollocationSolver { Auto, Picard, Newton, Direct };

struct PropagatorSpec {
  PropagatorKind kind = PropagatorKind::BackwardEuler;
  int substeps = 1;    // J, ignored by ChebyshevGauss
  int cg_points = 0;   // M, ChebyshevGauss only
  NewtonConfig newton;
  PicardConfig picard;
  CollocationSolver cg_solver = CollocationSolver::Auto;

  static PropagatorSpec one_step(PropagatorKind kind, int substeps = 1) {
    PropagatorSpec s;
    s.kind = kind;
    s.substeps = substeps;
    return s;
  }
  static PropagatorSpec chebyshev_gauss(int M) {
    PropagatorSpec s;
    s.kind = PropagatorKind::ChebyshevGauss;
    s.cg_points = M;
    return s;
  }
};

void validate(const PropagatorSpec& spec);

// "BackwardEuler(J=2)", "ChebyshevGauss(M=6)", ...
std::string describe(const PropagatorSpec& spec);
std::string kind_name(PropagatorKind kind);

// TR/BDF2 splitting parameter.
inline constexpr double kTrBdf2Gamma = 2.0 - 1.41421356237309504880;

/// One-step amplification factor r(z) for u' = -lambda u with z = lambda h.
/// Not defined for ChebyshevGauss (throws DomainError).
double one_step_stability(PropagatorKind kind, double z);

/// Time integrator with a uniform advance contract, shared by the coarse and
/// fine roles of parareal. Immutable; advance() is reentrant.
class Propagator {
 public:
  explicit Propagator(PropagatorSpec spec);

  const PropagatorSpec& spec() const { return spec_; }

  /// State at t + dt: J equal substeps of a one-step method, or a single
  /// collocation solve over [t, t + dt].
  Vector advance(const IvpProblem& problem, double t, const Vector& u, double dt) const;

  /// R(z) for u' = -lambda u over one advance of length dt, z = lambda dt.
  /// One-step kinds give r(z/J)^J; ChebyshevGauss solves
  /// (I + z T1 C_alpha) x = T1 E and returns 1 - z * sum(C_alpha x).
  /// Throws SingularSystem at a pole.
  double stability(double z) const;

 private:
  Vector step(const IvpProblem& problem, double t, const Vector& u, double h) const;
  Vector collocate(const IvpProblem& problem, double t, const Vector& u, double dt) const;
  ResidualJacobianFn stage_jacobian(const IvpProblem& problem, double t, double scale) const;

  PropagatorSpec spec_;
  std::shared_ptr<const CollocationOperator> op_;
};

Vector advance(const PropagatorSpec& spec, const IvpProblem& problem, double t, const Vector& u,
               double dt);
double stability(const PropagatorSpec& spec, double z);

}  // namespace prcg
