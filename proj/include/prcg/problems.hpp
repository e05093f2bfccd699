#pragma once

#include <memory>
#include <string>
#include <vector>

#include "prcg/problem.hpp"

namespace prcg {

// ---------------------------------------------------------------------------
// SPD linear systems  u' + A u = g
// ---------------------------------------------------------------------------

struct SpdLinearProblem {
  std::string name;
  Matrix A;
  Forcing g;  // empty: g = 0
  Vector u0;
  double T = 1.0;
};

struct SpdParams {
  // diag-spectrum: either explicit eigenvalues, or `size` log-spaced values
  // in [lambda_min, lambda_max].
  std::vector<double> eigenvalues;
  int size = 0;
  double lambda_min = 1.0;
  double lambda_max = 1.0;
  // laplacian-1d: interior points on the unit interval.
  int points = 0;
  double T = 1.0;
  std::vector<double> u0;  // empty: all ones
};

/// Named SPD instances: "diag-spectrum" and "laplacian-1d". Throws
/// DomainError for unknown names or invalid parameters.
SpdLinearProblem spd_catalog(const std::string& name, const SpdParams& params);

/// Exact solution of the unforced system through the eigendecomposition of A.
/// Throws DomainError if the problem has a forcing term.
Forcing spd_reference(const SpdLinearProblem& problem);

IvpProblem to_ivp(const SpdLinearProblem& problem);

// ---------------------------------------------------------------------------
// Two-body problem in low Earth orbit
// ---------------------------------------------------------------------------

struct KeplerProblem {
  double mu = 3.986e5;  // km^3/s^2
  Eigen::Vector3d r0{464.856, 6667.880, 574.231};        // km
  Eigen::Vector3d v0{-2.8381188, -0.7871898, 7.0830275};  // km/s
  double T = 50.0;                                        // s
};

/// Keplerian state [r; v] at time t from Lagrange F and G coefficients,
/// with the universal-variable Kepler equation solved by safeguarded Newton.
/// Throws NonConvergence if the anomaly solve fails within 60 iterations.
Vector kepler_reference(const KeplerProblem& problem, double t);

Vector kepler_rhs(double mu, const Vector& state);
Matrix kepler_jacobian(double mu, const Vector& state);

IvpProblem to_ivp(const KeplerProblem& problem);

// ---------------------------------------------------------------------------
// Periodic viscous Burgers equation, 4th-order compact differences
// ---------------------------------------------------------------------------

/// Semidiscrete system u' = -A1 u - u .* (A2 u) on x_j = j dx, dx = 2/Nx.
/// A1 = -(nu/dx^2) P1^{-1} Q1 and A2 = (1/(2dx)) P2^{-1} Q2 with circulant
/// P and Q; each P is factored once.
class BurgersProblem {
 public:
  BurgersProblem(double nu, int nx, double T = 4.0, double alpha = 2.0);

  double nu() const { return nu_; }
  double alpha() const { return alpha_; }
  int nx() const { return nx_; }
  double dx() const { return dx_; }
  double T() const { return T_; }
  const std::vector<double>& x() const { return x_; }

  /// Solve-then-multiply application of the difference operators.
  Vector apply_A1(const Vector& u) const;
  Vector apply_A2(const Vector& u) const;

  /// Dense operator matrices, assembled from the same factorizations.
  const Matrix& A1() const { return A1_; }
  const Matrix& A2() const { return A2_; }

  Vector rhs(const Vector& u) const;
  Matrix jacobian(const Vector& u) const;

  /// Closed-form solution sampled on the grid.
  Vector exact_on_grid(double t) const;

 private:
  double nu_, alpha_, T_, dx_;
  int nx_;
  std::vector<double> x_;
  Matrix Q1_, Q2_;
  Eigen::PartialPivLU<Matrix> P1_, P2_;
  Matrix A1_, A2_;
};

/// Closed-form Burgers solution at (x, t).
double burgers_exact(double nu, double alpha, double x, double t);
double burgers_exact(const BurgersProblem& problem, double x, double t);

/// Throws DomainError for Nx < 4 or nu <= 0.
std::shared_ptr<const BurgersProblem> build_burgers(double nu, int nx, double T = 4.0);

IvpProblem to_ivp(std::shared_ptr<const BurgersProblem> problem);

// ---------------------------------------------------------------------------

/// Uniform initial-value problem u' = 0 (useful for harness checks).
IvpProblem zero_rhs_problem(const Vector& u0, double T);

}  // namespace prcg
