#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "prcg/errors.hpp"
#include "prcg/problem.hpp"
#include "prcg/propagators.hpp"

namespace prcg {

enum class InitKind { CoarseSweep, Random };

struct PararealConfig {
  double T = 1.0;
  int N = 1;
  PropagatorSpec coarse = PropagatorSpec::one_step(PropagatorKind::BackwardEuler);
  PropagatorSpec fine = PropagatorSpec::chebyshev_gauss(8);
  double tol = 1e-10;
  int max_k = 50;
  InitKind init = InitKind::CoarseSweep;
  std::uint64_t seed = 0;
  int workers = 1;
  // Recompute G(T_n, u_n^k) instead of reusing last iteration's values.
  bool recompute_coarse = false;

  double dT() const { return T / N; }
};

void validate(const PararealConfig& cfg);

/// Per-iteration errors:
///   iter_error = max_n ||u_n^{k} - u_n^{k-1}||_inf
///   abs_error  = max_n ||u_n^{k} - u(T_n)||_inf   (when a reference exists)
/// `abs_error_position` restricts abs_error to the problem's position components.
struct ConvergenceRecord {
  int k = 0;
  double iter_error = 0.0;
  std::optional<double> abs_error;
  std::optional<double> abs_error_position;
};

struct PararealState {
  std::vector<Vector> u;       // u_n^k, n = 0..N
  std::vector<Vector> u_prev;  // u_n^{k-1}; empty before the first iteration
  std::vector<Vector> g_prev;  // G(T_n, u_n^k, dT), n = 0..N-1; empty if not yet known
  int k = 0;
  std::vector<ConvergenceRecord> history;
};

struct PararealResult {
  std::vector<Vector> states;
  std::vector<ConvergenceRecord> history;
  bool converged = false;
};

/// Thrown by run() when max_k iterations pass without meeting the tolerance.
/// Carries the full result for diagnosis.
class MaxIterationsExceeded : public NonConvergence {
 public:
  explicit MaxIterationsExceeded(PararealResult result);
  const PararealResult& result() const noexcept { return result_; }

 private:
  PararealResult result_;
};

/// Parareal iteration with a sequential coarse propagator G and a fine
/// propagator F evaluated concurrently over the coarse subintervals:
///
///     u_{n+1}^{k+1} = G(T_n, u_n^{k+1}) + F(T_n, u_n^k) - G(T_n, u_n^k).
///
/// Fine results land in per-subinterval slots and the correction runs in a
/// fixed order, so histories are bitwise independent of the worker count.
class PararealSolver {
 public:
  PararealSolver(PararealConfig cfg, const IvpProblem& problem);

  const PararealConfig& config() const { return cfg_; }
  double time(int n) const { return n * dT_; }

  PararealState initialize() const;
  void iterate(PararealState& state) const;
  PararealResult run() const;

  /// Serial fine trajectory at the coarse grid points (for verification).
  std::vector<Vector> serial_fine() const;
  /// Serial coarse trajectory at the coarse grid points.
  std::vector<Vector> serial_coarse() const;

 private:
  Vector coarse_step(int n, const Vector& u) const;
  std::vector<Vector> fine_sweep(const std::vector<Vector>& u) const;
  ConvergenceRecord record(int k, const std::vector<Vector>& u,
                           const std::vector<Vector>& u_prev) const;

  PararealConfig cfg_;
  const IvpProblem& problem_;
  double dT_;
  Propagator coarse_;
  Propagator fine_;
  std::vector<Vector> reference_;  // u(T_n) when available
};

PararealResult run_parareal(const PararealConfig& cfg, const IvpProblem& problem);

}  // namespace prcg
