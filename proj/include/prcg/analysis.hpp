#pragma once

#include <limits>
#include <vector>

#include "prcg/propagators.hpp"

namespace prcg {

// Contraction factors of parareal with a backward Euler coarse propagator,
// for SPD problems where each eigenvalue maps to a real z = lambda * dT >= 0.

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

/// K(z) = |R_F(z) - 1/(1+z)| / (1 - 1/(1+z)); 0 at z = 0. Returns kUnbounded
/// when the fine propagator amplifies (|R_F(z)| > 1).
double contraction(const Propagator& fine, double z);
double contraction(const PropagatorSpec& fine, double z);

struct ContractionReport {
  PropagatorSpec spec;
  double z_max = 0.0;
  std::vector<double> z_grid;    // ascending, starts at 0, ends at z_max
  std::vector<double> K_values;  // K at z_grid
  double rho = 0.0;              // refined max of K over [0, z_max]
  double z_at_rho = 0.0;
};

/// rho = max over [0, z_max] of K. Samples 2048 log-spaced points on
/// [max(1e-6 z_max, 1e-8), z_max] plus z = 0, then refines every local
/// maximum of the samples by golden-section search to 1e-8 in z.
ContractionReport rho_over_interval(const PropagatorSpec& spec, double z_max,
                                    int grid_points = 2048);

enum class MminBranch { ZeroBranch, OneBranch, SearchBranch };

struct MminResult {
  double z_max = 0.0;
  int m_min = 0;
  MminBranch branch = MminBranch::ZeroBranch;
  double condition_value = 0.0;  // |R_CG(z_max, m_min)|
  double threshold = 0.0;        // (3 + z_max) / (3 (1 + z_max))
};

const char* branch_name(MminBranch branch);

/// Smallest number of collocation points keeping the contraction at or below
/// 1/3 on [0, z_max]: 0 up to z0* = 1, 1 up to z1* = 8 + 6 sqrt(2), otherwise
/// the first M >= 2 with |R_CG(z_max, M)| <= (3 + z_max)/(3 (1 + z_max)).
/// Throws NonConvergence if no M <= max_points qualifies.
MminResult m_min(double z_max, int max_points = 512);

struct ThresholdRoots {
  double z0_star = 0.0;
  double z1_star = 0.0;
  std::vector<double> tangencies_M1;  // touch points of K(z, 1) = 1/3 without crossing
};

/// Solves K_CG(z, 0) = 1/3 and the largest root of K_CG(z, 1) = 1/3 by
/// bisection, and reports tangential contacts of K_CG(z, 1) with 1/3.
ThresholdRoots find_threshold_roots();

/// Sign changes of K(z) - level on a log grid over [z_lo, z_hi], each refined
/// by bisection to 1e-12 relative.
std::vector<double> level_crossings(const PropagatorSpec& spec, double level, double z_lo,
                                    double z_hi, int grid_points = 4096);

/// Local maxima of K(z) - level that reach the level (within `touch_tol`)
/// without crossing it.
std::vector<double> level_tangencies(const PropagatorSpec& spec, double level, double z_lo,
                                     double z_hi, double touch_tol = 1e-9,
                                     int grid_points = 4096);

}  // namespace prcg
