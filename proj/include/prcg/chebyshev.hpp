#pragma once

#include <vector>

#include "prcg/linalg.hpp"

namespace prcg {

/// Chebyshev-Gauss nodes on a subinterval.
///
/// `tau` holds the standard nodes tau_m = -cos((2m+1)pi / (2M+2)) in (-1, 1),
/// sorted ascending; `t` holds their affine images in (a, b). There are M+1 of
/// each, and they are the zeros of the shifted Chebyshev polynomial of degree M+1.
struct CgPointSet {
  int M = 0;
  double a = -1.0;
  double b = 1.0;
  std::vector<double> tau;
  std::vector<double> t;

  double length() const { return b - a; }
};

/// Builds the M+1 Chebyshev-Gauss points on [a, b]. Throws DomainError when
/// M < 0 or b <= a.
CgPointSet cg_points(int M, double a, double b);

/// T_l(tau) by the three-term recurrence. Throws DomainError when l < 0 or
/// |tau| > 1 + 1e-12.
double chebyshev_eval(int l, double tau);

/// Evaluates sum_l coeffs[l] T_l(tau) with the Clenshaw recurrence.
double chebyshev_series(const Vector& coeffs, double tau);

/// Interval-independent coefficient matrices of the collocation scheme for
/// M+1 Chebyshev-Gauss points.
///
/// With node values f of the right-hand side, the Chebyshev coefficients of
/// the collocation polynomial on an interval of length dT are
///
///     u_hat = U0 + dT * C_alpha * f,    U0 = [u_a, 0, ..., 0],
///
/// and its node values are T1 * u_hat. The interval length enters only as the
/// scalar multiplier dT, so one operator serves every subinterval of equal
/// length.
struct CollocationOperator {
  int M = 0;
  std::vector<double> tau;  ///< standard CG nodes, size M+1
  Matrix T1;                ///< (M+1)x(M+2), T1(m, l) = T_l(tau_m)
  Matrix T2;                ///< (M+1)x(M+1), T2(l, m) = T_l(tau_m)
  Vector V;                 ///< diagonal of the forward-transform weights
  Vector R;                 ///< diagonal [1, 1, 1/2, ..., 1/(M+1)]
  Matrix S;                 ///< (M+2)x(M+1) recurrence couplings
  Matrix C_alpha;           ///< (1/4) R S V T2
  Matrix T1C;               ///< T1 * C_alpha, the node-to-node integration map

  int nodes() const { return M + 1; }
  int modes() const { return M + 2; }
};

/// Assembles all matrices for M+1 nodes. Throws DomainError when M < 0.
CollocationOperator build_operator(int M);

}  // namespace prcg
