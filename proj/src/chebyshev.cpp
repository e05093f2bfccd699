#include "prcg/chebyshev.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "prcg/errors.hpp"

namespace prcg {

CgPointSet cg_points(int M, double a, double b) {
  if (M < 0) throw DomainError("cg_points: M must be >= 0, got " + std::to_string(M));
  if (!(b > a)) throw DomainError("cg_points: require b > a");

  CgPointSet pts;
  pts.M = M;
  pts.a = a;
  pts.b = b;
  pts.tau.resize(M + 1);
  pts.t.resize(M + 1);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (int m = 0; m <= M; ++m) {
    pts.tau[m] = -std::cos((2.0 * m + 1.0) * std::numbers::pi / (2.0 * M + 2.0));
  }
  // Exact antisymmetry about zero; the cosine loses it in the last bit.
  for (int m = 0; m < (M + 1) / 2; ++m) {
    pts.tau[M - m] = -pts.tau[m];
  }
  if (M % 2 == 0) pts.tau[M / 2] = 0.0;
  for (int m = 0; m <= M; ++m) pts.t[m] = half * pts.tau[m] + mid;
  return pts;
}

double chebyshev_eval(int l, double tau) {
  if (l < 0) throw DomainError("chebyshev_eval: degree must be >= 0");
  if (!(std::abs(tau) <= 1.0 + 1e-12)) {
    throw DomainError("chebyshev_eval: |tau| > 1 (tau = " + std::to_string(tau) + ")");
  }
  if (l == 0) return 1.0;
  double prev = 1.0;
  double cur = tau;
  for (int k = 1; k < l; ++k) {
    const double next = 2.0 * tau * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double chebyshev_series(const Vector& coeffs, double tau) {
  double b1 = 0.0;
  double b2 = 0.0;
  for (Eigen::Index k = coeffs.size() - 1; k >= 1; --k) {
    const double b0 = coeffs[k] + 2.0 * tau * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  const double c0 = coeffs.size() > 0 ? coeffs[0] : 0.0;
  return c0 + tau * b1 - b2;
}

CollocationOperator build_operator(int M) {
  if (M < 0) throw DomainError("build_operator: M must be >= 0, got " + std::to_string(M));

  CollocationOperator op;
  op.M = M;
  op.tau = cg_points(M, -1.0, 1.0).tau;
  const int n = M + 1;  // nodes
  const int p = M + 2;  // modes

  // Rows of T1 via the recurrence, one node at a time.
  op.T1.resize(n, p);
  for (int m = 0; m < n; ++m) {
    const double x = op.tau[m];
    op.T1(m, 0) = 1.0;
    if (p > 1) op.T1(m, 1) = x;
    for (int l = 2; l < p; ++l) op.T1(m, l) = 2.0 * x * op.T1(m, l - 1) - op.T1(m, l - 2);
  }
  op.T2 = op.T1.leftCols(n).transpose();

  op.V = Vector::Constant(n, 2.0 / n);
  op.V[0] = 1.0 / n;

  op.R.resize(p);
  op.R[0] = 1.0;
  for (int j = 1; j < p; ++j) op.R[j] = 1.0 / j;

  // Row j >= 1 encodes u_hat_j = (dT / 4j) (c_{j-1} f_hat_{j-1} - f_hat_{j+1}),
  // with c_0 = 2 and f_hat_{j} = 0 beyond degree M. Row 0 enforces u(a) = u_a.
  op.S = Matrix::Zero(p, n);
  for (int j = 1; j < p; ++j) {
    op.S(j, j - 1) = (j == 1) ? 2.0 : 1.0;
    if (j + 1 < n) op.S(j, j + 1) = -1.0;
  }
  op.S(0, 0) = 2.0;
  if (n > 1) op.S(0, 1) = -0.5;
  for (int m = 2; m < n; ++m) {
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    op.S(0, m) = sign * (1.0 / (m + 1) - 1.0 / (m - 1));
  }

  op.C_alpha = 0.25 * op.R.asDiagonal() * op.S * op.V.asDiagonal() * op.T2;
  op.T1C = op.T1 * op.C_alpha;
  return op;
}

}  // namespace prcg
