#pragma once

#include <Eigen/Dense>

namespace prcg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Max-norm; zero for empty vectors.
double max_norm(const Vector& v);

// Solves A x = b with partial-pivot LU. Throws SingularSystem when a pivot is
// zero or the reciprocal condition estimate is below machine precision.
Vector solve_dense(const Matrix& a, const Vector& b);

}  // namespace prcg
