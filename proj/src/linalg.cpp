#include "prcg/linalg.hpp"

#include <cmath>
#include <limits>

#include "prcg/errors.hpp"

namespace prcg {

double max_norm(const Vector& v) {
  return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>();
}

Vector solve_dense(const Matrix& a, const Vector& b) {
  Eigen::PartialPivLU<Matrix> lu(a);
  const double rcond = lu.rcond();
  if (!(rcond > std::numeric_limits<double>::epsilon())) {
    throw SingularSystem("dense solve: matrix is singular to working precision (rcond = " +
                         std::to_string(rcond) + ")");
  }
  Vector x = lu.solve(b);
  if (!x.allFinite()) throw SingularSystem("dense solve: non-finite solution");
  return x;
}

}  // namespace prcg
