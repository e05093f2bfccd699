#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace prcg {

// Invalid argument or evaluation outside a function's domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An iterative solve (Picard, Newton, search) stopped without meeting its
// tolerance. `residual` is the last measured update or condition value.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(const std::string& what, double residual, int iterations)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}
  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

// Dense factorization failed; for rational stability functions this marks a pole.
class SingularSystem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A right-hand side produced a non-finite value, or a sub-solve failed at a
// located position (collocation node or parareal subinterval).
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, std::ptrdiff_t index)
      : std::runtime_error(what), index_(index) {}
  std::ptrdiff_t index() const noexcept { return index_; }

 private:
  std::ptrdiff_t index_;
};

}  // namespace prcg
