#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "prcg/chebyshev.hpp"
#include "prcg/collocation.hpp"
#include "prcg/errors.hpp"

using namespace prcg;

namespace {

Rhs decay(double lambda) {
  return [lambda](double, const Vector& u) -> Vector { return -lambda * u; };
}

Vector scalar(double v) { return Vector::Constant(1, v); }

PicardConfig tight(double tol = 1e-13) {
  PicardConfig c;
  c.tol = tol;
  c.max_iter = 500;
  return c;
}

}  // namespace

TEST_CASE("picard_sweep: zero right-hand side keeps constants") {
  const CollocationOperator op = build_operator(5);
  const CgPointSet pts = cg_points(5, 0.0, 0.3);
  Vector ua(2);
  ua << 1.5, -2.0;
  const Rhs zero = [](double, const Vector& u) -> Vector { return Vector::Zero(u.size()); };
  const Matrix prev = Matrix::Random(6, 2);
  const SweepResult s = picard_sweep(op, zero, pts, ua, prev);
  CHECK(s.u_hat.row(0).transpose() == ua);
  CHECK(s.u_hat.bottomRows(6).lpNorm<Eigen::Infinity>() == 0.0);
  for (int m = 0; m < 6; ++m) CHECK((s.u_nodes.row(m).transpose() - ua).lpNorm<Eigen::Infinity>() < 1e-15);
}

TEST_CASE("picard_sweep: constant forcing integrates exactly") {
  const CollocationOperator op = build_operator(4);
  const CgPointSet pts = cg_points(4, 0.0, 1.0);
  const Rhs one = [](double, const Vector&) -> Vector { return Vector::Ones(1); };
  const SweepResult s = picard_sweep(op, one, pts, scalar(0.0), Matrix::Constant(5, 1, 42.0));
  for (int m = 0; m <= 4; ++m) CHECK(std::abs(s.u_nodes(m, 0) - pts.t[m]) < 1e-12);
}

TEST_CASE("picard_sweep: non-finite f reports the node") {
  const CollocationOperator op = build_operator(3);
  const CgPointSet pts = cg_points(3, 0.0, 1.0);
  const Rhs bad = [&](double t, const Vector& u) -> Vector {
    return (t == pts.t[2]) ? Vector::Constant(1, NAN) : Vector(u);
  };
  try {
    picard_sweep(op, bad, pts, scalar(1.0), Matrix::Ones(4, 1));
    FAIL("expected SolverError");
  } catch (const SolverError& e) {
    CHECK(e.index() == 2);
  }
}

TEST_CASE("solve_nonlinear: M = 0 fixed point is (2 - z)/(2 + z) at z = 1") {
  const CollocationOperator op = build_operator(0);
  const CgPointSet pts = cg_points(0, 0.0, 1.0);
  const CollocationSolution sol = solve_nonlinear(op, decay(1.0), pts, scalar(1.0), tight());
  CHECK(sol.converged);
  CHECK(std::abs(sol.u_end[0] - 1.0 / 3.0) < 1e-12);
}

TEST_CASE("solve_nonlinear: exponential decay at M = 16") {
  const CollocationOperator op = build_operator(16);
  const CgPointSet pts = cg_points(16, 0.0, 0.5);
  const CollocationSolution sol = solve_nonlinear(op, decay(1.0), pts, scalar(1.0), tight());
  CHECK(sol.converged);
  CHECK(std::abs(sol.u_end[0] - std::exp(-0.5)) < 1e-12);
}

TEST_CASE("solve_nonlinear: Picard diverges for z >= 4 at M = 0") {
  const CollocationOperator op = build_operator(0);
  for (double z : {4.5, 8.0}) {
    const CgPointSet pts = cg_points(0, 0.0, 1.0);
    CHECK_THROWS_AS(solve_nonlinear(op, decay(z), pts, scalar(1.0), tight()), NonConvergence);
    PicardConfig lenient = tight();
    lenient.on_failure = FailurePolicy::ReturnBest;
    const CollocationSolution sol = solve_nonlinear(op, decay(z), pts, scalar(1.0), lenient);
    CHECK_FALSE(sol.converged);
  }
}

TEST_CASE("solve_nonlinear: observed linear convergence below the Lipschitz bound") {
  const CollocationOperator op = build_operator(8);
  const CgPointSet pts = cg_points(8, 0.0, 0.2);  // lambda (b - a) = 0.2 < 1/4
  const double lambda = 1.0;
  const Rhs f = decay(lambda);
  const CollocationSolution exact = solve_linear(op, Matrix::Constant(1, 1, lambda), {}, pts, scalar(1.0));
  Matrix u = Matrix::Constant(9, 1, 1.0);
  double prev_err = (u - exact.u_nodes).lpNorm<Eigen::Infinity>();
  for (int p = 0; p < 8; ++p) {
    u = picard_sweep(op, f, pts, scalar(1.0), u).u_nodes;
    const double err = (u - exact.u_nodes).lpNorm<Eigen::Infinity>();
    if (err < 1e-15) break;
    CHECK(err / prev_err < 1.0);
    prev_err = err;
  }
}

TEST_CASE("solve_nonlinear: provided initial guess") {
  const CollocationOperator op = build_operator(6);
  const CgPointSet pts = cg_points(6, 0.0, 0.3);
  PicardConfig cfg = tight();
  cfg.initial_guess = InitialGuess::Provided;
  const Matrix guess = Matrix::Constant(7, 1, 0.9);
  const CollocationSolution a = solve_nonlinear(op, decay(1.0), pts, scalar(1.0), cfg, &guess);
  const CollocationSolution b = solve_nonlinear(op, decay(1.0), pts, scalar(1.0), tight());
  CHECK(std::abs(a.u_end[0] - b.u_end[0]) < 1e-13);
}

TEST_CASE("solve_linear: closed-form endpoints") {
  const Matrix one = Matrix::Constant(1, 1, 1.0);
  {
    const CollocationSolution s = solve_linear(build_operator(0), one, {}, cg_points(0, 0.0, 1.0), scalar(1.0));
    CHECK(s.u_end[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  }
  {
    const CollocationSolution s = solve_linear(build_operator(1), one, {}, cg_points(1, 0.0, 1.0), scalar(1.0));
    CHECK(s.u_end[0] == doctest::Approx(9.0 / 25.0).epsilon(1e-14));
  }
  {
    Matrix A = Matrix::Zero(2, 2);
    A(0, 0) = 1.0;
    A(1, 1) = 2.0;
    const CollocationSolution s =
        solve_linear(build_operator(20), A, {}, cg_points(20, 0.0, 0.7), Vector::Ones(2));
    CHECK(std::abs(s.u_end[0] - std::exp(-0.7)) < 1e-10);
    CHECK(std::abs(s.u_end[1] - std::exp(-1.4)) < 1e-10);
  }
}

TEST_CASE("solve_linear: forcing term") {
  // u' + u = 1, u(0) = 0  =>  u = 1 - e^{-t}.
  const Forcing g = [](double) -> Vector { return Vector::Ones(1); };
  const CollocationSolution s = solve_linear(build_operator(16), Matrix::Constant(1, 1, 1.0), g,
                                             cg_points(16, 0.0, 1.0), scalar(0.0));
  CHECK(std::abs(s.u_end[0] - (1.0 - std::exp(-1.0))) < 1e-12);
}

TEST_CASE("solution invariants: u_end is the coefficient sum and nodes are T1 u_hat") {
  const CollocationOperator op = build_operator(7);
  const CollocationSolution s =
      solve_nonlinear(op, decay(0.8), cg_points(7, 1.0, 1.25), scalar(2.0), tight());
  CHECK((s.u_end - s.u_hat.colwise().sum().transpose()).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK((s.u_nodes - op.T1 * s.u_hat).lpNorm<Eigen::Infinity>() < 1e-14);
}

TEST_CASE("endpoint_value: trivial and Clenshaw") {
  Matrix c = Matrix::Zero(4, 1);
  c(0, 0) = 2.5;
  CHECK(endpoint_value(c)[0] == 2.5);
  c.setZero();
  c(1, 0) = 1.0;
  CHECK(endpoint_value(c)[0] == 1.0);

  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  Matrix r(7, 1);
  for (int i = 0; i < 7; ++i) r(i, 0) = nd(rng);
  CHECK(std::abs(endpoint_value(r)[0] - chebyshev_series(r.col(0), 1.0)) < 1e-14);
}

TEST_CASE("polynomial exactness for f = p(t) with deg p <= M") {
  for (int M : {2, 5, 9}) {
    const CollocationOperator op = build_operator(M);
    const CgPointSet pts = cg_points(M, 0.5, 1.7);
    // p(t) = sum_{j<=M} (j+1) t^j / 3, antiderivative P(t) = sum (t^{j+1}) / 3.
    const Rhs p = [M](double t, const Vector&) -> Vector {
      double s = 0.0;
      for (int j = 0; j <= M; ++j) s += (j + 1) * std::pow(t, j) / 3.0;
      return Vector::Constant(1, s);
    };
    const auto P = [M](double t) {
      double s = 0.0;
      for (int j = 0; j <= M; ++j) s += std::pow(t, j + 1) / 3.0;
      return s;
    };
    const double ua = 0.25;
    const CollocationSolution sol = solve_nonlinear(op, p, pts, scalar(ua), tight());
    for (int m = 0; m <= M; ++m) CHECK(std::abs(sol.u_nodes(m, 0) - (ua + P(pts.t[m]) - P(0.5))) < 1e-11);
    CHECK(std::abs(sol.u_end[0] - (ua + P(1.7) - P(0.5))) < 1e-11);
  }
}

TEST_CASE("spectral accuracy: error falls by > 5 per M -> M + 2 until the rounding floor") {
  double prev = 1.0;
  for (int M = 0; M <= 14; M += 2) {
    const CollocationSolution s = solve_linear(build_operator(M), Matrix::Constant(1, 1, 1.0), {},
                                               cg_points(M, 0.0, 1.0), scalar(1.0));
    const double err = std::abs(s.u_end[0] - std::exp(-1.0));
    if (prev > 1e-14 && M > 0) CHECK(err < prev / 5.0);
    prev = err;
  }
}

TEST_CASE("solve_linear agrees with the direct derivative-form collocation oracle") {
  for (int M : {0, 1, 3, 8, 15}) {
    for (double z : {0.3, 2.0, 9.0}) {
      const CollocationSolution s = solve_linear(build_operator(M), Matrix::Constant(1, 1, z), {},
                                                 cg_points(M, 0.0, 1.0), scalar(1.0));
      CHECK(s.u_end[0] == doctest::Approx(oracle::collocation_amplification(z, M)).epsilon(1e-11));
    }
  }
}

TEST_CASE("solve_linear and solve_nonlinear agree in the Picard regime") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> zd(0.01, 0.99), ud(-2.0, 2.0);
  std::uniform_int_distribution<int> md(0, 12);
  for (int i = 0; i < 20; ++i) {
    const double z = zd(rng), ua = ud(rng);
    const int M = md(rng);
    const CollocationOperator op = build_operator(M);
    const CgPointSet pts = cg_points(M, 0.0, 1.0);
    const CollocationSolution a = solve_linear(op, Matrix::Constant(1, 1, z), {}, pts, scalar(ua));
    const CollocationSolution b = solve_nonlinear(op, decay(z), pts, scalar(ua), tight(1e-14));
    CHECK(std::abs(a.u_end[0] - b.u_end[0]) < 1e-10);
  }
}

TEST_CASE("solve_newton matches Picard on a nonlinear problem and reaches beyond it") {
  const Rhs f = [](double, const Vector& u) -> Vector { return -u.array().square().matrix(); };
  const JacobianFn J = [](double, const Vector& u) -> Matrix { return Matrix((-2.0 * u).asDiagonal()); };
  const CollocationOperator op = build_operator(10);
  NewtonConfig nc;
  nc.jacobian = JacobianMode::Analytic;
  {
    const CgPointSet pts = cg_points(10, 0.0, 0.2);
    const CollocationSolution p = solve_nonlinear(op, f, pts, scalar(1.0), tight());
    const CollocationSolution n = solve_newton(op, f, J, pts, scalar(1.0), nc);
    CHECK(std::abs(p.u_end[0] - n.u_end[0]) < 1e-12);
    CHECK(std::abs(n.u_end[0] - 1.0 / 1.2) < 1e-12);
  }
  {
    // u' = -u^2, u(0) = 1 has u = 1/(1 + t); Picard cannot contract over length 6.
    const CgPointSet pts = cg_points(10, 0.0, 6.0);
    const CollocationSolution n = solve_newton(op, f, J, pts, scalar(1.0), nc);
    CHECK(std::abs(n.u_end[0] - 1.0 / 7.0) < 1e-3);
    NewtonConfig fd;
    const CollocationSolution m = solve_newton(op, f, {}, pts, scalar(1.0), fd);
    CHECK(std::abs(m.u_end[0] - n.u_end[0]) < 1e-10);
  }
}
