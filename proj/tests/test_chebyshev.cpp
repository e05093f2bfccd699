#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "prcg/chebyshev.hpp"
#include "prcg/errors.hpp"

using namespace prcg;

TEST_CASE("cg_points: closed forms for M = 0 and M = 1") {
  const CgPointSet p0 = cg_points(0, -1.0, 1.0);
  REQUIRE(p0.tau.size() == 1);
  CHECK(p0.tau[0] == doctest::Approx(0.0));
  CHECK(p0.t[0] == doctest::Approx(0.0));

  const CgPointSet p1 = cg_points(1, 0.0, 2.0);
  const double h = std::sqrt(2.0) / 2.0;
  CHECK(p1.tau[0] == doctest::Approx(-h).epsilon(1e-15));
  CHECK(p1.tau[1] == doctest::Approx(h).epsilon(1e-15));
  CHECK(p1.t[0] == doctest::Approx(1.0 - h).epsilon(1e-15));
  CHECK(p1.t[1] == doctest::Approx(1.0 + h).epsilon(1e-15));
}

TEST_CASE("cg_points: shifted nodes are zeros of the shifted T_{M+1}") {
  const CgPointSet p = cg_points(4, 0.0, 1.0);
  for (double t : p.t) {
    const double tau = 2.0 * (t - p.a) / (p.b - p.a) - 1.0;
    CHECK(std::abs(oracle::cheb_trig(5, tau)) < 1e-12);
  }
}

TEST_CASE("cg_points: ordering, range and symmetry") {
  for (int M = 0; M <= 40; ++M) {
    const CgPointSet p = cg_points(M, 2.0, 5.5);
    for (int m = 0; m <= M; ++m) {
      CHECK(p.tau[m] > -1.0);
      CHECK(p.tau[m] < 1.0);
      CHECK(p.t[m] > 2.0);
      CHECK(p.t[m] < 5.5);
      CHECK(std::abs(p.tau[m] + p.tau[M - m]) <= 1e-15);
      if (m > 0) CHECK(p.tau[m] > p.tau[m - 1]);
    }
  }
}

TEST_CASE("cg_points: rejects bad input") {
  CHECK_THROWS_AS(cg_points(-1, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(cg_points(3, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(cg_points(3, 2.0, 1.0), DomainError);
}

TEST_CASE("chebyshev_eval: basic values and trig oracle") {
  CHECK(chebyshev_eval(0, 0.37) == 1.0);
  CHECK(chebyshev_eval(0, -1.0) == 1.0);
  CHECK(chebyshev_eval(1, 0.3) == 0.3);
  CHECK(chebyshev_eval(5, 0.7) == doctest::Approx(std::cos(5.0 * std::acos(0.7))).epsilon(1e-14));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> x(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double tau = x(rng);
    const int l = static_cast<int>(i % 40);
    const double v = chebyshev_eval(l, tau);
    CHECK(std::abs(v - oracle::cheb_trig(l, tau)) < 1e-12);
    CHECK(std::abs(v) <= 1.0 + 1e-14);
  }
}

TEST_CASE("chebyshev_eval: T_l(1) = 1") {
  for (int l = 0; l <= 50; ++l) CHECK(std::abs(chebyshev_eval(l, 1.0) - 1.0) <= 1e-14);
}

TEST_CASE("chebyshev_eval: domain") {
  CHECK_NOTHROW(chebyshev_eval(3, 1.0 + 1e-13));
  CHECK_THROWS_AS(chebyshev_eval(3, 1.0 + 1e-10), DomainError);
  CHECK_THROWS_AS(chebyshev_eval(-1, 0.0), DomainError);
}

TEST_CASE("build_operator: M = 0 by hand") {
  const CollocationOperator op = build_operator(0);
  REQUIRE(op.T1.rows() == 1);
  REQUIRE(op.T1.cols() == 2);
  CHECK(op.T1(0, 0) == 1.0);
  CHECK(op.T1(0, 1) == doctest::Approx(0.0));
  REQUIRE(op.V.size() == 1);
  CHECK(op.V[0] == 1.0);
  CHECK(op.C_alpha.rows() == 2);
  CHECK(op.C_alpha.cols() == 1);
  // S = [2; 2], R = diag(1, 1), V = T2 = [1]  =>  C_alpha = [1/2; 1/2].
  CHECK(op.C_alpha(0, 0) == doctest::Approx(0.5));
  CHECK(op.C_alpha(1, 0) == doctest::Approx(0.5));
}

TEST_CASE("build_operator: diagonal and first-row structure") {
  const CollocationOperator op2 = build_operator(2);
  CHECK(op2.S(0, 0) == 2.0);
  CHECK(op2.S(0, 1) == -0.5);
  CHECK(op2.S(0, 2) == doctest::Approx(-2.0 / 3.0).epsilon(1e-15));

  for (int M : {0, 1, 3, 9}) {
    const CollocationOperator op = build_operator(M);
    CHECK(op.V[0] == doctest::Approx(1.0 / (M + 1)));
    for (int j = 1; j <= M; ++j) CHECK(op.V[j] == doctest::Approx(2.0 / (M + 1)));
    CHECK(op.R[0] == 1.0);
    for (int j = 1; j <= M + 1; ++j) CHECK(op.R[j] == doctest::Approx(1.0 / j));
    for (int m = 0; m <= M; ++m) CHECK(op.T1(m, 0) == 1.0);
  }
}

TEST_CASE("build_operator: first row of S equals the alternating sum that enforces u(a) = u_a") {
  for (int M : {1, 2, 5, 12}) {
    const CollocationOperator op = build_operator(M);
    for (int col = 0; col <= M; ++col) {
      double expect = 0.0;
      for (int k = 1; k <= M + 1; ++k) {
        expect += ((k % 2 == 1) ? 1.0 : -1.0) / k * op.S(k, col);
      }
      CHECK(op.S(0, col) == doctest::Approx(expect).epsilon(1e-14));
    }
  }
}

TEST_CASE("build_operator: C_alpha is assembled as (1/4) R S V T2") {
  const CollocationOperator op = build_operator(7);
  const Matrix expect = 0.25 * Matrix(op.R.asDiagonal()) * op.S * Matrix(op.V.asDiagonal()) * op.T2;
  CHECK((op.C_alpha - expect).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("build_operator: discrete transform roundtrip at the nodes") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  for (int M : {0, 1, 6, 17, 33}) {
    const CollocationOperator op = build_operator(M);
    Vector f(M + 1);
    for (auto& v : f) v = nd(rng);
    const Vector coeffs = op.V.asDiagonal() * (op.T2 * f);
    const Vector back = op.T1.leftCols(M + 1) * coeffs;
    CHECK((back - f).lpNorm<Eigen::Infinity>() < 1e-12);
  }
}

TEST_CASE("build_operator: finite entries up to M = 64") {
  for (int M : {32, 48, 64}) {
    const CollocationOperator op = build_operator(M);
    CHECK(op.T1.allFinite());
    CHECK(op.C_alpha.allFinite());
    CHECK(op.T1C.allFinite());
  }
  CHECK_THROWS_AS(build_operator(-1), DomainError);
}

TEST_CASE("chebyshev_series: Clenshaw agrees with termwise sums") {
  Vector c(6);
  c << 0.3, -1.2, 0.5, 2.0, -0.7, 0.1;
  for (double x : {-1.0, -0.4, 0.0, 0.9, 1.0}) {
    double direct = 0.0;
    for (int l = 0; l < 6; ++l) direct += c[l] * chebyshev_eval(l, x);
    CHECK(chebyshev_series(c, x) == doctest::Approx(direct).epsilon(1e-14));
  }
}
