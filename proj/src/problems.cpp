#include "prcg/problems.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "prcg/errors.hpp"

namespace prcg {

void validate(const IvpProblem& problem) {
  if (problem.dim < 1) throw DomainError("problem '" + problem.name + "': dim must be >= 1");
  if (problem.u0.size() != problem.dim) {
    throw DomainError("problem '" + problem.name + "': u0 has wrong dimension");
  }
  if (!problem.f) throw DomainError("problem '" + problem.name + "': missing rhs");
  if (!(problem.T > 0.0)) throw DomainError("problem '" + problem.name + "': T must be > 0");
  const Vector f0 = problem.f(0.0, problem.u0);
  if (f0.size() != problem.dim || !f0.allFinite()) {
    throw DomainError("problem '" + problem.name + "': f(0, u0) is not a finite state");
  }
}

// ---------------------------------------------------------------------------
// SPD catalog

SpdLinearProblem spd_catalog(const std::string& name, const SpdParams& params) {
  SpdLinearProblem p;
  p.name = name;
  p.T = params.T;
  if (!(p.T > 0.0)) throw DomainError("spd_catalog: T must be > 0");

  if (name == "diag-spectrum") {
    std::vector<double> eig = params.eigenvalues;
    if (eig.empty()) {
      if (params.size < 1) throw DomainError("diag-spectrum: need eigenvalues or size >= 1");
      if (!(params.lambda_min > 0.0) || !(params.lambda_max >= params.lambda_min)) {
        throw DomainError("diag-spectrum: need 0 < lambda_min <= lambda_max");
      }
      eig.resize(params.size);
      const double lo = std::log(params.lambda_min);
      const double hi = std::log(params.lambda_max);
      for (int i = 0; i < params.size; ++i) {
        const double s = params.size == 1 ? 0.0 : static_cast<double>(i) / (params.size - 1);
        eig[i] = std::exp(lo + s * (hi - lo));
      }
    }
    for (double l : eig) {
      if (!(l > 0.0) || !std::isfinite(l)) throw DomainError("diag-spectrum: eigenvalues must be > 0");
    }
    p.A = Eigen::Map<const Vector>(eig.data(), static_cast<Eigen::Index>(eig.size())).asDiagonal();
  } else if (name == "laplacian-1d") {
    const int m = params.points;
    if (m < 1) throw DomainError("laplacian-1d: points must be >= 1");
    const double dx = 1.0 / (m + 1);
    p.A = Matrix::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      p.A(i, i) = 2.0 / (dx * dx);
      if (i > 0) p.A(i, i - 1) = -1.0 / (dx * dx);
      if (i + 1 < m) p.A(i, i + 1) = -1.0 / (dx * dx);
    }
  } else {
    throw DomainError("spd_catalog: unknown problem '" + name + "'");
  }

  const Eigen::Index dim = p.A.rows();
  if (params.u0.empty()) {
    p.u0 = Vector::Ones(dim);
  } else {
    if (static_cast<Eigen::Index>(params.u0.size()) != dim) {
      throw DomainError("spd_catalog: u0 has wrong dimension");
    }
    p.u0 = Eigen::Map<const Vector>(params.u0.data(), dim);
  }
  return p;
}

Forcing spd_reference(const SpdLinearProblem& problem) {
  if (problem.g) throw DomainError("spd_reference: only unforced systems have a closed form");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(problem.A);
  const Matrix V = eig.eigenvectors();
  const Vector lambda = eig.eigenvalues();
  const Vector c = V.transpose() * problem.u0;
  return [V, lambda, c](double t) -> Vector {
    return V * (c.array() * (-lambda.array() * t).exp()).matrix();
  };
}

IvpProblem to_ivp(const SpdLinearProblem& problem) {
  IvpProblem ivp;
  ivp.name = problem.name;
  ivp.dim = static_cast<int>(problem.A.rows());
  ivp.u0 = problem.u0;
  ivp.T = problem.T;
  const Matrix A = problem.A;
  const Forcing g = problem.g;
  ivp.f = [A, g](double t, const Vector& u) -> Vector {
    Vector out = -(A * u);
    if (g) out += g(t);
    return out;
  };
  ivp.jacobian = [A](double, const Vector&) -> Matrix { return -A; };
  ivp.linear = LinearForm{A, g};
  if (!g) ivp.reference = spd_reference(problem);
  return ivp;
}

// ---------------------------------------------------------------------------
// Kepler

namespace {

// Stumpff functions, with series near zero where the closed forms cancel.
double stumpff_c(double z) {
  if (std::abs(z) < 0.1) {
    double term = 0.5, sum = 0.5;
    for (int k = 1; k < 20; ++k) {
      term *= -z / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
      sum += term;
    }
    return sum;
  }
  if (z > 0.0) return (1.0 - std::cos(std::sqrt(z))) / z;
  return (std::cosh(std::sqrt(-z)) - 1.0) / (-z);
}

double stumpff_s(double z) {
  if (std::abs(z) < 0.1) {
    double term = 1.0 / 6.0, sum = term;
    for (int k = 1; k < 20; ++k) {
      term *= -z / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
      sum += term;
    }
    return sum;
  }
  if (z > 0.0) {
    const double s = std::sqrt(z);
    return (s - std::sin(s)) / (s * s * s);
  }
  const double s = std::sqrt(-z);
  return (std::sinh(s) - s) / (s * s * s);
}

}  // namespace

Vector kepler_reference(const KeplerProblem& problem, double t) {
  if (t < 0.0) throw DomainError("kepler_reference: t must be >= 0");
  const Eigen::Vector3d& r0 = problem.r0;
  const Eigen::Vector3d& v0 = problem.v0;
  Vector out(6);
  if (t == 0.0) {
    out << r0, v0;
    return out;
  }
  const double mu = problem.mu;
  const double smu = std::sqrt(mu);
  const double rn = r0.norm();
  if (!(rn > 0.0)) throw DomainError("kepler_reference: |r0| must be > 0");
  const double vr0 = r0.dot(v0) / rn;
  const double alpha = 2.0 / rn - v0.squaredNorm() / mu;

  // Universal Kepler equation F(chi) = 0; F is increasing with F'(chi) = r(chi) > 0.
  auto eval = [&](double chi, double& fval, double& fder) {
    const double z = alpha * chi * chi;
    const double C = stumpff_c(z), S = stumpff_s(z);
    fval = rn * vr0 / smu * chi * chi * C + (1.0 - alpha * rn) * chi * chi * chi * S + rn * chi -
           smu * t;
    fder = rn * vr0 / smu * chi * (1.0 - z * S) + (1.0 - alpha * rn) * chi * chi * C + rn;
  };

  double lo = 0.0, hi = std::max(smu * std::abs(alpha) * t, smu * t / rn);
  double fv = 0.0, fd = 0.0;
  eval(hi, fv, fd);
  for (int grow = 0; fv < 0.0; ++grow) {
    if (grow > 200) throw NonConvergence("kepler_reference: cannot bracket anomaly", fv, grow);
    lo = hi;
    hi *= 2.0;
    eval(hi, fv, fd);
  }
  double chi = 0.5 * (lo + hi);
  bool done = false;
  for (int it = 0; it < 60; ++it) {
    eval(chi, fv, fd);
    if (fv == 0.0) {
      done = true;
      break;
    }
    if (fv < 0.0) lo = chi; else hi = chi;
    double next = chi - fv / fd;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - chi);
    chi = next;
    if (step <= 1e-13 * std::max(1.0, std::abs(chi))) {
      done = true;
      break;
    }
  }
  if (!done) throw NonConvergence("kepler_reference: anomaly solve failed", fv, 60);

  const double z = alpha * chi * chi;
  const double C = stumpff_c(z), S = stumpff_s(z);
  const double f = 1.0 - chi * chi / rn * C;
  const double g = t - chi * chi * chi * S / smu;
  const Eigen::Vector3d r = f * r0 + g * v0;
  const double r_norm = r.norm();
  const double fdot = smu / (r_norm * rn) * (alpha * chi * chi * chi * S - chi);
  const double gdot = 1.0 - chi * chi / r_norm * C;
  if (std::abs(f * gdot - fdot * g - 1.0) > 1e-9) {
    throw NonConvergence("kepler_reference: Lagrange identity violated", f * gdot - fdot * g - 1.0, 60);
  }
  out << r, fdot * r0 + gdot * v0;
  return out;
}

Vector kepler_rhs(double mu, const Vector& s) {
  const Eigen::Vector3d r = s.head<3>();
  const double rn = r.norm();
  Vector out(6);
  out << s.tail<3>(), (-mu / (rn * rn * rn)) * r;
  return out;
}

Matrix kepler_jacobian(double mu, const Vector& s) {
  const Eigen::Vector3d r = s.head<3>();
  const double rn = r.norm();
  const double r3 = rn * rn * rn;
  Matrix J = Matrix::Zero(6, 6);
  J.block<3, 3>(0, 3).setIdentity();
  J.block<3, 3>(3, 0) =
      (-mu / r3) * (Eigen::Matrix3d::Identity() - 3.0 * r * r.transpose() / (rn * rn));
  return J;
}

IvpProblem to_ivp(const KeplerProblem& problem) {
  IvpProblem ivp;
  ivp.name = "kepler";
  ivp.dim = 6;
  ivp.u0.resize(6);
  ivp.u0 << problem.r0, problem.v0;
  ivp.T = problem.T;
  const double mu = problem.mu;
  ivp.f = [mu](double, const Vector& u) { return kepler_rhs(mu, u); };
  ivp.jacobian = [mu](double, const Vector& u) { return kepler_jacobian(mu, u); };
  ivp.reference = [problem](double t) { return kepler_reference(problem, t); };
  ivp.position_dims = 3;
  return ivp;
}

// ---------------------------------------------------------------------------
// Burgers

double burgers_exact(double nu, double alpha, double x, double t) {
  const double pi = std::numbers::pi;
  const double decay = std::exp(-pi * pi * nu * t);
  return 2.0 * nu * pi * decay * std::sin(pi * x) / (alpha + decay * std::cos(pi * x));
}

double burgers_exact(const BurgersProblem& problem, double x, double t) {
  return burgers_exact(problem.nu(), problem.alpha(), x, t);
}

namespace {

Matrix circulant(int n, double diag, double lower, double upper) {
  Matrix c = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    c(i, i) = diag;
    c(i, (i + n - 1) % n) += lower;
    c(i, (i + 1) % n) += upper;
  }
  return c;
}

}  // namespace

BurgersProblem::BurgersProblem(double nu, int nx, double T, double alpha)
    : nu_(nu), alpha_(alpha), T_(T), dx_(2.0 / nx), nx_(nx) {
  if (nx < 4) throw DomainError("build_burgers: Nx must be >= 4");
  if (!(nu > 0.0)) throw DomainError("build_burgers: nu must be > 0");
  if (!(T > 0.0)) throw DomainError("build_burgers: T must be > 0");
  x_.resize(nx);
  for (int j = 0; j < nx; ++j) x_[j] = j * dx_;

  P1_.compute(circulant(nx, 5.0 / 6.0, 1.0 / 12.0, 1.0 / 12.0));
  Q1_ = circulant(nx, -2.0, 1.0, 1.0);
  P2_.compute(circulant(nx, 2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0));
  Q2_ = circulant(nx, 0.0, -1.0, 1.0);

  A1_ = (-nu_ / (dx_ * dx_)) * P1_.solve(Q1_);
  A2_ = (1.0 / (2.0 * dx_)) * P2_.solve(Q2_);
}

Vector BurgersProblem::apply_A1(const Vector& u) const {
  return (-nu_ / (dx_ * dx_)) * P1_.solve(Q1_ * u);
}

Vector BurgersProblem::apply_A2(const Vector& u) const {
  return (1.0 / (2.0 * dx_)) * P2_.solve(Q2_ * u);
}

Vector BurgersProblem::rhs(const Vector& u) const {
  return -(A1_ * u) - (u.array() * (A2_ * u).array()).matrix();
}

Matrix BurgersProblem::jacobian(const Vector& u) const {
  Matrix J = -A1_;
  J.diagonal() -= A2_ * u;
  J -= u.asDiagonal() * A2_;
  return J;
}

Vector BurgersProblem::exact_on_grid(double t) const {
  Vector out(nx_);
  for (int j = 0; j < nx_; ++j) out[j] = burgers_exact(*this, x_[j], t);
  return out;
}

std::shared_ptr<const BurgersProblem> build_burgers(double nu, int nx, double T) {
  return std::make_shared<const BurgersProblem>(nu, nx, T);
}

IvpProblem to_ivp(std::shared_ptr<const BurgersProblem> problem) {
  IvpProblem ivp;
  ivp.name = "burgers";
  ivp.dim = problem->nx();
  ivp.u0 = problem->exact_on_grid(0.0);
  ivp.T = problem->T();
  ivp.f = [problem](double, const Vector& u) { return problem->rhs(u); };
  ivp.jacobian = [problem](double, const Vector& u) { return problem->jacobian(u); };
  ivp.reference = [problem](double t) { return problem->exact_on_grid(t); };
  return ivp;
}

IvpProblem zero_rhs_problem(const Vector& u0, double T) {
  IvpProblem ivp;
  ivp.name = "zero";
  ivp.dim = static_cast<int>(u0.size());
  ivp.u0 = u0;
  ivp.T = T;
  ivp.f = [](double, const Vector& u) -> Vector { return Vector::Zero(u.size()); };
  ivp.jacobian = [](double, const Vector& u) -> Matrix { return Matrix::Zero(u.size(), u.size()); };
  ivp.reference = [u0](double) { return u0; };
  ivp.linear = LinearForm{Matrix::Zero(u0.size(), u0.size()), {}};
  return ivp;
}

}  // namespace prcg
