#include "prcg/parareal.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <string>
#include <thread>

namespace prcg {

void validate(const PararealConfig& cfg) {
  if (cfg.N < 1) throw DomainError("parareal: N must be >= 1");
  if (!(cfg.T > 0.0) || !(cfg.dT() > 0.0)) throw DomainError("parareal: T must be > 0");
  if (!(cfg.tol > 0.0)) throw DomainError("parareal: tol must be > 0");
  if (cfg.max_k < 1) throw DomainError("parareal: max_k must be >= 1");
  if (cfg.workers < 1) throw DomainError("parareal: workers must be >= 1");
  validate(cfg.coarse);
  validate(cfg.fine);
}

MaxIterationsExceeded::MaxIterationsExceeded(PararealResult result)
    : NonConvergence("parareal: tolerance not reached within max_k iterations",
                     result.history.empty() ? 0.0 : result.history.back().iter_error,
                     static_cast<int>(result.history.size())),
      result_(std::move(result)) {}

PararealSolver::PararealSolver(PararealConfig cfg, const IvpProblem& problem)
    : cfg_(std::move(cfg)),
      problem_(problem),
      dT_(cfg_.dT()),
      coarse_((validate(cfg_), cfg_.coarse)),
      fine_(cfg_.fine) {
  validate(problem_);
  if (problem_.reference) {
    reference_.reserve(cfg_.N + 1);
    for (int n = 0; n <= cfg_.N; ++n) reference_.push_back(problem_.reference(time(n)));
  }
}

PararealState PararealSolver::initialize() const {
  PararealState state;
  const int N = cfg_.N;
  state.u.resize(N + 1);
  state.u[0] = problem_.u0;
  if (cfg_.init == InitKind::CoarseSweep) {
    state.g_prev.resize(N);
    for (int n = 0; n < N; ++n) {
      state.g_prev[n] = coarse_step(n, state.u[n]);
      state.u[n + 1] = state.g_prev[n];
    }
  } else {
    std::mt19937_64 rng(cfg_.seed);
    std::uniform_real_distribution<double> draw(-1.0, 1.0);
    for (int n = 1; n <= N; ++n) {
      state.u[n].resize(problem_.dim);
      for (int i = 0; i < problem_.dim; ++i) state.u[n][i] = draw(rng);
    }
  }
  return state;
}

Vector PararealSolver::coarse_step(int n, const Vector& u) const {
  Vector out;
  try {
    out = coarse_.advance(problem_, time(n), u, dT_);
  } catch (const std::exception& e) {
    throw SolverError("parareal: coarse propagator failed at n = " + std::to_string(n) + ": " +
                          e.what(),
                      n);
  }
  if (!out.allFinite()) {
    throw SolverError("parareal: coarse propagator produced non-finite state at n = " +
                          std::to_string(n),
                      n);
  }
  return out;
}

std::vector<Vector> PararealSolver::fine_sweep(const std::vector<Vector>& u) const {
  const int N = cfg_.N;
  std::vector<Vector> out(N);
  std::vector<std::exception_ptr> errors(N);
  auto work = [&](int first, int stride) {
    for (int n = first; n < N; n += stride) {
      try {
        out[n] = fine_.advance(problem_, time(n), u[n], dT_);
        if (!out[n].allFinite()) throw SolverError("non-finite fine result", n);
      } catch (...) {
        errors[n] = std::current_exception();
      }
    }
  };
  const int workers = std::min(cfg_.workers, N);
  if (workers <= 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
  }

  std::string message;
  std::ptrdiff_t first_bad = -1;
  int failures = 0;
  for (int n = 0; n < N; ++n) {
    if (!errors[n]) continue;
    ++failures;
    if (first_bad < 0) {
      first_bad = n;
      try {
        std::rethrow_exception(errors[n]);
      } catch (const std::exception& e) {
        message = e.what();
      } catch (...) {
        message = "unknown error";
      }
    }
  }
  if (failures > 0) {
    throw SolverError("parareal: fine propagator failed on " + std::to_string(failures) +
                          " subinterval(s), first at n = " + std::to_string(first_bad) + ": " +
                          message,
                      first_bad);
  }
  return out;
}

ConvergenceRecord PararealSolver::record(int k, const std::vector<Vector>& u,
                                         const std::vector<Vector>& u_prev) const {
  ConvergenceRecord rec;
  rec.k = k;
  for (std::size_t n = 0; n < u.size(); ++n) {
    rec.iter_error = std::max(rec.iter_error, max_norm(u[n] - u_prev[n]));
  }
  if (!reference_.empty()) {
    double err = 0.0, err_pos = 0.0;
    const int pd = problem_.position_dims;
    for (std::size_t n = 0; n < u.size(); ++n) {
      const Vector diff = u[n] - reference_[n];
      err = std::max(err, max_norm(diff));
      if (pd > 0) err_pos = std::max(err_pos, max_norm(diff.head(pd)));
    }
    rec.abs_error = err;
    if (pd > 0) rec.abs_error_position = err_pos;
  }
  return rec;
}

void PararealSolver::iterate(PararealState& state) const {
  const int N = cfg_.N;
  const std::vector<Vector> fine = fine_sweep(state.u);

  std::vector<Vector> g_old = state.g_prev;
  if (g_old.empty() || cfg_.recompute_coarse) {
    g_old.resize(N);
    for (int n = 0; n < N; ++n) g_old[n] = coarse_step(n, state.u[n]);
  }

  std::vector<Vector> next(N + 1);
  std::vector<Vector> g_new(N);
  next[0] = problem_.u0;
  for (int n = 0; n < N; ++n) {
    g_new[n] = coarse_step(n, next[n]);
    // F - G first: the two are close, so the difference is exact or nearly so.
    next[n + 1] = g_new[n] + (fine[n] - g_old[n]);
  }

  state.k += 1;
  state.history.push_back(record(state.k, next, state.u));
  state.u_prev = std::move(state.u);
  state.u = std::move(next);
  state.g_prev = std::move(g_new);
}

PararealResult PararealSolver::run() const {
  PararealState state = initialize();
  bool converged = false;
  while (state.k < cfg_.max_k) {
    iterate(state);
    const double err = state.history.back().iter_error;
    if (!std::isfinite(err)) break;
    if (err <= cfg_.tol) {
      converged = true;
      break;
    }
  }
  PararealResult result{std::move(state.u), std::move(state.history), converged};
  if (!converged) throw MaxIterationsExceeded(std::move(result));
  return result;
}

std::vector<Vector> PararealSolver::serial_fine() const {
  std::vector<Vector> out(cfg_.N + 1);
  out[0] = problem_.u0;
  for (int n = 0; n < cfg_.N; ++n) out[n + 1] = fine_.advance(problem_, time(n), out[n], dT_);
  return out;
}

std::vector<Vector> PararealSolver::serial_coarse() const {
  std::vector<Vector> out(cfg_.N + 1);
  out[0] = problem_.u0;
  for (int n = 0; n < cfg_.N; ++n) out[n + 1] = coarse_.advance(problem_, time(n), out[n], dT_);
  return out;
}

PararealResult run_parareal(const PararealConfig& cfg, const IvpProblem& problem) {
  return PararealSolver(cfg, problem).run();
}

}  // namespace prcg
