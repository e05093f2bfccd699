#include "prcg/prcg.h"

#include <cmath>
#include <exception>
#include <memory>
#include <stdexcept>
#include <string>

#include "prcg/analysis.hpp"
#include "prcg/errors.hpp"
#include "prcg/parareal.hpp"
#include "prcg/problems.hpp"
#include "prcg/propagators.hpp"

struct prcg_problem {
  prcg::IvpProblem ivp;
};

struct prcg_run {
  prcg::PararealResult result;
};

namespace {

thread_local std::string g_last_error;

// Malformed arguments (null handles, unknown enum values) as opposed to
// well-formed values outside a function's domain.
struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

prcg_status fail(prcg_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Maps core exceptions onto status codes.
template <class F>
prcg_status guarded(F&& body) {
  try {
    body();
    return PRCG_OK;
  } catch (const InvalidArgument& e) {
    return fail(PRCG_ERR_INVALID_ARGUMENT, e.what());
  } catch (const prcg::DomainError& e) {
    return fail(PRCG_ERR_DOMAIN, e.what());
  } catch (const prcg::SingularSystem& e) {
    return fail(PRCG_ERR_SINGULAR, e.what());
  } catch (const prcg::NonConvergence& e) {
    return fail(PRCG_ERR_NONCONVERGENCE, e.what());
  } catch (const prcg::SolverError& e) {
    return fail(PRCG_ERR_SOLVER, e.what());
  } catch (const std::bad_alloc&) {
    return fail(PRCG_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(PRCG_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(PRCG_ERR_INTERNAL, "unknown error");
  }
}

prcg::PropagatorSpec to_spec(const prcg_propagator_spec* s) {
  if (s == nullptr) throw InvalidArgument("null propagator spec");
  prcg::PropagatorSpec spec;
  switch (s->kind) {
    case PRCG_BACKWARD_EULER: spec.kind = prcg::PropagatorKind::BackwardEuler; break;
    case PRCG_FORWARD_EULER: spec.kind = prcg::PropagatorKind::ForwardEuler; break;
    case PRCG_TRAPEZOIDAL: spec.kind = prcg::PropagatorKind::Trapezoidal; break;
    case PRCG_TR_BDF2: spec.kind = prcg::PropagatorKind::TrBdf2; break;
    case PRCG_GAUSS4: spec.kind = prcg::PropagatorKind::Gauss4; break;
    case PRCG_ERK4: spec.kind = prcg::PropagatorKind::Erk4; break;
    case PRCG_CHEBYSHEV_GAUSS: spec.kind = prcg::PropagatorKind::ChebyshevGauss; break;
    default: throw InvalidArgument("unknown propagator kind " + std::to_string(s->kind));
  }
  spec.substeps = s->substeps;
  spec.cg_points = s->cg_points;
  prcg::validate(spec);
  return spec;
}

prcg_status make_problem(prcg::IvpProblem ivp, prcg_problem** out) {
  prcg::validate(ivp);
  *out = new prcg_problem{std::move(ivp)};
  return PRCG_OK;
}

}  // namespace

extern "C" {

const char* prcg_last_error(void) { return g_last_error.c_str(); }

const char* prcg_status_string(prcg_status status) {
  switch (status) {
    case PRCG_OK: return "ok";
    case PRCG_ERR_INVALID_ARGUMENT: return "invalid argument";
    case PRCG_ERR_DOMAIN: return "domain error";
    case PRCG_ERR_NONCONVERGENCE: return "no convergence";
    case PRCG_ERR_SINGULAR: return "singular system";
    case PRCG_ERR_SOLVER: return "solver error";
    case PRCG_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* prcg_version(void) { return "1.0.0"; }

prcg_status prcg_stability(const prcg_propagator_spec* spec, double z, double* out) {
  if (out == nullptr) return fail(PRCG_ERR_INVALID_ARGUMENT, "null output");
  return guarded([&] { *out = prcg::stability(to_spec(spec), z); });
}

prcg_status prcg_contraction(const prcg_propagator_spec* spec, double z, double* out) {
  if (out == nullptr) return fail(PRCG_ERR_INVALID_ARGUMENT, "null output");
  return guarded([&] { *out = prcg::contraction(to_spec(spec), z); });
}

prcg_status prcg_rho(const prcg_propagator_spec* spec, double z_max, double* rho,
                     double* z_at_rho) {
  if (rho == nullptr) return fail(PRCG_ERR_INVALID_ARGUMENT, "null output");
  return guarded([&] {
    const prcg::ContractionReport rep = prcg::rho_over_interval(to_spec(spec), z_max);
    *rho = rep.rho;
    if (z_at_rho != nullptr) *z_at_rho = rep.z_at_rho;
  });
}

prcg_status prcg_mmin(double z_max, prcg_mmin_result* out) {
  if (out == nullptr) return fail(PRCG_ERR_INVALID_ARGUMENT, "null output");
  return guarded([&] {
    const prcg::MminResult r = prcg::m_min(z_max);
    out->z_max = r.z_max;
    out->m_min = r.m_min;
    out->branch = static_cast<prcg_mmin_branch>(static_cast<int>(r.branch));
    out->condition_value = r.condition_value;
    out->threshold = r.threshold;
  });
}

prcg_status prcg_threshold_roots(double* z0_star, double* z1_star) {
  if (z0_star == nullptr || z1_star == nullptr) {
    return fail(PRCG_ERR_INVALID_ARGUMENT, "null output");
  }
  return guarded([&] {
    const prcg::ThresholdRoots r = prcg::find_threshold_roots();
    *z0_star = r.z0_star;
    *z1_star = r.z1_star;
  });
}

prcg_status prcg_problem_create_spd_diag(const double* eigenvalues, size_t count, double T,
                                         prcg_problem** out) {
  if (out == nullptr || (eigenvalues == nullptr && count > 0)) {
    return fail(PRCG_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    prcg::SpdParams params;
    params.eigenvalues.assign(eigenvalues, eigenvalues + count);
    params.T = T;
    make_problem(prcg::to_ivp(prcg::spd_catalog("diag-spectrum", params)), out);
  });
}

prcg_status prcg_problem_create_spd_logspaced(size_t count, double lambda_min, double lambda_max,
                                              double T, prcg_problem** out) {
  if (out == nullptr) return fail(PRCG_ERR_INVALID_ARGUMENT, "null output");
  return guarded([&] {
    prcg::SpdParams params;
    params.size = static_cast<int>(count);
    params.lambda_min = lambda_min;
    params.lambda_max = lambda_max;
    params.T = T;
    make_problem(prcg::to_ivp(prcg::spd_catalog("diag-spectrum", params)), out);
  });
}

prcg_status prcg_problem_create_laplacian_1d(size_t points, double T, prcg_problem** out) {
  if (out == nullptr) return fail(PRCG_ERR_INVALID_ARGUMENT, "null output");
  return guarded([&] {
    prcg::SpdParams params;
    params.points = static_cast<int>(points);
    params.T = T;
    make_problem(prcg::to_ivp(prcg::spd_catalog("laplacian-1d", params)), out);
  });
}

prcg_status prcg_problem_create_kepler(double T, prcg_problem** out) {
  if (out == nullptr) return fail(PRCG_ERR_INVALID_ARGUMENT, "null output");
  return guarded([&] {
    prcg::KeplerProblem kp;
    kp.T = T;
    make_problem(prcg::to_ivp(kp), out);
  });
}

prcg_status prcg_problem_create_burgers(double nu, size_t nx, double T, prcg_problem** out) {
  if (out == nullptr) return fail(PRCG_ERR_INVALID_ARGUMENT, "null output");
  return guarded([&] { make_problem(prcg::to_ivp(prcg::build_burgers(nu, static_cast<int>(nx), T)), out); });
}

void prcg_problem_destroy(prcg_problem* problem) { delete problem; }

size_t prcg_problem_dim(const prcg_problem* problem) {
  return problem ? static_cast<size_t>(problem->ivp.dim) : 0;
}

double prcg_problem_final_time(const prcg_problem* problem) {
  return problem ? problem->ivp.T : 0.0;
}

int prcg_problem_has_reference(const prcg_problem* problem) {
  return (problem && problem->ivp.reference) ? 1 : 0;
}

prcg_status prcg_problem_initial_state(const prcg_problem* problem, double* out, size_t len) {
  if (problem == nullptr || out == nullptr) return fail(PRCG_ERR_INVALID_ARGUMENT, "null argument");
  if (len != static_cast<size_t>(problem->ivp.dim)) return fail(PRCG_ERR_INVALID_ARGUMENT, "length mismatch");
  for (size_t i = 0; i < len; ++i) out[i] = problem->ivp.u0[static_cast<Eigen::Index>(i)];
  return PRCG_OK;
}

prcg_status prcg_problem_reference(const prcg_problem* problem, double t, double* out, size_t len) {
  if (problem == nullptr || out == nullptr) return fail(PRCG_ERR_INVALID_ARGUMENT, "null argument");
  if (len != static_cast<size_t>(problem->ivp.dim)) return fail(PRCG_ERR_INVALID_ARGUMENT, "length mismatch");
  if (!problem->ivp.reference) return fail(PRCG_ERR_DOMAIN, "problem has no reference solution");
  return guarded([&] {
    const prcg::Vector r = problem->ivp.reference(t);
    for (size_t i = 0; i < len; ++i) out[i] = r[static_cast<Eigen::Index>(i)];
  });
}

prcg_status prcg_advance(const prcg_problem* problem, const prcg_propagator_spec* spec, double t,
                         const double* u, double dt, double* out, size_t len) {
  if (problem == nullptr || u == nullptr || out == nullptr) {
    return fail(PRCG_ERR_INVALID_ARGUMENT, "null argument");
  }
  if (len != static_cast<size_t>(problem->ivp.dim)) return fail(PRCG_ERR_INVALID_ARGUMENT, "length mismatch");
  return guarded([&] {
    const prcg::Vector state = Eigen::Map<const prcg::Vector>(u, static_cast<Eigen::Index>(len));
    const prcg::Vector next = prcg::advance(to_spec(spec), problem->ivp, t, state, dt);
    for (size_t i = 0; i < len; ++i) out[i] = next[static_cast<Eigen::Index>(i)];
  });
}

void prcg_parareal_config_default(prcg_parareal_config* cfg) {
  if (cfg == nullptr) return;
  cfg->N = 1;
  cfg->coarse = prcg_propagator_spec{PRCG_BACKWARD_EULER, 1, 0};
  cfg->fine = prcg_propagator_spec{PRCG_CHEBYSHEV_GAUSS, 1, 8};
  cfg->tol = 1e-10;
  cfg->max_k = 50;
  cfg->init = PRCG_INIT_COARSE;
  cfg->seed = 0;
  cfg->workers = 1;
}

prcg_status prcg_parareal_run(const prcg_problem* problem, const prcg_parareal_config* cfg,
                              prcg_run** out) {
  if (problem == nullptr || cfg == nullptr || out == nullptr) {
    return fail(PRCG_ERR_INVALID_ARGUMENT, "null argument");
  }
  *out = nullptr;
  prcg_status status = PRCG_OK;
  const prcg_status guard = guarded([&] {
    prcg::PararealConfig c;
    c.T = problem->ivp.T;
    c.N = static_cast<int>(cfg->N);
    c.coarse = to_spec(&cfg->coarse);
    c.fine = to_spec(&cfg->fine);
    c.tol = cfg->tol;
    c.max_k = cfg->max_k;
    c.init = cfg->init == PRCG_INIT_RANDOM ? prcg::InitKind::Random : prcg::InitKind::CoarseSweep;
    c.seed = cfg->seed;
    c.workers = cfg->workers;
    try {
      *out = new prcg_run{prcg::run_parareal(c, problem->ivp)};
    } catch (const prcg::MaxIterationsExceeded& e) {
      *out = new prcg_run{e.result()};
      status = fail(PRCG_ERR_NONCONVERGENCE, e.what());
    }
  });
  return guard != PRCG_OK ? guard : status;
}

void prcg_run_destroy(prcg_run* run) { delete run; }

int prcg_run_converged(const prcg_run* run) { return (run && run->result.converged) ? 1 : 0; }

size_t prcg_run_iterations(const prcg_run* run) { return run ? run->result.history.size() : 0; }

size_t prcg_run_points(const prcg_run* run) { return run ? run->result.states.size() : 0; }

prcg_status prcg_run_record(const prcg_run* run, size_t index, prcg_record* out) {
  if (run == nullptr || out == nullptr) return fail(PRCG_ERR_INVALID_ARGUMENT, "null argument");
  if (index >= run->result.history.size()) return fail(PRCG_ERR_INVALID_ARGUMENT, "record index out of range");
  const prcg::ConvergenceRecord& r = run->result.history[index];
  out->k = r.k;
  out->iter_error = r.iter_error;
  out->has_abs_error = r.abs_error.has_value() ? 1 : 0;
  out->abs_error = r.abs_error.value_or(NAN);
  out->has_abs_error_position = r.abs_error_position.has_value() ? 1 : 0;
  out->abs_error_position = r.abs_error_position.value_or(NAN);
  return PRCG_OK;
}

prcg_status prcg_run_state(const prcg_run* run, size_t n, double* out, size_t len) {
  if (run == nullptr || out == nullptr) return fail(PRCG_ERR_INVALID_ARGUMENT, "null argument");
  if (n >= run->result.states.size()) return fail(PRCG_ERR_INVALID_ARGUMENT, "state index out of range");
  const prcg::Vector& s = run->result.states[n];
  if (len != static_cast<size_t>(s.size())) return fail(PRCG_ERR_INVALID_ARGUMENT, "length mismatch");
  for (size_t i = 0; i < len; ++i) out[i] = s[static_cast<Eigen::Index>(i)];
  return PRCG_OK;
}

}  // extern "C"
