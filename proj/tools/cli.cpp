#include "cli.hpp"

#include <cmath>
#include <cstdint>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "csv.hpp"

namespace prcg_cli {
namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(prcg_status s, const std::string& what) {
  if (s != PRCG_OK) throw Failure(what + ": " + prcg_status_string(s) + ": " + prcg_last_error());
}

struct ProblemDeleter {
  void operator()(prcg_problem* p) const { prcg_problem_destroy(p); }
};
struct RunDeleter {
  void operator()(prcg_run* r) const { prcg_run_destroy(r); }
};
using ProblemPtr = std::unique_ptr<prcg_problem, ProblemDeleter>;
using RunPtr = std::unique_ptr<prcg_run, RunDeleter>;

struct Options {
  std::string command;
  std::string out;
  std::uint64_t seed = 0;
  int workers = 1;
  double tol = 1e-10;

  // analyze / mmin
  std::vector<std::string> specs;
  std::vector<double> z;
  double z_min = 1e-2;
  double z_max = 1e4;
  int points = 200;

  // run
  std::string problem = "spd-diag";
  std::vector<double> eigenvalues{1.0, 10.0, 100.0};
  int size = 8;
  double lambda_min = 1.0;
  double lambda_max = 100.0;
  int lap_points = 32;
  double nu = 0.05;
  double dx = 0.25;
  double T = 0.0;  // 0: the problem's default
  int N = 0;
  double dT = 0.0;
  std::string coarse = "be:1";
  std::string fine = "cg:8";
  int max_k = 50;
  std::string init = "coarse";

  // experiment
  std::string name;
  std::vector<double> nus{0.05, 0.005};
};

std::vector<double> z_values(const Options& o) {
  if (!o.z.empty()) return o.z;
  if (!(o.z_min > 0.0) || !(o.z_max >= o.z_min) || o.points < 1) {
    throw Failure("need 0 < z-min <= z-max and points >= 1");
  }
  std::vector<double> out(o.points);
  if (o.points == 1) {
    out[0] = o.z_min;
    return out;
  }
  const double a = std::log10(o.z_min), b = std::log10(o.z_max);
  for (int i = 0; i < o.points; ++i) out[i] = std::pow(10.0, a + (b - a) * i / (o.points - 1));
  out.back() = o.z_max;
  return out;
}

CsvTable cmd_analyze(const Options& o) {
  std::vector<prcg_propagator_spec> specs;
  std::vector<std::string> header{"z"};
  for (const auto& s : o.specs) {
    if (s.empty()) continue;
    specs.push_back(parse_spec(s));
    const std::string name = spec_string(specs.back());
    header.push_back("abs_R[" + name + "]");
    header.push_back("K[" + name + "]");
  }
  if (specs.empty()) throw Failure("analyze: no propagator specs given");
  CsvTable t(header);
  for (double z : z_values(o)) {
    std::vector<std::string> row{format_number(z)};
    for (const auto& spec : specs) {
      double R = 0.0, K = 0.0;
      check(prcg_stability(&spec, z, &R), "stability");
      check(prcg_contraction(&spec, z, &K), "contraction");
      row.push_back(format_number(std::abs(R)));
      row.push_back(format_number(K));
    }
    t.add_row(std::move(row));
  }
  return t;
}

const char* branch_label(prcg_mmin_branch b) {
  switch (b) {
    case PRCG_MMIN_ZERO: return "ZeroBranch";
    case PRCG_MMIN_ONE: return "OneBranch";
    case PRCG_MMIN_SEARCH: return "SearchBranch";
  }
  return "unknown";
}

CsvTable cmd_mmin(const Options& o) {
  CsvTable t({"z_max", "m_min", "branch", "condition_value", "threshold"});
  for (double z : z_values(o)) {
    prcg_mmin_result r{};
    check(prcg_mmin(z, &r), "mmin at z_max = " + format_number(z));
    t.add_row({format_number(r.z_max), std::to_string(r.m_min), branch_label(r.branch),
               format_number(r.condition_value), format_number(r.threshold)});
  }
  return t;
}

int grid_count(double T, double dT) {
  const double n = T / dT;
  const long r = std::lround(n);
  if (r < 1 || std::abs(n - r) > 1e-9 * n) throw Failure("dT must divide T into a whole number of steps");
  return static_cast<int>(r);
}

ProblemPtr make_burgers(double nu, double dx, double T) {
  prcg_problem* p = nullptr;
  check(prcg_problem_create_burgers(nu, static_cast<size_t>(grid_count(2.0, dx)), T, &p), "burgers");
  return ProblemPtr(p);
}

ProblemPtr make_problem(const Options& o) {
  prcg_problem* p = nullptr;
  const auto T = [&](double fallback) { return o.T > 0.0 ? o.T : fallback; };
  if (o.problem == "spd-diag") {
    check(prcg_problem_create_spd_diag(o.eigenvalues.data(), o.eigenvalues.size(), T(1.0), &p), "spd-diag");
  } else if (o.problem == "spd-logspaced") {
    check(prcg_problem_create_spd_logspaced(static_cast<size_t>(std::max(o.size, 0)), o.lambda_min,
                                            o.lambda_max, T(1.0), &p),
          "spd-logspaced");
  } else if (o.problem == "laplacian-1d") {
    check(prcg_problem_create_laplacian_1d(static_cast<size_t>(std::max(o.lap_points, 0)), T(0.1), &p),
          "laplacian-1d");
  } else if (o.problem == "kepler") {
    check(prcg_problem_create_kepler(T(50.0), &p), "kepler");
  } else if (o.problem == "burgers") {
    return make_burgers(o.nu, o.dx, T(4.0));
  } else {
    throw Failure("unknown problem '" + o.problem + "'");
  }
  return ProblemPtr(p);
}

prcg_init parse_init(const std::string& s) {
  if (s == "coarse") return PRCG_INIT_COARSE;
  if (s == "random") return PRCG_INIT_RANDOM;
  throw Failure("init must be 'coarse' or 'random'");
}

struct RunOutcome {
  RunPtr run;
  bool converged = false;
};

RunOutcome parareal(const prcg_problem* problem, const prcg_parareal_config& cfg) {
  prcg_run* r = nullptr;
  const prcg_status s = prcg_parareal_run(problem, &cfg, &r);
  RunOutcome out{RunPtr(r), false};
  if (s != PRCG_OK && s != PRCG_ERR_NONCONVERGENCE) check(s, "parareal");
  if (!out.run) throw Failure("parareal: no result");
  out.converged = prcg_run_converged(out.run.get()) == 1;
  return out;
}

std::vector<prcg_record> records(const prcg_run* run) {
  std::vector<prcg_record> out(prcg_run_iterations(run));
  for (size_t i = 0; i < out.size(); ++i) check(prcg_run_record(run, i, &out[i]), "record");
  return out;
}

std::string optional_number(int has, double v) { return has ? format_number(v) : std::string(); }

prcg_parareal_config base_config(const Options& o) {
  prcg_parareal_config c;
  prcg_parareal_config_default(&c);
  c.tol = o.tol;
  c.max_k = o.max_k;
  c.init = parse_init(o.init);
  c.seed = o.seed;
  c.workers = o.workers;
  return c;
}

CsvTable cmd_run(const Options& o, std::ostream& log) {
  ProblemPtr problem = make_problem(o);
  const double T = prcg_problem_final_time(problem.get());
  prcg_parareal_config c = base_config(o);
  if (o.N > 0) {
    c.N = static_cast<size_t>(o.N);
  } else if (o.dT > 0.0) {
    c.N = static_cast<size_t>(grid_count(T, o.dT));
  } else {
    throw Failure("run: give N or dT");
  }
  c.coarse = parse_spec(o.coarse);
  c.fine = parse_spec(o.fine);
  const RunOutcome r = parareal(problem.get(), c);
  CsvTable t({"k", "iter_error", "abs_error", "abs_error_position", "converged"});
  for (const auto& rec : records(r.run.get())) {
    t.add_row({std::to_string(rec.k), format_number(rec.iter_error),
               optional_number(rec.has_abs_error, rec.abs_error),
               optional_number(rec.has_abs_error_position, rec.abs_error_position),
               r.converged ? "1" : "0"});
  }
  log << "run: " << (r.converged ? "converged" : "not converged") << " after "
      << prcg_run_iterations(r.run.get()) << " iterations\n";
  return t;
}

// One parameter point of a sweep.
struct Job {
  std::string algorithm;
  prcg_propagator_spec fine;
  double nu = NAN;  // Burgers only
  double dT = 0.0;
  double dx = NAN;  // Burgers only
};

std::string cell(double v) { return std::isnan(v) ? std::string() : format_number(v); }

std::vector<Job> experiment_jobs(const Options& o) {
  std::vector<Job> jobs;
  if (o.name == "kepler-compare") {
    for (const char* s : {"cg:6", "be:6", "tr:6", "gauss4:6"}) {
      const prcg_propagator_spec spec = parse_spec(s);
      const char* label = spec.kind == PRCG_CHEBYSHEV_GAUSS ? "Parareal-CG"
                          : spec.kind == PRCG_BACKWARD_EULER ? "Parareal-Euler"
                          : spec.kind == PRCG_TRAPEZOIDAL    ? "Parareal-TR"
                                                             : "Parareal-Gauss4";
      jobs.push_back({label, spec, NAN, 0.25, NAN});
    }
    return jobs;
  }
  if (o.nus.empty()) throw Failure("experiment: empty nu list");
  const auto cg = [](int M) { return prcg_propagator_spec{PRCG_CHEBYSHEV_GAUSS, 1, M}; };
  for (double nu : o.nus) {
    if (o.name == "burgers-dt") {
      for (int e = 3; e <= 8; ++e) jobs.push_back({"Parareal-CG", cg(4), nu, std::ldexp(1.0, -e), 0.25});
    } else if (o.name == "burgers-dx") {
      for (int e = 1; e <= 5; ++e) jobs.push_back({"Parareal-CG", cg(4), nu, 1.0 / 64.0, std::ldexp(1.0, -e)});
    } else if (o.name == "burgers-m") {
      for (int M : {2, 4, 8, 16, 32, 64}) jobs.push_back({"Parareal-CG", cg(M), nu, 1.0 / 32.0, 0.25});
    } else {
      throw Failure("unknown experiment '" + o.name +
                    "' (kepler-compare, burgers-dt, burgers-dx, burgers-m)");
    }
  }
  return jobs;
}

CsvTable cmd_experiment(const Options& o, std::ostream& log) {
  const std::vector<Job> jobs = experiment_jobs(o);
  CsvTable t({"experiment", "algorithm", "fine", "nu", "dT", "dx", "k", "iter_error", "abs_error",
              "abs_error_position", "converged"});
  for (const Job& job : jobs) {
    ProblemPtr problem;
    if (o.name == "kepler-compare") {
      prcg_problem* p = nullptr;
      check(prcg_problem_create_kepler(50.0, &p), "kepler");
      problem.reset(p);
    } else {
      problem = make_burgers(job.nu, job.dx, 4.0);
    }
    prcg_parareal_config c = base_config(o);
    c.N = static_cast<size_t>(grid_count(prcg_problem_final_time(problem.get()), job.dT));
    c.fine = job.fine;
    RunOutcome r;
    try {
      r = parareal(problem.get(), c);
    } catch (const Failure& e) {
      throw Failure(o.name + " [" + job.algorithm + " " + spec_string(job.fine) + " nu=" + cell(job.nu) +
                    " dT=" + cell(job.dT) + " dx=" + cell(job.dx) + "]: " + e.what());
    }
    const auto recs = records(r.run.get());
    for (const auto& rec : recs) {
      t.add_row({o.name, job.algorithm, spec_string(job.fine), cell(job.nu), format_number(job.dT),
                 cell(job.dx), std::to_string(rec.k), format_number(rec.iter_error),
                 optional_number(rec.has_abs_error, rec.abs_error),
                 optional_number(rec.has_abs_error_position, rec.abs_error_position),
                 r.converged ? "1" : "0"});
    }
    log << o.name << ": " << job.algorithm << " " << spec_string(job.fine) << " nu=" << cell(job.nu)
        << " dT=" << cell(job.dT) << " dx=" << cell(job.dx) << " -> " << recs.size() << " iterations"
        << (r.converged ? "" : " (not converged)") << "\n";
  }
  return t;
}

}  // namespace

prcg_propagator_spec parse_spec(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  int number = -1;
  if (colon != std::string::npos) {
    const std::string digits = text.substr(colon + 1);
    size_t used = 0;
    try {
      number = std::stoi(digits, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != digits.size() || number < 0) {
      throw std::invalid_argument("bad propagator spec '" + text + "'");
    }
  }
  prcg_propagator_spec s{PRCG_BACKWARD_EULER, 1, 0};
  if (kind == "cg") {
    if (number < 0) throw std::invalid_argument("cg needs the order M (M+1 nodes), e.g. cg:6");
    s.kind = PRCG_CHEBYSHEV_GAUSS;
    s.cg_points = number;
    return s;
  }
  if (kind == "be") s.kind = PRCG_BACKWARD_EULER;
  else if (kind == "fe") s.kind = PRCG_FORWARD_EULER;
  else if (kind == "tr") s.kind = PRCG_TRAPEZOIDAL;
  else if (kind == "trbdf2") s.kind = PRCG_TR_BDF2;
  else if (kind == "gauss4") s.kind = PRCG_GAUSS4;
  else if (kind == "erk4") s.kind = PRCG_ERK4;
  else throw std::invalid_argument("unknown propagator '" + kind + "'");
  if (number >= 0) s.substeps = number;
  if (s.substeps < 1) throw std::invalid_argument("substeps must be >= 1 in '" + text + "'");
  return s;
}

std::string spec_string(const prcg_propagator_spec& spec) {
  switch (spec.kind) {
    case PRCG_CHEBYSHEV_GAUSS: return "cg:" + std::to_string(spec.cg_points);
    case PRCG_BACKWARD_EULER: return "be:" + std::to_string(spec.substeps);
    case PRCG_FORWARD_EULER: return "fe:" + std::to_string(spec.substeps);
    case PRCG_TRAPEZOIDAL: return "tr:" + std::to_string(spec.substeps);
    case PRCG_TR_BDF2: return "trbdf2:" + std::to_string(spec.substeps);
    case PRCG_GAUSS4: return "gauss4:" + std::to_string(spec.substeps);
    case PRCG_ERK4: return "erk4:" + std::to_string(spec.substeps);
  }
  return "?";
}

int run(const std::vector<std::string>& args, std::ostream& log) {
  Options o;
  CLI::App app{"Parareal with Chebyshev-Gauss collocation: analysis and experiments", "prcg_cli"};
  app.set_config("--config", "", "Manifest: flat key = value file; flags override it");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.fallthrough();
  app.require_subcommand(0, 1);

  app.add_option("--command", o.command, "Subcommand to use when none is given on the line")
      ->check(CLI::IsMember({"analyze", "mmin", "run", "experiment"}));
  app.add_option("--out", o.out, "Output CSV path");
  app.add_option("--seed", o.seed, "Seed for random initial iterates");
  app.add_option("--workers", o.workers, "Fine-sweep worker threads")->check(CLI::PositiveNumber);
  app.add_option("--tol", o.tol, "Parareal stopping tolerance on the iteration error")
      ->check(CLI::PositiveNumber);

  app.add_option("--specs", o.specs, "Propagators, e.g. cg:0,cg:1,be:2")->delimiter(',');
  app.add_option("--z", o.z, "Explicit z (or z_max) values")->delimiter(',');
  app.add_option("--z-min", o.z_min, "Log grid start");
  app.add_option("--z-max", o.z_max, "Log grid end");
  app.add_option("--points", o.points, "Log grid size");

  app.add_option("--problem", o.problem, "spd-diag, spd-logspaced, laplacian-1d, kepler, burgers");
  app.add_option("--eigenvalues", o.eigenvalues, "spd-diag spectrum")->delimiter(',');
  app.add_option("--size", o.size, "spd-logspaced dimension");
  app.add_option("--lambda-min", o.lambda_min, "spd-logspaced smallest eigenvalue");
  app.add_option("--lambda-max", o.lambda_max, "spd-logspaced largest eigenvalue");
  app.add_option("--lap-points", o.lap_points, "laplacian-1d interior points");
  app.add_option("--nu", o.nu, "Burgers viscosity");
  app.add_option("--dx", o.dx, "Burgers grid spacing (Nx = 2/dx)");
  app.add_option("--T", o.T, "Final time (default: the problem's own)");
  app.add_option("--N", o.N, "Coarse subintervals");
  app.add_option("--dT", o.dT, "Coarse step, alternative to --N");
  app.add_option("--coarse", o.coarse, "Coarse propagator");
  app.add_option("--fine", o.fine, "Fine propagator");
  app.add_option("--max-k", o.max_k, "Iteration cap")->check(CLI::PositiveNumber);
  app.add_option("--init", o.init, "Initial iterate: coarse or random");

  app.add_option("--name", o.name, "kepler-compare, burgers-dt, burgers-dx, burgers-m");
  app.add_option("--nus", o.nus, "Viscosities for the Burgers sweeps")->delimiter(',');

  auto* analyze = app.add_subcommand("analyze", "|R(z)| and K(z) for a list of propagators");
  auto* mmin = app.add_subcommand("mmin", "Minimal collocation points for contraction <= 1/3");
  auto* run_cmd = app.add_subcommand("run", "One parareal run, per-iteration errors");
  auto* experiment = app.add_subcommand("experiment", "Named experiment sweeps");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    std::ostringstream out, err;
    const int code = app.exit(e, out, err);
    log << out.str() << err.str();
    return code;
  }

  std::string command = o.command;
  if (*analyze) command = "analyze";
  if (*mmin) command = "mmin";
  if (*run_cmd) command = "run";
  if (*experiment) command = "experiment";

  try {
    if (command.empty()) throw Failure("no subcommand (analyze, mmin, run, experiment)");
    if (o.out.empty()) throw Failure("--out is required");
    CsvTable table({});
    if (command == "analyze") table = cmd_analyze(o);
    else if (command == "mmin") table = cmd_mmin(o);
    else if (command == "run") table = cmd_run(o, log);
    else table = cmd_experiment(o, log);
    write_atomically(o.out, table.str());
    return 0;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace prcg_cli
