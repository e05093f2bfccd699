#include "prcg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "prcg/errors.hpp"

namespace prcg {
namespace {

constexpr double kInvPhi = 0.6180339887498948482;

// Golden-section maximization of a unimodal g on [lo, hi].
double golden_max(const std::function<double(double)>& g, double lo, double hi, double tol,
                  double& best) {
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double g1 = g(x1), g2 = g(x2);
  while (hi - lo > tol) {
    if (g1 < g2) {
      lo = x1;
      x1 = x2;
      g1 = g2;
      x2 = lo + kInvPhi * (hi - lo);
      g2 = g(x2);
    } else {
      hi = x2;
      x2 = x1;
      g2 = g1;
      x1 = hi - kInvPhi * (hi - lo);
      g1 = g(x1);
    }
  }
  const double x = 0.5 * (lo + hi);
  best = g(x);
  return x;
}

double bisect(const std::function<double(double)>& g, double lo, double hi) {
  double glo = g(lo);
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> z(n);
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < n; ++i) z[i] = std::exp(a + (b - a) * i / (n - 1));
  z.front() = lo;
  z.back() = hi;
  return z;
}

}  // namespace

double contraction(const Propagator& fine, double z) {
  if (!(z >= 0.0)) throw DomainError("contraction: z must be >= 0");
  if (z == 0.0) return 0.0;
  const double rf = fine.stability(z);
  if (!(std::abs(rf) <= 1.0)) return kUnbounded;
  const double rg = 1.0 / (1.0 + z);
  return std::abs(rf - rg) / (1.0 - rg);
}

double contraction(const PropagatorSpec& fine, double z) { return contraction(Propagator(fine), z); }

ContractionReport rho_over_interval(const PropagatorSpec& spec, double z_max, int grid_points) {
  if (!(z_max > 0.0)) throw DomainError("rho_over_interval: z_max must be > 0");
  if (grid_points < 3) throw DomainError("rho_over_interval: need at least 3 grid points");
  const Propagator fine(spec);
  auto K = [&fine](double z) { return contraction(fine, z); };

  ContractionReport rep;
  rep.spec = spec;
  rep.z_max = z_max;
  const double lo = std::min(std::max(z_max * 1e-6, 1e-8), z_max);
  rep.z_grid.push_back(0.0);
  for (double z : log_grid(lo, z_max, grid_points)) rep.z_grid.push_back(z);
  rep.K_values.reserve(rep.z_grid.size());
  for (double z : rep.z_grid) rep.K_values.push_back(K(z));

  const std::size_t n = rep.z_grid.size();
  auto it = std::max_element(rep.K_values.begin(), rep.K_values.end());
  rep.rho = *it;
  rep.z_at_rho = rep.z_grid[it - rep.K_values.begin()];
  if (!std::isfinite(rep.rho)) return rep;

  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double k = rep.K_values[i];
    if (k >= rep.K_values[i - 1] && k >= rep.K_values[i + 1]) {
      double val = 0.0;
      const double z = golden_max(K, rep.z_grid[i - 1], rep.z_grid[i + 1], 1e-8, val);
      if (val > rep.rho) {
        rep.rho = val;
        rep.z_at_rho = z;
      }
    }
  }
  return rep;
}

const char* branch_name(MminBranch branch) {
  switch (branch) {
    case MminBranch::ZeroBranch: return "ZeroBranch";
    case MminBranch::OneBranch: return "OneBranch";
    case MminBranch::SearchBranch: return "SearchBranch";
  }
  return "unknown";
}

MminResult m_min(double z_max, int max_points) {
  if (!(z_max > 0.0)) throw DomainError("m_min: z_max must be > 0");
  const double z1_star = 8.0 + 6.0 * std::sqrt(2.0);
  MminResult res;
  res.z_max = z_max;
  res.threshold = (3.0 + z_max) / (3.0 * (1.0 + z_max));
  auto cond = [z_max](int M) { return std::abs(stability(PropagatorSpec::chebyshev_gauss(M), z_max)); };

  if (z_max <= 1.0) {
    res.branch = MminBranch::ZeroBranch;
    res.m_min = 0;
  } else if (z_max <= z1_star) {
    res.branch = MminBranch::OneBranch;
    res.m_min = 1;
  } else {
    res.branch = MminBranch::SearchBranch;
    double value = 0.0;
    for (int M = 2; M <= max_points; ++M) {
      value = cond(M);
      if (value <= res.threshold) {
        res.m_min = M;
        res.condition_value = value;
        return res;
      }
    }
    throw NonConvergence("m_min: no M <= " + std::to_string(max_points) + " satisfies the condition",
                         value, max_points);
  }
  res.condition_value = cond(res.m_min);
  return res;
}

std::vector<double> level_crossings(const PropagatorSpec& spec, double level, double z_lo,
                                    double z_hi, int grid_points) {
  if (!(z_lo > 0.0) || !(z_hi > z_lo)) throw DomainError("level_crossings: need 0 < z_lo < z_hi");
  const Propagator fine(spec);
  auto g = [&](double z) { return contraction(fine, z) - level; };
  const std::vector<double> z = log_grid(z_lo, z_hi, grid_points);
  std::vector<double> roots;
  double prev = g(z[0]);
  for (std::size_t i = 1; i < z.size(); ++i) {
    const double cur = g(z[i]);
    if (cur == 0.0) {
      roots.push_back(z[i]);
    } else if (prev != 0.0 && (prev < 0.0) != (cur < 0.0)) {
      roots.push_back(bisect(g, z[i - 1], z[i]));
    }
    prev = cur;
  }
  return roots;
}

std::vector<double> level_tangencies(const PropagatorSpec& spec, double level, double z_lo,
                                     double z_hi, double touch_tol, int grid_points) {
  if (!(z_lo > 0.0) || !(z_hi > z_lo)) throw DomainError("level_tangencies: need 0 < z_lo < z_hi");
  const Propagator fine(spec);
  auto g = [&](double z) { return contraction(fine, z) - level; };
  const std::vector<double> z = log_grid(z_lo, z_hi, grid_points);
  std::vector<double> vals(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) vals[i] = g(z[i]);

  std::vector<double> out;
  for (std::size_t i = 1; i + 1 < z.size(); ++i) {
    if (!(vals[i] >= vals[i - 1] && vals[i] >= vals[i + 1])) continue;
    // Neighbours on the same side: no sign change across this bump.
    if (vals[i - 1] > 0.0 || vals[i + 1] > 0.0) continue;
    double peak = 0.0;
    const double zp = golden_max(g, z[i - 1], z[i + 1], 1e-10 * z[i], peak);
    if (std::abs(peak) <= touch_tol) out.push_back(zp);
  }
  return out;
}

ThresholdRoots find_threshold_roots() {
  const double level = 1.0 / 3.0;
  ThresholdRoots roots;
  const auto spec0 = PropagatorSpec::chebyshev_gauss(0);
  const auto spec1 = PropagatorSpec::chebyshev_gauss(1);

  const std::vector<double> r0 = level_crossings(spec0, level, 1e-6, 1e6);
  if (r0.size() != 1) throw NonConvergence("find_threshold_roots: K(z,0) = 1/3 is not a single crossing",
                                           static_cast<double>(r0.size()), 0);
  roots.z0_star = r0.front();

  const std::vector<double> r1 = level_crossings(spec1, level, 1e-6, 1e6);
  if (r1.empty()) throw NonConvergence("find_threshold_roots: no crossing of K(z,1) = 1/3", 0.0, 0);
  roots.z1_star = r1.back();
  roots.tangencies_M1 = level_tangencies(spec1, level, 1e-6, roots.z1_star);
  return roots;
}

}  // namespace prcg
