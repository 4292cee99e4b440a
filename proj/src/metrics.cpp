#include "dandelion/metrics.hpp"

#include <cmath>
#include <cstdlib>
#include <exception>
#include <stdexcept>
#include <string>
#include <tuple>

namespace dandelion {

namespace {

void check_grid_spec(double p, const GridSpec& spec) {
  if (spec.count < 3) {
    throw std::domain_error("scan grid needs at least 3 points, got " +
                            std::to_string(spec.count));
  }
  if (!(spec.margin > kBoundEpsilon)) {
    throw std::domain_error("grid margin must exceed the bound tolerance");
  }
  const RhoInterval iv = rho_bounds(p);
  if (!(iv.lower + spec.margin < iv.upper - spec.margin)) {
    throw std::domain_error("grid margin leaves no admissible correlations");
  }
}

// Largest adjacent mode change; reported only above the threshold.
void detect_jump(ScanResult& scan, int threshold) {
  int best = -1;
  std::size_t best_index = 0;
  for (std::size_t i = 0; i + 1 < scan.reports.size(); ++i) {
    const int diff = std::abs(scan.reports[i + 1].mode - scan.reports[i].mode);
    if (diff > best) {
      best = diff;
      best_index = i;
    }
  }
  if (best > threshold) {
    scan.rho_star = 0.5 * (scan.rho_grid[best_index] + scan.rho_grid[best_index + 1]);
    scan.jump_size = scan.reports[best_index + 1].mode - scan.reports[best_index].mode;
    scan.jump_index = best_index;
  }
}

ScanResult make_scan(double p, int n_credits, const GridSpec& spec, double level) {
  check_grid_spec(p, spec);
  if (!(level > 0.0 && level < 1.0)) {
    throw std::domain_error("VaR level must lie in (0, 1)");
  }
  ScanResult scan;
  scan.p = p;
  scan.n_credits = n_credits;
  scan.var_level = level;
  scan.rho_grid = rho_grid(p, spec);
  scan.reports.resize(scan.rho_grid.size());
  // fail fast on bad (p, n) before any parallel region
  validate(ModelConfig{n_credits, p, scan.rho_grid.front()});
  return scan;
}

RiskReport evaluate_point(double p, int n_credits, double rho, double level) {
  return risk_report(loss_pmf(ModelConfig{n_credits, p, rho}), level);
}

}  // namespace

int value_at_risk(const LossPmf& pmf, double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw std::domain_error("VaR level must lie in (0, 1)");
  }
  const auto mass = pmf.mass();
  long double cumulative = 0.0L;
  for (std::size_t l = 0; l < mass.size(); ++l) {
    cumulative += mass[l];
    if (cumulative >= level) return static_cast<int>(l);
  }
  return pmf.n();
}

std::pair<int, double> mode_of(const LossPmf& pmf) {
  const auto lm = pmf.log_mass();
  std::size_t best = 0;
  for (std::size_t l = 1; l < lm.size(); ++l) {
    if (lm[l] > lm[best]) best = l;
  }
  return {static_cast<int>(best), pmf.mass()[best]};
}

RiskReport risk_report(const LossPmf& pmf, double level) {
  RiskReport r;
  r.var_level = level;
  r.var_value = value_at_risk(pmf, level);
  std::tie(r.mode, r.mode_prob) = mode_of(pmf);
  std::tie(r.mean, r.variance) = loss_moments(pmf);
  r.peaks = find_peaks(pmf);
  return r;
}

std::vector<double> rho_grid(double p, const GridSpec& spec) {
  check_grid_spec(p, spec);
  const RhoInterval iv = rho_bounds(p);
  const double lo = iv.lower + spec.margin;
  const double hi = iv.upper - spec.margin;
  const double step = (hi - lo) / (spec.count - 1);
  std::vector<double> grid(static_cast<std::size_t>(spec.count));
  for (int i = 0; i < spec.count; ++i) grid[i] = lo + step * i;
  grid.back() = hi;
  return grid;
}

ScanResult scan_rho(double p, int n_credits, const GridSpec& spec, double level) {
  ScanResult scan = make_scan(p, n_credits, spec, level);
  const auto count = static_cast<std::ptrdiff_t>(scan.rho_grid.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      scan.reports[i] = evaluate_point(p, n_credits, scan.rho_grid[i], level);
    } catch (...) {
#pragma omp critical(dandelion_scan_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  detect_jump(scan, spec.jump_threshold);
  return scan;
}

ScanResult scan_rho_serial(double p, int n_credits, const GridSpec& spec, double level) {
  ScanResult scan = make_scan(p, n_credits, spec, level);
  for (std::size_t i = 0; i < scan.rho_grid.size(); ++i) {
    scan.reports[i] = evaluate_point(p, n_credits, scan.rho_grid[i], level);
  }
  detect_jump(scan, spec.jump_threshold);
  return scan;
}

int var_mirror_gap(double p, int n_credits, double rho, double level) {
  const int up = value_at_risk(loss_pmf(make_config(n_credits, p, rho)), level);
  const int down = value_at_risk(loss_pmf(make_config(n_credits, p, -rho)), level);
  return up - down;
}

std::size_t nearest_grid_index(const std::vector<double>& grid, double rho) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (std::abs(grid[i] - rho) < std::abs(grid[best] - rho)) best = i;
  }
  return best;
}

}  // namespace dandelion
