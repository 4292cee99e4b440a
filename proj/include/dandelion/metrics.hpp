#pragma once

// Risk metrics over a loss pmf and correlation scans.

#include <optional>
#include <vector>

#include "dandelion/core_model.hpp"
#include "dandelion/distribution.hpp"

namespace dandelion {

struct RiskReport {
  double var_level = 0.0;
  int var_value = 0;
  int mode = 0;
  double mode_prob = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  std::vector<int> peaks;
};

struct GridSpec {
  int count = 201;
  /// distance kept from each open correlation bound
  double margin = 1e-3;
  /// smallest adjacent mode change reported as a jump
  int jump_threshold = 10;
};

struct ScanResult {
  double p = 0.0;
  int n_credits = 0;
  double var_level = 0.0;
  std::vector<double> rho_grid;
  std::vector<RiskReport> reports;
  std::optional<double> rho_star;
  /// mode(right of jump) - mode(left of jump); 0 when no jump was detected
  int jump_size = 0;
  /// index of the left grid point of the jump pair
  std::optional<std::size_t> jump_index;
};

/// Smallest l whose cumulative mass reaches level. Throws std::domain_error
/// unless 0 < level < 1.
int value_at_risk(const LossPmf& pmf, double level);

/// (argmax, mass at argmax); ties go to the smallest loss.
std::pair<int, double> mode_of(const LossPmf& pmf);

RiskReport risk_report(const LossPmf& pmf, double level);

/// `count` evenly spaced correlations from lower + margin to upper - margin.
std::vector<double> rho_grid(double p, const GridSpec& spec);

/// Evaluates every grid point in parallel (OpenMP); results are stored in grid
/// order and do not depend on the thread count.
ScanResult scan_rho(double p, int n_credits, const GridSpec& spec, double level = 0.99);

/// Single-threaded reference for scan_rho.
ScanResult scan_rho_serial(double p, int n_credits, const GridSpec& spec, double level = 0.99);

/// VaR(rho) - VaR(-rho) at the given level; rho and -rho must both be admissible.
int var_mirror_gap(double p, int n_credits, double rho, double level);

/// Index of the grid point closest to rho (first one on ties).
std::size_t nearest_grid_index(const std::vector<double>& grid, double rho);

}  // namespace dandelion
