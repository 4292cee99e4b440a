#pragma once

// Model parameters, admissible correlation region and closed-form calibration
// of the star-graph (Dandelion) Ising model with a common default probability.

#include <utility>

namespace dandelion {

/// Distance from either open correlation bound inside which a config is rejected.
inline constexpr double kBoundEpsilon = 1e-10;

/// Open interval (lower, upper) of admissible central correlations.
struct RhoInterval {
  double lower;
  double upper;

  bool contains(double rho) const { return rho > lower && rho < upper; }
};

/// User-facing parameters: N non-central credits, shared default probability p,
/// correlation rho between the central indicator and each non-central one.
///
/// Construct through make_config(), which enforces every invariant; a
/// ModelConfig obtained that way is always admissible.
struct ModelConfig {
  int n_credits;
  double p;
  double rho;

  /// E[L0 Li] implied by (p, rho).
  double q() const;
};

/// Natural parameters of the joint pmf, with log_z the log partition function.
struct CalibratedParams {
  double alpha;
  double alpha0;
  double beta;
  double log_z;
};

RhoInterval rho_bounds(double p);

double rho_to_q(double p, double rho);
double q_to_rho(double p, double q);

/// Validates (n, p, rho) and throws std::domain_error naming the violated
/// constraint. rho must lie more than kBoundEpsilon inside rho_bounds(p).
ModelConfig make_config(int n_credits, double p, double rho);

/// Throws std::domain_error if cfg breaks any ModelConfig invariant.
void validate(const ModelConfig& cfg);

CalibratedParams calibrate(const ModelConfig& cfg);

/// (P(Li = 1 | L0 = 0), P(Li = 1 | L0 = 1)) = ((p - q) / (1 - p), q / p).
std::pair<double, double> conditional_probs(const ModelConfig& cfg);

}  // namespace dandelion
