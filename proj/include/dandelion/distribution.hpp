#pragma once

// Exact joint, marginal and loss distributions of the star-graph model.
// The loss L counts defaults among the N non-central credits only; the
// central node's indicator L0 is not part of the loss.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "dandelion/core_model.hpp"

namespace dandelion {

/// Probability mass of L on {0, ..., n}, held in log space with a linear view.
class LossPmf {
 public:
  LossPmf() = default;
  explicit LossPmf(std::vector<double> log_mass);

  int n() const { return static_cast<int>(log_mass_.size()) - 1; }
  std::span<const double> log_mass() const { return log_mass_; }
  std::span<const double> mass() const { return mass_; }
  double operator[](int l) const { return mass_[static_cast<std::size_t>(l)]; }

 private:
  std::vector<double> log_mass_;
  std::vector<double> mass_;
};

/// Two-component binomial mixture equivalent to the loss pmf:
/// weight1 * Binom(N, rate1) + weight2 * Binom(N, rate2), branch 1 being L0 = 0.
struct MixtureForm {
  double weight1;
  double rate1;
  double weight2;
  double rate2;
};

/// log P(l0, l) for the joint pmf over the central bit and N non-central bits.
double joint_log_prob(const CalibratedParams& params, int l0, std::span<const std::uint8_t> l,
                      int n_credits);

/// Same as joint_log_prob, by sufficient statistics (l0, sum of non-central bits).
double joint_log_prob_counts(const CalibratedParams& params, int l0, int defaults);

/// log P'(l) with the central node summed out.
double marginal_noncentral_log_prob(const CalibratedParams& params,
                                    std::span<const std::uint8_t> l, int n_credits);

LossPmf loss_pmf(const ModelConfig& cfg);

MixtureForm mixture_form(const ModelConfig& cfg);

/// E[Li Lj] for distinct non-central credits.
double pair_moment(const ModelConfig& cfg);

/// Correlation between two distinct non-central indicators.
double rho_noncentral(const ModelConfig& cfg);

/// (mean, variance) of L.
std::pair<double, double> loss_moments(const LossPmf& pmf);

/// Local maxima of the pmf. A maximal run of equal masses is a peak when every
/// existing neighbour outside the run is strictly smaller; it is reported once,
/// at the run's leftmost index. Comparison is done on log masses.
std::vector<int> find_peaks(const LossPmf& pmf);

}  // namespace dandelion
