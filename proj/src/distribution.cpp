#include "dandelion/distribution.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "dandelion/log_math.hpp"

namespace dandelion {

namespace {

int count_defaults(std::span<const std::uint8_t> l, int n_credits) {
  if (l.size() != static_cast<std::size_t>(n_credits)) {
    throw std::invalid_argument("bit vector has length " + std::to_string(l.size()) +
                                ", expected " + std::to_string(n_credits));
  }
  int s = 0;
  for (std::uint8_t bit : l) {
    if (bit > 1) throw std::invalid_argument("default indicators must be 0 or 1");
    s += bit;
  }
  return s;
}

}  // namespace

LossPmf::LossPmf(std::vector<double> log_mass) : log_mass_(std::move(log_mass)) {
  if (log_mass_.empty()) throw std::invalid_argument("empty loss pmf");
  mass_.resize(log_mass_.size());
  for (std::size_t i = 0; i < log_mass_.size(); ++i) mass_[i] = std::exp(log_mass_[i]);
}

double joint_log_prob_counts(const CalibratedParams& params, int l0, int defaults) {
  if (l0 != 0 && l0 != 1) throw std::invalid_argument("central indicator must be 0 or 1");
  return params.alpha0 * l0 + params.alpha * defaults + params.beta * l0 * defaults -
         params.log_z;
}

double joint_log_prob(const CalibratedParams& params, int l0, std::span<const std::uint8_t> l,
                      int n_credits) {
  return joint_log_prob_counts(params, l0, count_defaults(l, n_credits));
}

double marginal_noncentral_log_prob(const CalibratedParams& params,
                                    std::span<const std::uint8_t> l, int n_credits) {
  const double s = count_defaults(l, n_credits);
  return log_add_exp(params.alpha * s, params.alpha0 + (params.alpha + params.beta) * s) -
         params.log_z;
}

LossPmf loss_pmf(const ModelConfig& cfg) {
  const CalibratedParams params = calibrate(cfg);
  const int n = cfg.n_credits;
  const std::vector<double> log_choose = log_binomial_row(n);
  std::vector<double> log_mass(static_cast<std::size_t>(n) + 1);
  for (int l = 0; l <= n; ++l) {
    log_mass[l] = log_choose[l] +
                  log_add_exp(params.alpha * l, params.alpha0 + l * (params.alpha + params.beta)) -
                  params.log_z;
  }
  return LossPmf(std::move(log_mass));
}

MixtureForm mixture_form(const ModelConfig& cfg) {
  const auto [rate1, rate2] = conditional_probs(cfg);
  return {1.0 - cfg.p, rate1, cfg.p, rate2};
}

double pair_moment(const ModelConfig& cfg) {
  validate(cfg);
  const double p = cfg.p;
  const double q = cfg.q();
  return (p - q) * (p - q) / (1.0 - p) + q * q / p;
}

double rho_noncentral(const ModelConfig& cfg) {
  const double p = cfg.p;
  return (pair_moment(cfg) - p * p) / (p * (1.0 - p));
}

std::pair<double, double> loss_moments(const LossPmf& pmf) {
  CompensatedSum first;
  CompensatedSum second;
  const auto mass = pmf.mass();
  for (std::size_t l = 0; l < mass.size(); ++l) {
    const double x = static_cast<double>(l);
    first.add(x * mass[l]);
    second.add(x * x * mass[l]);
  }
  const double mean = first.value();
  return {mean, second.value() - mean * mean};
}

std::vector<int> find_peaks(const LossPmf& pmf) {
  const auto lm = pmf.log_mass();
  const int size = static_cast<int>(lm.size());
  std::vector<int> peaks;
  int start = 0;
  while (start < size) {
    int end = start;
    while (end + 1 < size && lm[end + 1] == lm[start]) ++end;
    const bool left_lower = start == 0 || lm[start - 1] < lm[start];
    const bool right_lower = end == size - 1 || lm[end + 1] < lm[start];
    if (left_lower && right_lower) peaks.push_back(start);
    start = end + 1;
  }
  return peaks;
}

}  // namespace dandelion
