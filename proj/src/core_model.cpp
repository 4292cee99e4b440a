#include "dandelion/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dandelion/format.hpp"
#include "dandelion/log_math.hpp"

namespace dandelion {

namespace {

void require_probability(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    std::ostringstream msg;
    msg << "default probability p = " << format_double(p) << " must lie in (0, 1)";
    throw std::domain_error(msg.str());
  }
}

std::string interval_text(const RhoInterval& iv) {
  return "(" + format_double(iv.lower) + ", " + format_double(iv.upper) + ")";
}

}  // namespace

double ModelConfig::q() const { return rho_to_q(p, rho); }

RhoInterval rho_bounds(double p) {
  require_probability(p);
  return {std::max(-p / (1.0 - p), -(1.0 - p) / p), 1.0};
}

double rho_to_q(double p, double rho) {
  require_probability(p);
  const double q = rho * p * (1.0 - p) + p * p;
  if (!(q > 0.0 && q < p)) {
    std::ostringstream msg;
    msg << "rho = " << format_double(rho) << " gives q = " << format_double(q)
        << " outside (0, p) for p = " << format_double(p);
    throw std::domain_error(msg.str());
  }
  return q;
}

double q_to_rho(double p, double q) {
  require_probability(p);
  if (!(q > 0.0 && q < p)) {
    std::ostringstream msg;
    msg << "second moment q = " << format_double(q) << " must lie in (0, p) with p = "
        << format_double(p);
    throw std::domain_error(msg.str());
  }
  return (q - p * p) / (p * (1.0 - p));
}

void validate(const ModelConfig& cfg) {
  if (cfg.n_credits < 2) {
    throw std::domain_error("n_credits = " + std::to_string(cfg.n_credits) +
                            " must be at least 2");
  }
  const RhoInterval iv = rho_bounds(cfg.p);
  if (!(cfg.rho > iv.lower + kBoundEpsilon && cfg.rho < iv.upper - kBoundEpsilon)) {
    std::ostringstream msg;
    msg << "correlation rho = " << format_double(cfg.rho)
        << " is not admissible for p = " << format_double(cfg.p)
        << ": must lie in the open interval " << interval_text(iv);
    if (iv.contains(cfg.rho)) msg << " and at least " << kBoundEpsilon << " from its ends";
    throw std::domain_error(msg.str());
  }
  const double q = rho_to_q(cfg.p, cfg.rho);
  if (!(1.0 - 2.0 * cfg.p + q > 0.0)) {
    throw std::domain_error("1 - 2p + q must be positive");
  }
}

ModelConfig make_config(int n_credits, double p, double rho) {
  ModelConfig cfg{n_credits, p, rho};
  validate(cfg);
  return cfg;
}

CalibratedParams calibrate(const ModelConfig& cfg) {
  validate(cfg);
  const double p = cfg.p;
  const double q = cfg.q();
  const double n = cfg.n_credits;

  const double p_minus_q = p - q;
  const double denom = 1.0 - 2.0 * p + q;
  if (!(p_minus_q > 0.0 && denom > 0.0 && q > 0.0)) {
    throw std::domain_error("calibration logarithm argument is non-positive");
  }

  CalibratedParams out{};
  out.alpha = std::log(p_minus_q / denom);
  out.alpha0 = (n - 1.0) * std::log((1.0 - p) / p) + n * out.alpha;
  out.beta = std::log(q / p_minus_q) - out.alpha;
  // Z = (1 + e^a)^N + e^a0 (1 + e^(a + b))^N, summed in log space
  const double branch0 = n * log1p_exp(out.alpha);
  const double branch1 = out.alpha0 + n * log1p_exp(out.alpha + out.beta);
  out.log_z = log_add_exp(branch0, branch1);
  return out;
}

std::pair<double, double> conditional_probs(const ModelConfig& cfg) {
  validate(cfg);
  const double q = cfg.q();
  return {(cfg.p - q) / (1.0 - cfg.p), q / cfg.p};
}

}  // namespace dandelion
