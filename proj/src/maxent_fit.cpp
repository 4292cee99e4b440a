#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "dandelion/log_math.hpp"
#include "dandelion/oracle.hpp"

namespace dandelion {

namespace {

Vec3 statistics(std::uint64_t state) {
  const double l0 = static_cast<double>(state & 1u);
  const double s = std::popcount(state >> 1);
  return {l0, s, l0 * s};
}

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

Vec3 residual(const PooledMoments& m, const Vec3& target) {
  return {m.mean[0] - target[0], m.mean[1] - target[1], m.mean[2] - target[2]};
}

struct Attempt {
  Vec3 theta;
  PooledMoments moments;
  double residual_norm;
  int iterations;
  bool converged;
};

Attempt newton(Vec3 theta, const Vec3& target, int n, const MaxEntOptions& opt) {
  PooledMoments m = pooled_moments(theta, n);
  double r_norm = norm(residual(m, target));
  int iter = 0;
  for (; iter < opt.max_iters && r_norm >= opt.tol; ++iter) {
    const Vec3 r = residual(m, target);
    Eigen::Matrix3d h;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) h(i, j) = m.cov[i][j];
    const Eigen::Vector3d step = h.fullPivLu().solve(-Eigen::Vector3d(r[0], r[1], r[2]));
    if (!step.allFinite()) break;

    double scale = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= opt.max_halvings; ++halving, scale *= 0.5) {
      const Vec3 cand{theta[0] + scale * step[0], theta[1] + scale * step[1],
                      theta[2] + scale * step[2]};
      PooledMoments cm = pooled_moments(cand, n);
      const double c_norm = norm(residual(cm, target));
      if (std::isfinite(c_norm) && c_norm < r_norm) {
        theta = cand;
        m = cm;
        r_norm = c_norm;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  return {theta, m, r_norm, iter, r_norm < opt.tol};
}

}  // namespace

PooledMoments pooled_moments(const Vec3& theta, int n_credits) {
  if (n_credits < 1 || n_credits > kMaxFitCredits) {
    throw std::domain_error("pooled moments need 1 <= N <= " + std::to_string(kMaxFitCredits));
  }
  const std::uint64_t states = std::uint64_t{1} << (n_credits + 1);
  double log_z = -std::numeric_limits<double>::infinity();
  for (std::uint64_t s = 0; s < states; ++s) log_z = log_add_exp(log_z, dot(theta, statistics(s)));

  long double first[3] = {0, 0, 0};
  long double second[3][3] = {};
  for (std::uint64_t s = 0; s < states; ++s) {
    const Vec3 t = statistics(s);
    const long double w = std::exp(dot(theta, t) - log_z);
    for (int i = 0; i < 3; ++i) {
      first[i] += w * t[i];
      for (int j = 0; j < 3; ++j) second[i][j] += w * t[i] * t[j];
    }
  }
  PooledMoments out;
  out.log_z = log_z;
  for (int i = 0; i < 3; ++i) {
    out.mean[i] = static_cast<double>(first[i]);
    for (int j = 0; j < 3; ++j) {
      out.cov[i][j] = static_cast<double>(second[i][j] - first[i] * first[j]);
    }
  }
  return out;
}

MaxEntFit maxent_fit_small(double p, double q, int n_credits, std::optional<Vec3> init,
                           const MaxEntOptions& options) {
  if (n_credits < 2 || n_credits > kMaxFitCredits) {
    throw std::domain_error("MaxEnt fit needs 2 <= N <= " + std::to_string(kMaxFitCredits));
  }
  const ModelConfig cfg = make_config(n_credits, p, q_to_rho(p, q));
  const Vec3 target{p, n_credits * p, n_credits * q};

  Vec3 start;
  if (init) {
    start = *init;
  } else {
    const CalibratedParams closed = calibrate(cfg);
    start = {closed.alpha0 + 0.5, closed.alpha + 0.5, closed.beta + 0.5};
  }

  Attempt best = newton(start, target, n_credits, options);
  if (!best.converged) {
    Attempt fallback = newton(Vec3{0.0, 0.0, 0.0}, target, n_credits, options);
    fallback.iterations += best.iterations;
    if (fallback.converged || fallback.residual_norm < best.residual_norm) best = fallback;
  }

  MaxEntFit fit;
  fit.lagrange = best.theta;
  fit.residual_norm = best.residual_norm;
  fit.matched_params = {best.theta[1], best.theta[0], best.theta[2], best.moments.log_z};
  fit.iterations = best.iterations;
  fit.converged = best.converged;
  return fit;
}

}  // namespace dandelion
