#pragma once

// Independent checks of the closed forms: exhaustive enumeration of the joint
// pmf, exact conditional sampling, and a numeric maximum-entropy fit.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dandelion/core_model.hpp"
#include "dandelion/distribution.hpp"

namespace dandelion {

inline constexpr int kMaxEnumerationCredits = 16;
inline constexpr int kMaxFitCredits = 10;

struct EnumerationReport {
  int n = 0;
  double mean_central = 0.0;     // E[L0]
  double mean_noncentral = 0.0;  // E[L1]
  double central_pair = 0.0;     // E[L0 L1]
  double noncentral_pair = 0.0;  // E[L1 L2]
  std::vector<double> loss_pmf_bf;
  double total_mass = 0.0;
};

/// Sums the joint pmf over all 2^(N+1) states. The state space is cut into a
/// fixed number of chunks reduced in chunk order, so the result is the same
/// for any OpenMP thread count. Throws std::domain_error if N > 16.
EnumerationReport enumerate(const ModelConfig& cfg);

/// Single-threaded reference for enumerate().
EnumerationReport enumerate_serial(const ModelConfig& cfg);

struct Draw {
  int l0;
  int loss;

  bool operator==(const Draw&) const = default;
};

/// Name of the generator scheme used by sample(); recorded in run manifests.
inline constexpr std::string_view kSamplerGenerator = "mt19937_64/splitmix64-shards-65536";
inline constexpr std::size_t kSampleShardSize = 65536;

/// Draws L0 ~ Bernoulli(p), then N conditionally independent Li. Draws are cut
/// into shards of kSampleShardSize whose generators are seeded from
/// (seed, shard index), so output depends only on (cfg, count, seed).
std::vector<Draw> sample(const ModelConfig& cfg, std::size_t count, std::uint64_t seed);

/// Single-threaded reference for sample(); produces the identical stream.
std::vector<Draw> sample_serial(const ModelConfig& cfg, std::size_t count, std::uint64_t seed);

std::vector<std::uint64_t> loss_histogram(std::span<const Draw> draws, int n_credits);

/// 0.5 * sum |empirical - pmf| over the support.
double total_variation(std::span<const std::uint64_t> histogram, const LossPmf& pmf);

// Maximum-entropy fit. Natural parameters use the "+" sign convention of the
// joint pmf: theta = (central field, non-central field, coupling) multiplies
// the pooled statistics T = (l0, sum li, l0 * sum li). Lagrange multipliers in
// the exp(-sum lambda f) convention are -theta.

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

struct PooledMoments {
  double log_z = 0.0;
  Vec3 mean{};  // gradient of log Z
  Mat3 cov{};   // Hessian of log Z
};

/// log Z, E[T] and Cov(T) by exhaustive enumeration (N <= 10).
PooledMoments pooled_moments(const Vec3& theta, int n_credits);

struct MaxEntFit {
  Vec3 lagrange{};
  double residual_norm = 0.0;
  CalibratedParams matched_params{};
  int iterations = 0;
  bool converged = false;
};

struct MaxEntOptions {
  double tol = 1e-11;
  int max_iters = 200;
  int max_halvings = 30;
};

/// Damped Newton solve of E_theta[T] = (p, N p, N q). Starts from init, or
/// from the closed-form calibration perturbed by 0.5 in each coordinate when
/// init is empty; retries from all zeros if that start fails. A failed fit
/// returns converged = false with the best residual norm reached.
MaxEntFit maxent_fit_small(double p, double q, int n_credits, std::optional<Vec3> init = {},
                           const MaxEntOptions& options = {});

}  // namespace dandelion
