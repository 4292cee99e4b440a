#include <cmath>
#include <random>
#include <stdexcept>

#include "dandelion/oracle.hpp"

namespace dandelion {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t shard_seed(std::uint64_t seed, std::uint64_t shard) {
  return splitmix64(splitmix64(seed) ^ (shard * 0xD1B54A32D192ED03ull));
}

// uniform in [0, 1) from the top 53 bits
double next_unit(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

struct SamplerSetup {
  double p;
  double rate_given_solvent;
  double rate_given_default;
  int n;
};

SamplerSetup setup(const ModelConfig& cfg) {
  const auto [r0, r1] = conditional_probs(cfg);
  return {cfg.p, r0, r1, cfg.n_credits};
}

void fill_shard(const SamplerSetup& s, std::uint64_t seed, std::size_t shard,
                std::span<Draw> out) {
  std::mt19937_64 gen(shard_seed(seed, shard));
  for (Draw& d : out) {
    d.l0 = next_unit(gen) < s.p ? 1 : 0;
    const double rate = d.l0 ? s.rate_given_default : s.rate_given_solvent;
    int loss = 0;
    for (int i = 0; i < s.n; ++i) loss += next_unit(gen) < rate ? 1 : 0;
    d.loss = loss;
  }
}

std::span<Draw> shard_span(std::vector<Draw>& draws, std::size_t shard) {
  const std::size_t begin = shard * kSampleShardSize;
  const std::size_t len = std::min(kSampleShardSize, draws.size() - begin);
  return std::span<Draw>(draws).subspan(begin, len);
}

void check_count(std::size_t count) {
  if (count == 0) throw std::domain_error("sample count must be at least 1");
}

}  // namespace

std::vector<Draw> sample(const ModelConfig& cfg, std::size_t count, std::uint64_t seed) {
  check_count(count);
  const SamplerSetup s = setup(cfg);
  std::vector<Draw> draws(count);
  const auto shards = static_cast<std::int64_t>((count + kSampleShardSize - 1) / kSampleShardSize);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t k = 0; k < shards; ++k) {
    const auto shard = static_cast<std::size_t>(k);
    fill_shard(s, seed, shard, shard_span(draws, shard));
  }
  return draws;
}

std::vector<Draw> sample_serial(const ModelConfig& cfg, std::size_t count, std::uint64_t seed) {
  check_count(count);
  const SamplerSetup s = setup(cfg);
  std::vector<Draw> draws(count);
  const std::size_t shards = (count + kSampleShardSize - 1) / kSampleShardSize;
  for (std::size_t shard = 0; shard < shards; ++shard) {
    fill_shard(s, seed, shard, shard_span(draws, shard));
  }
  return draws;
}

std::vector<std::uint64_t> loss_histogram(std::span<const Draw> draws, int n_credits) {
  std::vector<std::uint64_t> hist(static_cast<std::size_t>(n_credits) + 1, 0);
  for (const Draw& d : draws) {
    if (d.loss < 0 || d.loss > n_credits) throw std::out_of_range("draw outside loss support");
    ++hist[d.loss];
  }
  return hist;
}

double total_variation(std::span<const std::uint64_t> histogram, const LossPmf& pmf) {
  if (histogram.size() != pmf.mass().size()) {
    throw std::invalid_argument("histogram and pmf supports differ");
  }
  double total = 0.0;
  for (std::uint64_t c : histogram) total += static_cast<double>(c);
  double tv = 0.0;
  for (std::size_t l = 0; l < histogram.size(); ++l) {
    tv += std::abs(static_cast<double>(histogram[l]) / total - pmf.mass()[l]);
  }
  return 0.5 * tv;
}

}  // namespace dandelion
