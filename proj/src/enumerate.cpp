#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dandelion/log_math.hpp"
#include "dandelion/oracle.hpp"

namespace dandelion {

namespace {

constexpr std::uint64_t kChunks = 64;

struct Accumulator {
  CompensatedSum mass;
  CompensatedSum central;
  CompensatedSum noncentral;
  CompensatedSum central_pair;
  CompensatedSum noncentral_pair;
  std::vector<CompensatedSum> by_loss;

  explicit Accumulator(int n) : by_loss(static_cast<std::size_t>(n) + 1) {}

  // state bit 0 is l0, bits 1..N are l1..lN
  void add_state(const CalibratedParams& params, std::uint64_t state) {
    const int l0 = static_cast<int>(state & 1u);
    const std::uint64_t rest = state >> 1;
    const int defaults = std::popcount(rest);
    const double w = std::exp(joint_log_prob_counts(params, l0, defaults));
    const int l1 = static_cast<int>(rest & 1u);
    const int l2 = static_cast<int>((rest >> 1) & 1u);
    mass.add(w);
    if (l0) central.add(w);
    if (l1) noncentral.add(w);
    if (l0 && l1) central_pair.add(w);
    if (l1 && l2) noncentral_pair.add(w);
    by_loss[defaults].add(w);
  }

  void merge(const Accumulator& other) {
    mass.add(other.mass.value());
    central.add(other.central.value());
    noncentral.add(other.noncentral.value());
    central_pair.add(other.central_pair.value());
    noncentral_pair.add(other.noncentral_pair.value());
    for (std::size_t l = 0; l < by_loss.size(); ++l) by_loss[l].add(other.by_loss[l].value());
  }

  EnumerationReport report(int n) const {
    EnumerationReport r;
    r.n = n;
    r.total_mass = mass.value();
    r.mean_central = central.value();
    r.mean_noncentral = noncentral.value();
    r.central_pair = central_pair.value();
    r.noncentral_pair = noncentral_pair.value();
    r.loss_pmf_bf.reserve(by_loss.size());
    for (const auto& s : by_loss) r.loss_pmf_bf.push_back(s.value());
    return r;
  }
};

std::uint64_t state_count(const ModelConfig& cfg) {
  validate(cfg);
  if (cfg.n_credits > kMaxEnumerationCredits) {
    throw std::domain_error("enumeration is capped at N = " +
                            std::to_string(kMaxEnumerationCredits) + ", got N = " +
                            std::to_string(cfg.n_credits));
  }
  return std::uint64_t{1} << (cfg.n_credits + 1);
}

}  // namespace

EnumerationReport enumerate(const ModelConfig& cfg) {
  const std::uint64_t states = state_count(cfg);
  const CalibratedParams params = calibrate(cfg);
  const std::uint64_t chunk = (states + kChunks - 1) / kChunks;
  std::vector<Accumulator> partial(kChunks, Accumulator(cfg.n_credits));

#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(kChunks); ++c) {
    const std::uint64_t begin = static_cast<std::uint64_t>(c) * chunk;
    const std::uint64_t end = std::min(states, begin + chunk);
    for (std::uint64_t s = begin; s < end; ++s) partial[c].add_state(params, s);
  }

  Accumulator total(cfg.n_credits);
  for (const auto& part : partial) total.merge(part);
  return total.report(cfg.n_credits);
}

EnumerationReport enumerate_serial(const ModelConfig& cfg) {
  const std::uint64_t states = state_count(cfg);
  const CalibratedParams params = calibrate(cfg);
  Accumulator total(cfg.n_credits);
  for (std::uint64_t s = 0; s < states; ++s) total.add_state(params, s);
  return total.report(cfg.n_credits);
}

}  // namespace dandelion
