#include "dandelion/log_math.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace dandelion {

double log_add_exp(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + std::log1p(std::exp(b - a));
}

double log1p_exp(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

std::vector<double> log_binomial_row(int n) {
  std::vector<double> row(static_cast<std::size_t>(n) + 1);
  const double lg_n = std::lgamma(n + 1.0);
  for (int k = 0; k <= n; ++k) {
    row[k] = lg_n - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  }
  // endpoints are exact zeros; lgamma leaves rounding residue there
  row.front() = 0.0;
  row.back() = 0.0;
  return row;
}

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    carry_ += (sum_ - t) + x;
  } else {
    carry_ += (x - t) + sum_;
  }
  sum_ = t;
}

double compensated_sum(std::span<const double> values) {
  CompensatedSum acc;
  for (double v : values) acc.add(v);
  return acc.value();
}

}  // namespace dandelion
