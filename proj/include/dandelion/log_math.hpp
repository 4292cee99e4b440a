#pragma once

#include <span>
#include <vector>

namespace dandelion {

/// log(exp(a) + exp(b)) using the max-shift form.
double log_add_exp(double a, double b);

/// log(1 + exp(x)) without overflow for large x or loss of precision for small.
double log1p_exp(double x);

/// log C(n, k) for k = 0..n, via lgamma.
std::vector<double> log_binomial_row(int n);

/// Neumaier-compensated sum.
double compensated_sum(std::span<const double> values);

/// Running compensated accumulator, for reductions that cannot materialize a span.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace dandelion
