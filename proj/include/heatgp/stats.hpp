#pragma once

#include <functional>
#include <span>
#include <vector>

namespace heatgp {

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double slope_se = 0.0;
  double r2 = 0.0;
  std::size_t count = 0;
  bool degenerate = false;  // fewer than three points or no spread in x
};

LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

// Ordinary least squares with an intercept column prepended.
struct MultiFit {
  std::vector<double> coef;  // intercept first
  std::vector<double> se;
  double r2 = 0.0;
};
MultiFit multiple_fit(const std::vector<std::vector<double>>& columns, std::span<const double> y);

double log_sum_exp(std::span<const double> v);
double mean(std::span<const double> v);
double variance(std::span<const double> v);  // unbiased
double quantile(std::vector<double> v, double p);

// sup |F_n - F| for a sample and a continuous CDF
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);
// two-sample KS statistic
double ks_two_sample(std::vector<double> a, std::vector<double> b);

double wilson_halfwidth(std::size_t hits, std::size_t trials, double z = 1.959963984540054);

}  // namespace heatgp
