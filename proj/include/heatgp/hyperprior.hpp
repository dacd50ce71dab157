#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "heatgp/rng.hpp"

namespace heatgp {

struct HyperpriorTable {
  std::vector<double> log_t;  // increasing, from log t_min to 0
  std::vector<double> cdf;    // cumulative mass at each grid point
};

// Density on (t_min, 1] proportional to t^{-a} exp(-t^{-d/2} log(1/t)^q).
struct HyperpriorParams {
  double a = 2.0;
  double q = 1.5;
  int d = 1;
  double t_min = 1e-3;
  double log_normalizer = 0.0;
  std::shared_ptr<const HyperpriorTable> table;
};

HyperpriorParams make_hyperprior(double a, int d, std::optional<double> q = std::nullopt, double t_min = 1e-3);

double hyperprior_logdensity(const HyperpriorParams& params, double t);
double hyperprior_cdf(const HyperpriorParams& params, double t);
double hyperprior_quantile(const HyperpriorParams& params, double u);
double hyperprior_sample(const HyperpriorParams& params, RandomStream& rng);

// int t^power g(t) dt by adaptive quadrature
double hyperprior_moment(const HyperpriorParams& params, double power);

}  // namespace heatgp
