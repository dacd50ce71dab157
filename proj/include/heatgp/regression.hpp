#pragma once

#include <vector>

#include <Eigen/Core>

#include "heatgp/basis.hpp"
#include "heatgp/whitenoise.hpp"

namespace heatgp {

struct RegressionData {
  std::vector<Point> points;
  std::vector<double> y;
};

RegressionData simulate_regression(const BandVector& f0, const BasisEvaluator& basis, std::vector<Point> points,
                                   RandomStream& rng, double noise_sd = 1.0);

enum class RegressionRoute {
  Auto,           // function space when n <= basis size, weight space otherwise
  FunctionSpace,  // Cholesky of K_t + I (n x n)
  WeightSpace,    // Cholesky of I + S Phi^T Phi S (M x M)
};

// The mixture's `means` hold posterior means of the spectral coefficients;
// `variances` stays empty because the coefficient posterior is not diagonal.
struct RegressionPosterior {
  PosteriorMixture mixture;
  RegressionRoute route = RegressionRoute::Auto;
  std::vector<double> log_marginal;  // log N(Y; 0, K_t + I) per grid time
};

RegressionPosterior regression_posterior(const RegressionData& data, const BasisEvaluator& basis,
                                         const HyperpriorParams& params, const TimeGrid& grid,
                                         RegressionRoute route = RegressionRoute::Auto);

struct PointPosterior {
  double mean = 0.0;
  double variance = 0.0;
};

// Posterior of f(x) at a single rescaling time.
PointPosterior regression_predict(const RegressionData& data, const BasisEvaluator& basis, double t, const Point& x);

// d_n(f1, f2) = sqrt(mean over design points of (f1 - f2)^2)
double empirical_distance(const BandVector& a, const BandVector& b, const BasisEvaluator& basis,
                          const std::vector<Point>& points);

}  // namespace heatgp
