#pragma once

#include <vector>

#include "heatgp/hyperprior.hpp"
#include "heatgp/layout.hpp"

namespace heatgp {

// Grid over the rescaling time: points at the log-centres of cells whose
// widths enter the mixture weights.
struct TimeGrid {
  std::vector<double> t;
  std::vector<double> log_width;
  std::size_t size() const { return t.size(); }
};

// `count` log-equal cells spanning (t_min, t_max].
TimeGrid log_time_grid(double t_min, int count = 64, double t_max = 1.0);
// Arbitrary increasing points; cell edges at log-midpoints, clipped to [lo, hi].
TimeGrid time_grid_from_points(std::vector<double> points, double lo, double hi);

// Band limit shared by all grid times: tail below tol at t_min.
int inference_truncation(const ManifoldModel& model, double t_min, double tol = 1e-10);

struct WhiteNoiseData {
  double n = 1.0;
  BandVector X;
};

WhiteNoiseData simulate_whitenoise(const BandVector& f0, double n, int K, RandomStream& rng);

// Mixture over grid times of coefficient-wise Gaussian laws.
struct PosteriorMixture {
  TimeGrid grid;
  std::vector<double> log_weights;  // normalized
  LayoutPtr layout;
  std::vector<std::vector<double>> means;      // [grid index][slot]
  std::vector<std::vector<double>> variances;  // empty for regression
  std::vector<double> weights() const;
  BandVector posterior_mean() const;
  double mean_time() const;
};

PosteriorMixture whitenoise_posterior(const WhiteNoiseData& data, const HyperpriorParams& params, const TimeGrid& grid);

BandVector sample_posterior(const PosteriorMixture& post, RandomStream& rng);

struct PosteriorFunctional {
  double mean_l2_error = 0.0;
  double credible_radius = 0.0;
};

PosteriorFunctional posterior_functional(const PosteriorMixture& post, const BandVector& f0, double gamma,
                                         std::size_t draws, RandomStream rng);

// log posterior mass of {||f - center||_2 <= radius}: exact Gaussian law per
// grid time (saddlepoint CDF), mixed with the log weights.
double posterior_ball_log_mass(const PosteriorMixture& post, const BandVector& center, double radius);
double posterior_ball_mass_mc(const PosteriorMixture& post, const BandVector& center, double radius,
                              std::size_t draws, RandomStream rng);

}  // namespace heatgp
