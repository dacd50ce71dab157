#pragma once

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "heatgp/manifold.hpp"

namespace heatgp {

struct TruncationPolicy {
  double tol = 1e-12;
  int K_max = 10000;
};

class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Upper bound on sum_{k>K} exp(-lambda_k t) * multiplicity(k).
double spectral_tail_bound(const ManifoldModel& model, double t, int K);

// Smallest K whose tail bound is below policy.tol.
int choose_truncation(const ManifoldModel& model, double t, const TruncationPolicy& policy = {});

// Truncated spectral sum (no theta acceleration).
double heat_kernel_spectral(const ManifoldModel& model, double t, const Point& x, const Point& y,
                            const TruncationPolicy& policy = {});

// Circle uses the image sum for t < 0.05, everything else the spectral sum.
double heat_kernel_eval(const ManifoldModel& model, double t, const Point& x, const Point& y,
                        const TruncationPolicy& policy = {});

double circle_theta_eval(double t, double x, double y);

double heat_trace(const ManifoldModel& model, double t, const TruncationPolicy& policy = {});

using PointPair = std::pair<Point, Point>;

struct EnvelopeFit {
  double C_upper = 0.0;
  double c_upper = 0.0;
  double C_lower = 0.0;
  double c_lower = 0.0;
  double residual = 0.0;    // max relative violation of either envelope
  double upper_gap = 0.0;   // max log distance from the upper envelope
  double lower_gap = 0.0;
  std::size_t used = 0;
  std::size_t skipped = 0;  // round-off dominated kernel values left out
};

// Fits C t^{-d/2} exp(-c rho^2 / t) from above and below.
EnvelopeFit envelope_fit(const ManifoldModel& model, std::span<const double> t_grid,
                         std::span<const PointPair> pairs, const TruncationPolicy& policy = {});

void write_kernel_csv(std::ostream& os, const ManifoldModel& model, std::span<const double> t_grid,
                      std::span<const PointPair> pairs, const TruncationPolicy& policy = {});

}  // namespace heatgp
