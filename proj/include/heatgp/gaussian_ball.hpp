#pragma once

#include <span>

namespace heatgp {

// log P( sum_i (sqrt(v_i) Z_i + m_i)^2 <= r^2 ), Z standard normal, by the
// Lugannani-Rice saddlepoint approximation. Accurate in relative terms far
// into the lower tail, where Monte Carlo returns zero.
double log_gaussian_ball_probability(std::span<const double> variances, std::span<const double> offsets,
                                     double radius);

// log of the standard normal CDF, stable for very negative arguments
double log_normal_cdf(double x);

}  // namespace heatgp
