#include "heatgp/gaussian_ball.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace heatgp {

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;

// Phi(-a) / phi(a) for a > 0 by continued fraction (modified Lentz)
double mills_ratio(double a) {
  if (a < 3.0) return 0.5 * std::erfc(a / std::numbers::sqrt2) * std::exp(0.5 * a * a + kLogSqrt2Pi);
  const double tiny = 1e-300;
  double f = a;
  double c = a;
  double d = 0.0;
  for (int k = 1; k < 500; ++k) {
    d = a + k * d;
    d = std::abs(d) < tiny ? tiny : d;
    c = a + k / c;
    c = std::abs(c) < tiny ? tiny : c;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return 1.0 / f;
}

double log_phi(double x) { return -0.5 * x * x - kLogSqrt2Pi; }

struct Cgf {
  std::span<const double> v, m;
  double value(double s) const {
    double k = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double g = 1.0 - 2.0 * s * v[i];
      k += -0.5 * std::log1p(-2.0 * s * v[i]) + s * m[i] * m[i] / g;
    }
    return k;
  }
  double d1(double s) const {
    double k = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double g = 1.0 - 2.0 * s * v[i];
      k += v[i] / g + m[i] * m[i] / (g * g);
    }
    return k;
  }
  double d2(double s) const {
    double k = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double g = 1.0 - 2.0 * s * v[i];
      k += 2.0 * v[i] * v[i] / (g * g) + 4.0 * v[i] * m[i] * m[i] / (g * g * g);
    }
    return k;
  }
};

}  // namespace

double log_normal_cdf(double x) {
  if (x > -5.0) return std::log(0.5 * std::erfc(-x / std::numbers::sqrt2));
  return log_phi(x) + std::log(mills_ratio(-x));
}

double log_gaussian_ball_probability(std::span<const double> variances, std::span<const double> offsets,
                                     double radius) {
  if (variances.size() != offsets.size()) throw std::invalid_argument("variance/offset length mismatch");
  if (!(radius > 0.0)) return -std::numeric_limits<double>::infinity();
  double vmax = 0.0, total = 0.0;
  for (std::size_t i = 0; i < variances.size(); ++i) {
    if (variances[i] < 0.0) throw std::invalid_argument("negative variance");
    vmax = std::max(vmax, variances[i]);
    total += variances[i] + offsets[i] * offsets[i];
  }
  const double x = radius * radius;
  if (vmax == 0.0) return total <= x ? 0.0 : -std::numeric_limits<double>::infinity();
  const Cgf cgf{variances, offsets};

  // K' is increasing; bracket the saddlepoint
  double lo, hi;
  if (x < total) {
    hi = 0.0;
    lo = -1.0 / vmax;
    while (cgf.d1(lo) > x) {
      hi = lo;
      lo *= 2.0;
      if (lo < -1e300) return -std::numeric_limits<double>::infinity();
    }
  } else {
    lo = 0.0;
    hi = 0.5 / vmax;
  }
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (cgf.d1(mid) > x ? hi : lo) = mid;
  }
  const double s = 0.5 * (lo + hi);
  const double k2 = cgf.d2(s);
  const double wsq = 2.0 * (s * x - cgf.value(s));
  if (std::abs(s) * std::sqrt(k2) < 1e-6 || !(wsq > 0.0)) {
    // saddlepoint at the mean: normal approximation
    return log_normal_cdf((x - total) / std::sqrt(cgf.d2(0.0)));
  }
  const double w = (s > 0 ? 1.0 : -1.0) * std::sqrt(wsq);
  const double u = s * std::sqrt(k2);
  if (w > -5.0) {
    const double p = 0.5 * std::erfc(-w / std::numbers::sqrt2) + std::exp(log_phi(w)) * (1.0 / w - 1.0 / u);
    if (p > 0.0) return std::log(std::min(p, 1.0));
    return log_normal_cdf(w);
  }
  const double tail = mills_ratio(-w) + 1.0 / w - 1.0 / u;
  if (!(tail > 0.0)) return log_normal_cdf(w);
  return log_phi(w) + std::log(tail);
}

}  // namespace heatgp
