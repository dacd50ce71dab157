#include "heatgp/hyperprior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace heatgp {

namespace {

constexpr int kTableCells = 4096;

// log of the unnormalized density in u = log t, including the dt = t du factor
double log_kernel_in_u(double a, double q, int d, double u) {
  const double t = std::exp(u);
  const double log_inv = -u;
  return -a * u - std::pow(t, -0.5 * d) * std::pow(log_inv, q) + u;
}

double integrate_u(const HyperpriorParams& p, double shift, double power) {
  auto f = [&](double u) {
    return std::exp(log_kernel_in_u(p.a, p.q, p.d, u) + power * u - shift);
  };
  const double lo = std::log(p.t_min);
  // split at a few points so the adaptive rule sees the peak
  double total = 0.0;
  const int pieces = 16;
  for (int i = 0; i < pieces; ++i) {
    const double a = lo + (0.0 - lo) * i / pieces;
    const double b = lo + (0.0 - lo) * (i + 1) / pieces;
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14);
  }
  return total;
}

double grid_shift(double a, double q, int d, double t_min) {
  double m = -std::numeric_limits<double>::infinity();
  const double lo = std::log(t_min);
  for (int i = 0; i <= 2000; ++i) m = std::max(m, log_kernel_in_u(a, q, d, lo * (1.0 - i / 2000.0)));
  return m;
}

}  // namespace

HyperpriorParams make_hyperprior(double a, int d, std::optional<double> q, double t_min) {
  if (!(a > 1.0)) throw std::invalid_argument("hyperprior needs a > 1");
  if (d < 1) throw std::invalid_argument("hyperprior needs d >= 1");
  if (!(t_min > 0.0 && t_min < 1.0)) throw std::invalid_argument("hyperprior needs t_min in (0, 1)");
  HyperpriorParams p;
  p.a = a;
  p.d = d;
  p.q = q.value_or(1.0 + 0.5 * d);
  if (!(p.q > 0.0)) throw std::invalid_argument("hyperprior needs q > 0");
  p.t_min = t_min;

  const double shift = grid_shift(p.a, p.q, p.d, t_min);
  const double mass = integrate_u(p, shift, 0.0);
  p.log_normalizer = -(shift + std::log(mass));

  auto table = std::make_shared<HyperpriorTable>();
  const double lo = std::log(t_min);
  table->log_t.resize(kTableCells + 1);
  table->cdf.resize(kTableCells + 1);
  for (int i = 0; i <= kTableCells; ++i) table->log_t[i] = lo * (1.0 - static_cast<double>(i) / kTableCells);
  table->log_t.back() = 0.0;
  table->cdf[0] = 0.0;
  for (int i = 0; i < kTableCells; ++i) {
    const double a0 = table->log_t[i], b0 = table->log_t[i + 1];
    const double cell = boost::math::quadrature::gauss<double, 10>::integrate(
        [&](double u) { return std::exp(log_kernel_in_u(p.a, p.q, p.d, u) + p.log_normalizer); }, a0, b0);
    table->cdf[i + 1] = table->cdf[i] + cell;
  }
  const double total = table->cdf.back();
  for (double& c : table->cdf) c /= total;
  p.table = std::move(table);
  return p;
}

double hyperprior_logdensity(const HyperpriorParams& params, double t) {
  if (!(t > params.t_min && t <= 1.0)) return -std::numeric_limits<double>::infinity();
  return -params.a * std::log(t) - std::pow(t, -0.5 * params.d) * std::pow(std::log(1.0 / t), params.q) +
         params.log_normalizer;
}

double hyperprior_cdf(const HyperpriorParams& params, double t) {
  if (t <= params.t_min) return 0.0;
  if (t >= 1.0) return 1.0;
  const auto& tab = *params.table;
  const double u = std::log(t);
  const auto it = std::upper_bound(tab.log_t.begin(), tab.log_t.end(), u);
  const std::size_t i = std::min<std::size_t>(it - tab.log_t.begin(), tab.log_t.size() - 1);
  const double w = (u - tab.log_t[i - 1]) / (tab.log_t[i] - tab.log_t[i - 1]);
  return tab.cdf[i - 1] + w * (tab.cdf[i] - tab.cdf[i - 1]);
}

double hyperprior_quantile(const HyperpriorParams& params, double u) {
  const auto& tab = *params.table;
  if (u <= 0.0) return params.t_min;
  if (u >= 1.0) return 1.0;
  const auto it = std::upper_bound(tab.cdf.begin(), tab.cdf.end(), u);
  std::size_t i = std::clamp<std::size_t>(it - tab.cdf.begin(), 1, tab.cdf.size() - 1);
  const double span = tab.cdf[i] - tab.cdf[i - 1];
  const double w = span > 0.0 ? (u - tab.cdf[i - 1]) / span : 0.5;
  const double t = std::exp(tab.log_t[i - 1] + w * (tab.log_t[i] - tab.log_t[i - 1]));
  return std::clamp(t, std::nextafter(params.t_min, 1.0), 1.0);
}

double hyperprior_sample(const HyperpriorParams& params, RandomStream& rng) {
  return hyperprior_quantile(params, rng.uniform());
}

double hyperprior_moment(const HyperpriorParams& params, double power) {
  const double shift = grid_shift(params.a, params.q, params.d, params.t_min);
  return integrate_u(params, shift, power) * std::exp(shift + params.log_normalizer);
}

}  // namespace heatgp
