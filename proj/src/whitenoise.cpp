#include "heatgp/whitenoise.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "heatgp/gaussian_ball.hpp"
#include "heatgp/heat_kernel.hpp"
#include "heatgp/stats.hpp"

namespace heatgp {

TimeGrid log_time_grid(double t_min, int count, double t_max) {
  if (count < 1) throw std::invalid_argument("time grid needs at least one cell");
  if (!(t_min > 0.0 && t_max > t_min)) throw std::invalid_argument("time grid needs 0 < t_min < t_max");
  TimeGrid g;
  const double lo = std::log(t_min), hi = std::log(t_max);
  for (int i = 0; i < count; ++i) {
    const double a = lo + (hi - lo) * i / count;
    const double b = lo + (hi - lo) * (i + 1) / count;
    g.t.push_back(std::exp(0.5 * (a + b)));
    g.log_width.push_back(std::log(std::exp(b) - std::exp(a)));
  }
  return g;
}

TimeGrid time_grid_from_points(std::vector<double> points, double lo, double hi) {
  if (points.empty()) throw std::invalid_argument("time grid is empty");
  if (!std::is_sorted(points.begin(), points.end())) throw std::invalid_argument("time grid must increase");
  TimeGrid g;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double a = i == 0 ? lo : std::sqrt(points[i - 1] * points[i]);
    const double b = i + 1 == points.size() ? hi : std::sqrt(points[i] * points[i + 1]);
    if (!(b > a)) throw std::invalid_argument("time grid cell has no width");
    g.t.push_back(points[i]);
    g.log_width.push_back(std::log(b - a));
  }
  return g;
}

int inference_truncation(const ManifoldModel& model, double t_min, double tol) {
  return choose_truncation(model, t_min, {tol, 10000});
}

WhiteNoiseData simulate_whitenoise(const BandVector& f0, double n, int K, RandomStream& rng) {
  if (!(n > 0.0)) throw std::invalid_argument("white noise needs n > 0");
  WhiteNoiseData d{n, f0.with_truncation(K)};
  const double scale = 1.0 / std::sqrt(n);
  for (double& x : d.X.values()) x += scale * rng.normal();
  return d;
}

std::vector<double> PosteriorMixture::weights() const {
  std::vector<double> w(log_weights.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(log_weights[i]);
  return w;
}

BandVector PosteriorMixture::posterior_mean() const {
  BandVector m(layout);
  const auto w = weights();
  for (std::size_t g = 0; g < means.size(); ++g) {
    if (w[g] == 0.0) continue;
    for (std::size_t i = 0; i < m.size(); ++i) m[i] += w[g] * means[g][i];
  }
  return m;
}

double PosteriorMixture::mean_time() const {
  const auto w = weights();
  double s = 0.0;
  for (std::size_t g = 0; g < w.size(); ++g) s += w[g] * grid.t[g];
  return s;
}

PosteriorMixture whitenoise_posterior(const WhiteNoiseData& data, const HyperpriorParams& params, const TimeGrid& grid) {
  if (grid.size() == 0) throw std::invalid_argument("posterior needs a nonempty time grid");
  PosteriorMixture post;
  post.grid = grid;
  post.layout = data.X.layout_ptr();
  const auto lambdas = data.X.layout().slot_eigenvalues();
  const double noise = 1.0 / data.n;
  constexpr double kLog2Pi = 1.8378770664093454836;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double t = grid.t[g];
    if (!(t > params.t_min && t <= 1.0)) throw std::invalid_argument("grid time outside hyperprior support");
    std::vector<double> mean(data.X.size()), var(data.X.size());
    double loglik = 0.0;
    for (std::size_t i = 0; i < data.X.size(); ++i) {
      const double prior = std::exp(-lambdas[i] * t);
      const double total = prior + noise;
      const double x = data.X[i];
      mean[i] = prior / total * x;
      var[i] = prior * noise / total;
      loglik += -0.5 * (x * x / total + std::log(total) + kLog2Pi);
    }
    post.log_weights.push_back(hyperprior_logdensity(params, t) + grid.log_width[g] + loglik);
    post.means.push_back(std::move(mean));
    post.variances.push_back(std::move(var));
  }
  const double z = log_sum_exp(post.log_weights);
  for (double& lw : post.log_weights) lw -= z;
  return post;
}

BandVector sample_posterior(const PosteriorMixture& post, RandomStream& rng) {
  const auto w = post.weights();
  double u = rng.uniform();
  std::size_t g = 0;
  for (; g + 1 < w.size(); ++g) {
    if (u < w[g]) break;
    u -= w[g];
  }
  BandVector f(post.layout);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double sd = post.variances.empty() ? 0.0 : std::sqrt(post.variances[g][i]);
    f[i] = post.means[g][i] + sd * rng.normal();
  }
  return f;
}

PosteriorFunctional posterior_functional(const PosteriorMixture& post, const BandVector& f0, double gamma,
                                         std::size_t draws, RandomStream rng) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("credible level must lie in (0, 1)");
  PosteriorFunctional out;
  const BandVector mean = post.posterior_mean();
  const BandVector truth = f0.on_layout(post.layout);
  double err = 0.0;
  for (std::size_t i = 0; i < mean.size(); ++i) err += (mean[i] - truth[i]) * (mean[i] - truth[i]);
  // truth mass beyond the posterior truncation also counts
  if (f0.K() > post.layout->K())
    for (std::size_t i = mean.size(); i < f0.size(); ++i) err += f0[i] * f0[i];
  out.mean_l2_error = std::sqrt(err);
  if (draws > 0) {
    std::vector<double> radii(draws);
    for (std::size_t d = 0; d < draws; ++d) {
      const BandVector f = sample_posterior(post, rng);
      double r = 0.0;
      for (std::size_t i = 0; i < f.size(); ++i) r += (f[i] - mean[i]) * (f[i] - mean[i]);
      radii[d] = std::sqrt(r);
    }
    std::sort(radii.begin(), radii.end());
    const std::size_t k = static_cast<std::size_t>(std::ceil(gamma * draws));
    out.credible_radius = radii[std::min(draws, std::max<std::size_t>(k, 1)) - 1];
  }
  return out;
}

double posterior_ball_log_mass(const PosteriorMixture& post, const BandVector& center, double radius) {
  if (post.variances.empty()) throw std::invalid_argument("ball mass needs per-coefficient variances");
  const BandVector c = center.on_layout(post.layout);
  // centre mass outside the posterior truncation is a fixed offset
  double outside = 0.0;
  for (std::size_t i = post.layout->size(); i < center.size(); ++i) outside += center[i] * center[i];
  const double r2 = radius * radius - outside;
  if (!(r2 > 0.0)) return -std::numeric_limits<double>::infinity();
  std::vector<double> terms;
  std::vector<double> offset(c.size());
  for (std::size_t g = 0; g < post.means.size(); ++g) {
    if (post.log_weights[g] < -745.0) continue;
    for (std::size_t i = 0; i < c.size(); ++i) offset[i] = post.means[g][i] - c[i];
    terms.push_back(post.log_weights[g] + log_gaussian_ball_probability(post.variances[g], offset, std::sqrt(r2)));
  }
  return log_sum_exp(terms);
}

double posterior_ball_mass_mc(const PosteriorMixture& post, const BandVector& center, double radius,
                              std::size_t draws, RandomStream rng) {
  const BandVector c = center.on_layout(post.layout);
  double outside = 0.0;
  for (std::size_t i = post.layout->size(); i < center.size(); ++i) outside += center[i] * center[i];
  std::size_t hits = 0;
  for (std::size_t d = 0; d < draws; ++d) {
    const BandVector f = sample_posterior(post, rng);
    double r = outside;
    for (std::size_t i = 0; i < f.size(); ++i) r += (f[i] - c[i]) * (f[i] - c[i]);
    if (r <= radius * radius) ++hits;
  }
  return static_cast<double>(hits) / draws;
}

}  // namespace heatgp
