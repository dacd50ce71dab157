#include "heatgp/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "heatgp/distances.hpp"
#include "heatgp/whitenoise.hpp"

namespace heatgp {

namespace {
constexpr double kLogSqrt2Pi = 0.91893853320467274178;
}

Link Link::exp() {
  Link l;
  l.name = "exp";
  l.log_link = [](double w) { return w; };
  l.lipschitz = 1.0;
  l.exponential = true;
  return l;
}

Link Link::softplus() {
  Link l;
  l.name = "softplus";
  l.log_link = [](double w) {
    const double sp = w > 30.0 ? w : std::log1p(std::exp(w));
    return std::log(sp);
  };
  l.lipschitz = 1.0;
  l.exponential = false;
  return l;
}

DensityTarget::DensityTarget(const DensityData& data, const ManifoldModel& model, int K, QuadratureRule grid,
                             HyperpriorParams params, Link link)
    : layout_(make_layout(model, K)),
      grid_(std::move(grid)),
      params_(std::move(params)),
      link_(std::move(link)),
      n_(data.samples.size()) {
  const BasisEvaluator basis(layout_);
  grid_design_ = basis.design_matrix(grid_.nodes);
  log_weights_.resize(static_cast<Eigen::Index>(grid_.size()));
  for (std::size_t i = 0; i < grid_.size(); ++i) log_weights_(i) = std::log(grid_.weights[i]);
  sample_sum_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(layout_->size()));
  if (n_ > 0) {
    Eigen::MatrixXd design = basis.design_matrix(data.samples);
    sample_sum_ = design.colwise().sum().transpose();
    if (!link_.exponential) sample_design_ = std::move(design);
  }
}

Eigen::VectorXd DensityTarget::coefficients(double t, std::span<const double> x) const {
  if (x.size() != layout_->size()) throw std::invalid_argument("state has the wrong number of coefficients");
  const auto lambdas = layout_->slot_eigenvalues();
  Eigen::VectorXd theta(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) theta(i) = std::exp(-0.5 * lambdas[i] * t) * x[i];
  return theta;
}

double DensityTarget::log_normalizer(const Eigen::VectorXd& w_grid) const {
  double m = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd terms(w_grid.size());
  for (Eigen::Index i = 0; i < w_grid.size(); ++i) {
    terms(i) = log_weights_(i) + link_.log_link(w_grid(i));
    m = std::max(m, terms(i));
  }
  return m + std::log((terms.array() - m).exp().sum());
}

double DensityTarget::log_likelihood(double t, std::span<const double> x) const {
  if (n_ == 0) return 0.0;
  const Eigen::VectorXd theta = coefficients(t, x);
  const double log_z = log_normalizer(grid_design_ * theta);
  double data_term = 0.0;
  if (link_.exponential) {
    data_term = sample_sum_.dot(theta);
  } else {
    const Eigen::VectorXd w = sample_design_ * theta;
    for (Eigen::Index i = 0; i < w.size(); ++i) data_term += link_.log_link(w(i));
  }
  return data_term - static_cast<double>(n_) * log_z;
}

double DensityTarget::log_prior(double t, std::span<const double> x) const {
  double s = hyperprior_logdensity(params_, t);
  for (double v : x) s += -0.5 * v * v - kLogSqrt2Pi;
  return s;
}

std::vector<double> DensityTarget::density_on_grid(double t, std::span<const double> x) const {
  const Eigen::VectorXd w = grid_design_ * coefficients(t, x);
  const double log_z = log_normalizer(w);
  std::vector<double> f(static_cast<std::size_t>(w.size()));
  for (Eigen::Index i = 0; i < w.size(); ++i) f[i] = std::exp(link_.log_link(w(i)) - log_z);
  return f;
}

std::vector<double> DensityTarget::density_at(double t, std::span<const double> x,
                                              const std::vector<Point>& points) const {
  const Eigen::VectorXd theta = coefficients(t, x);
  const double log_z = log_normalizer(grid_design_ * theta);
  const BasisEvaluator basis(layout_);
  std::vector<double> out;
  std::vector<double> e(layout_->size());
  for (const auto& p : points) {
    basis.evaluate(p, e);
    double w = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) w += e[i] * theta(i);
    out.push_back(std::exp(link_.log_link(w) - log_z));
  }
  return out;
}

double density_log_posterior(const DensityState& state, const DensityTarget& target) {
  if (!(state.t > target.params().t_min && state.t <= 1.0)) return -std::numeric_limits<double>::infinity();
  return target.log_likelihood(state.t, state.standardized) + target.log_prior(state.t, state.standardized);
}

std::vector<double> ChainSummary::coefficients(std::size_t i) const {
  std::vector<double> theta = standardized.at(i);
  const auto lambdas = layout->slot_eigenvalues();
  for (std::size_t j = 0; j < theta.size(); ++j) theta[j] *= std::exp(-0.5 * lambdas[j] * t[i]);
  return theta;
}

ChainSummary density_mcmc(const DensityTarget& target, const McmcConfig& config,
                          const std::vector<double>* truth_on_grid) {
  if (config.iterations < 1 || config.burn_in < 0 || config.burn_in >= config.iterations)
    throw std::invalid_argument("MCMC needs 0 <= burn_in < iterations");
  if (!(config.pcn_beta > 0.0 && config.pcn_beta <= 1.0)) throw std::invalid_argument("pcn_beta must lie in (0, 1]");
  if (!(config.t_step > 0.0)) throw std::invalid_argument("t_step must be positive");
  if (config.thin < 1) throw std::invalid_argument("thin must be at least 1");

  RandomStream root(config.seed);
  RandomStream init_stream = root.split("init");
  RandomStream coef_stream = root.split("coefficient-move");
  RandomStream time_stream = root.split("time-move");
  RandomStream accept_stream = root.split("accept");

  const auto& params = target.params();
  const std::size_t m = target.layout().size();
  double t = hyperprior_sample(params, init_stream);
  std::vector<double> x(m), proposal(m);
  init_stream.fill_normal(x);
  double loglik = target.log_likelihood(t, x);
  const bool has_data = target.sample_count() > 0;

  double beta = config.pcn_beta;
  double step = config.t_step;
  long coef_accepted = 0, time_accepted = 0, counted = 0;
  long window_coef = 0, window_time = 0, window = 0;
  constexpr int kWindow = 100;

  ChainSummary out;
  out.layout = target.layout_ptr();
  std::vector<double> density_sum(target.grid().size(), 0.0);

  for (int it = 0; it < config.iterations; ++it) {
    // prior-preserving coefficient move
    const double keep = std::sqrt(1.0 - beta * beta);
    for (std::size_t i = 0; i < m; ++i) proposal[i] = keep * x[i] + beta * coef_stream.normal();
    const double loglik_coef = has_data ? target.log_likelihood(t, proposal) : 0.0;
    const bool coef_ok = std::log(accept_stream.uniform()) < loglik_coef - loglik;
    if (coef_ok) {
      x.swap(proposal);
      loglik = loglik_coef;
    }

    // random walk on log t; density of log t carries the factor t
    const double t_new = t * std::exp(step * time_stream.normal());
    bool time_ok = false;
    const double u = accept_stream.uniform();
    if (t_new > params.t_min && t_new <= 1.0) {
      const double loglik_time = has_data ? target.log_likelihood(t_new, x) : 0.0;
      const double log_ratio = loglik_time - loglik + hyperprior_logdensity(params, t_new) -
                               hyperprior_logdensity(params, t) + std::log(t_new / t);
      if (std::log(u) < log_ratio) {
        t = t_new;
        loglik = loglik_time;
        time_ok = true;
      }
    }

    if (it < config.burn_in) {
      window_coef += coef_ok;
      window_time += time_ok;
      if (++window == kWindow && config.adapt) {
        const double rc = static_cast<double>(window_coef) / kWindow;
        const double rt = static_cast<double>(window_time) / kWindow;
        beta = std::clamp(beta * std::exp(rc - config.target_acceptance), 1e-4, 1.0);
        step = std::clamp(step * std::exp(rt - config.target_acceptance), 1e-3, 5.0);
        window = window_coef = window_time = 0;
      } else if (window == kWindow) {
        window = window_coef = window_time = 0;
      }
      continue;
    }
    ++counted;
    coef_accepted += coef_ok;
    time_accepted += time_ok;
    if ((it - config.burn_in) % config.thin != 0) continue;
    out.t.push_back(t);
    out.standardized.push_back(x);
    const auto f = target.density_on_grid(t, x);
    for (std::size_t i = 0; i < f.size(); ++i) density_sum[i] += f[i];
    if (truth_on_grid) out.hellinger_trace.push_back(hellinger(f, *truth_on_grid, target.grid()));
  }

  out.coefficient_acceptance = counted ? static_cast<double>(coef_accepted) / counted : 0.0;
  out.time_acceptance = counted ? static_cast<double>(time_accepted) / counted : 0.0;
  out.final_pcn_beta = beta;
  out.final_t_step = step;
  out.mean_density = density_sum;
  for (double& v : out.mean_density) v /= static_cast<double>(std::max<std::size_t>(out.t.size(), 1));
  auto check = [&](double rate, const char* what) {
    if (rate < 0.05 || rate > 0.95)
      out.warnings.push_back(std::string(what) + " acceptance rate " + std::to_string(rate) +
                             " outside [0.05, 0.95] after adaptation");
  };
  check(out.coefficient_acceptance, "coefficient");
  check(out.time_acceptance, "time");
  return out;
}

QuadratureRule density_grid(const ManifoldModel& model, int K) {
  switch (model.kind()) {
    case ManifoldKind::Circle: return quadrature(model, std::max(512, 2 * K + 1));
    case ManifoldKind::Jacobi: return quadrature(model, std::max(256, K + 1));
    case ManifoldKind::Sphere: break;
  }
  return quadrature(model, std::max(46, K + 1));
}

ChainSummary density_mcmc(const DensityData& data, const ManifoldModel& model, const HyperpriorParams& params,
                          const McmcConfig& config) {
  const int K = inference_truncation(model, params.t_min);
  const DensityTarget target(data, model, K, density_grid(model, K), params);
  return density_mcmc(target, config);
}

}  // namespace heatgp
