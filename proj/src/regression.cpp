#include "heatgp/regression.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "heatgp/gp_prior.hpp"
#include "heatgp/stats.hpp"

namespace heatgp {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

Eigen::LLT<Eigen::MatrixXd> robust_cholesky(Eigen::MatrixXd a) {
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() == Eigen::Success) return llt;
  a.diagonal().array() += 1e-8;
  llt.compute(a);
  if (llt.info() != Eigen::Success) throw std::runtime_error("Cholesky failed after jitter 1e-8");
  return llt;
}

Eigen::VectorXd prior_variances(const SpectralLayout& layout, double t) {
  const auto lambdas = layout.slot_eigenvalues();
  Eigen::VectorXd v(lambdas.size());
  for (std::size_t i = 0; i < lambdas.size(); ++i) v(i) = std::exp(-lambdas[i] * t);
  return v;
}

}  // namespace

RegressionData simulate_regression(const BandVector& f0, const BasisEvaluator& basis, std::vector<Point> points,
                                   RandomStream& rng, double noise_sd) {
  if (points.empty()) throw std::invalid_argument("regression needs design points");
  RegressionData d;
  d.y.reserve(points.size());
  for (const auto& x : points) d.y.push_back(field_eval(f0, basis, x) + noise_sd * rng.normal());
  d.points = std::move(points);
  return d;
}

RegressionPosterior regression_posterior(const RegressionData& data, const BasisEvaluator& basis,
                                         const HyperpriorParams& params, const TimeGrid& grid,
                                         RegressionRoute route) {
  if (data.points.size() != data.y.size()) throw std::invalid_argument("design and response lengths differ");
  if (grid.size() == 0) throw std::invalid_argument("posterior needs a nonempty time grid");
  const Eigen::Index n = static_cast<Eigen::Index>(data.y.size());
  const Eigen::Index m = static_cast<Eigen::Index>(basis.size());
  if (route == RegressionRoute::Auto) route = n <= m ? RegressionRoute::FunctionSpace : RegressionRoute::WeightSpace;

  const Eigen::MatrixXd phi = basis.design_matrix(data.points);
  const Eigen::Map<const Eigen::VectorXd> y(data.y.data(), n);
  Eigen::MatrixXd gram;
  Eigen::VectorXd proj;
  if (route == RegressionRoute::WeightSpace) {
    gram = phi.transpose() * phi;
    proj = phi.transpose() * y;
  }

  RegressionPosterior out;
  out.route = route;
  auto& post = out.mixture;
  post.grid = grid;
  post.layout = basis.layout_ptr();
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double t = grid.t[g];
    if (!(t > params.t_min && t <= 1.0)) throw std::invalid_argument("grid time outside hyperprior support");
    const Eigen::VectorXd lam = prior_variances(basis.layout(), t);
    Eigen::VectorXd mean;
    double loglik = 0.0;
    if (route == RegressionRoute::FunctionSpace) {
      Eigen::MatrixXd cov = phi * lam.asDiagonal() * phi.transpose();
      cov.diagonal().array() += 1.0;
      const auto llt = robust_cholesky(std::move(cov));
      const Eigen::VectorXd alpha = llt.solve(y);
      mean = lam.asDiagonal() * (phi.transpose() * alpha);
      const double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
      loglik = -0.5 * (y.dot(alpha) + logdet + n * kLog2Pi);
    } else {
      const Eigen::VectorXd s = lam.array().sqrt();
      Eigen::MatrixXd a = s.asDiagonal() * gram * s.asDiagonal();
      a.diagonal().array() += 1.0;
      const auto llt = robust_cholesky(std::move(a));
      const Eigen::VectorXd b = s.cwiseProduct(proj);
      const Eigen::VectorXd z = llt.solve(b);
      mean = s.cwiseProduct(z);
      const double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
      loglik = -0.5 * (y.squaredNorm() - b.dot(z) + logdet + n * kLog2Pi);
    }
    out.log_marginal.push_back(loglik);
    post.log_weights.push_back(hyperprior_logdensity(params, t) + grid.log_width[g] + loglik);
    post.means.emplace_back(mean.data(), mean.data() + mean.size());
  }
  const double z = log_sum_exp(post.log_weights);
  for (double& lw : post.log_weights) lw -= z;
  return out;
}

PointPosterior regression_predict(const RegressionData& data, const BasisEvaluator& basis, double t, const Point& x) {
  const Eigen::Index n = static_cast<Eigen::Index>(data.y.size());
  const Eigen::MatrixXd phi = basis.design_matrix(data.points);
  const Eigen::VectorXd lam = prior_variances(basis.layout(), t);
  Eigen::MatrixXd cov = phi * lam.asDiagonal() * phi.transpose();
  cov.diagonal().array() += 1.0;
  const auto llt = robust_cholesky(std::move(cov));
  const auto ex = basis.evaluate(x);
  const Eigen::Map<const Eigen::VectorXd> e(ex.data(), static_cast<Eigen::Index>(ex.size()));
  const Eigen::VectorXd k = phi * lam.cwiseProduct(e);
  const Eigen::Map<const Eigen::VectorXd> y(data.y.data(), n);
  PointPosterior p;
  p.mean = k.dot(llt.solve(y));
  p.variance = e.dot(lam.cwiseProduct(e)) - k.dot(llt.solve(k));
  return p;
}

double empirical_distance(const BandVector& a, const BandVector& b, const BasisEvaluator& basis,
                          const std::vector<Point>& points) {
  if (points.empty()) throw std::invalid_argument("empirical distance needs design points");
  double s = 0.0;
  for (const auto& x : points) {
    const double d = field_eval(a, basis, x) - field_eval(b, basis, x);
    s += d * d;
  }
  return std::sqrt(s / points.size());
}

}  // namespace heatgp
