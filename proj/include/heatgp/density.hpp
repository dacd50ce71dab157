#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "heatgp/basis.hpp"
#include "heatgp/hyperprior.hpp"
#include "heatgp/quadrature.hpp"

namespace heatgp {

struct DensityData {
  std::vector<Point> samples;
};

// Positive link turning a field w into the density link(w) / int link(w).
struct Link {
  std::string name = "exp";
  std::function<double(double)> log_link;
  double lipschitz = 1.0;  // of log link
  bool exponential = true;

  static Link exp();
  static Link softplus();
};

struct DensityState {
  double t = 1.0;
  std::vector<double> standardized;  // theta = exp(-lambda t / 2) * standardized
};

// Precomputed basis values at the samples and on the integration grid.
class DensityTarget {
 public:
  DensityTarget(const DensityData& data, const ManifoldModel& model, int K, QuadratureRule grid,
                HyperpriorParams params, Link link = Link::exp());

  const SpectralLayout& layout() const { return *layout_; }
  const LayoutPtr& layout_ptr() const { return layout_; }
  const QuadratureRule& grid() const { return grid_; }
  const HyperpriorParams& params() const { return params_; }
  const Link& link() const { return link_; }
  std::size_t sample_count() const { return n_; }

  Eigen::VectorXd coefficients(double t, std::span<const double> standardized) const;
  double log_likelihood(double t, std::span<const double> standardized) const;
  double log_prior(double t, std::span<const double> standardized) const;

  std::vector<double> density_on_grid(double t, std::span<const double> standardized) const;
  std::vector<double> density_at(double t, std::span<const double> standardized,
                                 const std::vector<Point>& points) const;

 private:
  double log_normalizer(const Eigen::VectorXd& w_grid) const;

  LayoutPtr layout_;
  QuadratureRule grid_;
  HyperpriorParams params_;
  Link link_;
  std::size_t n_ = 0;
  Eigen::MatrixXd grid_design_;
  Eigen::MatrixXd sample_design_;  // only for non-exponential links
  Eigen::VectorXd sample_sum_;     // column sums of the sample design
  Eigen::VectorXd log_weights_;
};

double density_log_posterior(const DensityState& state, const DensityTarget& target);

struct McmcConfig {
  int iterations = 20000;
  int burn_in = 5000;
  double pcn_beta = 0.2;
  double t_step = 0.3;
  int thin = 1;
  std::uint64_t seed = 1;
  bool adapt = true;
  double target_acceptance = 0.25;
};

struct ChainSummary {
  std::vector<double> t;
  std::vector<std::vector<double>> standardized;
  LayoutPtr layout;
  double coefficient_acceptance = 0.0;
  double time_acceptance = 0.0;
  double final_pcn_beta = 0.0;
  double final_t_step = 0.0;
  std::vector<double> mean_density;  // on the target grid
  std::vector<double> hellinger_trace;
  std::vector<std::string> warnings;

  std::vector<double> coefficients(std::size_t i) const;
};

ChainSummary density_mcmc(const DensityTarget& target, const McmcConfig& config,
                          const std::vector<double>* truth_on_grid = nullptr);

// Default target: inference truncation from t_min and a grid resolved to it.
ChainSummary density_mcmc(const DensityData& data, const ManifoldModel& model, const HyperpriorParams& params,
                          const McmcConfig& config);

// Density grid resolution used by default: 512 nodes on one-dimensional models.
QuadratureRule density_grid(const ManifoldModel& model, int K);

}  // namespace heatgp
