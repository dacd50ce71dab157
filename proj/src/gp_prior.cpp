#include "heatgp/gp_prior.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace heatgp {

FieldCoefficients sample_field_on(const LayoutPtr& layout, double t, RandomStream& rng) {
  if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("field time must lie in (0, 1]");
  BandVector x(layout);
  rng.fill_normal(x.values());
  return {t, scale_standardized(x, t)};
}

FieldCoefficients sample_field(const ManifoldModel& model, double t, const TruncationPolicy& policy,
                               RandomStream& rng) {
  if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("field time must lie in (0, 1]");
  return sample_field_on(make_layout(model, choose_truncation(model, t, policy)), t, rng);
}

FieldCoefficients sample_hierarchical(const ManifoldModel& model, const HyperpriorParams& params,
                                      const TruncationPolicy& policy, RandomStream& rng) {
  RandomStream time_stream = rng.split("time");
  RandomStream field_stream = rng.split("field");
  const double t = hyperprior_sample(params, time_stream);
  return sample_field(model, t, policy, field_stream);
}

BandVector scale_standardized(const BandVector& standardized, double t) {
  BandVector out = standardized;
  const auto lambdas = standardized.layout().slot_eigenvalues();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= std::exp(-0.5 * lambdas[i] * t);
  return out;
}

double field_eval(const BandVector& coeffs, const BasisEvaluator& basis, const Point& x) {
  if (basis.K() < coeffs.K()) throw std::invalid_argument("basis truncation below coefficient truncation");
  if (!(basis.layout().model() == coeffs.model())) throw std::invalid_argument("basis and coefficients differ in model");
  std::vector<double> e(basis.size());
  basis.evaluate(x, e);
  double s = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) s += coeffs[i] * e[i];
  return s;
}

double field_eval(const FieldCoefficients& coeffs, const BasisEvaluator& basis, const Point& x) {
  return field_eval(coeffs.theta, basis, x);
}

Eigen::VectorXd field_values(const BandVector& coeffs, const Eigen::MatrixXd& design) {
  if (static_cast<std::size_t>(design.cols()) < coeffs.size())
    throw std::invalid_argument("design matrix has too few basis columns");
  const Eigen::Map<const Eigen::VectorXd> c(coeffs.values().data(), coeffs.size());
  return design.leftCols(coeffs.size()) * c;
}

double rkhs_sq_norm(const BandVector& coeffs, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("rkhs norm needs t > 0");
  const auto lambdas = coeffs.layout().slot_eigenvalues();
  constexpr double kMaxLog = 709.0;
  double s = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const double th = coeffs[i];
    if (th == 0.0) continue;
    const double log_term = 2.0 * std::log(std::abs(th)) + lambdas[i] * t;
    if (log_term > kMaxLog) return std::numeric_limits<double>::infinity();
    s += std::exp(log_term);
  }
  return std::isfinite(s) ? s : std::numeric_limits<double>::infinity();
}

FieldNorms field_norms(const BandVector& coeffs, const BasisEvaluator& basis, const QuadratureRule& grid) {
  FieldNorms n;
  n.l2 = coeffs.norm();
  for (const auto& x : grid.nodes) n.sup = std::max(n.sup, std::abs(field_eval(coeffs, basis, x)));
  return n;
}

}  // namespace heatgp
