#pragma once

#include <Eigen/Core>

#include "heatgp/basis.hpp"
#include "heatgp/heat_kernel.hpp"
#include "heatgp/hyperprior.hpp"
#include "heatgp/layout.hpp"
#include "heatgp/quadrature.hpp"

namespace heatgp {

// theta = exp(-lambda t / 2) X with X standard normal, truncated so the
// neglected variance is below policy.tol.
FieldCoefficients sample_field(const ManifoldModel& model, double t, const TruncationPolicy& policy,
                               RandomStream& rng);

// Same, on a caller-chosen layout (shared truncation across draws).
FieldCoefficients sample_field_on(const LayoutPtr& layout, double t, RandomStream& rng);

FieldCoefficients sample_hierarchical(const ManifoldModel& model, const HyperpriorParams& params,
                                      const TruncationPolicy& policy, RandomStream& rng);

// theta_k^l = exp(-lambda_k t / 2) x_k^l
BandVector scale_standardized(const BandVector& standardized, double t);

double field_eval(const BandVector& coeffs, const BasisEvaluator& basis, const Point& x);
double field_eval(const FieldCoefficients& coeffs, const BasisEvaluator& basis, const Point& x);

// Field values at many points from a precomputed design matrix.
Eigen::VectorXd field_values(const BandVector& coeffs, const Eigen::MatrixXd& design);

// sum theta^2 exp(lambda t); +infinity when a term leaves the double range
double rkhs_sq_norm(const BandVector& coeffs, double t);

struct FieldNorms {
  double l2 = 0.0;
  double sup = 0.0;
};
FieldNorms field_norms(const BandVector& coeffs, const BasisEvaluator& basis, const QuadratureRule& grid);

}  // namespace heatgp
