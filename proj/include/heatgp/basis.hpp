#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "heatgp/layout.hpp"

namespace heatgp {

// Real orthonormal eigenbasis up to band K, in layout order. Circle:
// 1, sqrt2 cos k, sqrt2 sin k. Interval: orthonormal Jacobi polynomials.
// S^2: real spherical harmonics ordered m = 0, (cos 1, sin 1), (cos 2, sin 2), ...
class BasisEvaluator {
 public:
  BasisEvaluator(const ManifoldModel& model, int K);
  explicit BasisEvaluator(LayoutPtr layout);

  const LayoutPtr& layout_ptr() const { return layout_; }
  const SpectralLayout& layout() const { return *layout_; }
  int K() const { return layout_->K(); }
  std::size_t size() const { return layout_->size(); }

  void evaluate(const Point& x, std::span<double> out) const;
  std::vector<double> evaluate(const Point& x) const;

  // rows are points, columns are basis functions
  Eigen::MatrixXd design_matrix(std::span<const Point> points) const;

 private:
  LayoutPtr layout_;
};

}  // namespace heatgp
