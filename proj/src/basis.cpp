#include "heatgp/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "heatgp/polynomials.hpp"

namespace heatgp {

BasisEvaluator::BasisEvaluator(const ManifoldModel& model, int K) : BasisEvaluator(make_layout(model, K)) {}

BasisEvaluator::BasisEvaluator(LayoutPtr layout) : layout_(std::move(layout)) {
  const auto& model = layout_->model();
  if (model.kind() == ManifoldKind::Sphere && model.ambient() != 3)
    throw std::invalid_argument("basis functions implemented for S^2 only");
}

void BasisEvaluator::evaluate(const Point& x, std::span<double> out) const {
  if (out.size() != size()) throw std::invalid_argument("basis output span has wrong size");
  const auto& model = layout_->model();
  const int K = layout_->K();
  switch (model.kind()) {
    case ManifoldKind::Circle: {
      out[0] = 1.0;
      for (int k = 1; k <= K; ++k) {
        out[2 * k - 1] = std::numbers::sqrt2 * std::cos(k * x[0]);
        out[2 * k] = std::numbers::sqrt2 * std::sin(k * x[0]);
      }
      return;
    }
    case ManifoldKind::Jacobi:
      jacobi_poly_table(model.alpha(), model.beta(), x[0], out);
      return;
    case ManifoldKind::Sphere: break;
  }
  std::vector<double> leg(static_cast<std::size_t>(K + 1) * (K + 2) / 2);
  normalized_legendre_table(K, std::clamp(x[2], -1.0, 1.0), leg);
  const double phi = std::atan2(x[1], x[0]);
  std::vector<double> cm(K + 1), sm(K + 1);
  for (int m = 0; m <= K; ++m) {
    cm[m] = std::cos(m * phi);
    sm[m] = std::sin(m * phi);
  }
  std::size_t pos = 0;
  for (int l = 0; l <= K; ++l) {
    const std::size_t row = static_cast<std::size_t>(l) * (l + 1) / 2;
    out[pos++] = leg[row];
    for (int m = 1; m <= l; ++m) {
      out[pos++] = std::numbers::sqrt2 * leg[row + m] * cm[m];
      out[pos++] = std::numbers::sqrt2 * leg[row + m] * sm[m];
    }
  }
}

std::vector<double> BasisEvaluator::evaluate(const Point& x) const {
  std::vector<double> out(size());
  evaluate(x, out);
  return out;
}

Eigen::MatrixXd BasisEvaluator::design_matrix(std::span<const Point> points) const {
  Eigen::MatrixXd m(points.size(), size());
  std::vector<double> row(size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    evaluate(points[i], row);
    for (std::size_t j = 0; j < row.size(); ++j) m(i, j) = row[j];
  }
  return m;
}

}  // namespace heatgp
