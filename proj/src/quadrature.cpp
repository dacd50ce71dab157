#include "heatgp/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "heatgp/polynomials.hpp"

namespace heatgp {

GaussRule gauss_jacobi(double alpha, double beta, int count) {
  if (count < 1) throw std::invalid_argument("quadrature needs at least one node");
  Eigen::MatrixXd jm = Eigen::MatrixXd::Zero(count, count);
  for (int k = 0; k < count; ++k) {
    jm(k, k) = jacobi_recurrence(alpha, beta, k).diagonal;
    if (k + 1 < count) {
      const double b = jacobi_recurrence(alpha, beta, k + 1).offdiagonal;
      jm(k, k + 1) = b;
      jm(k + 1, k) = b;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jm);
  GaussRule rule;
  rule.nodes.resize(count);
  rule.weights.resize(count);
  double total = 0.0;
  for (int i = 0; i < count; ++i) {
    rule.nodes[i] = solver.eigenvalues()(i);
    const double v = solver.eigenvectors()(0, i);
    rule.weights[i] = v * v;
    total += rule.weights[i];
  }
  for (double& w : rule.weights) w /= total;
  return rule;
}

QuadratureRule quadrature(const ManifoldModel& model, int resolution) {
  if (resolution < 1) throw std::invalid_argument("quadrature resolution must be positive");
  QuadratureRule rule;
  switch (model.kind()) {
    case ManifoldKind::Circle: {
      rule.nodes.reserve(resolution);
      for (int j = 0; j < resolution; ++j)
        rule.nodes.push_back(Point::angle(-std::numbers::pi + 2.0 * std::numbers::pi * j / resolution));
      rule.weights.assign(resolution, 1.0 / resolution);
      rule.exact_band = (resolution - 1) / 2;
      return rule;
    }
    case ManifoldKind::Sphere: {
      if (model.ambient() != 3) throw std::invalid_argument("quadrature ships for S^2 only");
      const GaussRule z = gauss_jacobi(0.0, 0.0, resolution);
      const int nphi = 2 * resolution;
      for (int i = 0; i < resolution; ++i) {
        const double colat = std::acos(z.nodes[i]);
        for (int j = 0; j < nphi; ++j) {
          rule.nodes.push_back(Point::spherical(colat, 2.0 * std::numbers::pi * (j + 0.5) / nphi));
          rule.weights.push_back(z.weights[i] / nphi);
        }
      }
      rule.exact_band = resolution - 1;
      return rule;
    }
    case ManifoldKind::Jacobi: break;
  }
  const GaussRule g = gauss_jacobi(model.alpha(), model.beta(), resolution);
  for (double x : g.nodes) rule.nodes.push_back(Point::interval(x));
  rule.weights = g.weights;
  rule.exact_band = resolution - 1;
  return rule;
}

QuadratureRule quadrature_for_band(const ManifoldModel& model, int band) {
  if (band < 0) throw std::invalid_argument("band must be nonnegative");
  if (model.kind() == ManifoldKind::Circle) return quadrature(model, 2 * band + 1);
  return quadrature(model, band + 1);
}

void write_quadrature_csv(std::ostream& os, const QuadratureRule& rule) {
  const std::size_t dim = rule.nodes.empty() ? 0 : rule.nodes.front().coords.size();
  for (std::size_t i = 0; i < dim; ++i) os << "x" << i << ",";
  os << "weight\n";
  os.precision(17);
  for (std::size_t j = 0; j < rule.size(); ++j) {
    for (double c : rule.nodes[j].coords) os << c << ",";
    os << rule.weights[j] << "\n";
  }
}

}  // namespace heatgp
