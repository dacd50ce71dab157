#pragma once

#include <iosfwd>
#include <vector>

#include "heatgp/manifold.hpp"

namespace heatgp {

struct QuadratureRule {
  std::vector<Point> nodes;
  std::vector<double> weights;
  // products of two functions from bands <= exact_band integrate exactly
  int exact_band = 0;

  std::size_t size() const { return nodes.size(); }
};

// Circle: `resolution` uniform angles. Sphere(3): `resolution` Gauss-Legendre
// nodes in cos(colatitude) times 2*resolution longitudes. Jacobi:
// `resolution` Gauss-Jacobi nodes.
QuadratureRule quadrature(const ManifoldModel& model, int resolution);

// Smallest rule of the family with exact_band >= band.
QuadratureRule quadrature_for_band(const ManifoldModel& model, int band);

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;  // sum to one
};
GaussRule gauss_jacobi(double alpha, double beta, int count);

void write_quadrature_csv(std::ostream& os, const QuadratureRule& rule);

}  // namespace heatgp
