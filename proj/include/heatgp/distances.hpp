#pragma once

#include <span>

#include "heatgp/quadrature.hpp"

namespace heatgp {

// Densities are given by their values at the rule's nodes.
double hellinger(std::span<const double> f, std::span<const double> g, const QuadratureRule& rule);

struct KlVariation {
  double K = 0.0;  // int p log(p/q)
  double V = 0.0;  // int p log^2(p/q)
};
KlVariation kl_variation(std::span<const double> p, std::span<const double> q, const QuadratureRule& rule);

}  // namespace heatgp
