#include "heatgp/distances.hpp"

#include <cmath>
#include <stdexcept>

namespace heatgp {

namespace {

void check_density(std::span<const double> f, const QuadratureRule& rule) {
  if (f.size() != rule.size()) throw std::invalid_argument("density grid does not match the quadrature rule");
  double mass = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!(f[i] >= 0.0)) throw std::invalid_argument("density values must be nonnegative");
    mass += rule.weights[i] * f[i];
  }
  if (std::abs(mass - 1.0) > 1e-6) throw std::invalid_argument("density does not integrate to one");
}

}  // namespace

double hellinger(std::span<const double> f, std::span<const double> g, const QuadratureRule& rule) {
  check_density(f, rule);
  check_density(g, rule);
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double d = std::sqrt(f[i]) - std::sqrt(g[i]);
    s += rule.weights[i] * d * d;
  }
  return std::sqrt(s);
}

KlVariation kl_variation(std::span<const double> p, std::span<const double> q, const QuadratureRule& rule) {
  if (p.size() != rule.size() || q.size() != rule.size())
    throw std::invalid_argument("density grid does not match the quadrature rule");
  KlVariation out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0) throw std::invalid_argument("density values must be nonnegative");
    if (p[i] == 0.0) continue;
    if (!(q[i] > 0.0)) throw std::invalid_argument("q vanishes where p is positive");
    const double l = std::log(p[i] / q[i]);
    out.K += rule.weights[i] * p[i] * l;
    out.V += rule.weights[i] * p[i] * l * l;
  }
  return out;
}

}  // namespace heatgp
