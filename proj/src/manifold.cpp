#include "heatgp/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/beta.hpp>

#include "heatgp/polynomials.hpp"

namespace heatgp {

namespace {
constexpr double kPi = std::numbers::pi;

double clamp_unit(double c) { return std::clamp(c, -1.0, 1.0); }

double dot(const Point& x, const Point& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.coords.size(); ++i) s += x.coords[i] * y.coords[i];
  return s;
}

double wrap_difference(double a, double b) {
  double d = std::fmod(std::abs(a - b), 2.0 * kPi);
  return std::min(d, 2.0 * kPi - d);
}
}  // namespace

ManifoldModel ManifoldModel::circle() { return {ManifoldKind::Circle, 2, 0.0, 0.0}; }

ManifoldModel ManifoldModel::sphere(int ambient) {
  if (ambient < 3) throw std::invalid_argument("sphere needs ambient dimension >= 3");
  return {ManifoldKind::Sphere, ambient, 0.0, 0.0};
}

ManifoldModel ManifoldModel::jacobi(double alpha, double beta) {
  if (!(alpha > -1.0) || !(beta > -1.0))
    throw std::invalid_argument("jacobi weights need alpha, beta > -1");
  return {ManifoldKind::Jacobi, 1, alpha, beta};
}

int ManifoldModel::dim() const {
  return kind_ == ManifoldKind::Sphere ? ambient_ - 1 : 1;
}

double ManifoldModel::doubling_exponent() const {
  if (kind_ == ManifoldKind::Jacobi)
    return std::max({1.0, 2.0 * alpha_ + 2.0, 2.0 * beta_ + 2.0});
  return dim();
}

double ManifoldModel::diameter() const { return kPi; }

std::string ManifoldModel::name() const {
  switch (kind_) {
    case ManifoldKind::Circle: return "circle";
    case ManifoldKind::Sphere: return "sphere(" + std::to_string(ambient_) + ")";
    case ManifoldKind::Jacobi: break;
  }
  return "jacobi(" + std::to_string(alpha_) + "," + std::to_string(beta_) + ")";
}

Point Point::angle(double theta) { return Point{{theta}}; }

Point Point::unit(std::vector<double> v) {
  double n = 0.0;
  for (double c : v) n += c * c;
  n = std::sqrt(n);
  if (n == 0.0) throw std::invalid_argument("cannot normalize the zero vector");
  for (double& c : v) c /= n;
  return Point{std::move(v)};
}

Point Point::spherical(double colatitude, double longitude) {
  const double s = std::sin(colatitude);
  return Point{{s * std::cos(longitude), s * std::sin(longitude), std::cos(colatitude)}};
}

Point Point::interval(double x) { return Point{{x}}; }

double eigenvalue(const ManifoldModel& model, int k) {
  if (k < 0) throw std::invalid_argument("band index must be nonnegative");
  const double kk = k;
  switch (model.kind()) {
    case ManifoldKind::Circle: return kk * kk;
    case ManifoldKind::Sphere: return kk * (kk + model.ambient() - 2);
    case ManifoldKind::Jacobi: break;
  }
  return kk * (kk + model.alpha() + model.beta() + 1.0);
}

long multiplicity(const ManifoldModel& model, int k) {
  if (k < 0) throw std::invalid_argument("band index must be nonnegative");
  switch (model.kind()) {
    case ManifoldKind::Circle: return k == 0 ? 1 : 2;
    case ManifoldKind::Jacobi: return 1;
    case ManifoldKind::Sphere: break;
  }
  const int n = model.ambient();
  if (n == 3) return 2L * k + 1;
  // ((2k+n-2)/(n-2)) * C(n+k-3, k)
  double binom = 1.0;
  for (int i = 1; i <= k; ++i) binom = binom * (n - 3 + i) / i;
  return std::lround((2.0 * k + n - 2) / (n - 2) * binom);
}

SpectralBand spectral_band(const ManifoldModel& model, int k) {
  return {k, eigenvalue(model, k), multiplicity(model, k)};
}

double projector_kernel(const ManifoldModel& model, int k, const Point& x, const Point& y) {
  switch (model.kind()) {
    case ManifoldKind::Circle:
      return k == 0 ? 1.0 : 2.0 * std::cos(k * (x[0] - y[0]));
    case ManifoldKind::Sphere: {
      const double nu = 0.5 * (model.ambient() - 2);
      return (1.0 + k / nu) * gegenbauer_eval(nu, k, clamp_unit(dot(x, y)));
    }
    case ManifoldKind::Jacobi: break;
  }
  return jacobi_poly_eval(model.alpha(), model.beta(), k, x[0]) *
         jacobi_poly_eval(model.alpha(), model.beta(), k, y[0]);
}

double geodesic_distance(const ManifoldModel& model, const Point& x, const Point& y) {
  switch (model.kind()) {
    case ManifoldKind::Circle: return wrap_difference(x[0], y[0]);
    case ManifoldKind::Sphere: {
      // atan2 form keeps accuracy for nearly equal or antipodal points
      double cross2 = 0.0;
      const auto& a = x.coords;
      const auto& b = y.coords;
      for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j) {
          const double c = a[i] * b[j] - a[j] * b[i];
          cross2 += c * c;
        }
      return std::atan2(std::sqrt(cross2), dot(x, y));
    }
    case ManifoldKind::Jacobi: break;
  }
  return std::abs(std::acos(clamp_unit(x[0])) - std::acos(clamp_unit(y[0])));
}

double ball_measure(const ManifoldModel& model, const Point& x, double r) {
  if (r <= 0.0) return 0.0;
  switch (model.kind()) {
    case ManifoldKind::Circle: return std::min(1.0, r / kPi);
    case ManifoldKind::Sphere: {
      if (model.ambient() != 3) throw std::invalid_argument("ball_measure implemented for S^2 only");
      return r >= kPi ? 1.0 : 0.5 * (1.0 - std::cos(r));
    }
    case ManifoldKind::Jacobi: break;
  }
  // the ball is an arc [theta - r, theta + r] in the angle theta = acos x
  const double theta = std::acos(clamp_unit(x[0]));
  const double lo = std::max(0.0, theta - r);
  const double hi = std::min(kPi, theta + r);
  // x = cos(theta); u = (1 + x) / 2 follows Beta(beta + 1, alpha + 1)
  auto cdf = [&](double th) {
    const double u = std::clamp(0.5 * (1.0 + std::cos(th)), 0.0, 1.0);
    return boost::math::ibeta(model.beta() + 1.0, model.alpha() + 1.0, u);
  };
  return cdf(lo) - cdf(hi);
}

void validate_point(const ManifoldModel& model, const Point& p) {
  switch (model.kind()) {
    case ManifoldKind::Circle:
      if (p.coords.size() != 1 || !std::isfinite(p[0]))
        throw std::invalid_argument("circle point needs one finite angle");
      return;
    case ManifoldKind::Sphere: {
      if (p.coords.size() != static_cast<std::size_t>(model.ambient()))
        throw std::invalid_argument("sphere point has wrong ambient dimension");
      if (std::abs(std::sqrt(dot(p, p)) - 1.0) > 1e-12)
        throw std::invalid_argument("sphere point is not a unit vector");
      return;
    }
    case ManifoldKind::Jacobi: break;
  }
  if (p.coords.size() != 1 || !(p[0] >= -1.0 && p[0] <= 1.0))
    throw std::invalid_argument("interval point must lie in [-1, 1]");
}

Point random_point(const ManifoldModel& model, RandomStream& rng) {
  switch (model.kind()) {
    case ManifoldKind::Circle: return Point::angle(kPi * (2.0 * rng.uniform() - 1.0));
    case ManifoldKind::Sphere: {
      std::vector<double> v(model.ambient());
      rng.fill_normal(v);
      return Point::unit(std::move(v));
    }
    case ManifoldKind::Jacobi: break;
  }
  const double u = boost::math::ibeta_inv(model.beta() + 1.0, model.alpha() + 1.0, rng.uniform());
  return Point::interval(std::clamp(2.0 * u - 1.0, -1.0, 1.0));
}

}  // namespace heatgp
