#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "heatgp/covering.hpp"
#include "heatgp/manifold.hpp"
#include "heatgp/polynomials.hpp"
#include "heatgp/quadrature.hpp"

using namespace heatgp;
using std::numbers::pi;

namespace {

std::vector<ManifoldModel> all_models() {
  return {ManifoldModel::circle(), ManifoldModel::sphere(3), ManifoldModel::jacobi(0.0, 0.0),
          ManifoldModel::jacobi(-0.5, -0.5), ManifoldModel::jacobi(0.5, 1.5)};
}

double integrate(const QuadratureRule& rule, auto&& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) s += rule.weights[i] * f(rule.nodes[i]);
  return s;
}

}  // namespace

TEST_CASE("eigenvalues and multiplicities") {
  CHECK(eigenvalue(ManifoldModel::circle(), 3) == 9.0);
  CHECK(eigenvalue(ManifoldModel::sphere(3), 0) == 0.0);
  CHECK(eigenvalue(ManifoldModel::sphere(3), 2) == 6.0);
  CHECK(eigenvalue(ManifoldModel::jacobi(0, 0), 4) == 20.0);
  CHECK(multiplicity(ManifoldModel::circle(), 0) == 1);
  CHECK(multiplicity(ManifoldModel::circle(), 5) == 2);
  CHECK(multiplicity(ManifoldModel::sphere(3), 2) == 5);
  CHECK(multiplicity(ManifoldModel::jacobi(0.3, 2.0), 7) == 1);
  // S^3 harmonics of degree k: (k+1)^2; S^4: (k+1)(k+2)(2k+3)/6
  for (int k = 0; k < 12; ++k) {
    CHECK(multiplicity(ManifoldModel::sphere(4), k) == (k + 1) * (k + 1));
    CHECK(multiplicity(ManifoldModel::sphere(5), k) == (k + 1) * (k + 2) * (2 * k + 3) / 6);
  }
  for (const auto& m : all_models()) {
    CHECK(eigenvalue(m, 0) == 0.0);
    CHECK(multiplicity(m, 0) == 1);
    for (int k = 0; k < 50; ++k) CHECK(eigenvalue(m, k + 1) > eigenvalue(m, k));
  }
  CHECK_THROWS(ManifoldModel::sphere(2));
  CHECK_THROWS(ManifoldModel::jacobi(-1.0, 0.0));
}

TEST_CASE("gegenbauer recurrence matches the generating function") {
  for (double x : {-1.0, -0.3, 0.0, 0.7, 1.0}) {
    CHECK(gegenbauer_eval(0.8, 0, x) == 1.0);
    CHECK(gegenbauer_eval(0.5, 2, x) == doctest::Approx((3 * x * x - 1) / 2).epsilon(1e-14));
  }
  for (int k = 0; k < 40; ++k) CHECK(gegenbauer_eval(0.5, k, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  for (double nu : {0.5, 1.0, 1.5}) {
    for (double x : {-0.9, 0.2, 0.95}) {
      const double r = 0.3;
      double series = 0.0;
      for (int k = 0; k < 80; ++k) series += gegenbauer_eval(nu, k, x) * std::pow(r, k);
      CHECK(series == doctest::Approx(std::pow(1 - 2 * x * r + r * r, -nu)).epsilon(1e-12));
    }
  }
}

TEST_CASE("jacobi polynomials are orthonormal under the normalized weight") {
  // oracle: tanh-sinh in the angle x = cos(theta), where the weight
  // sin^{2a+1}(theta/2) cos^{2b+1}(theta/2) is integrable and smooth inside
  boost::math::quadrature::tanh_sinh<double> ts;
  for (auto [a, b] : {std::pair{0.0, 0.0}, std::pair{0.5, 1.5}, std::pair{-0.5, -0.5}, std::pair{2.0, -0.3}}) {
    auto w = [a, b](double th) { return std::pow(std::sin(th / 2), 2 * a + 1) * std::pow(std::cos(th / 2), 2 * b + 1); };
    const double z = ts.integrate(w, 0.0, pi, 1e-14);
    for (int j = 0; j <= 5; ++j)
      for (int k = j; k <= 5; ++k) {
        const double ip = ts.integrate(
                              [&](double th) {
                                const double x = std::cos(th);
                                return w(th) * jacobi_poly_eval(a, b, j, x) * jacobi_poly_eval(a, b, k, x);
                              },
                              0.0, pi, 1e-14) /
                          z;
        CHECK(ip == doctest::Approx(j == k ? 1.0 : 0.0).epsilon(1e-10).scale(1.0));
      }
  }
  CHECK(jacobi_poly_eval(0.3, 0.1, 0, 0.4) == 1.0);
  const auto rule = quadrature(ManifoldModel::jacobi(0, 0), 12);
  CHECK(std::abs(integrate(rule, [](const Point& p) { return jacobi_poly_eval(0, 0, 2, p[0]) * jacobi_poly_eval(0, 0, 3, p[0]); })) < 1e-12);
  CHECK(integrate(rule, [](const Point& p) { return std::pow(jacobi_poly_eval(0, 0, 2, p[0]), 2); }) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("jacobi polynomials solve the Jacobi eigen-equation") {
  const double h = 1e-4;
  for (auto [a, b] : {std::pair{0.0, 0.0}, std::pair{0.5, 1.5}, std::pair{-0.5, 0.25}}) {
    for (int k = 1; k <= 8; ++k) {
      for (double x : {-0.8, -0.1, 0.3, 0.75}) {
        const double f0 = jacobi_poly_eval(a, b, k, x);
        const double fp = jacobi_poly_eval(a, b, k, x + h);
        const double fm = jacobi_poly_eval(a, b, k, x - h);
        const double d1 = (fp - fm) / (2 * h);
        const double d2 = (fp - 2 * f0 + fm) / (h * h);
        const double sigma = 1 - x * x;
        const double tau = b - a - (a + b + 2) * x;
        const double lambda = k * (k + a + b + 1);
        CHECK(std::abs(sigma * d2 + tau * d1 + lambda * f0) < 1e-6 * std::max(1.0, lambda * std::abs(f0)) * 10);
      }
    }
  }
}

TEST_CASE("normalized legendre table matches Legendre for m = 0") {
  std::vector<double> table(11 * 12 / 2);
  for (double x : {-0.7, 0.1, 0.9}) {
    normalized_legendre_table(10, x, table);
    for (int l = 0; l <= 10; ++l)
      CHECK(table[l * (l + 1) / 2] == doctest::Approx(std::sqrt(2.0 * l + 1) * gegenbauer_eval(0.5, l, x)).epsilon(1e-12));
  }
}

TEST_CASE("geodesic distance") {
  const auto c = ManifoldModel::circle();
  CHECK(geodesic_distance(c, Point::angle(0), Point::angle(3 * pi / 2)) == doctest::Approx(pi / 2));
  CHECK(geodesic_distance(c, Point::angle(-pi), Point::angle(pi)) == doctest::Approx(0.0).scale(1.0));
  const auto s = ManifoldModel::sphere(3);
  const auto x = Point::unit({0.3, -0.2, 0.9});
  const auto mx = Point::unit({-0.3, 0.2, -0.9});
  CHECK(geodesic_distance(s, x, mx) == doctest::Approx(pi));
  const auto j = ManifoldModel::jacobi(0, 0);
  CHECK(geodesic_distance(j, Point::interval(1), Point::interval(-1)) == doctest::Approx(pi));

  RandomStream rng(11);
  for (const auto& m : all_models()) {
    for (int i = 0; i < 1000; ++i) {
      const auto a = random_point(m, rng), b = random_point(m, rng), d = random_point(m, rng);
      const double ab = geodesic_distance(m, a, b);
      CHECK(ab == doctest::Approx(geodesic_distance(m, b, a)).epsilon(1e-12).scale(1.0));
      CHECK(ab <= geodesic_distance(m, a, d) + geodesic_distance(m, d, b) + 1e-12);
      CHECK(ab <= m.diameter() + 1e-12);
      CHECK(geodesic_distance(m, a, a) < 1e-7);
    }
  }
}

TEST_CASE("point validation") {
  const auto s = ManifoldModel::sphere(3);
  CHECK_NOTHROW(validate_point(s, Point::unit({1, 2, 3})));
  CHECK_THROWS(validate_point(s, Point{{1.0, 0.0, 0.1}}));
  CHECK_THROWS(validate_point(ManifoldModel::jacobi(0, 0), Point::interval(1.2)));
}

TEST_CASE("quadrature basics") {
  const auto c = quadrature(ManifoldModel::circle(), 16);
  CHECK(std::abs(integrate(c, [](const Point& p) { return 2 * std::cos(3 * p[0]); })) < 1e-14);
  const auto s = quadrature(ManifoldModel::sphere(3), 24);
  CHECK(integrate(s, [](const Point&) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-13));
  // z^2 has mean 1/3 over the normalized sphere
  CHECK(integrate(s, [](const Point& p) { return p[2] * p[2]; }) == doctest::Approx(1.0 / 3).epsilon(1e-13));
  CHECK_THROWS(quadrature(ManifoldModel::circle(), 0));
  CHECK_THROWS(quadrature(ManifoldModel::sphere(4), 8));
  for (const auto& m : all_models()) {
    const auto rule = quadrature(m, 9);
    double total = 0.0;
    for (double w : rule.weights) {
      CHECK(w > 0.0);
      total += w;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("projector traces, idempotence and orthogonality") {
  RandomStream rng(3);
  for (const auto& m : all_models()) {
    const auto wide = quadrature_for_band(m, 21);
    for (int k = 0; k <= 20; ++k) {
      const double tr = integrate(wide, [&](const Point& x) { return projector_kernel(m, k, x, x); });
      CHECK(tr == doctest::Approx(multiplicity(m, k)).epsilon(1e-8));
    }
    const auto rule = quadrature_for_band(m, 10);
    for (int pair = 0; pair < 50; ++pair) {
      const auto x = random_point(m, rng), y = random_point(m, rng);
      for (int k = 0; k <= 10; ++k) {
        const double pk = projector_kernel(m, k, x, y);
        CHECK(pk == doctest::Approx(projector_kernel(m, k, y, x)).epsilon(1e-12));
        const double idem = integrate(rule, [&](const Point& u) { return projector_kernel(m, k, x, u) * projector_kernel(m, k, u, y); });
        CHECK(std::abs(idem - pk) < 1e-8 * std::max(1.0, std::abs(pk)));
        if (pair < 5)
          for (int j = 0; j < k; ++j) {
            const double cross =
                integrate(rule, [&](const Point& u) { return projector_kernel(m, j, x, u) * projector_kernel(m, k, u, y); });
            CHECK(std::abs(cross) < 1e-8 * std::max(1.0, std::abs(pk)));
          }
      }
    }
  }
  CHECK(projector_kernel(ManifoldModel::circle(), 1, Point::angle(0), Point::angle(0)) == 2.0);
  const auto x = Point::unit({1, 1, 1});
  CHECK(projector_kernel(ManifoldModel::sphere(3), 1, x, x) == doctest::Approx(3.0));
  CHECK(projector_kernel(ManifoldModel::jacobi(0, 0), 0, Point::interval(0.2), Point::interval(-0.7)) == 1.0);
}

TEST_CASE("ball measures are Ahlfors regular") {
  RandomStream rng(5);
  // Chebyshev interval: explicit arc measure in the angle variable
  const auto cheb = ManifoldModel::jacobi(-0.5, -0.5);
  for (int i = 0; i < 200; ++i) {
    const auto x = random_point(cheb, rng);
    const double r = pi * rng.uniform();
    const double th = std::acos(x[0]);
    const double exact = (std::min(pi, th + r) - std::max(0.0, th - r)) / pi;
    CHECK(ball_measure(cheb, x, r) == doctest::Approx(exact).epsilon(1e-9));
  }
  for (const auto& m : {ManifoldModel::circle(), ManifoldModel::sphere(3), cheb}) {
    double lo = 1e300, hi = 0.0;
    for (int i = 0; i < 500; ++i) {
      const auto x = random_point(m, rng);
      const double r = m.diameter() * rng.uniform();
      const double ratio = ball_measure(m, x, r) / std::pow(r, m.dim());
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    CHECK(lo > 0.0);
    CHECK(hi / lo < 4.0);
  }
  // a sphere ball from quadrature agrees with the cap formula
  const auto s = ManifoldModel::sphere(3);
  const auto rule = quadrature(s, 200);
  const auto centre = Point::unit({0, 0, 1});
  const double cap = integrate(rule, [&](const Point& u) { return geodesic_distance(s, centre, u) <= 0.7 ? 1.0 : 0.0; });
  CHECK(cap == doctest::Approx(ball_measure(s, centre, 0.7)).epsilon(1e-2));
}

TEST_CASE("covering numbers") {
  const auto c = ManifoldModel::circle();
  CHECK(covering_number(c, pi) == 1);
  CHECK(covering_number(c, 4.0) == 1);
  const long quarter = covering_number(c, pi / 4);
  CHECK(quarter >= 4);
  CHECK(quarter <= 8);
  CHECK_THROWS(covering_number(c, 0.0));
  for (const auto& m : {c, ManifoldModel::jacobi(-0.5, -0.5), ManifoldModel::sphere(3)}) {
    double lo = 1e300, hi = 0.0;
    for (double delta : {0.05, 0.1, 0.2, 0.4, 0.7, 1.0}) {
      const double scaled = covering_number(m, delta) * std::pow(delta, m.dim());
      lo = std::min(lo, scaled);
      hi = std::max(hi, scaled);
    }
    CHECK(hi / lo < 4.0);
  }
}
