#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "heatgp/basis.hpp"
#include "heatgp/covering.hpp"
#include "heatgp/gp_prior.hpp"
#include "heatgp/heat_kernel.hpp"
#include "heatgp/quadrature.hpp"
#include "heatgp/stats.hpp"

using namespace heatgp;
using std::numbers::pi;

TEST_CASE("hyperprior density") {
  for (int d : {1, 2}) {
    const auto g = make_hyperprior(2.0, d);
    CHECK(g.q == doctest::Approx(1.0 + d / 2.0));
    CHECK(hyperprior_logdensity(g, 1.0) == doctest::Approx(g.log_normalizer).epsilon(1e-15));
    CHECK(hyperprior_logdensity(g, 0.01) < hyperprior_logdensity(g, 0.5));
    CHECK(std::isinf(hyperprior_logdensity(g, 1e-4)));
    CHECK(std::isinf(hyperprior_logdensity(g, 1.5)));
    // integrate in t directly, split where the mass sits
    auto dens = [&](double t) { return std::exp(hyperprior_logdensity(g, t)); };
    using boost::math::quadrature::gauss_kronrod;
    double total = 0.0;
    const double cuts[] = {1e-3, 0.01, 0.05, 0.2, 0.5, 1.0};
    for (int i = 0; i + 1 < 6; ++i) total += gauss_kronrod<double, 61>::integrate(dens, cuts[i], cuts[i + 1], 15, 1e-14);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(hyperprior_cdf(g, 1.0) == doctest::Approx(1.0));
    CHECK(hyperprior_cdf(g, 1e-3) == doctest::Approx(0.0));
    CHECK(hyperprior_quantile(g, hyperprior_cdf(g, 0.3)) == doctest::Approx(0.3).epsilon(1e-6));
  }
}

TEST_CASE("hyperprior sampling") {
  const auto g = make_hyperprior(2.0, 1);
  RandomStream rng(11);
  std::vector<double> draws(100000);
  for (auto& t : draws) {
    t = hyperprior_sample(g, rng);
    REQUIRE(t > g.t_min);
    REQUIRE(t <= 1.0);
  }
  CHECK(ks_statistic(draws, [&](double t) { return hyperprior_cdf(g, t); }) < 0.01);
  const double m1 = hyperprior_moment(g, 1.0);
  const double sd = std::sqrt(hyperprior_moment(g, 2.0) - m1 * m1);
  CHECK(std::abs(mean(draws) - m1) < 3 * sd / std::sqrt(double(draws.size())));
  RandomStream a(5), b(5);
  for (int i = 0; i < 100; ++i) CHECK(hyperprior_sample(g, a) == hyperprior_sample(g, b));
}

TEST_CASE("field moments at fixed t") {
  const auto c = ManifoldModel::circle();
  const double t = 0.2;
  const auto layout = make_layout(c, choose_truncation(c, t));
  const BasisEvaluator basis(layout);
  std::vector<Point> pts;
  for (int i = 0; i < 5; ++i) pts.push_back(Point::angle(-1.0 + 0.4 * i));
  for (int i = 0; i < 5; ++i) pts.push_back(Point::angle(-0.5 + 0.3 * i));
  const auto design = basis.design_matrix(pts);
  const int draws = 100000;
  std::vector<double> sum(10, 0.0), sq(10, 0.0), cross(5, 0.0);
  double l2sq = 0.0;
  RandomStream rng(21);
  for (int i = 0; i < draws; ++i) {
    const auto f = sample_field_on(layout, t, rng);
    const auto v = field_values(f.theta, design);
    for (int j = 0; j < 10; ++j) {
      sum[j] += v[j];
      sq[j] += v[j] * v[j];
    }
    for (int j = 0; j < 5; ++j) cross[j] += v[j] * v[j + 5];
    l2sq += f.theta.squared_norm();
  }
  for (int j = 0; j < 10; ++j) {
    const double var = heat_kernel_eval(c, t, pts[j], pts[j]);
    CHECK(std::abs(sum[j] / draws) < 3 * std::sqrt(var / draws));
    CHECK(sq[j] / draws == doctest::Approx(var).epsilon(0.05));
  }
  for (int j = 0; j < 5; ++j)
    CHECK(cross[j] / draws == doctest::Approx(heat_kernel_eval(c, t, pts[j], pts[j + 5])).epsilon(0.05));
  CHECK(l2sq / draws == doctest::Approx(heat_trace(c, t)).epsilon(0.05));
}

TEST_CASE("expected squared norm equals the trace") {
  RandomStream rng(22);
  for (const auto& m : {ManifoldModel::circle(), ManifoldModel::sphere(3)}) {
    for (double t : {0.05, 0.2, 0.5}) {
      const auto layout = make_layout(m, choose_truncation(m, t));
      std::vector<double> norms(4000);
      for (auto& v : norms) v = sample_field_on(layout, t, rng).theta.squared_norm();
      const double se = std::sqrt(variance(norms) / norms.size());
      CHECK(std::abs(mean(norms) - heat_trace(m, t)) < 4 * se);
    }
  }
}

TEST_CASE("coefficients independent across bands") {
  const auto c = ManifoldModel::circle();
  const auto layout = make_layout(c, 6);
  RandomStream rng(23);
  const int draws = 20000;
  std::vector<std::vector<double>> x(layout->size(), std::vector<double>(draws));
  for (int i = 0; i < draws; ++i) {
    const auto f = sample_field_on(layout, 0.1, rng);
    for (std::size_t j = 0; j < layout->size(); ++j) x[j][i] = f.theta[j] * std::exp(layout->slot_eigenvalues()[j] * 0.05);
  }
  for (std::size_t a = 0; a < x.size(); ++a) {
    CHECK(variance(x[a]) == doctest::Approx(1.0).epsilon(0.05));
    for (std::size_t b = a + 1; b < x.size(); ++b) {
      if (layout->band_of_slot(a) == layout->band_of_slot(b)) continue;
      double r = 0.0;
      for (int i = 0; i < draws; ++i) r += x[a][i] * x[b][i];
      CHECK(std::abs(r / draws) < 3.0 / std::sqrt(double(draws)) * 1.5);
    }
  }
}

TEST_CASE("hierarchical prior") {
  const auto c = ManifoldModel::circle();
  const auto g = make_hyperprior(2.0, 1);
  RandomStream rng(31);
  std::vector<double> ts(100000);
  // marginal of t only; draw the time from the same stream layout
  for (std::size_t i = 0; i < ts.size(); ++i) {
    auto sub = rng.split("draw", i);
    auto time_stream = sub.split("time", 0);
    ts[i] = hyperprior_sample(g, time_stream);
  }
  CHECK(ks_statistic(ts, [&](double t) { return hyperprior_cdf(g, t); }) < 0.01);

  std::vector<double> tt, vals;
  double above = 0.0, above_expected = 0.0;
  int n_above = 0;
  for (int i = 0; i < 3000; ++i) {
    auto s = rng.split("field", i);
    const auto f = sample_hierarchical(c, g, {}, s);
    if (i < 2) {
      auto s2 = rng.split("field", i);
      const auto f2 = sample_hierarchical(c, g, {}, s2);
      CHECK(f2.t == f.t);
      CHECK(std::equal(f.theta.values().begin(), f.theta.values().end(), f2.theta.values().begin()));
    }
    if (f.t > 0.3) {
      above += f.theta.squared_norm();
      above_expected += heat_trace(c, f.t);
      ++n_above;
    }
  }
  REQUIRE(n_above > 100);
  CHECK(above / above_expected == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("field evaluation") {
  const auto c = ManifoldModel::circle();
  const BasisEvaluator basis(c, 4);
  BandVector zero(basis.layout_ptr());
  CHECK(field_eval(zero, basis, Point::angle(0.7)) == 0.0);
  BandVector constant(basis.layout_ptr());
  constant[0] = 2.5;
  BandVector cos2(basis.layout_ptr());
  cos2.band(2)[0] = 1.0;
  for (int i = 0; i < 100; ++i) {
    const double a = -pi + 2 * pi * i / 100.0;
    CHECK(field_eval(constant, basis, Point::angle(a)) == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(std::abs(field_eval(cos2, basis, Point::angle(a)) - std::sqrt(2.0) * std::cos(2 * a)) < 1e-12);
  }
  const BasisEvaluator small(c, 2);
  CHECK_THROWS(field_eval(cos2, small, Point::angle(0.0)));
  const BasisEvaluator sphere(ManifoldModel::sphere(3), 2);
  CHECK_THROWS(field_eval(cos2, sphere, Point::unit({0, 0, 1})));
}

TEST_CASE("rkhs norm") {
  const auto c = ManifoldModel::circle();
  const auto layout = make_layout(c, 10);
  BandVector h(layout);
  CHECK(rkhs_sq_norm(h, 0.3) == 0.0);
  h.band(3)[1] = 0.5;
  CHECK(rkhs_sq_norm(h, 0.3) == doctest::Approx(0.25 * std::exp(9 * 0.3)).epsilon(1e-14));
  h.band(10)[0] = 1.0;
  CHECK(std::isinf(rkhs_sq_norm(h, 10.0)));

  // unit balls shrink as t grows: a member of the ball at t2 is a member at every t1 <= t2
  RandomStream rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const double t2 = 0.05 + 0.9 * rng.uniform();
    BandVector g(layout);
    for (auto& v : g.values()) v = rng.normal();
    const double scale = std::sqrt(rkhs_sq_norm(g, t2)) * (1.0 + rng.uniform());
    for (auto& v : g.values()) v /= scale;
    REQUIRE(rkhs_sq_norm(g, t2) <= 1.0);
    for (double t1 = t2; t1 > 0.0; t1 -= 0.04) CHECK(rkhs_sq_norm(g, t1) <= rkhs_sq_norm(g, t2) * (1 + 1e-14));
  }
}

TEST_CASE("field norms") {
  RandomStream rng(51);
  for (const auto& m : {ManifoldModel::circle(), ManifoldModel::sphere(3), ManifoldModel::jacobi(1.0, 0.0)}) {
    const int K = 8;
    const BasisEvaluator basis(m, K);
    const auto grid = quadrature_for_band(m, 2 * K);
    const auto f = sample_field(m, 0.05, {}, rng);
    BandVector theta = f.theta.with_truncation(K).on_layout(basis.layout_ptr());
    const auto n = field_norms(theta, basis, grid);
    double quad = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) quad += grid.weights[i] * std::pow(field_eval(theta, basis, grid.nodes[i]), 2);
    CHECK(n.l2 == doctest::Approx(std::sqrt(quad)).epsilon(1e-8));
    CHECK(n.sup >= n.l2);
    const auto z = field_norms(BandVector(basis.layout_ptr()), basis, grid);
    CHECK(z.l2 == 0.0);
    CHECK(z.sup == 0.0);
  }
}

TEST_CASE("addition theorem") {
  RandomStream rng(61);
  for (const auto& m : {ManifoldModel::circle(), ManifoldModel::sphere(3), ManifoldModel::jacobi(-0.5, 0.5),
                        ManifoldModel::jacobi(2.0, 1.0)}) {
    const int K = 15;
    const BasisEvaluator basis(m, K);
    for (int trial = 0; trial < 30; ++trial) {
      const auto x = random_point(m, rng), y = random_point(m, rng);
      const auto ex = basis.evaluate(x), ey = basis.evaluate(y);
      for (int k = 0; k <= K; ++k) {
        double s = 0.0;
        for (std::size_t i = basis.layout().offset(k); i < basis.layout().offset(k) + basis.layout().band_size(k); ++i)
          s += ex[i] * ey[i];
        const double p = projector_kernel(m, k, x, y);
        CHECK(std::abs(s - p) < 1e-8 * std::max(1.0, std::abs(p)));
      }
    }
  }
}

TEST_CASE("norm bands against the covering number") {
  // E||W||^2 and E sup|W|^2 relative to N(sqrt t) stay inside fixed bands
  for (const auto& m : {ManifoldModel::circle(), ManifoldModel::sphere(3)}) {
    const double d = m.dim();
    std::vector<double> trace_ratio, sup_lower, sup_upper;
    RandomStream rng(71);
    for (double t : {0.05, 0.1, 0.2, 0.35, 0.5}) {
      const double N = double(covering_number(m, std::sqrt(t)));
      trace_ratio.push_back(heat_trace(m, t) / N);
      const auto layout = make_layout(m, choose_truncation(m, t, {1e-8, 10000}));
      const BasisEvaluator basis(layout);
      const auto grid = quadrature_for_band(m, 2 * layout->K());
      const auto design = basis.design_matrix(grid.nodes);
      double sup2 = 0.0;
      const int draws = 300;
      for (int i = 0; i < draws; ++i) {
        const auto v = field_values(sample_field_on(layout, t, rng).theta, design);
        sup2 += v.cwiseAbs().maxCoeff() * v.cwiseAbs().maxCoeff();
      }
      sup2 /= draws;
      const Point x0 = m.kind() == ManifoldKind::Circle ? Point::angle(0.0) : Point::unit({0, 0, 1});
      const double inv_ball = 1.0 / ball_measure(m, x0, std::sqrt(t));
      sup_lower.push_back(sup2 / N);
      sup_upper.push_back(sup2 / (N * inv_ball));
    }
    auto spread = [](const std::vector<double>& v) {
      return *std::max_element(v.begin(), v.end()) / *std::min_element(v.begin(), v.end());
    };
    CHECK(spread(trace_ratio) < std::pow(2.0, 6 * d));
    CHECK(*std::min_element(sup_lower.begin(), sup_lower.end()) > 0.1);
    CHECK(*std::max_element(sup_upper.begin(), sup_upper.end()) < 10.0);
    CHECK(spread(trace_ratio) > 1.0);
  }
}
