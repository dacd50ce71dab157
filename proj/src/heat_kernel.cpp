#include "heatgp/heat_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <cstdio>
#include <string>

#include "heatgp/polynomials.hpp"

namespace heatgp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kThetaSwitch = 0.05;

void check_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("heat time must be positive");
}

double wrapped(double d) {
  d = std::remainder(d, 2.0 * kPi);
  return d;
}

}  // namespace

double spectral_tail_bound(const ManifoldModel& model, double t, int K) {
  check_time(t);
  const double lead = std::exp(-eigenvalue(model, K + 1) * t) * multiplicity(model, K + 1);
  if (lead == 0.0) return 0.0;
  const double gap = eigenvalue(model, K + 2) - eigenvalue(model, K + 1);
  const double r = std::exp(-gap * t);
  const double p = model.kind() == ManifoldKind::Sphere ? model.ambient() - 2 : 0;
  // sum_j j^p r^(j-1), then a geometric bound once the term ratio is below 1
  double sum = 0.0;
  for (int j = 1;; ++j) {
    const double term = std::pow(static_cast<double>(j), p) * std::pow(r, j - 1);
    sum += term;
    const double ratio = std::pow((j + 1.0) / j, p) * r;
    if (ratio < 0.5 || (ratio < 1.0 && j > 64)) {
      sum += term * ratio / (1.0 - ratio);
      break;
    }
    if (j > 10000000) return std::numeric_limits<double>::infinity();
  }
  return lead * sum;
}

int choose_truncation(const ManifoldModel& model, double t, const TruncationPolicy& policy) {
  check_time(t);
  for (int K = 0; K <= policy.K_max; ++K)
    if (spectral_tail_bound(model, t, K) < policy.tol) return K;
  throw TruncationError("truncation budget K_max=" + std::to_string(policy.K_max) +
                        " exhausted at t=" + std::to_string(t));
}

double heat_kernel_spectral(const ManifoldModel& model, double t, const Point& x, const Point& y,
                            const TruncationPolicy& policy) {
  const int K = choose_truncation(model, t, policy);
  switch (model.kind()) {
    case ManifoldKind::Circle: {
      const double d = x[0] - y[0];
      double sum = 1.0;
      for (int k = 1; k <= K; ++k) sum += 2.0 * std::exp(-eigenvalue(model, k) * t) * std::cos(k * d);
      return sum;
    }
    case ManifoldKind::Sphere: {
      const double nu = 0.5 * (model.ambient() - 2);
      double c = 0.0;
      for (std::size_t i = 0; i < x.coords.size(); ++i) c += x[i] * y[i];
      c = std::clamp(c, -1.0, 1.0);
      double prev = 1.0, cur = 2.0 * nu * c;
      double sum = 1.0;
      for (int k = 1; k <= K; ++k) {
        if (k >= 2) {
          const double next = (2.0 * c * (k + nu - 1.0) * cur - (k + 2.0 * nu - 2.0) * prev) / k;
          prev = cur;
          cur = next;
        }
        sum += std::exp(-eigenvalue(model, k) * t) * (1.0 + k / nu) * cur;
      }
      return sum;
    }
    case ManifoldKind::Jacobi: break;
  }
  std::vector<double> px(K + 1), py(K + 1);
  jacobi_poly_table(model.alpha(), model.beta(), x[0], px);
  jacobi_poly_table(model.alpha(), model.beta(), y[0], py);
  double sum = 0.0;
  for (int k = 0; k <= K; ++k) sum += std::exp(-eigenvalue(model, k) * t) * px[k] * py[k];
  return sum;
}

double heat_kernel_eval(const ManifoldModel& model, double t, const Point& x, const Point& y,
                        const TruncationPolicy& policy) {
  check_time(t);
  if (model.kind() == ManifoldKind::Circle && t < kThetaSwitch) return circle_theta_eval(t, x[0], y[0]);
  return heat_kernel_spectral(model, t, x, y, policy);
}

double circle_theta_eval(double t, double x, double y) {
  check_time(t);
  const double d = wrapped(x - y);
  double sum = std::exp(-d * d / (4.0 * t));
  for (int l = 1;; ++l) {
    const double a = d - 2.0 * kPi * l;
    const double b = d + 2.0 * kPi * l;
    const double ta = std::exp(-a * a / (4.0 * t));
    const double tb = std::exp(-b * b / (4.0 * t));
    sum += ta + tb;
    // images further out only get smaller
    if (std::max(ta, tb) < 1e-16 || l > 100000) break;
  }
  return std::sqrt(kPi / t) * sum;
}

double heat_trace(const ManifoldModel& model, double t, const TruncationPolicy& policy) {
  const int K = choose_truncation(model, t, policy);
  double sum = 0.0;
  for (int k = K; k >= 0; --k) sum += std::exp(-eigenvalue(model, k) * t) * multiplicity(model, k);
  return sum;
}

EnvelopeFit envelope_fit(const ManifoldModel& model, std::span<const double> t_grid,
                         std::span<const PointPair> pairs, const TruncationPolicy& policy) {
  if (t_grid.empty() || pairs.empty()) throw std::invalid_argument("envelope fit needs nonempty grids");
  const double half_d = 0.5 * model.dim();
  std::vector<double> ys, zs;
  EnvelopeFit fit;
  for (double t : t_grid) {
    if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("envelope fit needs t in (0, 1)");
    for (const auto& [x, y] : pairs) {
      const double p = heat_kernel_eval(model, t, x, y, policy);
      const double diag = std::sqrt(heat_kernel_eval(model, t, x, x, policy) *
                                    heat_kernel_eval(model, t, y, y, policy));
      if (!(p > 1e-10 * diag)) {
        ++fit.skipped;
        continue;
      }
      const double rho = geodesic_distance(model, x, y);
      ys.push_back(std::log(p) + half_d * std::log(t));
      zs.push_back(rho * rho / t);
    }
  }
  fit.used = ys.size();
  if (ys.empty()) throw std::invalid_argument("no resolvable kernel values on the grid");

  constexpr int kSteps = 4000;
  constexpr double kMaxRate = 4.0;
  double best_upper = std::numeric_limits<double>::infinity();
  double best_lower = std::numeric_limits<double>::infinity();
  for (int s = 0; s <= kSteps; ++s) {
    const double c = kMaxRate * s / kSteps;
    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ys.size(); ++i) {
      const double v = ys[i] + c * zs[i];
      hi = std::max(hi, v);
      lo = std::min(lo, v);
    }
    // largest log gap between each envelope and the data
    double gap_hi = 0.0, gap_lo = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
      const double v = ys[i] + c * zs[i];
      gap_hi = std::max(gap_hi, hi - v);
      gap_lo = std::max(gap_lo, v - lo);
    }
    if (gap_hi < best_upper) {
      best_upper = gap_hi;
      fit.c_upper = c;
      fit.C_upper = std::exp(hi);
    }
    if (gap_lo < best_lower && c > 0.0) {
      best_lower = gap_lo;
      fit.c_lower = c;
      fit.C_lower = std::exp(lo);
    }
  }
  fit.upper_gap = best_upper;
  fit.lower_gap = best_lower;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double value = std::exp(ys[i]);
    const double upper = fit.C_upper * std::exp(-fit.c_upper * zs[i]);
    const double lower = fit.C_lower * std::exp(-fit.c_lower * zs[i]);
    fit.residual = std::max({fit.residual, (value - upper) / upper, (lower - value) / lower});
  }
  return fit;
}

void write_kernel_csv(std::ostream& os, const ManifoldModel& model, std::span<const double> t_grid,
                      std::span<const PointPair> pairs, const TruncationPolicy& policy) {
  auto coords = [](const Point& p) {
    std::string s;
    for (std::size_t i = 0; i < p.coords.size(); ++i) {
      if (i) s += ";";
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", p.coords[i]);
      s += buf;
    }
    return s;
  };
  os << "t,x,y,value\n";
  os.precision(17);
  for (double t : t_grid)
    for (const auto& [x, y] : pairs)
      os << t << "," << coords(x) << "," << coords(y) << "," << heat_kernel_eval(model, t, x, y, policy) << "\n";
}

}  // namespace heatgp
