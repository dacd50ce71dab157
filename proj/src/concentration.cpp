#include "heatgp/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "heatgp/gp_prior.hpp"
#include "heatgp/heat_kernel.hpp"
#include "heatgp/parallel.hpp"
#include "heatgp/stats.hpp"

namespace heatgp {

namespace {

double bump(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }

// log(exp(a) + exp(b))
double log_add(double a, double b) {
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

double logistic(double z) { return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z)); }

}  // namespace

double LittlewoodPaley::operator()(double x) const {
  if (x <= 1.0) return 1.0;
  if (x >= 2.0) return 0.0;
  const double a = bump(2.0 - x);
  return a / (a + bump(x - 1.0));
}

BandVector littlewood_paley_apply(const LittlewoodPaley& phi, double delta, const BandVector& f) {
  if (!(delta > 0.0)) throw std::invalid_argument("cutoff scale must be positive");
  BandVector out = f;
  const auto& layout = f.layout();
  for (int k = 0; k <= layout.K(); ++k) {
    const double factor = phi(delta * std::sqrt(layout.eigenvalue(k)));
    for (double& v : out.band(k)) v *= factor;
  }
  return out;
}

double besov_norm(const BandVector& f, double s, BesovNorm p, const LittlewoodPaley& phi,
                  const BasisEvaluator* basis, const QuadratureRule* grid) {
  const auto& layout = f.layout();
  const double top = std::sqrt(layout.eigenvalue(layout.K()));
  Eigen::MatrixXd design;
  if (p == BesovNorm::Sup) {
    if (!basis || !grid) throw std::invalid_argument("sup Besov norm needs a basis and a grid");
    design = basis->design_matrix(grid->nodes);
  }
  double best = 0.0;
  for (int j = 0; std::ldexp(1.0, j) < top; ++j) {
    BandVector diff = littlewood_paley_apply(phi, std::ldexp(1.0, -j), f);
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= f[i];
    const double norm = p == BesovNorm::L2 ? diff.norm() : field_values(diff, design).cwiseAbs().maxCoeff();
    best = std::max(best, std::pow(2.0, s * j) * norm);
  }
  return best;
}

BlockTruth besov_block_truth(const ManifoldModel& model, double s, double b, int J, std::uint64_t allocation_seed) {
  if (!(b > 1.0)) throw std::invalid_argument("block base must exceed 1");
  if (J < 1) throw std::invalid_argument("need at least one block");
  if (!(s > 0.0)) throw std::invalid_argument("smoothness must be positive");
  const double top = std::pow(b, J);
  int K = 0;
  while (std::sqrt(eigenvalue(model, K + 1)) <= top * (1.0 + 1e-14)) ++K;
  BlockTruth truth{s, b, J, BandVector(make_layout(model, K))};
  auto& f = truth.coefficients;
  RandomStream rng(allocation_seed);
  for (int j = 0; j < J; ++j) {
    const double lo = std::pow(b, j), hi = std::pow(b, j + 1);
    std::vector<std::size_t> slots;
    for (int k = 0; k <= K; ++k) {
      const double root = std::sqrt(eigenvalue(model, k));
      if (root > lo * (1.0 + 1e-14) && root <= hi * (1.0 + 1e-14))
        for (std::size_t i = f.layout().offset(k); i < f.layout().offset(k + 1); ++i) slots.push_back(i);
    }
    if (slots.empty()) {
      std::ostringstream msg;
      msg << "spectral block (" << lo << ", " << hi << "] is empty; use a larger base b";
      throw std::invalid_argument(msg.str());
    }
    const double mass = std::pow(b, -2.0 * j * s) - std::pow(b, -2.0 * (j + 1) * s);
    std::vector<double> share(slots.size(), 1.0);
    if (allocation_seed != 0)
      for (double& w : share) w = -std::log(rng.uniform());
    double total = 0.0;
    for (double w : share) total += w;
    for (std::size_t i = 0; i < slots.size(); ++i) f[slots[i]] = std::sqrt(mass * share[i] / total);
  }
  return truth;
}

ConcentrationResult approx_term(const BandVector& f, double t, double eps) {
  if (!(t > 0.0)) throw std::invalid_argument("approximation term needs t > 0");
  if (!(eps > 0.0)) throw std::invalid_argument("approximation term needs eps > 0");
  ConcentrationResult res;
  res.minimizer = BandVector(f.layout_ptr());
  const double norm = f.norm();
  if (eps >= norm) {
    res.value = 0.0;
    res.log_value = -std::numeric_limits<double>::infinity();
    res.lagrange_lambda = std::numeric_limits<double>::infinity();
    res.log_lagrange_lambda = std::numeric_limits<double>::infinity();
    return res;
  }
  const auto lambdas = f.layout().slot_eigenvalues();
  // log exp(-lambda t) and log f^2 on the support of f
  std::vector<double> log_e, log_f2;
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] == 0.0) continue;
    idx.push_back(i);
    log_e.push_back(-lambdas[i] * t);
    log_f2.push_back(2.0 * std::log(std::abs(f[i])));
  }
  // ||f - h||^2 as a function of L = log lambda*
  auto residual = [&](double L) {
    double sum = 0.0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      const double r = logistic(L - log_e[i]);
      sum += r * r * std::exp(log_f2[i]);
    }
    return sum;
  };
  const double target = eps * eps;
  const double ratio = eps / norm;
  const auto [min_e, max_e] = std::minmax_element(log_e.begin(), log_e.end());
  double lo = *min_e - 50.0;
  double hi = *max_e + std::log(ratio / (1.0 - ratio)) + 50.0;
  if (!(residual(lo) < target && residual(hi) > target))
    throw std::runtime_error("approximation term: multiplier bracket does not contain the root");
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (residual(mid) > target ? hi : lo) = mid;
  }
  const double L = 0.5 * (lo + hi);
  std::vector<double> log_terms;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    log_terms.push_back(log_f2[i] + log_e[i] - 2.0 * log_add(L, log_e[i]));
    res.minimizer[idx[i]] = logistic(log_e[i] - L) * f[idx[i]];
  }
  res.log_value = log_sum_exp(log_terms);
  res.value = std::exp(res.log_value);
  res.log_lagrange_lambda = L;
  res.lagrange_lambda = std::exp(L);
  return res;
}

std::vector<SmallBallEstimate> small_ball_mc(const ManifoldModel& model, double t, const std::vector<double>& eps,
                                             const SmallBallOptions& options, RandomStream rng) {
  if (options.n_mc < 1000) throw std::invalid_argument("small-ball Monte Carlo needs at least 1000 draws");
  if (!(t > 0.0)) throw std::invalid_argument("small-ball needs t > 0");
  const int K = choose_truncation(model, t, {1e-12, 10000});
  const auto layout = make_layout(model, K);
  std::vector<double> sd(layout->size());
  for (std::size_t i = 0; i < sd.size(); ++i) sd[i] = std::exp(-0.5 * layout->slot_eigenvalues()[i] * t);

  Eigen::MatrixXd design;
  if (options.norm == SmallBallNorm::SupOnGrid) {
    QuadratureRule grid;
    if (model.kind() == ManifoldKind::Sphere) {
      int r = 1;
      while (2 * r * r < 4096) ++r;
      grid = quadrature(model, r);
    } else {
      grid = quadrature(model, 512);
    }
    design = BasisEvaluator(layout).design_matrix(grid.nodes);
  }

  constexpr std::size_t kChunk = 4096;
  const std::size_t chunks = (options.n_mc + kChunk - 1) / kChunk;
  std::vector<std::vector<std::size_t>> hits(chunks, std::vector<std::size_t>(eps.size(), 0));
  parallel_for(chunks, options.threads, [&](std::size_t c) {
    RandomStream stream = rng.split(c);
    const std::size_t begin = c * kChunk;
    const std::size_t end = std::min(options.n_mc, begin + kChunk);
    Eigen::VectorXd theta(sd.size());
    for (std::size_t d = begin; d < end; ++d) {
      for (std::size_t i = 0; i < sd.size(); ++i) theta(i) = sd[i] * stream.normal();
      const double norm = options.norm == SmallBallNorm::L2 ? theta.norm() : (design * theta).cwiseAbs().maxCoeff();
      for (std::size_t e = 0; e < eps.size(); ++e)
        if (norm <= eps[e]) ++hits[c][e];
    }
  });

  std::vector<SmallBallEstimate> out;
  for (std::size_t e = 0; e < eps.size(); ++e) {
    SmallBallEstimate est;
    est.eps = eps[e];
    est.draws = options.n_mc;
    for (std::size_t c = 0; c < chunks; ++c) est.hits += hits[c][e];
    est.p_hat = static_cast<double>(est.hits) / options.n_mc;
    est.ci_halfwidth = wilson_halfwidth(est.hits, options.n_mc);
    if (options.refuse_infeasible && est.p_hat < options.min_probability) {
      std::ostringstream msg;
      msg << "small-ball probability at t=" << t << ", eps=" << eps[e] << " estimated " << est.p_hat << " ("
          << est.hits << "/" << options.n_mc << " draws) is below " << options.min_probability
          << "; Monte Carlo is infeasible here";
      throw SmallBallInfeasible(msg.str());
    }
    out.push_back(est);
  }
  return out;
}

SmallBallEstimate small_ball_mc(const ManifoldModel& model, double t, double eps, const SmallBallOptions& options,
                                RandomStream rng) {
  return small_ball_mc(model, t, std::vector<double>{eps}, options, rng).front();
}

long carl_dimension(const ManifoldModel& model, double t, double eps) {
  const double cut = std::sqrt(std::log(1.0 / eps) / t);
  long n = 0;
  for (int k = 0; std::sqrt(eigenvalue(model, k)) <= cut; ++k) n += multiplicity(model, k);
  return n;
}

long carl_entropy_lower(const ManifoldModel& model, double t, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("entropy bound needs eps in (0, 1)");
  if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("entropy bound needs t in (0, 1]");
  const double cut = std::sqrt(std::log(1.0 / eps) / t);
  long n = 0;
  double lambda_sum = 0.0;
  for (int k = 0; std::sqrt(eigenvalue(model, k)) <= cut; ++k) {
    n += multiplicity(model, k);
    lambda_sum += multiplicity(model, k) * eigenvalue(model, k);
  }
  const double bound = (2.0 * n * std::log(1.0 / eps) - t * lambda_sum) / std::log(2.0);
  return std::max(0L, static_cast<long>(std::floor(bound)));
}

}  // namespace heatgp
