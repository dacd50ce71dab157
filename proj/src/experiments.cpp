#include "heatgp/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "heatgp/basis.hpp"
#include "heatgp/covering.hpp"
#include "heatgp/density.hpp"
#include "heatgp/distances.hpp"
#include "heatgp/gaussian_ball.hpp"
#include "heatgp/gp_prior.hpp"
#include "heatgp/heat_kernel.hpp"
#include "heatgp/parallel.hpp"
#include "heatgp/quadrature.hpp"
#include "heatgp/regression.hpp"
#include "heatgp/stats.hpp"
#include "heatgp/whitenoise.hpp"

namespace heatgp {

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr std::size_t kDensitySampleCap = 5000;

const std::pair<StudyKind, const char*> kKindNames[] = {
    {StudyKind::RateWhiteNoise, "rate-whitenoise"}, {StudyKind::RateRegression, "rate-regression"},
    {StudyKind::RateDensity, "rate-density"},       {StudyKind::LowerBound, "lowerbound"},
    {StudyKind::Entropy, "entropy"},                {StudyKind::SmallBall, "smallball"},
    {StudyKind::PriorCheck, "priorcheck"},
};

template <class T>
T option(const ExperimentConfig& c, const char* key, T fallback) {
  return c.options.contains(key) ? c.options.at(key).get<T>() : fallback;
}

std::vector<double> option_list(const ExperimentConfig& c, const char* key, std::vector<double> fallback) {
  return c.options.contains(key) ? c.options.at(key).get<std::vector<double>>() : fallback;
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  std::vector<double> v;
  for (int i = 0; i < count; ++i)
    v.push_back(count == 1 ? lo : std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (count - 1)));
  return v;
}

void require_schedule(const ExperimentConfig& c) {
  if (c.n_schedule.empty()) throw std::invalid_argument("study needs a nonempty n_schedule");
}

FitSummary make_fit(std::string name, std::span<const double> x, std::span<const double> y) {
  const auto f = linear_fit(x, y);
  return {std::move(name), f.slope, f.slope_se, f.intercept, f.r2, f.count, f.degenerate};
}

ToleranceCheck within(std::string name, const FitSummary& fit, double target, double tol) {
  ToleranceCheck c{std::move(name), fit.slope, target, tol, false, ""};
  c.passed = !fit.degenerate && std::abs(fit.slope - target) <= tol;
  if (fit.degenerate) c.note = "degenerate fit";
  return c;
}

ToleranceCheck at_least(std::string name, double value, double threshold, bool degenerate = false) {
  ToleranceCheck c{std::move(name), value, threshold, 0.0, !degenerate && value >= threshold, ""};
  if (degenerate) c.note = "degenerate fit";
  return c;
}

double rate_target(const ExperimentConfig& c) { return -c.s / (2.0 * c.s + c.model.dim()); }

double log_n_over_log_n(double n) { return std::log(n / std::log(n)); }

BandVector study_truth(const ExperimentConfig& c) {
  return besov_block_truth(c.model, c.s, option(c, "block_base", 2.0), option(c, "blocks", 7),
                           option<std::uint64_t>(c, "allocation_seed", 0))
      .coefficients;
}

ResultRecord start_record(const ExperimentConfig& c) {
  ResultRecord r;
  r.config = c;
  r.config_hash = config_hash(c);
  return r;
}

// Rate studies share the (n, replicate) task layout and the slope check.
struct RateTask {
  double n;
  int replicate;
};

std::vector<RateTask> rate_tasks(const ExperimentConfig& c) {
  std::vector<RateTask> tasks;
  for (double n : c.n_schedule)
    for (int r = 0; r < c.replicates; ++r) tasks.push_back({n, r});
  return tasks;
}

void finish_rate(ResultRecord& rec, const std::string& metric, double default_tol) {
  const auto& c = rec.config;
  std::vector<double> x, y;
  for (const auto& row : rec.rows)
    if (row.metric == metric) {
      x.push_back(log_n_over_log_n(row.x1));
      y.push_back(std::log(row.value));
    }
  rec.fits.push_back(make_fit("rate", x, y));
  rec.checks.push_back(within("rate_slope", rec.fits.back(), rate_target(c), option(c, "slope_tolerance", default_tol)));
}

ResultRecord rate_whitenoise(const ExperimentConfig& c, int threads) {
  require_schedule(c);
  auto rec = start_record(c);
  rec.axes = {"n", ""};
  const auto truth = study_truth(c);
  const auto params = c.hyperprior.make(c.model.dim());
  const auto grid = log_time_grid(params.t_min, option(c, "grid_size", 64));
  const int K = inference_truncation(c.model, params.t_min, option(c, "truncation_tol", 1e-10));
  const auto tasks = rate_tasks(c);
  std::vector<std::pair<double, double>> out(tasks.size());
  const RandomStream root(c.seed);
  parallel_for(tasks.size(), threads, [&](std::size_t i) {
    auto rng = root.split("whitenoise", i);
    const auto data = simulate_whitenoise(truth, tasks[i].n, K, rng);
    const auto post = whitenoise_posterior(data, params, grid);
    out[i] = {posterior_functional(post, truth, 0.5, 0, RandomStream(0)).mean_l2_error, post.mean_time()};
  });
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    rec.rows.push_back({"l2_error", tasks[i].n, 0.0, tasks[i].replicate, out[i].first});
    rec.rows.push_back({"mean_t", tasks[i].n, 0.0, tasks[i].replicate, out[i].second});
  }
  finish_rate(rec, "l2_error", 0.1);
  return rec;
}

ResultRecord rate_regression(const ExperimentConfig& c, int threads) {
  require_schedule(c);
  auto rec = start_record(c);
  rec.axes = {"n", ""};
  const auto truth = study_truth(c);
  const auto params = c.hyperprior.make(c.model.dim());
  const auto grid = log_time_grid(params.t_min, option(c, "grid_size", 32));
  const int K = option(c, "basis_K", inference_truncation(c.model, params.t_min, option(c, "truncation_tol", 1e-10)));
  const BasisEvaluator basis(c.model, std::max(K, truth.K()));
  const auto tasks = rate_tasks(c);
  std::vector<std::pair<double, double>> out(tasks.size());
  const RandomStream root(c.seed);
  parallel_for(tasks.size(), threads, [&](std::size_t i) {
    auto rng = root.split("regression", i);
    std::vector<Point> pts;
    for (std::size_t j = 0; j < static_cast<std::size_t>(tasks[i].n); ++j) pts.push_back(random_point(c.model, rng));
    const auto data = simulate_regression(truth, basis, std::move(pts), rng);
    const auto post = regression_posterior(data, basis, params, grid);
    out[i] = {empirical_distance(post.mixture.posterior_mean(), truth, basis, data.points), post.mixture.mean_time()};
  });
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    rec.rows.push_back({"empirical_error", tasks[i].n, 0.0, tasks[i].replicate, out[i].first});
    rec.rows.push_back({"mean_t", tasks[i].n, 0.0, tasks[i].replicate, out[i].second});
  }
  finish_rate(rec, "empirical_error", 0.15);
  return rec;
}

McmcConfig mcmc_from_options(const ExperimentConfig& c) {
  McmcConfig m;
  const Json o = c.options.value("mcmc", Json::object());
  m.iterations = o.value("iterations", 20000);
  m.burn_in = o.value("burn_in", 5000);
  m.pcn_beta = o.value("pcn_beta", 0.2);
  m.t_step = o.value("t_step", 0.3);
  m.thin = o.value("thin", 10);
  m.adapt = o.value("adapt", true);
  return m;
}

ResultRecord rate_density(const ExperimentConfig& c, int threads) {
  require_schedule(c);
  auto rec = start_record(c);
  rec.axes = {"n", ""};
  const auto params = c.hyperprior.make(c.model.dim());
  const int K = inference_truncation(c.model, params.t_min, option(c, "truncation_tol", 1e-10));
  BandVector w0 = study_truth(c);
  for (double& v : w0.values()) v *= option(c, "truth_scale", 1.0);
  const auto grid = density_grid(c.model, K);
  const BasisEvaluator truth_basis(w0.layout_ptr());
  const Eigen::VectorXd w_grid = field_values(w0, truth_basis.design_matrix(grid.nodes));
  std::vector<double> truth(grid.size());
  double z = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) z += grid.weights[i] * std::exp(w_grid(i));
  for (std::size_t i = 0; i < grid.size(); ++i) truth[i] = std::exp(w_grid(i)) / z;
  const auto mcmc = mcmc_from_options(c);

  const auto tasks = rate_tasks(c);
  struct Outcome {
    double hellinger, coef_rate, time_rate;
    std::size_t warnings;
  };
  std::vector<Outcome> out(tasks.size());
  const RandomStream root(c.seed);
  parallel_for(tasks.size(), threads, [&](std::size_t i) {
    auto rng = root.split("density-data", i);
    const DensityData data{sample_exp_density(w0, static_cast<std::size_t>(tasks[i].n), rng)};
    const DensityTarget target(data, c.model, K, grid, params);
    auto cfg = mcmc;
    cfg.seed = root.split("density-chain", i).key();
    const auto chain = density_mcmc(target, cfg);
    out[i] = {hellinger(chain.mean_density, truth, grid), chain.coefficient_acceptance, chain.time_acceptance,
              chain.warnings.size()};
  });
  std::size_t warned = 0;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    rec.rows.push_back({"hellinger", tasks[i].n, 0.0, tasks[i].replicate, out[i].hellinger});
    rec.rows.push_back({"coefficient_acceptance", tasks[i].n, 0.0, tasks[i].replicate, out[i].coef_rate});
    rec.rows.push_back({"time_acceptance", tasks[i].n, 0.0, tasks[i].replicate, out[i].time_rate});
    warned += out[i].warnings > 0;
  }
  if (warned) rec.notes.push_back(std::to_string(warned) + " chains reported acceptance warnings");

  std::vector<double> x, y, avg;
  for (double n : c.n_schedule) {
    double s = 0.0;
    for (std::size_t i = 0; i < tasks.size(); ++i)
      if (tasks[i].n == n) {
        x.push_back(log_n_over_log_n(n));
        y.push_back(std::log(out[i].hellinger));
        s += out[i].hellinger;
      }
    avg.push_back(s / c.replicates);
  }
  rec.fits.push_back(make_fit("rate", x, y));
  std::size_t decreasing = 0;
  for (std::size_t i = 1; i < avg.size(); ++i) decreasing += avg[i] < avg[i - 1];
  ToleranceCheck mono{"hellinger_decreasing", double(decreasing), double(avg.size() - 1), 0.0,
                      avg.size() > 1 && decreasing + 1 == avg.size(), ""};
  if (avg.size() < 2) mono.note = "single schedule point";
  rec.checks.push_back(mono);
  if (option(c, "check_slope", false))
    rec.checks.push_back(within("rate_slope", rec.fits.back(), rate_target(c), option(c, "slope_tolerance", 0.25)));
  return rec;
}

ResultRecord lowerbound(const ExperimentConfig& c, int threads) {
  require_schedule(c);
  auto rec = start_record(c);
  rec.axes = {"n", "radius"};
  const int d = c.model.dim();
  const double n = option(c, "n", c.n_schedule.back());
  const double factor = option(c, "radius_factor", 0.3);
  const double q1 = c.hyperprior.q.value_or(1.0 + d / 2.0);
  const double q2 = q1 + option(c, "q_offset", 2.0);
  const auto p1 = make_hyperprior(c.hyperprior.a, d, q1, c.hyperprior.t_min);
  const auto p2 = make_hyperprior(c.hyperprior.a, d, q2, c.hyperprior.t_min);
  const auto grid = log_time_grid(c.hyperprior.t_min, option(c, "grid_size", 64));
  const int K = inference_truncation(c.model, c.hyperprior.t_min, option(c, "truncation_tol", 1e-10));
  const auto truth = study_truth(c);
  const double eps_n = std::pow(n / std::log(n), rate_target(c));
  const double radius = factor * eps_n;
  const auto mc_draws = option<std::size_t>(c, "mc_draws", 2000);

  struct Outcome {
    double log1, log2, mc1, mc2;
  };
  std::vector<Outcome> out(static_cast<std::size_t>(c.replicates));
  const RandomStream root(c.seed);
  parallel_for(out.size(), threads, [&](std::size_t r) {
    auto rng = root.split("lowerbound", r);
    const auto data = simulate_whitenoise(truth, n, K, rng);
    const auto a = whitenoise_posterior(data, p1, grid);
    const auto b = whitenoise_posterior(data, p2, grid);
    out[r] = {posterior_ball_log_mass(a, truth, radius), posterior_ball_log_mass(b, truth, radius),
              mc_draws ? posterior_ball_mass_mc(a, truth, radius, mc_draws, root.split("mc", r)) : 0.0,
              mc_draws ? posterior_ball_mass_mc(b, truth, radius, mc_draws, root.split("mc", r)) : 0.0};
  });
  std::size_t smaller = 0;
  for (std::size_t r = 0; r < out.size(); ++r) {
    const int rep = static_cast<int>(r);
    rec.rows.push_back({"log_mass_q1", n, radius, rep, out[r].log1});
    rec.rows.push_back({"log_mass_q2", n, radius, rep, out[r].log2});
    if (mc_draws) {
      rec.rows.push_back({"mc_mass_q1", n, radius, rep, out[r].mc1});
      rec.rows.push_back({"mc_mass_q2", n, radius, rep, out[r].mc2});
    }
    smaller += out[r].log2 < out[r].log1;
  }
  const double fraction = static_cast<double>(smaller) / out.size();
  rec.checks.push_back(at_least("ordering_fraction", fraction, option(c, "min_fraction", 0.7)));
  std::ostringstream note;
  note << "eps_n " << eps_n << ", radius " << radius << ", q " << q1 << " vs " << q2;
  rec.notes.push_back(note.str());
  return rec;
}

ResultRecord entropy(const ExperimentConfig& c, int) {
  auto rec = start_record(c);
  rec.axes = {"t", "eps"};
  const int d = c.model.dim();
  const auto ts = option_list(c, "t_grid", log_spaced(0.002, 0.05, 10));
  const auto epss = option_list(c, "eps_grid", log_spaced(1e-4, 0.1, 10));
  std::vector<double> carl, via_cover, closed, log_t, log_log, log_k;
  for (double t : ts)
    for (double eps : epss) {
      const long k = carl_entropy_lower(c.model, t, eps);
      const double delta = 1.0 / std::sqrt(std::log(1.0 / eps) / t);
      const long cover = covering_number(c.model, delta);
      rec.rows.push_back({"carl_k", t, eps, 0, double(k)});
      rec.rows.push_back({"carl_dimension", t, eps, 0, double(carl_dimension(c.model, t, eps))});
      rec.rows.push_back({"covering", t, eps, 0, double(cover)});
      carl.push_back(double(k));
      via_cover.push_back(double(cover) * std::log(1.0 / eps));
      closed.push_back(std::pow(t, -0.5 * d) * std::pow(std::log(1.0 / eps), 1.0 + 0.5 * d));
      if (k > 0) {
        log_t.push_back(std::log(t));
        log_log.push_back(std::log(std::log(1.0 / eps)));
        log_k.push_back(std::log(double(k)));
      }
    }
  const double r2_min = option(c, "r2_min", 0.99);
  rec.fits.push_back(make_fit("carl_vs_covering", via_cover, carl));
  rec.checks.push_back(at_least("r2_covering", rec.fits.back().r2, r2_min, rec.fits.back().degenerate));
  rec.fits.push_back(make_fit("carl_vs_scaling", closed, carl));
  rec.checks.push_back(at_least("r2_scaling", rec.fits.back().r2, r2_min, rec.fits.back().degenerate));

  // exponent of t with log log(1/eps) as a second regressor
  FitSummary expo{"t_exponent"};
  expo.count = log_k.size();
  const bool spread_t = ts.size() > 1, spread_e = epss.size() > 1;
  if (log_k.size() >= 4 && spread_t && spread_e) {
    const auto m = multiple_fit({log_t, log_log}, log_k);
    expo.intercept = m.coef[0];
    expo.slope = m.coef[1];
    expo.slope_se = m.se[1];
    expo.r2 = m.r2;
  } else if (log_k.size() >= 3 && spread_t) {
    const auto f = linear_fit(log_t, log_k);
    expo = {"t_exponent", f.slope, f.slope_se, f.intercept, f.r2, f.count, f.degenerate};
  } else {
    expo.degenerate = true;
  }
  rec.fits.push_back(expo);
  rec.checks.push_back(within("t_exponent", expo, -0.5 * d, option(c, "exponent_tolerance", 0.1)));
  return rec;
}

SmallBallNorm norm_from_name(const std::string& name) {
  if (name == "l2") return SmallBallNorm::L2;
  if (name == "sup") return SmallBallNorm::SupOnGrid;
  throw std::invalid_argument("unknown small-ball norm '" + name + "' (expected l2 or sup)");
}

ResultRecord smallball(const ExperimentConfig& c, int threads) {
  auto rec = start_record(c);
  rec.axes = {"t", "eps"};
  const int d = c.model.dim();
  const auto ts = option_list(c, "t_grid", log_spaced(0.05, 0.5, 8));
  const double eps = option(c, "eps", 0.5);
  SmallBallOptions opt;
  opt.norm = norm_from_name(option<std::string>(c, "norm", "l2"));
  opt.n_mc = option<std::size_t>(c, "n_mc", 100000);
  opt.threads = threads;
  opt.min_probability = option(c, "min_probability", 1e-4);
  const std::string on_infeasible = option<std::string>(c, "on_infeasible", "error");
  if (on_infeasible != "error" && on_infeasible != "skip")
    throw std::invalid_argument("on_infeasible must be 'error' or 'skip'");
  const RandomStream root(c.seed);
  std::vector<double> x, y;
  double largest = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double t = ts[i];
    if (opt.norm == SmallBallNorm::L2) {
      const auto layout = make_layout(c.model, choose_truncation(c.model, t));
      std::vector<double> var(layout->size()), off(layout->size(), 0.0);
      for (std::size_t j = 0; j < var.size(); ++j) var[j] = std::exp(-layout->slot_eigenvalues()[j] * t);
      rec.rows.push_back({"saddlepoint_log_p", t, eps, 0, log_gaussian_ball_probability(var, off, eps)});
    }
    try {
      const auto e = small_ball_mc(c.model, t, eps, opt, root.split("small-ball", i));
      rec.rows.push_back({"p_hat", t, eps, 0, e.p_hat});
      rec.rows.push_back({"ci_halfwidth", t, eps, 0, e.ci_halfwidth});
      const double neglog = -std::log(e.p_hat);
      largest = std::max(largest, neglog);
      if (neglog > 0.0) {
        x.push_back(std::log(1.0 / t));
        y.push_back(std::log(neglog));
      }
    } catch (const SmallBallInfeasible& err) {
      if (on_infeasible == "error") throw;
      std::ostringstream note;
      note << "t " << t << " refused: " << err.what();
      rec.notes.push_back(note.str());
    }
  }
  rec.fits.push_back(make_fit("shape", x, y));
  rec.checks.push_back(within("shape_slope", rec.fits.back(), 0.5 * d, option(c, "slope_tolerance", 0.15)));
  ToleranceCheck informative{"informative", largest, option(c, "min_neglog", 0.05), 0.0, false, ""};
  informative.passed = largest >= informative.target;
  if (!informative.passed) informative.note = "-log p stays near 0; eps too large for this t range";
  rec.checks.push_back(informative);
  return rec;
}

ResultRecord priorcheck(const ExperimentConfig& c, int threads) {
  auto rec = start_record(c);
  rec.axes = {"eps", ""};
  const int d = c.model.dim();
  auto epss = option_list(c, "eps_grid", log_spaced(0.3, 0.95, 12));
  std::sort(epss.begin(), epss.end());
  const auto params = c.hyperprior.make(d);
  const int K = inference_truncation(c.model, params.t_min, option(c, "truncation_tol", 1e-10));
  const auto layout = make_layout(c.model, K);
  const BandVector truth = study_truth(c).on_layout(layout);
  const double truth_norm = truth.norm();
  const auto n_mc = option<std::size_t>(c, "n_mc", 200000);
  const double min_p = option(c, "min_probability", 1e-4);

  // coupled draws: squared distances to the truth and to zero
  constexpr std::size_t kChunk = 4096;
  const std::size_t chunks = (n_mc + kChunk - 1) / kChunk;
  std::vector<std::vector<std::size_t>> hits(chunks, std::vector<std::size_t>(epss.size(), 0));
  std::vector<std::vector<std::size_t>> centred(chunks, std::vector<std::size_t>(epss.size(), 0));
  const RandomStream root(c.seed);
  const auto lambdas = layout->slot_eigenvalues();
  parallel_for(chunks, threads, [&](std::size_t ch) {
    auto rng = root.split("prior-mass", ch);
    std::vector<double> x(layout->size());
    const std::size_t count = std::min(kChunk, n_mc - ch * kChunk);
    for (std::size_t i = 0; i < count; ++i) {
      const double t = hyperprior_sample(params, rng);
      rng.fill_normal(x);
      double to_truth = 0.0, to_zero = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) {
        const double w = std::exp(-0.5 * lambdas[j] * t) * x[j];
        to_truth += (w - truth[j]) * (w - truth[j]);
        to_zero += w * w;
      }
      for (std::size_t e = 0; e < epss.size(); ++e) {
        hits[ch][e] += to_truth <= epss[e] * epss[e];
        const double inner = epss[e] - truth_norm;
        centred[ch][e] += inner > 0.0 && to_zero <= inner * inner;
      }
    }
  });

  // deterministic quadrature over t of the Gaussian ball probability
  const auto tgrid = log_time_grid(params.t_min, option(c, "grid_size", 96));
  std::vector<double> x, y;
  bool triangle_ok = true;
  std::size_t excluded = 0;
  for (std::size_t e = 0; e < epss.size(); ++e) {
    std::size_t h = 0, h0 = 0;
    for (std::size_t ch = 0; ch < chunks; ++ch) {
      h += hits[ch][e];
      h0 += centred[ch][e];
    }
    const double p = static_cast<double>(h) / n_mc;
    rec.rows.push_back({"p_hat", epss[e], 0.0, 0, p});
    rec.rows.push_back({"ci_halfwidth", epss[e], 0.0, 0, wilson_halfwidth(h, n_mc)});
    if (epss[e] > truth_norm) {
      rec.rows.push_back({"p_hat_centred", epss[e], 0.0, 0, static_cast<double>(h0) / n_mc});
      triangle_ok = triangle_ok && h >= h0;
    }
    std::vector<double> terms;
    std::vector<double> var(layout->size()), off(layout->size());
    for (std::size_t g = 0; g < tgrid.size(); ++g) {
      for (std::size_t j = 0; j < var.size(); ++j) {
        var[j] = std::exp(-lambdas[j] * tgrid.t[g]);
        off[j] = -truth[j];
      }
      terms.push_back(hyperprior_logdensity(params, tgrid.t[g]) + tgrid.log_width[g] +
                      log_gaussian_ball_probability(var, off, epss[e]));
    }
    rec.rows.push_back({"saddlepoint_log_p", epss[e], 0.0, 0, log_sum_exp(terms)});
    if (p >= min_p && p < 1.0) {
      x.push_back(std::log(1.0 / epss[e]));
      y.push_back(std::log(-std::log(p)));
    } else {
      ++excluded;
    }
  }
  if (excluded) rec.notes.push_back(std::to_string(excluded) + " eps values excluded (Monte Carlo infeasible or p = 1)");
  rec.fits.push_back(make_fit("shape", x, y));
  rec.checks.push_back(within("shape_slope", rec.fits.back(), d / c.s, option(c, "slope_tolerance", 0.15)));
  rec.checks.push_back({"triangle", triangle_ok ? 1.0 : 0.0, 1.0, 0.0, triangle_ok,
                        "P(|W - f0| <= eps) >= P(|W| <= eps - |f0|) on coupled draws"});
  return rec;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double layout_size_estimate(const ManifoldModel& model, double t_min) {
  return static_cast<double>(make_layout(model, inference_truncation(model, t_min))->size());
}

}  // namespace

std::string to_string(StudyKind kind) {
  for (const auto& [k, name] : kKindNames)
    if (k == kind) return name;
  throw std::logic_error("unnamed study kind");
}

StudyKind study_kind_from_string(const std::string& name) {
  for (const auto& [k, n] : kKindNames)
    if (name == n) return k;
  throw std::invalid_argument("unknown experiment kind '" + name + "'");
}

ExperimentConfig config_from_json(const Json& j) {
  ExperimentConfig c;
  c.kind = study_kind_from_string(j.at("kind").get<std::string>());
  if (j.contains("model")) c.model = model_from_json(j.at("model"));
  c.s = j.value("s", 1.0);
  if (j.contains("hyperprior")) {
    const auto& h = j.at("hyperprior");
    c.hyperprior.a = h.value("a", 2.0);
    if (h.contains("q") && !h.at("q").is_null()) c.hyperprior.q = h.at("q").get<double>();
    c.hyperprior.t_min = h.value("t_min", 1e-3);
  }
  c.n_schedule = j.value("n_schedule", std::vector<double>{});
  c.replicates = j.value("replicates", 1);
  c.seed = j.value("seed", std::uint64_t{1});
  c.output = j.value("output", std::string{});
  c.options = j.value("options", Json::object());
  if (!c.options.is_object()) throw std::invalid_argument("options must be an object");
  if (c.replicates < 1) throw std::invalid_argument("replicates must be at least 1");
  for (std::size_t i = 1; i < c.n_schedule.size(); ++i)
    if (!(c.n_schedule[i] > c.n_schedule[i - 1])) throw std::invalid_argument("n_schedule must be strictly increasing");
  for (double n : c.n_schedule)
    if (!(n > 1.0)) throw std::invalid_argument("n_schedule entries must exceed 1");
  if (!(c.s > 0.0)) throw std::invalid_argument("smoothness s must be positive");
  if (!(c.hyperprior.a > 1.0)) throw std::invalid_argument("hyperprior a must exceed 1");
  if (!(c.hyperprior.t_min > 0.0 && c.hyperprior.t_min < 1.0)) throw std::invalid_argument("t_min must lie in (0, 1)");
  return c;
}

Json config_to_json(const ExperimentConfig& c) {
  Json h{{"a", c.hyperprior.a}, {"t_min", c.hyperprior.t_min}};
  h["q"] = c.hyperprior.q ? Json(*c.hyperprior.q) : Json(nullptr);
  return {{"kind", to_string(c.kind)}, {"model", model_to_json(c.model)}, {"s", c.s},
          {"hyperprior", h},           {"n_schedule", c.n_schedule},      {"replicates", c.replicates},
          {"seed", c.seed},            {"output", c.output},              {"options", c.options}};
}

std::string config_hash(const ExperimentConfig& config) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(hash_string(config_to_json(config).dump())));
  return buf;
}

bool ResultRecord::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const ToleranceCheck& c) { return c.passed; });
}

const FitSummary* ResultRecord::fit(const std::string& name) const {
  for (const auto& f : fits)
    if (f.name == name) return &f;
  return nullptr;
}

const ToleranceCheck* ResultRecord::check(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::vector<double> ResultRecord::values(const std::string& metric) const {
  std::vector<double> v;
  for (const auto& r : rows)
    if (r.metric == metric) v.push_back(r.value);
  return v;
}

CostEstimate estimate_cost(const ExperimentConfig& c) {
  const double tasks = static_cast<double>(std::max<std::size_t>(c.n_schedule.size(), 1)) * c.replicates;
  const double t_min = c.hyperprior.t_min;
  std::ostringstream msg;
  msg << to_string(c.kind) << ": ";
  CostEstimate est;
  switch (c.kind) {
    case StudyKind::RateWhiteNoise: {
      const double m = layout_size_estimate(c.model, t_min);
      est.seconds = tasks * option(c, "grid_size", 64) * m * 3e-8;
      msg << tasks << " posterior fits on " << m << " coefficients";
      break;
    }
    case StudyKind::RateRegression: {
      const double m = layout_size_estimate(c.model, t_min);
      double per = 0.0;
      for (double n : c.n_schedule) {
        const double k = std::min(n, m);
        per += k * k * k / 3.0 + n * m * k;
      }
      est.seconds = per * c.replicates * option(c, "grid_size", 32) * 1e-9;
      msg << tasks << " regression fits with up to " << m << " basis functions";
      break;
    }
    case StudyKind::RateDensity: {
      for (double n : c.n_schedule)
        if (n > kDensitySampleCap) {
          std::ostringstream err;
          const double m = layout_size_estimate(c.model, t_min);
          err << "density study limited to n <= " << kDensitySampleCap << " (requested " << n
              << "); each chain costs about "
              << mcmc_from_options(c).iterations * 2.0 * 512 * m * 1e-9 << " s and sampling grows with n";
          throw std::invalid_argument(err.str());
        }
      const double m = layout_size_estimate(c.model, t_min);
      est.seconds = tasks * mcmc_from_options(c).iterations * 2.0 * 512 * m * 1.5e-9;
      msg << tasks << " MCMC chains of " << mcmc_from_options(c).iterations << " iterations";
      break;
    }
    case StudyKind::LowerBound: {
      const double m = layout_size_estimate(c.model, t_min);
      est.seconds = c.replicates * 2.0 * option(c, "grid_size", 64) * m * 2e-7;
      msg << c.replicates << " replicate pairs of mixture ball masses";
      break;
    }
    case StudyKind::Entropy: {
      const double cells = static_cast<double>(option_list(c, "t_grid", std::vector<double>(10)).size() *
                                               option_list(c, "eps_grid", std::vector<double>(10)).size());
      est.seconds = cells * (c.model.dim() == 2 ? 0.2 : 0.002);
      msg << cells << " (t, eps) cells";
      break;
    }
    case StudyKind::SmallBall: {
      const double pts = static_cast<double>(option_list(c, "t_grid", std::vector<double>(8)).size());
      const double draws = static_cast<double>(option<std::size_t>(c, "n_mc", 100000));
      est.seconds = pts * draws * 100 * 1.5e-8;
      msg << pts << " times x " << draws << " draws";
      break;
    }
    case StudyKind::PriorCheck: {
      const double m = layout_size_estimate(c.model, t_min);
      const double draws = static_cast<double>(option<std::size_t>(c, "n_mc", 200000));
      est.seconds = draws * m * 1.5e-8;
      msg << draws << " hierarchical draws on " << m << " coefficients";
      break;
    }
  }
  msg << ", about " << std::max(0.1, std::round(est.seconds * 10) / 10) << " s on one core";
  est.summary = msg.str();
  return est;
}

ResultRecord run_rate_study(const ExperimentConfig& config, int threads) {
  switch (config.kind) {
    case StudyKind::RateWhiteNoise: return rate_whitenoise(config, threads);
    case StudyKind::RateRegression: return rate_regression(config, threads);
    case StudyKind::RateDensity:
      estimate_cost(config);
      return rate_density(config, threads);
    default: throw std::invalid_argument("not a rate study: " + to_string(config.kind));
  }
}

ResultRecord run_lowerbound_study(const ExperimentConfig& config, int threads) { return lowerbound(config, threads); }
ResultRecord run_entropy_study(const ExperimentConfig& config, int threads) { return entropy(config, threads); }
ResultRecord run_smallball_study(const ExperimentConfig& config, int threads) { return smallball(config, threads); }
ResultRecord run_priormass_check(const ExperimentConfig& config, int threads) { return priorcheck(config, threads); }

ResultRecord run_study(const ExperimentConfig& config, int threads) {
  const auto start = std::chrono::steady_clock::now();
  ResultRecord rec;
  switch (config.kind) {
    case StudyKind::RateWhiteNoise:
    case StudyKind::RateRegression:
    case StudyKind::RateDensity: rec = run_rate_study(config, threads); break;
    case StudyKind::LowerBound: rec = run_lowerbound_study(config, threads); break;
    case StudyKind::Entropy: rec = run_entropy_study(config, threads); break;
    case StudyKind::SmallBall: rec = run_smallball_study(config, threads); break;
    case StudyKind::PriorCheck: rec = run_priormass_check(config, threads); break;
  }
  rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

std::string results_csv(const ResultRecord& record) {
  std::ostringstream os;
  os << "metric," << (record.axes[0].empty() ? "x1" : record.axes[0]) << ","
     << (record.axes[1].empty() ? "x2" : record.axes[1]) << ",replicate,value\n";
  for (const auto& r : record.rows)
    os << r.metric << ',' << format_double(r.x1) << ',' << format_double(r.x2) << ',' << r.replicate << ','
       << format_double(r.value) << '\n';
  return os.str();
}

Json results_manifest(const ResultRecord& record) {
  Json fits = Json::array();
  for (const auto& f : record.fits)
    fits.push_back({{"name", f.name},
                    {"slope", f.slope},
                    {"slope_se", f.slope_se},
                    {"intercept", f.intercept},
                    {"r2", f.r2},
                    {"count", f.count},
                    {"degenerate", f.degenerate}});
  Json checks = Json::array();
  for (const auto& c : record.checks)
    checks.push_back({{"name", c.name},
                      {"value", c.value},
                      {"target", c.target},
                      {"tolerance", c.tolerance},
                      {"passed", c.passed},
                      {"note", c.note}});
  return {{"config", config_to_json(record.config)},
          {"config_hash", record.config_hash},
          {"seed", record.config.seed},
          {"axes", record.axes},
          {"rows", record.rows.size()},
          {"fits", fits},
          {"checks", checks},
          {"notes", record.notes},
          {"passed", record.passed()},
          {"software", {{"name", "heatgp"}, {"version", kVersion}}}};
}

void emit_results(const ResultRecord& record, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_text_file(dir / "results.csv", results_csv(record));
  write_text_file(dir / "manifest.json", results_manifest(record).dump(2) + "\n");
  const Json timing{{"config_hash", record.config_hash}, {"wall_seconds", record.wall_seconds}};
  write_text_file(dir / "timing.json", timing.dump(2) + "\n");
}

std::vector<Point> sample_exp_density(const BandVector& w, std::size_t n, RandomStream& rng) {
  const auto& model = w.model();
  const BasisEvaluator basis(w.layout_ptr());
  const auto dense = quadrature_for_band(model, 8 * std::max(w.K(), 4));
  const Eigen::VectorXd values = field_values(w, basis.design_matrix(dense.nodes));
  const double ceiling = values.maxCoeff() + 0.05 + 0.01 * w.norm();
  std::vector<Point> out;
  out.reserve(n);
  std::vector<double> e(basis.size());
  while (out.size() < n) {
    Point x = random_point(model, rng);
    basis.evaluate(x, e);
    double v = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) v += e[i] * w[i];
    if (v > ceiling) throw std::runtime_error("rejection envelope too low for the density field");
    if (std::log(rng.uniform()) < v - ceiling) out.push_back(std::move(x));
  }
  return out;
}

}  // namespace heatgp
