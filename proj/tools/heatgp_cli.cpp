// heatgp command line: data simulation, posterior fits and the batch studies.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "heatgp/basis.hpp"
#include "heatgp/density.hpp"
#include "heatgp/distances.hpp"
#include "heatgp/experiments.hpp"
#include "heatgp/gp_prior.hpp"
#include "heatgp/heat_kernel.hpp"
#include "heatgp/io.hpp"
#include "heatgp/regression.hpp"
#include "heatgp/whitenoise.hpp"

using namespace heatgp;
namespace fs = std::filesystem;

namespace {

struct CommonArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("config,--config", args.config, "JSON configuration file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", args.seed, "override the configured seed");
  cmd->add_option("--out", args.out, "output directory");
  cmd->add_option("--threads", args.threads, "worker threads")->check(CLI::PositiveNumber);
}

fs::path out_dir(const CommonArgs& args, const Json& cfg, const char* fallback) {
  if (!args.out.empty()) return args.out;
  return cfg.value("output", std::string(fallback));
}

std::uint64_t seed_of(const CommonArgs& args, const Json& cfg) {
  return args.seed ? *args.seed : cfg.value("seed", std::uint64_t{1});
}

HyperpriorParams hyperprior_of(const Json& cfg, int d) {
  const Json h = cfg.value("hyperprior", Json::object());
  std::optional<double> q;
  if (h.contains("q") && !h.at("q").is_null()) q = h.at("q").get<double>();
  return make_hyperprior(h.value("a", 2.0), d, q, h.value("t_min", 1e-3));
}

// `data` is either an inline object or a path relative to the config file.
Json data_of(const Json& cfg, const fs::path& config_path) {
  const Json& d = cfg.at("data");
  if (d.is_object()) return d;
  fs::path p = d.get<std::string>();
  if (p.is_relative()) p = config_path.parent_path() / p;
  return read_json_file(p);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

int report(const std::vector<ToleranceCheck>& checks) {
  bool ok = true;
  for (const auto& c : checks) {
    std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << ": value " << fmt(c.value) << ", target "
              << fmt(c.target);
    if (c.tolerance > 0) std::cout << " +/- " << fmt(c.tolerance);
    if (!c.note.empty()) std::cout << " (" << c.note << ")";
    std::cout << "\n";
    ok = ok && c.passed;
  }
  return ok ? 0 : 1;
}

Json checks_json(const std::vector<ToleranceCheck>& checks) {
  Json a = Json::array();
  for (const auto& c : checks)
    a.push_back({{"name", c.name}, {"value", c.value}, {"target", c.target}, {"tolerance", c.tolerance},
                 {"passed", c.passed}});
  return a;
}

int cmd_sample_prior(const CommonArgs& args) {
  const Json cfg = read_json_file(args.config);
  const auto model = model_from_json(cfg.at("model"));
  const std::uint64_t seed = seed_of(args, cfg);
  RandomStream rng = RandomStream(seed).split("sample-prior");
  TruncationPolicy policy;
  policy.tol = cfg.value("truncation_tol", policy.tol);
  const auto field = cfg.contains("t") ? sample_field(model, cfg.at("t").get<double>(), policy, rng)
                                       : sample_hierarchical(model, hyperprior_of(cfg, model.dim()), policy, rng);
  const fs::path dir = out_dir(args, cfg, "prior");
  fs::create_directories(dir);
  write_text_file(dir / "field.json", field_to_json(field, seed).dump(2) + "\n");
  if (cfg.contains("resolution")) {
    const auto rule = quadrature(model, cfg.at("resolution").get<int>());
    const BasisEvaluator basis(field.theta.layout_ptr());
    const auto values = field_values(field.theta, basis.design_matrix(rule.nodes));
    std::ostringstream os;
    os.precision(17);
    os << "node,weight,value\n";
    for (std::size_t i = 0; i < rule.size(); ++i) os << i << ',' << rule.weights[i] << ',' << values(i) << '\n';
    write_text_file(dir / "values.csv", os.str());
  }
  std::cout << "t " << fmt(field.t) << ", K " << field.theta.K() << ", " << field.theta.size()
            << " coefficients -> " << dir.string() << "\n";
  return 0;
}

int cmd_kernel(const CommonArgs& args) {
  const Json cfg = read_json_file(args.config);
  const auto model = model_from_json(cfg.at("model"));
  const auto times = cfg.at("t").get<std::vector<double>>();
  std::vector<std::pair<Point, Point>> pts;
  for (const auto& p : cfg.at("pairs")) pts.emplace_back(point_from_json(model, p.at(0)), point_from_json(model, p.at(1)));
  const fs::path dir = out_dir(args, cfg, "kernel");
  fs::create_directories(dir);
  std::ofstream os(dir / "kernel.csv");
  write_kernel_csv(os, model, times, pts);
  return os ? 0 : 1;
}

// Simulates a data file for the fit-* commands from a block truth.
int cmd_simulate(const CommonArgs& args) {
  const Json cfg = read_json_file(args.config);
  const auto model = model_from_json(cfg.at("model"));
  const std::uint64_t seed = seed_of(args, cfg);
  const std::string kind = cfg.at("kind").get<std::string>();
  const std::size_t n = cfg.at("n").get<std::size_t>();
  BandVector truth = besov_block_truth(model, cfg.value("s", 1.0), cfg.value("block_base", 2.0),
                                       cfg.value("blocks", 7), cfg.value("allocation_seed", std::uint64_t{0}))
                         .coefficients;
  RandomStream rng = RandomStream(seed).split("simulate:" + kind);
  Json data;
  if (kind == "whitenoise") {
    const int K = inference_truncation(model, cfg.value("t_min", 1e-3));
    data = whitenoise_to_json(simulate_whitenoise(truth, double(n), K, rng), seed);
  } else if (kind == "regression") {
    const BasisEvaluator basis(truth.layout_ptr());
    std::vector<Point> pts;
    for (std::size_t i = 0; i < n; ++i) pts.push_back(random_point(model, rng));
    data = regression_to_json(model, simulate_regression(truth, basis, pts, rng, cfg.value("noise_sd", 1.0)), seed);
  } else if (kind == "density") {
    for (double& v : truth.values()) v *= cfg.value("truth_scale", 1.0);
    data = density_data_to_json(model, DensityData{sample_exp_density(truth, n, rng)}, seed);
  } else {
    throw std::invalid_argument("simulate kind must be whitenoise, regression or density");
  }
  data["truth"] = bands_to_json(truth);
  const fs::path dir = out_dir(args, cfg, "data");
  fs::create_directories(dir);
  write_text_file(dir / "data.json", data.dump() + "\n");
  std::cout << kind << " data, n " << n << " -> " << (dir / "data.json").string() << "\n";
  return 0;
}

void write_mixture(const fs::path& dir, const PosteriorMixture& post) {
  fs::create_directories(dir);
  std::ofstream a(dir / "posterior.csv");
  write_posterior_csv(a, post);
  std::ofstream b(dir / "coefficients.csv");
  write_coefficient_table(b, post);
}

std::vector<ToleranceCheck> mixture_checks(const PosteriorMixture& post) {
  double total = 0.0;
  for (double w : post.weights()) total += w;
  return {{"weights_normalized", total, 1.0, 1e-12, std::abs(total - 1.0) <= 1e-12, ""}};
}

int cmd_fit_whitenoise(const CommonArgs& args) {
  const Json cfg = read_json_file(args.config);
  const Json raw = data_of(cfg, args.config);
  const auto data = whitenoise_from_json(raw);
  const auto& model = data.X.model();
  const auto params = hyperprior_of(cfg, model.dim());
  const auto post = whitenoise_posterior(data, params, log_time_grid(params.t_min, cfg.value("grid_size", 64)));
  const fs::path dir = out_dir(args, cfg, "fit");
  write_mixture(dir, post);
  auto checks = mixture_checks(post);
  Json summary{{"n", data.n}, {"mean_t", post.mean_time()}, {"seed", seed_of(args, cfg)}};
  if (raw.contains("truth")) {
    const auto truth = bands_from_json(model, raw.at("truth"));
    const auto f = posterior_functional(post, truth, cfg.value("credible_level", 0.95),
                                        cfg.value("draws", std::size_t{1000}),
                                        RandomStream(seed_of(args, cfg)).split("credible"));
    summary["l2_error"] = f.mean_l2_error;
    summary["credible_radius"] = f.credible_radius;
    std::cout << "L2 error " << fmt(f.mean_l2_error) << ", credible radius " << fmt(f.credible_radius) << "\n";
  }
  summary["checks"] = checks_json(checks);
  write_text_file(dir / "summary.json", summary.dump(2) + "\n");
  std::cout << "posterior mean t " << fmt(post.mean_time()) << " -> " << dir.string() << "\n";
  return report(checks);
}

int cmd_fit_regression(const CommonArgs& args) {
  const Json cfg = read_json_file(args.config);
  const Json raw = data_of(cfg, args.config);
  const auto model = model_from_json(raw.at("model"));
  const auto data = regression_from_json(raw);
  const auto params = hyperprior_of(cfg, model.dim());
  const int K = cfg.value("K", inference_truncation(model, params.t_min));
  const BasisEvaluator basis(model, K);
  const std::string route_name = cfg.value("route", std::string("auto"));
  const RegressionRoute route = route_name == "function"  ? RegressionRoute::FunctionSpace
                                : route_name == "weight" ? RegressionRoute::WeightSpace
                                                         : RegressionRoute::Auto;
  const auto fit =
      regression_posterior(data, basis, params, log_time_grid(params.t_min, cfg.value("grid_size", 32)), route);
  const fs::path dir = out_dir(args, cfg, "fit");
  write_mixture(dir, fit.mixture);
  auto checks = mixture_checks(fit.mixture);
  Json summary{{"n", data.y.size()},
               {"mean_t", fit.mixture.mean_time()},
               {"route", fit.route == RegressionRoute::FunctionSpace ? "function" : "weight"},
               {"log_marginal", fit.log_marginal}};
  if (raw.contains("truth")) {
    const auto truth = bands_from_json(model, raw.at("truth"));
    summary["empirical_error"] = empirical_distance(fit.mixture.posterior_mean(), truth, basis, data.points);
    std::cout << "empirical error " << fmt(summary["empirical_error"].get<double>()) << "\n";
  }
  summary["checks"] = checks_json(checks);
  write_text_file(dir / "summary.json", summary.dump(2) + "\n");
  std::cout << "posterior mean t " << fmt(fit.mixture.mean_time()) << " -> " << dir.string() << "\n";
  return report(checks);
}

int cmd_fit_density(const CommonArgs& args) {
  const Json cfg = read_json_file(args.config);
  const Json raw = data_of(cfg, args.config);
  const auto model = model_from_json(raw.at("model"));
  const auto data = density_data_from_json(raw);
  const auto params = hyperprior_of(cfg, model.dim());
  const int K = cfg.value("K", inference_truncation(model, params.t_min));
  const Link link = cfg.value("link", std::string("exp")) == "softplus" ? Link::softplus() : Link::exp();
  const DensityTarget target(data, model, K, density_grid(model, K), params, link);
  const Json m = cfg.value("mcmc", Json::object());
  McmcConfig mc;
  mc.iterations = m.value("iterations", mc.iterations);
  mc.burn_in = m.value("burn_in", mc.burn_in);
  mc.pcn_beta = m.value("pcn_beta", mc.pcn_beta);
  mc.t_step = m.value("t_step", mc.t_step);
  mc.thin = m.value("thin", 10);
  mc.adapt = m.value("adapt", mc.adapt);
  mc.seed = seed_of(args, cfg);
  const auto chain = density_mcmc(target, mc);
  const fs::path dir = out_dir(args, cfg, "fit");
  fs::create_directories(dir);
  {
    std::ofstream os(dir / "chain.bin", std::ios::binary);
    write_chain_binary(os, chain);
  }
  std::ostringstream dens;
  dens.precision(17);
  dens << "node,weight,density\n";
  for (std::size_t i = 0; i < chain.mean_density.size(); ++i)
    dens << i << ',' << target.grid().weights[i] << ',' << chain.mean_density[i] << '\n';
  write_text_file(dir / "density.csv", dens.str());

  const double lo = cfg.value("acceptance_min", 0.15), hi = cfg.value("acceptance_max", 0.5);
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  std::vector<ToleranceCheck> checks{
      {"coefficient_acceptance", chain.coefficient_acceptance, mid, half,
       std::abs(chain.coefficient_acceptance - mid) <= half, ""},
  };
  Json diag = chain_diagnostics(chain, mc);
  diag["checks"] = checks_json(checks);
  write_text_file(dir / "diagnostics.json", diag.dump(2) + "\n");
  for (const auto& w : chain.warnings) std::cout << "warning: " << w << "\n";
  std::cout << chain.t.size() << " stored states -> " << dir.string() << "\n";
  return report(checks);
}

int cmd_study(const CommonArgs& args, const std::vector<StudyKind>& allowed) {
  const Json raw = read_json_file(args.config);
  auto config = config_from_json(raw);
  if (std::find(allowed.begin(), allowed.end(), config.kind) == allowed.end())
    throw std::invalid_argument("config kind '" + to_string(config.kind) + "' does not match this subcommand");
  if (args.seed) config.seed = *args.seed;
  if (!args.out.empty()) config.output = args.out;
  if (config.output.empty()) config.output = "results/" + to_string(config.kind);
  const auto cost = estimate_cost(config);
  std::cout << "estimated cost: " << cost.summary << "\n" << std::flush;
  const auto record = run_study(config, args.threads);
  emit_results(record, config.output);
  for (const auto& f : record.fits)
    std::cout << "fit " << f.name << ": slope " << fmt(f.slope) << " +/- " << fmt(f.slope_se) << ", r2 "
              << fmt(f.r2) << ", " << f.count << " points" << (f.degenerate ? " (degenerate)" : "") << "\n";
  for (const auto& n : record.notes) std::cout << "note: " << n << "\n";
  std::cout << record.rows.size() << " rows in " << fmt(record.wall_seconds) << " s -> " << config.output << "\n";
  return report(record.checks);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"heat-kernel Gaussian process priors on compact manifolds"};
  app.require_subcommand(1);
  std::map<std::string, CommonArgs> args;
  std::map<std::string, std::function<int(const CommonArgs&)>> actions;
  auto add = [&](const std::string& name, const std::string& help, std::function<int(const CommonArgs&)> fn) {
    add_common(app.add_subcommand(name, help), args[name]);
    actions[name] = std::move(fn);
  };
  using K = StudyKind;
  add("sample-prior", "draw a prior field (fixed t or hierarchical)", cmd_sample_prior);
  add("kernel", "tabulate the heat kernel as t,x,y,value", cmd_kernel);
  add("simulate", "simulate a data file from a block truth", cmd_simulate);
  add("fit-whitenoise", "mixture posterior for white-noise data", cmd_fit_whitenoise);
  add("fit-regression", "mixture posterior for fixed-design regression", cmd_fit_regression);
  add("fit-density", "MCMC posterior for density estimation", cmd_fit_density);
  add("rate-study", "posterior contraction rate study", [](const CommonArgs& a) {
    return cmd_study(a, {K::RateWhiteNoise, K::RateRegression, K::RateDensity});
  });
  add("lowerbound-study", "hyperprior lower-bound ordering", [](const CommonArgs& a) {
    return cmd_study(a, {K::LowerBound});
  });
  add("entropy-study", "metric entropy scaling", [](const CommonArgs& a) { return cmd_study(a, {K::Entropy}); });
  add("smallball-study", "small-ball probability scaling", [](const CommonArgs& a) {
    return cmd_study(a, {K::SmallBall});
  });
  add("priormass-check", "prior mass around a block truth", [](const CommonArgs& a) {
    return cmd_study(a, {K::PriorCheck});
  });
  CLI11_PARSE(app, argc, argv);
  const std::string name = app.get_subcommands().front()->get_name();
  try {
    return actions.at(name)(args.at(name));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
