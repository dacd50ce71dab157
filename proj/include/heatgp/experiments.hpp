#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "heatgp/concentration.hpp"
#include "heatgp/hyperprior.hpp"
#include "heatgp/io.hpp"
#include "heatgp/manifold.hpp"

namespace heatgp {

enum class StudyKind { RateWhiteNoise, RateRegression, RateDensity, LowerBound, Entropy, SmallBall, PriorCheck };

std::string to_string(StudyKind kind);
StudyKind study_kind_from_string(const std::string& name);

struct HyperpriorSettings {
  double a = 2.0;
  std::optional<double> q;  // defaults to 1 + d/2
  double t_min = 1e-3;

  HyperpriorParams make(int d) const { return make_hyperprior(a, d, q, t_min); }
  bool operator==(const HyperpriorSettings&) const = default;
};

// Common fields are typed; study-specific knobs live in `options` and are
// read with defaults by each runner.
struct ExperimentConfig {
  StudyKind kind = StudyKind::RateWhiteNoise;
  ManifoldModel model = ManifoldModel::circle();
  double s = 1.0;
  HyperpriorSettings hyperprior;
  std::vector<double> n_schedule;
  int replicates = 1;
  std::uint64_t seed = 1;
  std::string output;
  Json options = Json::object();

  bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig config_from_json(const Json& j);
Json config_to_json(const ExperimentConfig& config);
// FNV-1a of the canonical JSON dump, as 16 hex digits
std::string config_hash(const ExperimentConfig& config);

// One value per row. `x1`/`x2` are the study axes named in the manifest
// (n, t, eps, ...); unused axes hold 0.
struct ResultRow {
  std::string metric;
  double x1 = 0.0;
  double x2 = 0.0;
  int replicate = 0;
  double value = 0.0;
};

struct FitSummary {
  std::string name;
  double slope = 0.0;
  double slope_se = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t count = 0;
  bool degenerate = false;
};

struct ToleranceCheck {
  std::string name;
  double value = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string note;
};

struct ResultRecord {
  ExperimentConfig config;
  std::string config_hash;
  std::vector<std::string> axes{"", ""};
  std::vector<ResultRow> rows;
  std::vector<FitSummary> fits;
  std::vector<ToleranceCheck> checks;
  std::vector<std::string> notes;
  double wall_seconds = 0.0;

  bool passed() const;
  const FitSummary* fit(const std::string& name) const;
  const ToleranceCheck* check(const std::string& name) const;
  std::vector<double> values(const std::string& metric) const;
};

struct CostEstimate {
  double seconds = 0.0;
  std::string summary;
};

// Rough single-core cost; throws std::invalid_argument for configurations
// outside the supported budget.
CostEstimate estimate_cost(const ExperimentConfig& config);

ResultRecord run_rate_study(const ExperimentConfig& config, int threads = 1);
ResultRecord run_lowerbound_study(const ExperimentConfig& config, int threads = 1);
ResultRecord run_entropy_study(const ExperimentConfig& config, int threads = 1);
ResultRecord run_smallball_study(const ExperimentConfig& config, int threads = 1);
ResultRecord run_priormass_check(const ExperimentConfig& config, int threads = 1);
// dispatch on config.kind
ResultRecord run_study(const ExperimentConfig& config, int threads = 1);

// Writes results.csv and manifest.json (pure functions of the config) and
// timing.json (wall clock) into `dir`.
void emit_results(const ResultRecord& record, const std::filesystem::path& dir);
std::string results_csv(const ResultRecord& record);
Json results_manifest(const ResultRecord& record);

// Draws from the density proportional to exp(w) by rejection from the
// uniform law; the envelope is the maximum of w over a dense grid plus slack.
std::vector<Point> sample_exp_density(const BandVector& w, std::size_t n, RandomStream& rng);

}  // namespace heatgp
