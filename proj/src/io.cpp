#include "heatgp/io.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace heatgp {

Json model_to_json(const ManifoldModel& model) {
  switch (model.kind()) {
    case ManifoldKind::Circle: return {{"kind", "circle"}};
    case ManifoldKind::Sphere: return {{"kind", "sphere"}, {"n", model.ambient()}};
    case ManifoldKind::Jacobi: break;
  }
  return {{"kind", "jacobi"}, {"alpha", model.alpha()}, {"beta", model.beta()}};
}

ManifoldModel model_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "circle") return ManifoldModel::circle();
  if (kind == "sphere") return ManifoldModel::sphere(j.value("n", 3));
  if (kind == "jacobi") return ManifoldModel::jacobi(j.value("alpha", 0.0), j.value("beta", 0.0));
  throw std::invalid_argument("unknown model kind '" + kind + "'");
}

Json point_to_json(const Point& p) { return p.coords; }

Point point_from_json(const ManifoldModel& model, const Json& j) {
  Point p;
  if (j.is_number()) p.coords = {j.get<double>()};
  else p.coords = j.get<std::vector<double>>();
  validate_point(model, p);
  return p;
}

Json bands_to_json(const BandVector& v) {
  Json bands = Json::array();
  for (int k = 0; k <= v.K(); ++k) {
    const auto b = v.band(k);
    bands.push_back({{"k", k}, {"values", std::vector<double>(b.begin(), b.end())}});
  }
  return {{"K", v.K()}, {"bands", bands}};
}

BandVector bands_from_json(const ManifoldModel& model, const Json& j) {
  const int K = j.at("K").get<int>();
  BandVector v(make_layout(model, K));
  const auto& bands = j.at("bands");
  if (bands.size() != static_cast<std::size_t>(K + 1)) throw std::invalid_argument("band count does not match K");
  for (const auto& b : bands) {
    const int k = b.at("k").get<int>();
    const auto values = b.at("values").get<std::vector<double>>();
    auto dst = v.band(k);
    if (values.size() != dst.size()) throw std::invalid_argument("band " + std::to_string(k) + " has wrong size");
    std::copy(values.begin(), values.end(), dst.begin());
  }
  return v;
}

Json field_to_json(const FieldCoefficients& f, std::uint64_t seed) {
  Json j = bands_to_json(f.theta);
  j["t"] = f.t;
  j["model"] = model_to_json(f.theta.model());
  j["seed"] = seed;
  return j;
}

FieldCoefficients field_from_json(const Json& j) {
  const auto model = model_from_json(j.at("model"));
  return {j.at("t").get<double>(), bands_from_json(model, j)};
}

Json whitenoise_to_json(const WhiteNoiseData& d, std::uint64_t seed) {
  Json j = bands_to_json(d.X);
  j["n"] = d.n;
  j["model"] = model_to_json(d.X.model());
  j["seed"] = seed;
  return j;
}

WhiteNoiseData whitenoise_from_json(const Json& j) {
  const auto model = model_from_json(j.at("model"));
  return {j.at("n").get<double>(), bands_from_json(model, j)};
}

Json regression_to_json(const ManifoldModel& model, const RegressionData& d, std::uint64_t seed) {
  Json pts = Json::array();
  for (const auto& p : d.points) pts.push_back(point_to_json(p));
  return {{"model", model_to_json(model)}, {"seed", seed}, {"points", pts}, {"y", d.y}};
}

RegressionData regression_from_json(const Json& j) {
  const auto model = model_from_json(j.at("model"));
  RegressionData d;
  for (const auto& p : j.at("points")) d.points.push_back(point_from_json(model, p));
  d.y = j.at("y").get<std::vector<double>>();
  if (d.y.size() != d.points.size()) throw std::invalid_argument("regression data: points and y differ in length");
  return d;
}

Json density_data_to_json(const ManifoldModel& model, const DensityData& d, std::uint64_t seed) {
  Json pts = Json::array();
  for (const auto& p : d.samples) pts.push_back(point_to_json(p));
  return {{"model", model_to_json(model)}, {"seed", seed}, {"samples", pts}};
}

DensityData density_data_from_json(const Json& j) {
  const auto model = model_from_json(j.at("model"));
  DensityData d;
  for (const auto& p : j.at("samples")) d.samples.push_back(point_from_json(model, p));
  return d;
}

void write_posterior_csv(std::ostream& os, const PosteriorMixture& post) {
  os << "t,weight\n";
  os.precision(17);
  const auto w = post.weights();
  for (std::size_t g = 0; g < w.size(); ++g) os << post.grid.t[g] << "," << w[g] << "\n";
}

void write_coefficient_table(std::ostream& os, const PosteriorMixture& post) {
  const BandVector mean = post.posterior_mean();
  const bool with_sd = !post.variances.empty();
  std::vector<double> second(mean.size(), 0.0);
  if (with_sd) {
    const auto w = post.weights();
    for (std::size_t g = 0; g < w.size(); ++g)
      for (std::size_t i = 0; i < mean.size(); ++i)
        second[i] += w[g] * (post.variances[g][i] + post.means[g][i] * post.means[g][i]);
  }
  os << "band,index,eigenvalue,mean" << (with_sd ? ",sd" : "") << "\n";
  os.precision(17);
  const auto& layout = mean.layout();
  for (int k = 0; k <= layout.K(); ++k)
    for (std::size_t l = 0; l < layout.band_size(k); ++l) {
      const std::size_t i = layout.offset(k) + l;
      os << k << "," << l << "," << layout.eigenvalue(k) << "," << mean[i];
      if (with_sd) os << "," << std::sqrt(std::max(0.0, second[i] - mean[i] * mean[i]));
      os << "\n";
    }
}

void write_chain_binary(std::ostream& os, const ChainSummary& chain) {
  static_assert(std::endian::native == std::endian::little, "chain records are written little-endian");
  for (std::size_t i = 0; i < chain.t.size(); ++i) {
    os.write(reinterpret_cast<const char*>(&chain.t[i]), sizeof(double));
    const auto theta = chain.coefficients(i);
    os.write(reinterpret_cast<const char*>(theta.data()), static_cast<std::streamsize>(theta.size() * sizeof(double)));
  }
}

Json chain_diagnostics(const ChainSummary& chain, const McmcConfig& config) {
  return {{"records", chain.t.size()},
          {"record_layout", "float64 t followed by float64 coefficients, little-endian"},
          {"coefficients_per_record", chain.layout ? chain.layout->size() : 0},
          {"K", chain.layout ? chain.layout->K() : -1},
          {"model", chain.layout ? model_to_json(chain.layout->model()) : Json()},
          {"coefficient_acceptance", chain.coefficient_acceptance},
          {"time_acceptance", chain.time_acceptance},
          {"final_pcn_beta", chain.final_pcn_beta},
          {"final_t_step", chain.final_t_step},
          {"warnings", chain.warnings},
          {"config",
           {{"iterations", config.iterations},
            {"burn_in", config.burn_in},
            {"pcn_beta", config.pcn_beta},
            {"t_step", config.t_step},
            {"thin", config.thin},
            {"seed", config.seed}}}};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return Json::parse(in);
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace heatgp
