#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

#include <json.hpp>

#include "heatgp/density.hpp"
#include "heatgp/layout.hpp"
#include "heatgp/regression.hpp"
#include "heatgp/whitenoise.hpp"

namespace heatgp {

using Json = nlohmann::json;

Json model_to_json(const ManifoldModel& model);
ManifoldModel model_from_json(const Json& j);

Json point_to_json(const Point& p);
Point point_from_json(const ManifoldModel& model, const Json& j);

// {K, bands: [{k, values}]}
Json bands_to_json(const BandVector& v);
BandVector bands_from_json(const ManifoldModel& model, const Json& j);

// {t, K, bands, model, seed}
Json field_to_json(const FieldCoefficients& f, std::uint64_t seed);
FieldCoefficients field_from_json(const Json& j);

Json whitenoise_to_json(const WhiteNoiseData& d, std::uint64_t seed);
WhiteNoiseData whitenoise_from_json(const Json& j);

Json regression_to_json(const ManifoldModel& model, const RegressionData& d, std::uint64_t seed);
RegressionData regression_from_json(const Json& j);

Json density_data_to_json(const ManifoldModel& model, const DensityData& d, std::uint64_t seed);
DensityData density_data_from_json(const Json& j);

// t,weight rows
void write_posterior_csv(std::ostream& os, const PosteriorMixture& post);
// band,index,eigenvalue,mean[,sd] rows of the mixture posterior
void write_coefficient_table(std::ostream& os, const PosteriorMixture& post);

// Little-endian float64 records: t followed by the coefficient vector.
void write_chain_binary(std::ostream& os, const ChainSummary& chain);
Json chain_diagnostics(const ChainSummary& chain, const McmcConfig& config);

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace heatgp
