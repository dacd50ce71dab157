#include "heatgp/layout.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace heatgp {

SpectralLayout::SpectralLayout(ManifoldModel model, int K) : model_(std::move(model)), K_(K) {
  if (K < 0) throw std::invalid_argument("truncation band must be nonnegative");
  offsets_.reserve(K + 2);
  offsets_.push_back(0);
  for (int k = 0; k <= K; ++k) {
    const long m = multiplicity(model_, k);
    const double lambda = heatgp::eigenvalue(model_, k);
    band_eigenvalues_.push_back(lambda);
    offsets_.push_back(offsets_.back() + static_cast<std::size_t>(m));
    for (long l = 0; l < m; ++l) {
      slot_eigenvalues_.push_back(lambda);
      slot_band_.push_back(k);
    }
  }
}

LayoutPtr make_layout(const ManifoldModel& model, int K) {
  return std::make_shared<const SpectralLayout>(model, K);
}

BandVector::BandVector(LayoutPtr layout) : layout_(std::move(layout)), values_(layout_->size(), 0.0) {}

BandVector::BandVector(LayoutPtr layout, std::vector<double> values)
    : layout_(std::move(layout)), values_(std::move(values)) {
  if (values_.size() != layout_->size()) throw std::invalid_argument("coefficient count does not match layout");
}

std::span<double> BandVector::band(int k) {
  return std::span<double>(values_).subspan(layout_->offset(k), layout_->band_size(k));
}

std::span<const double> BandVector::band(int k) const {
  return std::span<const double>(values_).subspan(layout_->offset(k), layout_->band_size(k));
}

BandVector BandVector::with_truncation(int K) const {
  if (K == this->K()) return *this;
  return on_layout(make_layout(model(), K));
}

BandVector BandVector::on_layout(const LayoutPtr& other) const {
  if (!(other->model() == model())) throw std::invalid_argument("layouts belong to different models");
  BandVector out(other);
  const std::size_t n = std::min(out.size(), size());
  for (std::size_t i = 0; i < n; ++i) out.values_[i] = values_[i];
  return out;
}

double BandVector::squared_norm() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return s;
}

double BandVector::norm() const { return std::sqrt(squared_norm()); }

}  // namespace heatgp
