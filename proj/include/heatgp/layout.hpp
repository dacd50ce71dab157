#pragma once

#include <memory>
#include <span>
#include <vector>

#include "heatgp/manifold.hpp"

namespace heatgp {

// Flat storage order of the ragged coefficient array theta_k^l, k <= K.
class SpectralLayout {
 public:
  SpectralLayout(ManifoldModel model, int K);

  const ManifoldModel& model() const { return model_; }
  int K() const { return K_; }
  std::size_t size() const { return offsets_.back(); }
  std::size_t offset(int k) const { return offsets_[k]; }
  std::size_t band_size(int k) const { return offsets_[k + 1] - offsets_[k]; }
  double eigenvalue(int k) const { return band_eigenvalues_[k]; }
  int band_of_slot(std::size_t i) const { return slot_band_[i]; }
  std::span<const double> slot_eigenvalues() const { return slot_eigenvalues_; }

 private:
  ManifoldModel model_;
  int K_;
  std::vector<std::size_t> offsets_;
  std::vector<double> band_eigenvalues_;
  std::vector<double> slot_eigenvalues_;
  std::vector<int> slot_band_;
};

using LayoutPtr = std::shared_ptr<const SpectralLayout>;
LayoutPtr make_layout(const ManifoldModel& model, int K);

// Coefficient array over a layout. Value type; the layout is shared.
class BandVector {
 public:
  BandVector() = default;
  explicit BandVector(LayoutPtr layout);
  BandVector(LayoutPtr layout, std::vector<double> values);

  const LayoutPtr& layout_ptr() const { return layout_; }
  const SpectralLayout& layout() const { return *layout_; }
  const ManifoldModel& model() const { return layout_->model(); }
  int K() const { return layout_ ? layout_->K() : -1; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::span<double> band(int k);
  std::span<const double> band(int k) const;

  // zero-padded or truncated copy on the layout with band limit K
  BandVector with_truncation(int K) const;
  BandVector on_layout(const LayoutPtr& other) const;

  double squared_norm() const;
  double norm() const;

 private:
  LayoutPtr layout_;
  std::vector<double> values_;
};

struct FieldCoefficients {
  double t = 1.0;
  BandVector theta;
  int K() const { return theta.K(); }
};

}  // namespace heatgp
