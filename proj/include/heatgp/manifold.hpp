#pragma once

#include <string>
#include <vector>

#include "heatgp/rng.hpp"

namespace heatgp {

enum class ManifoldKind { Circle, Sphere, Jacobi };

// Compact manifold with closed-form spectrum. Measures are normalized to
// total mass one; metrics are the natural geodesic ones (diameter pi).
class ManifoldModel {
 public:
  static ManifoldModel circle();
  static ManifoldModel sphere(int ambient = 3);
  static ManifoldModel jacobi(double alpha, double beta);

  ManifoldKind kind() const { return kind_; }
  int ambient() const { return ambient_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  int dim() const;
  double doubling_exponent() const;
  double diameter() const;
  std::string name() const;

  bool operator==(const ManifoldModel&) const = default;

 private:
  ManifoldModel(ManifoldKind kind, int ambient, double alpha, double beta)
      : kind_(kind), ambient_(ambient), alpha_(alpha), beta_(beta) {}
  ManifoldKind kind_ = ManifoldKind::Circle;
  int ambient_ = 2;
  double alpha_ = 0.0;
  double beta_ = 0.0;
};

// Chart coordinates: one angle (circle), a unit vector (sphere) or a real in
// [-1, 1] (interval).
struct Point {
  std::vector<double> coords;

  static Point angle(double theta);
  static Point unit(std::vector<double> v);
  static Point spherical(double colatitude, double longitude);
  static Point interval(double x);

  double operator[](std::size_t i) const { return coords[i]; }
  bool operator==(const Point&) const = default;
};

struct SpectralBand {
  int k;
  double lambda;
  long multiplicity;
};

double eigenvalue(const ManifoldModel& model, int k);
long multiplicity(const ManifoldModel& model, int k);
SpectralBand spectral_band(const ManifoldModel& model, int k);

// Kernel of the orthogonal projector onto the k-th eigenspace.
double projector_kernel(const ManifoldModel& model, int k, const Point& x, const Point& y);

double geodesic_distance(const ManifoldModel& model, const Point& x, const Point& y);

// mu(B(x, r)) under the normalized measure.
double ball_measure(const ManifoldModel& model, const Point& x, double r);

void validate_point(const ManifoldModel& model, const Point& p);

// Draw from the normalized measure.
Point random_point(const ManifoldModel& model, RandomStream& rng);

}  // namespace heatgp
