#include "heatgp/covering.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace heatgp {

namespace {

constexpr int kLineCandidates = 10000;
constexpr int kSphereCandidates = 100000;

// Candidates on a line parametrization; `periodic` wraps distances.
long greedy_line(double length, bool periodic, double delta) {
  std::vector<double> net;
  for (int i = 0; i < kLineCandidates; ++i) {
    const double x = length * i / (periodic ? kLineCandidates : kLineCandidates - 1);
    bool far = true;
    for (double y : net) {
      double d = std::abs(x - y);
      if (periodic) d = std::min(d, length - d);
      if (d <= delta) {
        far = false;
        break;
      }
    }
    if (far) net.push_back(x);
  }
  return static_cast<long>(net.size());
}

long greedy_sphere(double delta) {
  const double cos_delta = std::cos(delta);
  // hash grid with cell size equal to the chord length of delta
  const double cell = 2.0 * std::sin(0.5 * delta);
  auto cell_of = [cell](double v) { return static_cast<long>(std::floor(v / cell)); };
  auto key = [](long a, long b, long c) {
    return (static_cast<std::uint64_t>(a + (1 << 20)) << 42) ^
           (static_cast<std::uint64_t>(b + (1 << 20)) << 21) ^ static_cast<std::uint64_t>(c + (1 << 20));
  };
  std::unordered_map<std::uint64_t, std::vector<std::array<double, 3>>> grid;
  long count = 0;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < kSphereCandidates; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / kSphereCandidates;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const std::array<double, 3> p{r * std::cos(golden * i), r * std::sin(golden * i), z};
    const long cx = cell_of(p[0]), cy = cell_of(p[1]), cz = cell_of(p[2]);
    bool far = true;
    for (long dx = -1; dx <= 1 && far; ++dx)
      for (long dy = -1; dy <= 1 && far; ++dy)
        for (long dz = -1; dz <= 1 && far; ++dz) {
          auto it = grid.find(key(cx + dx, cy + dy, cz + dz));
          if (it == grid.end()) continue;
          for (const auto& q : it->second)
            if (p[0] * q[0] + p[1] * q[1] + p[2] * q[2] >= cos_delta) {
              far = false;
              break;
            }
        }
    if (far) {
      grid[key(cx, cy, cz)].push_back(p);
      ++count;
    }
  }
  return count;
}

}  // namespace

long covering_number(const ManifoldModel& model, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("covering radius must be positive");
  if (delta >= model.diameter()) return 1;
  switch (model.kind()) {
    case ManifoldKind::Circle: return greedy_line(2.0 * std::numbers::pi, true, delta);
    case ManifoldKind::Jacobi: return greedy_line(std::numbers::pi, false, delta);
    case ManifoldKind::Sphere: break;
  }
  if (model.ambient() != 3) throw std::invalid_argument("covering numbers implemented for S^2 only");
  return greedy_sphere(delta);
}

}  // namespace heatgp
