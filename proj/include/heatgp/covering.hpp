#pragma once

#include "heatgp/manifold.hpp"

namespace heatgp {

// Size of a greedy maximal delta-net (pairwise separation > delta) built over
// a deterministic dense candidate grid: 10^4 points for one-dimensional
// models, a 10^5-point Fibonacci lattice on S^2.
long covering_number(const ManifoldModel& model, double delta);

}  // namespace heatgp
