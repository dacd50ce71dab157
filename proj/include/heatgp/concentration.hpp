#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "heatgp/basis.hpp"
#include "heatgp/layout.hpp"
#include "heatgp/quadrature.hpp"

namespace heatgp {

// Smooth cutoff: 1 on [0,1], 0 on [2,inf), glued with the exp(-1/u) bump.
struct LittlewoodPaley {
  double operator()(double x) const;
};

BandVector littlewood_paley_apply(const LittlewoodPaley& phi, double delta, const BandVector& f);

enum class BesovNorm { L2, Sup };

// sup_j 2^{sj} || Phi(2^{-j} sqrt L) f - f ||_p; Sup uses basis values on
// the quadrature grid.
double besov_norm(const BandVector& f, double s, BesovNorm p, const LittlewoodPaley& phi = {},
                  const BasisEvaluator* basis = nullptr, const QuadratureRule* grid = nullptr);

struct BlockTruth {
  double s = 1.0;
  double b = 2.0;
  int J = 1;
  BandVector coefficients;
};

// Mass b^{-2js} - b^{-2(j+1)s} spread over the slots with sqrt(lambda) in
// (b^j, b^{j+1}]: evenly for allocation_seed 0, randomly otherwise.
BlockTruth besov_block_truth(const ManifoldModel& model, double s, double b, int J,
                             std::uint64_t allocation_seed = 0);

struct ConcentrationResult {
  double value = 0.0;       // inf ||h||^2_{H_t} over ||f - h|| <= eps
  double log_value = 0.0;   // stays finite when value overflows
  double lagrange_lambda = 0.0;
  double log_lagrange_lambda = 0.0;
  BandVector minimizer;
};

ConcentrationResult approx_term(const BandVector& f, double t, double eps);

class SmallBallInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SmallBallNorm { L2, SupOnGrid };

struct SmallBallEstimate {
  double eps = 0.0;
  double p_hat = 0.0;
  double ci_halfwidth = 0.0;
  std::size_t hits = 0;
  std::size_t draws = 0;
};

struct SmallBallOptions {
  SmallBallNorm norm = SmallBallNorm::L2;
  std::size_t n_mc = 100000;
  int threads = 1;
  double min_probability = 1e-4;
  bool refuse_infeasible = true;
};

// Coupled draws across the eps list. Throws SmallBallInfeasible when an
// estimate falls below min_probability and refuse_infeasible is set.
std::vector<SmallBallEstimate> small_ball_mc(const ManifoldModel& model, double t, const std::vector<double>& eps,
                                             const SmallBallOptions& options, RandomStream rng);

SmallBallEstimate small_ball_mc(const ManifoldModel& model, double t, double eps, const SmallBallOptions& options,
                                RandomStream rng);

// Largest k for which Carl's inequality certifies e_k(H_t unit ball) >= eps.
long carl_entropy_lower(const ManifoldModel& model, double t, double eps);

// Band count used by the bound: dim of span of bands with sqrt(lambda) <= sqrt(log(1/eps)/t).
long carl_dimension(const ManifoldModel& model, double t, double eps);

}  // namespace heatgp
