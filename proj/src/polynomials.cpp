#include "heatgp/polynomials.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace heatgp {

double gegenbauer_eval(double nu, int k, double x) {
  if (k < 0) throw std::invalid_argument("degree must be nonnegative");
  if (k == 0) return 1.0;
  double prev = 1.0;
  double cur = 2.0 * nu * x;
  for (int j = 2; j <= k; ++j) {
    const double next = (2.0 * x * (j + nu - 1.0) * cur - (j + 2.0 * nu - 2.0) * prev) / j;
    prev = cur;
    cur = next;
  }
  return cur;
}

JacobiRecurrence jacobi_recurrence(double alpha, double beta, int k) {
  const double ab = alpha + beta;
  JacobiRecurrence r{};
  if (k == 0) {
    r.diagonal = (beta - alpha) / (ab + 2.0);
    r.offdiagonal = 0.0;
    return r;
  }
  const double m = 2.0 * k + ab;
  r.diagonal = (beta * beta - alpha * alpha) / (m * (m + 2.0));
  if (k == 1) {
    r.offdiagonal = 2.0 / (ab + 2.0) * std::sqrt((alpha + 1.0) * (beta + 1.0) / (ab + 3.0));
  } else {
    r.offdiagonal = 2.0 / m *
                    std::sqrt(k * (k + alpha) * (k + beta) * (k + ab) / ((m - 1.0) * (m + 1.0)));
  }
  return r;
}

void jacobi_poly_table(double alpha, double beta, double x, std::span<double> out) {
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() == 1) return;
  auto r0 = jacobi_recurrence(alpha, beta, 0);
  auto r1 = jacobi_recurrence(alpha, beta, 1);
  out[1] = (x - r0.diagonal) / r1.offdiagonal;
  double b_prev = r1.offdiagonal;
  for (std::size_t k = 1; k + 1 < out.size(); ++k) {
    const auto rk = jacobi_recurrence(alpha, beta, static_cast<int>(k));
    const auto rn = jacobi_recurrence(alpha, beta, static_cast<int>(k) + 1);
    out[k + 1] = ((x - rk.diagonal) * out[k] - b_prev * out[k - 1]) / rn.offdiagonal;
    b_prev = rn.offdiagonal;
  }
}

double jacobi_poly_eval(double alpha, double beta, int k, double x) {
  if (k < 0) throw std::invalid_argument("degree must be nonnegative");
  std::vector<double> table(static_cast<std::size_t>(k) + 1);
  jacobi_poly_table(alpha, beta, x, table);
  return table.back();
}

void normalized_legendre_table(int L, double x, std::span<double> out) {
  auto idx = [](int l, int m) { return static_cast<std::size_t>(l) * (l + 1) / 2 + m; };
  if (out.size() < idx(L, L) + 1) throw std::invalid_argument("legendre table too small");
  const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
  out[0] = 1.0;
  for (int m = 0; m <= L; ++m) {
    if (m > 0) out[idx(m, m)] = std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s * out[idx(m - 1, m - 1)];
    if (m + 1 <= L) out[idx(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * x * out[idx(m, m)];
    for (int l = m + 2; l <= L; ++l) {
      const double l2 = static_cast<double>(l) * l;
      const double m2 = static_cast<double>(m) * m;
      const double a = std::sqrt((4.0 * l2 - 1.0) / (l2 - m2));
      const double lm1 = l - 1.0;
      const double b = std::sqrt((lm1 * lm1 - m2) / (4.0 * lm1 * lm1 - 1.0));
      out[idx(l, m)] = a * (x * out[idx(l - 1, m)] - b * out[idx(l - 2, m)]);
    }
  }
}

}  // namespace heatgp
