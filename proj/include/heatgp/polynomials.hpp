#pragma once

#include <span>

namespace heatgp {

// Gegenbauer polynomial with generating function (1 - 2xr + r^2)^{-nu}.
double gegenbauer_eval(double nu, int k, double x);

// Jacobi polynomials orthonormal for (1-x)^alpha (1+x)^beta dx / Z, so that
// the degree-0 polynomial is the constant 1.
double jacobi_poly_eval(double alpha, double beta, int k, double x);

// Writes pi_0(x) .. pi_{K}(x) into out (size K+1).
void jacobi_poly_table(double alpha, double beta, double x, std::span<double> out);

// Orthonormal recurrence  x pi_k = b_{k+1} pi_{k+1} + a_k pi_k + b_k pi_{k-1}.
struct JacobiRecurrence {
  double diagonal;     // a_k
  double offdiagonal;  // b_k, undefined for k = 0
};
JacobiRecurrence jacobi_recurrence(double alpha, double beta, int k);

// Fully normalized associated Legendre functions Pbar_l^m(cos theta) for
// 0 <= m <= l <= L, normalized so that (1/2) int_{-1}^{1} Pbar^2 = 1 for m = 0
// and the real harmonics sqrt(2) Pbar cos(m phi) have unit mean square.
// out is indexed by l*(l+1)/2 + m.
void normalized_legendre_table(int L, double x, std::span<double> out);

}  // namespace heatgp
