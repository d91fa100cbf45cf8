#pragma once

#include <cmath>

namespace resolvent_bounds {

/// Chebyshev polynomial of the second kind, U_n(cos t) = sin((n+1)t) / sin t.
/// U_{-1} = 0 by convention.
inline double chebyshev_u(int n, double x) {
  if (n < 0) return 0.0;
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 2.0 * x;
  for (int k = 2; k <= n; ++k) {
    const double next = 2.0 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Determinant of the n x n tridiagonal Toeplitz matrix with `diag` on the
/// diagonal and off-diagonal entries whose product is `off_product`.
inline double tridiagonal_toeplitz_det(double diag, double off_product, int n) {
  if (n <= 0) return 1.0;
  double prev = 1.0;
  double cur = diag;
  for (int k = 2; k <= n; ++k) {
    const double next = diag * cur - off_product * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// sinh((n+1)t) / sinh(n t) for t >= 0, without overflow for large n t.
/// The value at t = 0 is the limit (n+1)/n.
inline double sinh_ratio(int n, double t) {
  if (t == 0.0) return static_cast<double>(n + 1) / n;
  // e^t (1 - e^{-2(n+1)t}) / (1 - e^{-2nt}), written with expm1 for small t.
  const double numer = std::expm1(t) - std::expm1(-(2.0 * n + 1.0) * t);
  const double denom = -std::expm1(-2.0 * n * t);
  return numer / denom;
}

}  // namespace resolvent_bounds
