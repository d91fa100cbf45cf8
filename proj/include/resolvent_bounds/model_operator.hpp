#pragma once

// Model operators M_B (compressed shift on K_B) in the Malmquist-Walsh basis,
// their resolvents, and the extremal analytic Toeplitz matrices built from them.

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "resolvent_bounds/disk_geometry.hpp"
#include "resolvent_bounds/errors.hpp"
#include "resolvent_bounds/linalg.hpp"

namespace resolvent_bounds {

/// Probe point used to recover M_B from its resolvent. Lies outside the
/// closed disk, so it never meets a zero of B.
inline constexpr double kModelProbePoint = 2.0;

struct ModelResolvent {
  DenseComplexMatrix matrix;  // lower triangular
  Complex zeta;
  BlaschkeProduct blaschke;
};

/// (zeta - M_B)^{-1} in the Malmquist-Walsh basis.
///
/// Diagonal entries reduce to 1/(zeta - nu_i). Below the diagonal the factors
/// 1/(B(zeta)(1 - conj(nu_i) zeta)(1 - conj(nu_j) zeta)) prod_{s outside j..i} b_s
/// are collapsed to
///
///   c_i c_j prod_{k=j+1}^{i-1} (1 - conj(nu_k) zeta) / prod_{k=j}^{i} (zeta - nu_k),
///
/// with c_k = (1 - |nu_k|^2)^{1/2}, which has no pole at zeta = 1/conj(nu_k).
inline ModelResolvent model_resolvent(const BlaschkeProduct& b, Complex zeta) {
  const auto& nu = b.zeros();
  for (const Complex& z : nu) {
    if (std::abs(zeta - z) <= kSpectrumTolerance) {
      throw Error(ErrorCode::spectrum_collision, "zeta coincides with a zero of B");
    }
  }
  const std::size_t n = nu.size();
  std::vector<double> weight(n);
  for (std::size_t k = 0; k < n; ++k) weight[k] = std::sqrt(1.0 - std::norm(nu[k]));

  DenseComplexMatrix m(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    m(j, j) = 1.0 / (zeta - nu[j]);
    // Running products over k = j+1 .. i-1 (numerator) and k = j .. i (denominator).
    Complex numer{1.0, 0.0};
    Complex denom = zeta - nu[j];
    for (std::size_t i = j + 1; i < n; ++i) {
      if (i > j + 1) numer *= 1.0 - std::conj(nu[i - 1]) * zeta;
      denom *= zeta - nu[i];
      m(i, j) = weight[i] * weight[j] * numer / denom;
    }
  }
  return {std::move(m), zeta, b};
}

/// M_B = zeta0 I - ((zeta0 - M_B)^{-1})^{-1}.
inline DenseComplexMatrix model_matrix(const BlaschkeProduct& b,
                                       double probe = kModelProbePoint) {
  const auto res = model_resolvent(b, probe);
  const auto n = static_cast<Eigen::Index>(b.degree());
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd inv = res.matrix.eigen().triangularView<Eigen::Lower>().solve(id);
  Eigen::MatrixXcd m = probe * id - inv;
  // Exactly lower triangular by construction; drop round-off above the diagonal.
  m.triangularView<Eigen::StrictlyUpper>().setZero();
  return DenseComplexMatrix(std::move(m));
}

/// The n x n analytic Toeplitz contraction with diagonal lambda and k-th
/// subdiagonal (-lambda)^{k-1} (1 - lambda^2); its minimal polynomial is
/// (z - lambda)^n.
inline DenseComplexMatrix extremal_T_star(double lambda, int n) {
  if (!(std::abs(lambda) < 1.0) || n < 1) {
    throw Error(ErrorCode::out_of_domain, "T* needs |lambda| < 1 and n >= 1");
  }
  const auto size = static_cast<std::size_t>(n);
  std::vector<double> band(size);
  band[0] = lambda;
  if (size > 1) band[1] = 1.0 - lambda * lambda;
  for (std::size_t k = 2; k < size; ++k) band[k] = band[k - 1] * (-lambda);
  DenseComplexMatrix m(size, size);
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = 0; j <= i; ++j) m(i, j) = band[i - j];
  }
  return m;
}

/// Resolvent of the model operator for P = (z - rho1)^{n1} (z + 1)^{n2}:
/// block diagonal with the model resolvent of b_{rho1}^{n1} and the
/// boundary block (zeta + 1)^{-1} I_{n2}.
inline DenseComplexMatrix block_model_resolvent(int n1, double rho1, int n2, Complex zeta) {
  if (n1 < 1 || n2 < 1 || rho1 < 0.0 || !(rho1 < 1.0)) {
    throw Error(ErrorCode::out_of_domain, "need n1, n2 >= 1 and 0 <= rho1 < 1");
  }
  if (std::abs(zeta + 1.0) <= kSpectrumTolerance) {
    throw Error(ErrorCode::spectrum_collision, "zeta = -1 is a boundary eigenvalue");
  }
  const auto a1 = model_resolvent(BlaschkeProduct::power(rho1, n1), zeta).matrix;
  const auto size = static_cast<std::size_t>(n1 + n2);
  DenseComplexMatrix m(size, size);
  for (std::size_t i = 0; i < a1.rows(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) m(i, j) = a1(i, j);
  }
  const Complex boundary = 1.0 / (zeta + 1.0);
  for (std::size_t k = a1.rows(); k < size; ++k) m(k, k) = boundary;
  return m;
}

}  // namespace resolvent_bounds
