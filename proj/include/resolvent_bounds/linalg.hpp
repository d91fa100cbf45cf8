#pragma once

// Dense complex linear algebra used throughout the library. All matrices here
// are small (n <= 2048) and dense; the heavy lifting is delegated to Eigen.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "resolvent_bounds/errors.hpp"

namespace resolvent_bounds {

using Complex = std::complex<double>;

/// Absolute tolerance on min |zeta - lambda_i| below which zeta counts as a
/// point of the spectrum.
inline constexpr double kSpectrumTolerance = 1e-12;

/// Tolerance on max |m - m^dagger| for a matrix to be treated as Hermitian.
inline constexpr double kHermitianTolerance = 1e-12;

/// Row-major dense complex matrix. Thin value wrapper over Eigen::MatrixXcd.
class DenseComplexMatrix {
 public:
  DenseComplexMatrix(std::size_t rows, std::size_t cols) {
    check_shape(rows, cols);
    data_ = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows),
                                   static_cast<Eigen::Index>(cols));
  }

  DenseComplexMatrix(std::size_t rows, std::size_t cols,
                     const std::vector<Complex>& row_major) {
    check_shape(rows, cols);
    if (row_major.size() != rows * cols) {
      throw Error(ErrorCode::invalid_argument,
                  "entry count " + std::to_string(row_major.size()) +
                      " does not match " + std::to_string(rows) + "x" +
                      std::to_string(cols));
    }
    data_.resize(static_cast<Eigen::Index>(rows),
                 static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        data_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            row_major[i * cols + j];
      }
    }
  }

  explicit DenseComplexMatrix(Eigen::MatrixXcd data) : data_(std::move(data)) {
    check_shape(static_cast<std::size_t>(data_.rows()),
                static_cast<std::size_t>(data_.cols()));
  }

  static DenseComplexMatrix from_rows(
      std::initializer_list<std::initializer_list<Complex>> rows) {
    const std::size_t n_rows = rows.size();
    const std::size_t n_cols = n_rows == 0 ? 0 : rows.begin()->size();
    std::vector<Complex> flat;
    flat.reserve(n_rows * n_cols);
    for (const auto& row : rows) {
      if (row.size() != n_cols) {
        throw Error(ErrorCode::invalid_argument, "ragged row list");
      }
      flat.insert(flat.end(), row.begin(), row.end());
    }
    return DenseComplexMatrix(n_rows, n_cols, flat);
  }

  static DenseComplexMatrix identity(std::size_t n) {
    DenseComplexMatrix m(n, n);
    m.data_.setIdentity();
    return m;
  }

  static DenseComplexMatrix diagonal(const std::vector<Complex>& diag) {
    DenseComplexMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
  }

  std::size_t rows() const noexcept { return static_cast<std::size_t>(data_.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(data_.cols()); }
  bool is_square() const noexcept { return data_.rows() == data_.cols(); }

  Complex operator()(std::size_t i, std::size_t j) const {
    return data_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  Complex& operator()(std::size_t i, std::size_t j) {
    return data_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  bool all_finite() const noexcept { return data_.allFinite(); }

  bool is_lower_triangular() const noexcept {
    for (Eigen::Index i = 0; i < data_.rows(); ++i) {
      for (Eigen::Index j = i + 1; j < data_.cols(); ++j) {
        if (data_(i, j) != Complex{}) return false;
      }
    }
    return true;
  }

  DenseComplexMatrix adjoint() const { return DenseComplexMatrix(Eigen::MatrixXcd(data_.adjoint())); }

  /// Largest entrywise modulus of m - m^dagger.
  double hermitian_defect() const {
    if (!is_square()) return std::numeric_limits<double>::infinity();
    return (data_ - data_.adjoint()).cwiseAbs().maxCoeff();
  }

  double max_abs_entry() const { return data_.cwiseAbs().maxCoeff(); }

  const Eigen::MatrixXcd& eigen() const noexcept { return data_; }

  friend DenseComplexMatrix operator*(const DenseComplexMatrix& a,
                                      const DenseComplexMatrix& b) {
    if (a.cols() != b.rows()) {
      throw Error(ErrorCode::invalid_argument, "inner dimensions differ");
    }
    return DenseComplexMatrix(Eigen::MatrixXcd(a.data_ * b.data_));
  }
  friend DenseComplexMatrix operator+(const DenseComplexMatrix& a,
                                      const DenseComplexMatrix& b) {
    check_same_shape(a, b);
    return DenseComplexMatrix(Eigen::MatrixXcd(a.data_ + b.data_));
  }
  friend DenseComplexMatrix operator-(const DenseComplexMatrix& a,
                                      const DenseComplexMatrix& b) {
    check_same_shape(a, b);
    return DenseComplexMatrix(Eigen::MatrixXcd(a.data_ - b.data_));
  }
  friend DenseComplexMatrix operator*(Complex s, const DenseComplexMatrix& a) {
    return DenseComplexMatrix(Eigen::MatrixXcd(s * a.data_));
  }

 private:
  static void check_shape(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) {
      throw Error(ErrorCode::invalid_argument, "matrix dimensions must be positive");
    }
  }
  static void check_same_shape(const DenseComplexMatrix& a, const DenseComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
      throw Error(ErrorCode::invalid_argument, "shape mismatch");
    }
  }

  Eigen::MatrixXcd data_;
};

namespace detail {

inline void require_square(const DenseComplexMatrix& m, const char* op) {
  if (!m.is_square()) {
    throw Error(ErrorCode::not_square,
                std::string(op) + " needs a square matrix, got " +
                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

inline void require_finite(const DenseComplexMatrix& m, const char* op) {
  if (!m.all_finite()) {
    throw Error(ErrorCode::non_finite, std::string(op) + ": matrix has NaN/Inf entries");
  }
}

}  // namespace detail

/// Largest singular value.
inline double spectral_norm(const DenseComplexMatrix& m) {
  detail::require_finite(m, "spectral_norm");
  if (m.rows() == 1 || m.cols() == 1) return m.eigen().norm();
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m.eigen());
  return svd.singularValues()(0);
}

struct HermitianEigen {
  /// Sorted by decreasing magnitude.
  std::vector<double> values;
  /// Column k is the unit eigenvector of values[k].
  DenseComplexMatrix vectors;
};

inline HermitianEigen hermitian_eigen(const DenseComplexMatrix& m) {
  detail::require_square(m, "hermitian_eigen");
  detail::require_finite(m, "hermitian_eigen");
  if (const double defect = m.hermitian_defect(); defect > kHermitianTolerance) {
    throw Error(ErrorCode::not_hermitian,
                "max |m - m^dagger| = " + std::to_string(defect));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m.eigen());
  const auto& evals = solver.eigenvalues();
  const auto& evecs = solver.eigenvectors();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(evals.size()));
  for (Eigen::Index k = 0; k < evals.size(); ++k) order[static_cast<std::size_t>(k)] = k;
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(evals(a)) > std::abs(evals(b));
  });
  Eigen::MatrixXcd sorted(evecs.rows(), evecs.cols());
  std::vector<double> values;
  values.reserve(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    values.push_back(evals(order[k]));
    sorted.col(static_cast<Eigen::Index>(k)) = evecs.col(order[k]);
  }
  return {std::move(values), DenseComplexMatrix(std::move(sorted))};
}

inline std::vector<Complex> eigenvalues(const DenseComplexMatrix& m) {
  detail::require_square(m, "eigenvalues");
  detail::require_finite(m, "eigenvalues");
  if (m.is_lower_triangular()) {
    std::vector<Complex> diag(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) diag[i] = m(i, i);
    return diag;
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m.eigen(), false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::non_finite, "eigenvalue iteration did not converge");
  }
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

inline Complex determinant(const DenseComplexMatrix& m) {
  detail::require_square(m, "determinant");
  return m.eigen().partialPivLu().determinant();
}

/// (zeta I - m)^{-1}. Lower-triangular inputs are inverted by forward
/// substitution, which keeps the entrywise accuracy of the extremal
/// Toeplitz resolvents whose norms reach 1e13.
inline DenseComplexMatrix resolvent(const DenseComplexMatrix& m, Complex zeta) {
  detail::require_square(m, "resolvent");
  detail::require_finite(m, "resolvent");
  const auto spectrum = eigenvalues(m);
  double gap = std::numeric_limits<double>::infinity();
  for (const Complex& lambda : spectrum) gap = std::min(gap, std::abs(zeta - lambda));
  if (gap <= kSpectrumTolerance) {
    throw Error(ErrorCode::spectrum_collision,
                "zeta lies within " + std::to_string(gap) + " of the spectrum");
  }
  const auto n = static_cast<Eigen::Index>(m.rows());
  const Eigen::MatrixXcd shifted = zeta * Eigen::MatrixXcd::Identity(n, n) - m.eigen();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  if (m.is_lower_triangular()) {
    return DenseComplexMatrix(Eigen::MatrixXcd(shifted.triangularView<Eigen::Lower>().solve(id)));
  }
  return DenseComplexMatrix(Eigen::MatrixXcd(shifted.partialPivLu().solve(id)));
}

}  // namespace resolvent_bounds
