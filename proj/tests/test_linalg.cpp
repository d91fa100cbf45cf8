#include <cmath>
#include <limits>
#include <numbers>

#include <gtest/gtest.h>

#include "resolvent_bounds/linalg.hpp"
#include "resolvent_bounds/model_operator.hpp"
#include "test_support.hpp"

using namespace resolvent_bounds;
using rb_test::random_matrix;
using rb_test::random_unitary;

TEST(SpectralNorm, Examples) {
  EXPECT_NEAR(spectral_norm(DenseComplexMatrix::identity(3)), 1.0, 1e-15);
  const auto m = DenseComplexMatrix::from_rows({{0.0, 0.5}, {0.5, 1.0}});
  EXPECT_NEAR(spectral_norm(m), (1.0 + std::sqrt(2.0)) / 2.0, 1e-14);
  EXPECT_NEAR(spectral_norm(DenseComplexMatrix::diagonal({0.3, -0.7})), 0.7, 1e-15);
}

TEST(SpectralNorm, RejectsNonFinite) {
  auto m = DenseComplexMatrix::identity(2);
  m(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_ERROR(non_finite, spectral_norm(m));
}

TEST(SpectralNorm, UnitaryInvariance) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 7;
    const auto m = random_matrix(n, n, rng);
    const auto u = random_unitary(n, rng);
    const auto v = random_unitary(n, rng);
    EXPECT_LT(rb_test::rel_err(spectral_norm(u * m * v), spectral_norm(m)), 1e-10);
  }
}

TEST(SpectralNorm, MatchesHermitianDilation) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 6;
    const auto m = random_matrix(n, n, rng);
    Eigen::MatrixXcd dil = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    dil.topRightCorner(n, n) = m.eigen();
    dil.bottomLeftCorner(n, n) = m.eigen().adjoint();
    const auto eig = hermitian_eigen(DenseComplexMatrix(dil));
    EXPECT_LT(rb_test::rel_err(std::abs(eig.values.front()), spectral_norm(m)), 1e-10);
  }
}

TEST(HermitianEigen, Examples) {
  const auto e = hermitian_eigen(DenseComplexMatrix::from_rows({{0.0, 0.5}, {0.5, 0.75}}));
  ASSERT_EQ(e.values.size(), 2u);
  EXPECT_NEAR(e.values[0], 1.0, 1e-14);
  EXPECT_NEAR(e.values[1], -0.25, 1e-14);

  const auto z = hermitian_eigen(DenseComplexMatrix(4, 4));
  for (double v : z.values) EXPECT_EQ(v, 0.0);

  const auto one = hermitian_eigen(DenseComplexMatrix::from_rows({{2.0}}));
  EXPECT_NEAR(one.values[0], 2.0, 1e-15);
}

TEST(HermitianEigen, ResidualAndOrdering) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial;
    const auto g = random_matrix(n, n, rng);
    const DenseComplexMatrix h(Eigen::MatrixXcd(g.eigen() + g.eigen().adjoint()));
    const auto e = hermitian_eigen(h);
    const double norm = spectral_norm(h);
    for (int k = 0; k < n; ++k) {
      const Eigen::VectorXcd v = e.vectors.eigen().col(k);
      EXPECT_LE((h.eigen() * v - e.values[k] * v).norm(), 1e-10 * norm);
      if (k > 0) {
        EXPECT_GE(std::abs(e.values[k - 1]), std::abs(e.values[k]));
      }
    }
  }
}

TEST(HermitianEigen, Errors) {
  EXPECT_ERROR(not_square, hermitian_eigen(DenseComplexMatrix(2, 3)));
  EXPECT_ERROR(not_hermitian, hermitian_eigen(DenseComplexMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}})));
  // Within the 1e-12 tolerance counts as Hermitian.
  EXPECT_NO_THROW(hermitian_eigen(DenseComplexMatrix::from_rows({{0.0, 1.0}, {1.0 + 1e-13, 0.0}})));
}

TEST(Eigenvalues, Examples) {
  const auto tri = DenseComplexMatrix::from_rows({{0.2, 1.0}, {0.0, Complex(0, 0.5)}});
  auto ev = eigenvalues(tri);
  std::sort(ev.begin(), ev.end(), [](Complex a, Complex b) { return std::abs(a) < std::abs(b); });
  EXPECT_NEAR(std::abs(ev[0] - 0.2), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(ev[1] - Complex(0, 0.5)), 0.0, 1e-14);

  for (Complex v : eigenvalues(extremal_T_star(0.3, 3))) EXPECT_NEAR(std::abs(v - 0.3), 0.0, 1e-15);

  const auto companion = DenseComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
  ev = eigenvalues(companion);
  std::sort(ev.begin(), ev.end(), [](Complex a, Complex b) { return a.real() < b.real(); });
  EXPECT_NEAR(std::abs(ev[0] + 1.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(ev[1] - 1.0), 0.0, 1e-14);

  EXPECT_ERROR(not_square, eigenvalues(DenseComplexMatrix(3, 2)));
}

TEST(Eigenvalues, ProductMatchesDeterminant) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = random_matrix(2 + trial % 8, 2 + trial % 8, rng);
    Complex prod{1.0, 0.0};
    for (Complex v : eigenvalues(m)) prod *= v;
    const Complex det = determinant(m);
    EXPECT_LE(std::abs(prod - det), 1e-8 * std::abs(det));
  }
}

TEST(Eigenvalues, SignConjugationInvariance) {
  std::mt19937_64 rng(15);
  const auto m = random_matrix(5, 5, rng);
  const auto d = DenseComplexMatrix::diagonal({1.0, -1.0, 1.0, -1.0, 1.0});
  auto a = eigenvalues(m);
  auto b = eigenvalues(d * m * d.adjoint());
  auto key = [](Complex x, Complex y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  };
  std::sort(a.begin(), a.end(), key);
  std::sort(b.begin(), b.end(), key);
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_LT(std::abs(a[k] - b[k]), 1e-10);
}

TEST(Resolvent, Examples) {
  const auto r0 = resolvent(DenseComplexMatrix(3, 3), 2.0);
  EXPECT_LT((r0.eigen() - 0.5 * Eigen::MatrixXcd::Identity(3, 3)).norm(), 1e-15);

  const auto r1 = resolvent(DenseComplexMatrix::from_rows({{0.5}}), 1.0);
  EXPECT_NEAR(std::abs(r1(0, 0) - 2.0), 0.0, 1e-15);

  const auto jordan = DenseComplexMatrix::from_rows({{0.0, 0.0}, {1.0, 0.0}});
  const auto r2 = resolvent(jordan, 1.0);
  const auto expected = DenseComplexMatrix::from_rows({{1.0, 0.0}, {1.0, 1.0}});
  EXPECT_LT((r2.eigen() - expected.eigen()).norm(), 1e-15);
}

TEST(Resolvent, Errors) {
  EXPECT_ERROR(spectrum_collision, resolvent(DenseComplexMatrix::from_rows({{0.5}}), 0.5));
  EXPECT_ERROR(spectrum_collision, resolvent(DenseComplexMatrix::from_rows({{0.5}}), 0.5 + 1e-13));
  EXPECT_NO_THROW(resolvent(DenseComplexMatrix::from_rows({{0.5}}), 0.5 + 1e-11));
  EXPECT_ERROR(not_square, resolvent(DenseComplexMatrix(2, 3), 1.0));
}

TEST(Resolvent, ResidualContract) {
  std::mt19937_64 rng(16);
  int checked = 0;
  while (checked < 100) {
    const int n = 1 + checked % 9;
    auto m = random_matrix(n, n, rng);
    const Complex zeta = rb_test::random_disk_point(rng, 3.0);
    double gap = std::numeric_limits<double>::infinity();
    for (Complex v : eigenvalues(m)) gap = std::min(gap, std::abs(zeta - v));
    if (gap < 0.1) continue;
    const auto r = resolvent(m, zeta);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
    const double residual = ((zeta * id - m.eigen()) * r.eigen() - id).norm();
    EXPECT_LE(residual, 1e-10 * spectral_norm(r));
    ++checked;
  }
}

TEST(Determinant, Examples) {
  EXPECT_NEAR(std::abs(determinant(DenseComplexMatrix::identity(4)) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(determinant(DenseComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}})) + 1.0),
              0.0, 1e-15);
  const auto tri = DenseComplexMatrix::from_rows({{2.0, 1.0, 0.0}, {1.0, 2.0, 1.0}, {0.0, 1.0, 2.0}});
  EXPECT_NEAR(std::abs(determinant(tri) - 4.0), 0.0, 1e-13);
  EXPECT_ERROR(not_square, determinant(DenseComplexMatrix(1, 2)));
}

TEST(DenseComplexMatrix, ShapeContracts) {
  EXPECT_ERROR(invalid_argument, DenseComplexMatrix(0, 3));
  EXPECT_ERROR(invalid_argument, DenseComplexMatrix(2, 2, std::vector<Complex>(3)));
  EXPECT_ERROR(invalid_argument, DenseComplexMatrix::from_rows({{1.0, 2.0}, {3.0}}));
  const DenseComplexMatrix m(2, 3, {1.0, 2.0, 3.0, 4.0, 5.0, 6.0});
  EXPECT_EQ(m(1, 0), Complex(4.0));
  EXPECT_EQ(m.rows(), 2u);
  EXPECT_EQ(m.cols(), 3u);
}
