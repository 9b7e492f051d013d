#include <gtest/gtest.h>

#include <cmath>

#include <hollowpca/linalg.hpp>

#include "oracles.hpp"
#include "support.hpp"

using namespace hollowpca;
using testing_support::gaussian_matrix;
using testing_support::random_data;
using testing_support::random_symmetric;

namespace {

Matrix diag_matrix(std::initializer_list<double> v) {
  Vector d(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) d(i++) = x;
  return d.asDiagonal();
}

}  // namespace

TEST(SymmetricMatrix, RejectsAsymmetricAndNonFinite) {
  Matrix m(2, 2);
  m << 1, 2, 2.0000001, 1;
  EXPECT_THROW(SymmetricMatrix::from_dense(m), Error);
  m(1, 0) = 2;
  EXPECT_NO_THROW(SymmetricMatrix::from_dense(m));
  m(0, 0) = std::nan("");
  EXPECT_THROW(SymmetricMatrix::from_dense(m), Error);
  EXPECT_THROW(SymmetricMatrix::from_dense(Matrix::Zero(2, 3)), Error);
}

TEST(SymmetricMatrix, FromLowerMirrors) {
  Matrix m(2, 2);
  m << 1, 7, 3, 4;
  const auto s = SymmetricMatrix::from_lower(m);
  EXPECT_EQ(s(0, 1), 3.0);
  EXPECT_EQ(s(1, 0), 3.0);
}

TEST(Hollow, ZeroesDiagonalOnly) {
  Philox4x32 gen(1);
  const auto s = random_symmetric(gen, 5);
  const auto h = hollow(s);
  for (Index i = 0; i < 5; ++i)
    for (Index j = 0; j < 5; ++j) EXPECT_EQ(h(i, j), i == j ? 0.0 : s(i, j));
  const Matrix g = gaussian_matrix(gen, 3, 3);
  const Matrix hg = hollow(g);
  EXPECT_EQ(hg.diagonal().norm(), 0.0);
  EXPECT_EQ(hg(0, 1), g(0, 1));
}

TEST(Gram, MatchesReferenceAndExplicitProduct) {
  Philox4x32 gen(2);
  for (Index n : {1, 7, 65, 130}) {
    const auto x = random_data(gen, n, 11);
    const auto g = gram(x);
    const auto r = reference::gram(x);
    const Matrix direct = x.values() * x.values().transpose();
    EXPECT_LT((g.values() - r.values()).norm(), 1e-12 * (1 + r.frobenius_norm()));
    EXPECT_LT((g.values() - direct).norm(), 1e-12 * (1 + direct.norm()));
  }
}

TEST(Eigh, SmallMatricesMatchCharacteristicPolynomial) {
  Philox4x32 gen(3);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 1 + trial % 4;
    const auto s = random_symmetric(gen, n);
    const auto e = eigh(s, EigenOrdering::DescendingByValue);
    auto roots = oracle::charpoly_roots(s.values());
    std::reverse(roots.begin(), roots.end());
    for (Index k = 0; k < n; ++k) EXPECT_NEAR(e.values(k), roots[static_cast<std::size_t>(k)], 1e-8);
  }
}

TEST(Eigh, KnownDiagonalAndOrderings) {
  const auto s = SymmetricMatrix::from_dense(diag_matrix({1.0, -5.0, 3.0}));
  const auto by_value = eigh(s, EigenOrdering::DescendingByValue);
  EXPECT_DOUBLE_EQ(by_value.values(0), 3.0);
  EXPECT_DOUBLE_EQ(by_value.values(1), 1.0);
  EXPECT_DOUBLE_EQ(by_value.values(2), -5.0);
  const auto by_abs = eigh(s, EigenOrdering::DescendingByAbsValue);
  EXPECT_DOUBLE_EQ(by_abs.values(0), -5.0);
  EXPECT_DOUBLE_EQ(by_abs.values(1), 3.0);
  EXPECT_DOUBLE_EQ(by_abs.vectors(1, 0), 1.0);
}

TEST(Eigh, SignConventionLargestEntryPositive) {
  Philox4x32 gen(4);
  const auto e = eigh(random_symmetric(gen, 9), EigenOrdering::DescendingByValue);
  for (Index j = 0; j < e.size(); ++j) {
    Index arg = 0;
    e.vectors.col(j).cwiseAbs().maxCoeff(&arg);
    EXPECT_GT(e.vectors(arg, j), 0.0);
  }
}

TEST(Eigh, DecompositionIsOrthonormalAndReconstructs) {
  Philox4x32 gen(5);
  for (Index n : {10, 64, 65, 200}) {
    const auto s = random_symmetric(gen, n);
    const auto e = eigh(s, EigenOrdering::DescendingByValue);
    EXPECT_LT((e.vectors.transpose() * e.vectors - Matrix::Identity(n, n)).norm(), 1e-10);
    const Matrix rebuilt = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
    EXPECT_LT((rebuilt - s.values()).norm(), 1e-10 * s.frobenius_norm());
    EXPECT_LE(e.residual, kDefaultEigenTol);
    for (Index k = 1; k < n; ++k) EXPECT_GE(e.values(k - 1), e.values(k));
  }
}

TEST(Eigh, JacobiAgreesWithDense) {
  Philox4x32 gen(6);
  for (Index n : {3, 40, 90}) {
    const auto s = random_symmetric(gen, n);
    const auto dense = eigh(s, EigenOrdering::DescendingByValue);
    const auto jac = reference::eigh_jacobi(s, EigenOrdering::DescendingByValue);
    EXPECT_LT((dense.values - jac.values).cwiseAbs().maxCoeff(), 1e-9);
    // simple spectrum with canonical signs: vectors agree too
    EXPECT_LT((dense.vectors - jac.vectors).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(EighWindow, DenseAndKrylovMatchFullDecomposition) {
  Philox4x32 gen(7);
  const Index n = 300;
  const auto x = random_data(gen, n, 40);
  const auto s = hollow(gram(x));
  const auto full = eigh(s, EigenOrdering::DescendingByValue);
  for (auto solver : {EigenSolver::Dense, EigenSolver::Krylov}) {
    const auto w = eigh_window(s, EigenOrdering::DescendingByValue, 1, 3, kDefaultEigenTol, solver);
    ASSERT_EQ(w.size(), 3);
    EXPECT_EQ(w.offset, 1);
    for (Index k = 0; k < 3; ++k) {
      EXPECT_NEAR(w.values(k), full.values(k + 1), 1e-8 * full.values(0));
      EXPECT_LT((w.vectors.col(k) - full.vectors.col(k + 1)).norm(), 1e-6);
    }
  }
  const auto abs_w = eigh_window(s, EigenOrdering::DescendingByAbsValue, 0, 2, kDefaultEigenTol,
                                 EigenSolver::Krylov);
  const auto abs_full = eigh(s, EigenOrdering::DescendingByAbsValue);
  EXPECT_NEAR(abs_w.values(0), abs_full.values(0), 1e-8 * std::abs(abs_full.values(0)));
  EXPECT_NEAR(abs_w.values(1), abs_full.values(1), 1e-8 * std::abs(abs_full.values(0)));
}

TEST(EighWindow, RejectsOutOfRangeWindow) {
  const auto s = SymmetricMatrix::identity(4);
  EXPECT_THROW(eigh_window(s, EigenOrdering::DescendingByValue, 3, 2), Error);
  EXPECT_THROW(eigh_window(s, EigenOrdering::DescendingByValue, -1, 1), Error);
  const auto e = eigh(s, EigenOrdering::DescendingByValue);
  EXPECT_THROW(top_window(e, 2, 3), Error);
  EXPECT_EQ(top_window(e, 1, 2).vectors.cols(), 2);
}

TEST(MatrixSign, MatchesNewtonPolarIteration) {
  Philox4x32 gen(8);
  for (int trial = 0; trial < 100; ++trial) {
    const Index r = 1 + trial % 4;
    const Matrix h = gaussian_matrix(gen, r, r);
    const Matrix q = matrix_sign(h);
    EXPECT_LT((q - oracle::polar_newton(h)).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(MatrixSign, OrthogonalInputIsFixedAndSingularRejected) {
  Matrix rot(2, 2);
  rot << std::cos(0.3), -std::sin(0.3), std::sin(0.3), std::cos(0.3);
  EXPECT_LT((matrix_sign(rot) - rot).norm(), 1e-14);
  Matrix sing(2, 2);
  sing << 1, 2, 2, 4;
  EXPECT_THROW(matrix_sign(sing), Error);
}

TEST(SvdSmall, Reconstructs) {
  Philox4x32 gen(9);
  const Matrix h = gaussian_matrix(gen, 3, 3);
  const auto s = svd_small(h);
  EXPECT_LT((s.left * s.singular.asDiagonal() * s.right.transpose() - h).norm(), 1e-12);
  EXPECT_GE(s.singular(0), s.singular(1));
  EXPECT_GE(s.singular(1), s.singular(2));
}

TEST(Norm2p, KnownValues) {
  Matrix a(3, 2);
  a << 3, 4, 0, 0, 0, 1;
  // row norms 5, 0, 1
  EXPECT_NEAR(norm_2p(a, LpExponent(2)), std::sqrt(26.0), 1e-14);
  EXPECT_NEAR(norm_2p(a, LpExponent(1)), 6.0, 1e-14);
  EXPECT_DOUBLE_EQ(norm_2p(a, LpExponent::infinity()), 5.0);
  Vector v(3);
  v << -2, 0, 2;
  EXPECT_NEAR(norm_2p(v, LpExponent(3)), std::cbrt(16.0), 1e-14);
}

TEST(Norm2p, LargeExponentDoesNotOverflow) {
  Vector v = Vector::Constant(10, 1e150);
  EXPECT_NEAR(norm_2p(v, LpExponent(400)) / 1e150, std::pow(10.0, 1.0 / 400), 1e-12);
}

TEST(LpExponent, RejectsBelowOne) {
  EXPECT_THROW(LpExponent(0.5), Error);
  EXPECT_THROW(LpExponent(std::nan("")), Error);
  EXPECT_TRUE(LpExponent::infinity().is_infinite());
}

TEST(SignOf, ZeroIsPositive) {
  EXPECT_EQ(sign_of(0.0), 1);
  EXPECT_EQ(sign_of(-0.0), 1);
  EXPECT_EQ(sign_of(-1e-300), -1);
}

TEST(CanonicalizeSigns, FlipsNegativeLeader) {
  Matrix v(3, 1);
  v << 0.1, -0.9, 0.2;
  canonicalize_signs(v);
  EXPECT_DOUBLE_EQ(v(1, 0), 0.9);
  EXPECT_DOUBLE_EQ(v(0, 0), -0.1);
}
