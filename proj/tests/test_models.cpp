#include <gtest/gtest.h>

#include <cmath>

#include <hollowpca/models.hpp>

using namespace hollowpca;

TEST(LabelVector, Validation) {
  EXPECT_THROW(LabelVector::binary({1, 0}), Error);
  EXPECT_THROW(LabelVector::multiclass({1, 4}, 3), Error);
  EXPECT_THROW(LabelVector::multiclass({}, 0), Error);
  const auto y = LabelVector::binary({1, -1, 1});
  EXPECT_EQ(y.flipped().values(), (std::vector<int>{-1, 1, -1}));
  EXPECT_EQ(y.as_multiclass().values(), (std::vector<int>{1, 2, 1}));
  EXPECT_EQ(y.as_signs()(1), -1.0);
  EXPECT_THROW(LabelVector::multiclass({1, 2}, 2).as_signs(), Error);
}

TEST(SignLabels, ZeroMapsToPlus) {
  Vector v(3);
  v << 0.0, -2.0, 1e-300;
  EXPECT_EQ(sign_labels(v).values(), (std::vector<int>{1, -1, 1}));
}

TEST(SampleGmm, DeterministicAndSignalRows) {
  Vector mu = Vector::Zero(5);
  mu(2) = 3.0;
  const auto params = GmmParams::symmetric_binary(mu);
  const auto a = sample_gmm(params, 40, Seed(1, {2}));
  const auto b = sample_gmm(params, 40, Seed(1, {2}));
  EXPECT_EQ(a.x.values(), b.x.values());
  EXPECT_EQ(a.labels, b.labels);
  for (Index i = 0; i < 40; ++i) EXPECT_EQ(a.signal(i, 2), 3.0 * a.labels[i]);
  const auto c = sample_gmm(params, 40, Seed(1, {3}));
  EXPECT_NE(a.x.values(), c.x.values());
}

TEST(SampleGmm, NoiseCovarianceMatches) {
  // Dense covariance [[2, 1], [1, 1]]; empirical covariance of 40000 draws.
  Matrix sigma(2, 2);
  sigma << 2, 1, 1, 1;
  GmmParams p;
  p.centers = RowMatrix::Zero(1, 2);
  p.noise = DenseNoise{SymmetricMatrix::from_dense(sigma)};
  const auto s = sample_gmm(p, 40000, Seed(9));
  const Matrix emp = s.x.values().transpose() * s.x.values() / 40000.0;
  EXPECT_LT((emp - sigma).cwiseAbs().maxCoeff(), 0.05);
}

TEST(SampleGmm, SingularPsdCovarianceAccepted) {
  Matrix sigma(2, 2);
  sigma << 1, 1, 1, 1;
  GmmParams p;
  p.centers = RowMatrix::Zero(1, 2);
  p.noise = DenseNoise{SymmetricMatrix::from_dense(sigma)};
  const auto s = sample_gmm(p, 100, Seed(3));
  for (Index i = 0; i < 100; ++i) EXPECT_NEAR(s.x(i, 0), s.x(i, 1), 1e-12);
  Matrix bad(2, 2);
  bad << 1, 2, 2, 1;
  p.noise = DenseNoise{SymmetricMatrix::from_dense(bad)};
  EXPECT_THROW(sample_gmm(p, 10, Seed(3)), Error);
}

TEST(SampleGmm, OverridesAndFixedLabels) {
  GmmParams p = GmmParams::symmetric_binary(Vector::Zero(200));
  p.noise = IsotropicNoise{1.0};
  p.noise_overrides[0] = IsotropicNoise{9.0};
  std::vector<int> y(50, 1);
  p.labels = LabelVector::binary(y);
  const auto s = sample_gmm(p, 50, Seed(4));
  EXPECT_EQ(s.labels, LabelVector::binary(y));
  EXPECT_NEAR(s.x.row(0).squaredNorm() / 200.0, 9.0, 1.5);
  EXPECT_NEAR(s.x.row(1).squaredNorm() / 200.0, 1.0, 0.3);
  p.noise_overrides[50] = IsotropicNoise{1.0};
  EXPECT_THROW(sample_gmm(p, 50, Seed(4)), Error);
}

TEST(SampleGmm, RejectsBadParameters) {
  GmmParams p;
  p.centers = RowMatrix::Zero(3, 2);
  p.mode = LabelMode::Binary;
  EXPECT_THROW(sample_gmm(p, 10, Seed()), Error);
  p.mode = LabelMode::Multiclass;
  p.noise = IsotropicNoise{-1.0};
  EXPECT_THROW(sample_gmm(p, 10, Seed()), Error);
  p.noise = DiagonalNoise{Vector::Ones(3)};
  EXPECT_THROW(sample_gmm(p, 10, Seed()), Error);
}

TEST(SampleSbm, StructureAndEdgeDensity) {
  const Index n = 400;
  std::vector<int> y(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] = i < n / 2 ? 1 : -1;
  const SbmParams params{n, 0.3, 0.05, LabelVector::binary(y)};
  const auto a = sample_sbm(params, Seed(5));
  double within = 0, between = 0;
  for (Index i = 0; i < n; ++i) {
    EXPECT_EQ(a(i, i), 0.0);
    for (Index j = 0; j < i; ++j) {
      ASSERT_TRUE(a(i, j) == 0.0 || a(i, j) == 1.0);
      (y[i] == y[j] ? within : between) += a(i, j);
    }
  }
  const double pairs_within = 2.0 * (n / 2) * (n / 2 - 1) / 2.0;
  const double pairs_between = (n / 2) * (n / 2);
  EXPECT_NEAR(within / pairs_within, 0.3, 0.01);
  EXPECT_NEAR(between / pairs_between, 0.05, 0.005);
}

TEST(SampleSbm, ClosedIntervalEndpoints) {
  const SbmParams full{6, 1.0, 0.0, LabelVector::binary({1, 1, 1, -1, -1, -1})};
  const auto a = sample_sbm(full, Seed(6));
  EXPECT_EQ(a(1, 0), 1.0);
  EXPECT_EQ(a(3, 0), 0.0);
  const SbmParams bad{6, 1.1, 0.0, full.labels};
  EXPECT_THROW(sample_sbm(bad, Seed(6)), Error);
}

TEST(Csbm, RadiusSolvesSnrEquation) {
  CsbmParams p{500, 2000, 8, 1, 1.5, std::log(500.0)};
  const double r2 = p.radius() * p.radius();
  EXPECT_NEAR(r2 * r2 / (r2 + 2000.0 / 500.0), 1.5 * std::log(500.0), 1e-9);
  EXPECT_NEAR(p.alpha(), 8 * std::log(500.0) / 500, 1e-15);
}

TEST(Csbm, ValidatesOpenInterval) {
  CsbmParams p{10, 5, 8, 1, 1.5, 2.0};
  EXPECT_THROW(p.validate(), Error);  // alpha = 1.6
  p.a = 5.0;                          // alpha = 1
  EXPECT_THROW(p.validate(), Error);
  p.a = 4.0;
  EXPECT_NO_THROW(p.validate());
  p.d = 1;
  EXPECT_THROW(p.validate(), Error);
}

TEST(Csbm, GivenReusesGraphAndNoiseStreams) {
  CsbmParams p{60, 30, 4, 1, 1.0, 3.0};
  const auto full = sample_csbm(p, Seed(7));
  EXPECT_NEAR(full.mu.norm(), p.radius(), 1e-12);
  const auto again = sample_csbm_given(p, full.y, full.mu, Seed(7));
  EXPECT_EQ(full.adjacency.values(), again.adjacency.values());
  EXPECT_EQ(full.x.values(), again.x.values());
}
