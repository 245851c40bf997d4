#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "dantzig/data.h"
#include "dantzig/errors.h"
#include "dantzig/parallel.h"

namespace dantzig {
namespace {

Matrix RandomMatrix(Eigen::Index rows, Eigen::Index cols, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  }
  return m;
}

TEST(Dataset, RejectsShapeMismatch) {
  EXPECT_THROW(Dataset(Matrix::Ones(3, 2), Vector::Ones(2)), DataError);
  EXPECT_THROW(Dataset(Matrix::Ones(3, 2), Vector::Ones(3), Vector::Ones(3)),
               DataError);
}

TEST(Dataset, RejectsNonFinite) {
  Matrix x = Matrix::Ones(2, 2);
  x(1, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(Dataset(x, Vector::Ones(2)), DataError);
  Vector y = Vector::Ones(2);
  y(0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(Dataset(Matrix::Ones(2, 2), y), DataError);
}

TEST(Dataset, ErrorsNeedTruth) {
  Dataset plain(Matrix::Ones(2, 1), Vector::Ones(2));
  EXPECT_THROW(plain.errors(), std::logic_error);
  Dataset simulated(Matrix::Ones(2, 1), Vector::Constant(2, 3.0),
                    Vector::Constant(1, 2.0));
  EXPECT_DOUBLE_EQ(simulated.errors()(0), 1.0);
}

TEST(Normalization, IdentityIsOnes) {
  const Normalization d =
      BuildNormalization(RandomMatrix(5, 4, 1), NormalizationMode::kIdentity);
  EXPECT_EQ(d.diag, Vector::Ones(4));
}

TEST(Normalization, RmsByHand) {
  Matrix x(2, 1);
  x << 3, 4;
  const Normalization d = BuildNormalization(x, NormalizationMode::kRms);
  EXPECT_NEAR(d.diag(0), 1.0 / std::sqrt(12.5), 1e-15);
  EXPECT_NEAR(d.diag(0), 0.282843, 1e-6);
}

TEST(Normalization, MaxAbsByHand) {
  Matrix x(2, 1);
  x << 3, -4;
  EXPECT_DOUBLE_EQ(BuildNormalization(x, NormalizationMode::kMaxAbs).diag(0), 0.25);
}

TEST(Normalization, ZeroColumn) {
  Matrix x = RandomMatrix(4, 3, 2);
  x.col(1).setZero();
  EXPECT_THROW(BuildNormalization(x, NormalizationMode::kRms), DataError);
  EXPECT_THROW(BuildNormalization(x, NormalizationMode::kMaxAbs), DataError);
  EXPECT_NO_THROW(BuildNormalization(x, NormalizationMode::kIdentity));
  EXPECT_EQ(ZeroColumns(x), std::vector<Eigen::Index>{1});
}

TEST(Normalization, ParseModes) {
  EXPECT_EQ(ParseNormalizationMode("identity"), NormalizationMode::kIdentity);
  EXPECT_EQ(ParseNormalizationMode("rms"), NormalizationMode::kRms);
  EXPECT_EQ(ParseNormalizationMode("maxabs"), NormalizationMode::kMaxAbs);
  EXPECT_THROW(ParseNormalizationMode("l2"), std::invalid_argument);
  EXPECT_EQ(ToString(NormalizationMode::kMaxAbs), "maxabs");
}

TEST(Psi, IdentityDesign) {
  const Matrix x = Matrix::Identity(2, 2);
  const GramMatrix psi =
      ComputePsi(x, BuildNormalization(x, NormalizationMode::kIdentity));
  EXPECT_EQ(psi.psi, 0.5 * Matrix::Identity(2, 2));
}

TEST(Psi, SingleColumn) {
  const Matrix x = Matrix::Ones(2, 1);
  const GramMatrix psi =
      ComputePsi(x, BuildNormalization(x, NormalizationMode::kIdentity));
  EXPECT_DOUBLE_EQ(psi.psi(0, 0), 1.0);
}

TEST(Psi, SymmetricAndUnitDiagonalUnderRms) {
  for (unsigned seed = 0; seed < 10; ++seed) {
    const Matrix x = RandomMatrix(7, 5, seed);
    const GramMatrix psi = ComputePsi(x, BuildNormalization(x, NormalizationMode::kRms));
    EXPECT_LE((psi.psi - psi.psi.transpose()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LE((psi.psi.diagonal() - Vector::Ones(5)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(ResidualGram, ByHand) {
  Dataset data(Matrix::Constant(1, 1, 2.0), Vector::Constant(1, 3.0));
  const Normalization d = BuildNormalization(data.x(), NormalizationMode::kIdentity);
  EXPECT_DOUBLE_EQ(ResidualGram(data, d, Vector::Constant(1, 0.5))(0), 4.0);
  EXPECT_DOUBLE_EQ(QHat(data, d, Vector::Constant(1, 0.5)), 16.0);
}

TEST(ResidualGram, NoiselessTruthAndZeroBeta) {
  const Matrix x = RandomMatrix(6, 3, 3);
  const Vector beta = Vector::LinSpaced(3, -1.0, 2.0);
  Dataset data(x, x * beta, beta);
  const Normalization d = BuildNormalization(x, NormalizationMode::kRms);
  EXPECT_LE(ResidualGram(data, d, beta).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LE(QHat(data, d, beta), 1e-28);
  const Vector expected = d.diag.asDiagonal() * x.transpose() * data.y() / 6.0;
  EXPECT_LE((ResidualGram(data, d, Vector::Zero(3)) - expected).cwiseAbs().maxCoeff(),
            1e-14);
}

TEST(ResidualGram, Linearity) {
  for (unsigned seed = 0; seed < 20; ++seed) {
    const Matrix x = RandomMatrix(8, 4, seed);
    const Vector y = RandomMatrix(8, 1, seed + 100).col(0);
    Dataset data(x, y);
    const Normalization d = BuildNormalization(x, NormalizationMode::kMaxAbs);
    const GramMatrix psi = ComputePsi(x, d);
    const Vector b1 = RandomMatrix(4, 1, seed + 200).col(0);
    const Vector b2 = RandomMatrix(4, 1, seed + 300).col(0);
    const Vector lhs = ResidualGram(data, d, b1);
    const Vector rhs = psi.psi * ScaledDeviation(d, b2, b1) + ResidualGram(data, d, b2);
    EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-10 * (1.0 + lhs.cwiseAbs().maxCoeff()));
  }
}

TEST(QHat, Homogeneous) {
  const Matrix x = RandomMatrix(5, 3, 9);
  const Vector y = RandomMatrix(5, 1, 10).col(0);
  const Vector beta = RandomMatrix(3, 1, 11).col(0);
  const Normalization d = BuildNormalization(x, NormalizationMode::kRms);
  const double lambda = 3.5;
  const double base = QHat(Dataset(x, y), d, beta);
  EXPECT_NEAR(QHat(Dataset(x, lambda * y), d, lambda * beta), lambda * lambda * base,
              1e-12 * base);
}

TEST(QHat, ZeroIffWeightedResidualsVanish) {
  // Row 2 has a residual but no regressor weight, so it does not count.
  Matrix x(3, 2);
  x << 1, 2, 0, 1, 0, 0;
  Vector beta(2);
  beta << 1, -1;
  Vector y = x * beta;
  y(2) += 5.0;
  const Normalization d = BuildNormalization(x, NormalizationMode::kIdentity);
  EXPECT_EQ(QHat(Dataset(x, y), d, beta), 0.0);
  y(1) += 1e-3;
  EXPECT_GT(QHat(Dataset(x, y), d, beta), 0.0);
}

TEST(ScaledDeviation, DividesByDiagonal) {
  Normalization d;
  d.diag = Vector::Constant(2, 0.5);
  Vector a(2), b(2);
  a << 1, 2;
  b << 0, 1;
  const Vector delta = ScaledDeviation(d, a, b);
  EXPECT_DOUBLE_EQ(delta(0), 2.0);
  EXPECT_DOUBLE_EQ(delta(1), 2.0);
}

TEST(Parallel, CoversEveryIndexOnce) {
  std::vector<int> hits(1000, 0);
  ParallelFor(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
}

TEST(Parallel, RethrowsLowestFailure) {
  try {
    ParallelFor(50, 3, [](std::size_t i) {
      if (i == 7 || i == 31) throw std::runtime_error(std::to_string(i));
    });
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "7");
  }
}

TEST(Parallel, DerivedSeedsDiffer) {
  EXPECT_NE(DeriveSeed(1, 0), DeriveSeed(1, 1));
  EXPECT_NE(DeriveSeed(1, 0), DeriveSeed(2, 0));
  EXPECT_EQ(DeriveSeed(5, 9), DeriveSeed(5, 9));
}

}  // namespace
}  // namespace dantzig
