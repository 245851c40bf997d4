#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "dantzig/errors.h"
#include "dantzig/estimator.h"
#include "oracles.h"

namespace dantzig {
namespace {

Matrix Hadamard4() {
  Matrix h(4, 4);
  h << 1, 1, 1, 1,
       1, -1, 1, -1,
       1, 1, -1, -1,
       1, -1, -1, 1;
  return h;
}

Dataset RandomSmall(std::mt19937_64& rng, Eigen::Index p, Eigen::Index n) {
  std::normal_distribution<double> normal;
  Matrix x(n, p);
  Vector y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) x(i, j) = normal(rng);
    y(i) = normal(rng);
  }
  return Dataset(x, y);
}

FitOptions Options(int s) {
  FitOptions options;
  options.sparsity = s;
  return options;
}

TEST(TuningR, ByHand) {
  EXPECT_NEAR(TuningR(1, 2, 0.04), std::sqrt(std::log(100.0)), 1e-15);
  EXPECT_NEAR(TuningR(1, 2, 0.04), 2.145966, 1e-6);
  EXPECT_NEAR(TuningR(100, 10000, 0.05), 0.0423962, 1e-7);
  EXPECT_NEAR(TuningR(30, 400, 0.1), 0.5 * TuningR(30, 100, 0.1), 1e-15);
  EXPECT_THROW(TuningR(0, 10, 0.05), std::invalid_argument);
  EXPECT_THROW(TuningR(3, 10, 1.0), std::invalid_argument);
}

TEST(TuningC, ByHand) {
  EXPECT_NEAR(TuningC(0.1, 1.0, 0.5), 0.6, 1e-15);
  EXPECT_NEAR(TuningC(0.1, 1.0, 1.0), 0.5 * TuningC(0.1, 1.0, 0.5), 1e-15);
  EXPECT_THROW(TuningC(0.1, 1.0, 0.0), DegenerateSensitivityError);
}

TEST(FitOptions, Validate) {
  FitOptions options = Options(1);
  EXPECT_NO_THROW(options.Validate());
  options.alpha = 1.5;
  EXPECT_THROW(options.Validate(), std::invalid_argument);
  options = Options(0);
  EXPECT_THROW(options.Validate(), std::invalid_argument);
  options = Options(1);
  options.gamma_grid = {1.0, -2.0};
  EXPECT_THROW(options.Validate(), std::invalid_argument);
  EXPECT_EQ(ParseGammaCriterion("prediction"), GammaCriterion::kPrediction);
  EXPECT_THROW(ParseGammaCriterion("aic"), std::invalid_argument);
}

TEST(FitFixedGamma, ZeroResponse) {
  std::mt19937_64 rng(1);
  const Dataset base = RandomSmall(rng, 3, 6);
  const Dataset data(base.x(), Vector::Zero(6));
  const FitResult fit = FitFixedGamma(data, Options(1), 1.0);
  EXPECT_EQ(fit.beta_hat, Vector::Zero(3));
  EXPECT_EQ(fit.sigma_hat, 0.0);
  EXPECT_EQ(fit.objective, 0.0);
}

TEST(SolveDantzig, OneDimensionalRegimes) {
  const Dataset data(Matrix::Ones(2, 1), Vector::Ones(2));
  Normalization d;
  d.diag = Vector::Ones(1);
  const double r = 0.5;
  for (double ratio : {0.3, 0.8, 1.25, 3.0}) {
    const DantzigSolution s = SolveDantzig(data, d, r, ratio * r);
    double argmin = 0.0;
    const double best = oracle::OneDimObjectiveGrid(ratio, &argmin);
    EXPECT_NEAR(s.objective, best, 1e-4);
    if (ratio > 1.0) {
      EXPECT_NEAR(s.beta(0), 1.0, 1e-12);
      EXPECT_NEAR(s.sigma, 0.0, 1e-12);
    } else {
      EXPECT_NEAR(s.beta(0), 0.0, 1e-12);
      EXPECT_NEAR(s.sigma, 1.0 / r, 1e-12);
    }
    EXPECT_NEAR(s.beta(0), argmin, 1e-4);
  }
}

TEST(FitFixedGamma, MatchesEnumeration) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pick_p(1, 2);
  for (int draw = 0; draw < 100; ++draw) {
    const Eigen::Index p = pick_p(rng);
    const Eigen::Index n = std::uniform_int_distribution<int>(static_cast<int>(p), 4)(rng);
    const Dataset data = RandomSmall(rng, p, n);
    const double gamma = 0.5 + 0.5 * (draw % 4);
    const FitResult fit = FitFixedGamma(data, Options(1), gamma);
    // rms scaling by hand.
    Vector d(p);
    for (Eigen::Index k = 0; k < p; ++k) {
      d(k) = 1.0 / std::sqrt(data.x().col(k).squaredNorm() / double(n));
    }
    const oracle::LpResult reference =
        oracle::DantzigByEnumeration(data.x(), data.y(), d, fit.r, fit.c);
    ASSERT_TRUE(reference.feasible);
    EXPECT_NEAR(fit.objective, reference.value, 1e-7) << "draw " << draw;
    const double slack =
        ResidualGram(data, fit.normalization, fit.beta_hat).cwiseAbs().maxCoeff() -
        fit.sigma_hat * fit.r;
    EXPECT_LE(slack, 1e-8);
  }
}

TEST(Fit, CertificatesOnSimulatedData) {
  std::mt19937_64 rng(19);
  std::normal_distribution<double> normal;
  const Eigen::Index n = 40, p = 25;
  Matrix x(n, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) x(i, j) = normal(rng);
  }
  Vector beta = Vector::Zero(p);
  beta(0) = 1.5;
  beta(3) = -2.0;
  Vector y = x * beta;
  for (Eigen::Index i = 0; i < n; ++i) y(i) += 0.5 * normal(rng);
  const Dataset data(x, y, beta);
  const FitResult fit = Fit(data, Options(2));
  const Normalization& d = fit.normalization;
  EXPECT_LE(ResidualGram(data, d, fit.beta_hat).cwiseAbs().maxCoeff(),
            fit.sigma_hat * fit.r + 1e-8);
  // (beta*, sigma) with sigma just large enough is feasible, so it cannot
  // beat the optimum.
  const double sigma_star = ResidualGram(data, d, beta).cwiseAbs().maxCoeff() / fit.r;
  const double value_star = (d.diag.cwiseInverse().asDiagonal() * beta).cwiseAbs().sum() +
                            fit.c * sigma_star;
  EXPECT_LE(fit.objective, value_star + 1e-8);
  const double sigma_g = std::sqrt(QHat(data, d, beta));
  if (ResidualGram(data, d, beta).cwiseAbs().maxCoeff() <= fit.r * sigma_g) {
    EXPECT_LE(fit.objective,
              (d.diag.cwiseInverse().asDiagonal() * beta).cwiseAbs().sum() +
                  fit.c * sigma_g + 1e-8);
  }
  EXPECT_TRUE(fit.qstar_is_plugin);
  EXPECT_NEAR(fit.qstar, QHat(data, d, fit.beta_hat), 1e-12 * (1 + fit.qstar));
}

TEST(Fit, NoiselessOrthonormalRecovery) {
  Vector beta(4);
  beta << 2, 0, -1, 0;
  const Matrix x = Hadamard4();
  const Dataset data(x, x * beta, beta);
  const FitResult fit = Fit(data, Options(2));
  EXPECT_LE((fit.beta_hat - beta).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LE(fit.sigma_hat, 1e-8);
}

TEST(SelectGamma, Singleton) {
  std::mt19937_64 rng(2);
  FitOptions options = Options(1);
  options.gamma_grid = {1.0};
  EXPECT_EQ(SelectGamma(RandomSmall(rng, 3, 8), options).gamma, 1.0);
}

TEST(SelectGamma, IdentityPsiPicksOne) {
  std::mt19937_64 rng(3);
  const Dataset data(Hadamard4(), RandomSmall(rng, 1, 4).y());
  FitOptions options = Options(1);
  options.gamma_grid = {0.5, 1.0, 2.0};
  const GammaSelection selection = SelectGamma(data, options, 1.0);
  EXPECT_EQ(selection.gamma, 1.0);
  const double r = TuningR(4, 4, options.alpha);
  // (gamma+2)(2gamma+1)/gamma at kappa = 1: 10, 9, 10.
  const double expected[] = {10.0, 9.0, 10.0};
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(selection.table[i].criterion_value, expected[i] * r, 1e-9);
  }
}

TEST(SelectGamma, TableReproducesBounds) {
  std::mt19937_64 rng(4);
  const Dataset data = RandomSmall(rng, 6, 15);
  FitOptions options = Options(1);
  options.qstar = QStarPolicy::Fixed(2.0);
  options.criterion = GammaCriterion::kPrediction;
  const GammaSelection selection = SelectGamma(data, options);
  const double r = TuningR(6, 15, options.alpha);
  for (const GammaCandidate& candidate : selection.table) {
    if (candidate.sensitivity.degenerate) continue;
    ASSERT_TRUE(candidate.bounds);
    const ErrorBounds expected =
        ComputeErrorBounds(candidate.gamma, candidate.sensitivity.kappa, 2.0, r);
    EXPECT_EQ(candidate.bounds->l1_bound, expected.l1_bound);
    EXPECT_EQ(candidate.bounds->prediction_bound, expected.prediction_bound);
    EXPECT_DOUBLE_EQ(candidate.criterion_value, expected.prediction_bound);
  }
}

TEST(SelectGamma, AllDegenerateThrows) {
  Matrix x(4, 2);
  x << 1, 1, 2, 2, -1, -1, 0.5, 0.5;
  const Dataset data(x, Vector::Ones(4));
  EXPECT_THROW(SelectGamma(data, Options(1)), DegenerateSensitivityError);
  EXPECT_THROW(Fit(data, Options(1)), DegenerateSensitivityError);
}

TEST(SelectGamma, PrunedMatchesFullProfile) {
  std::mt19937_64 rng(6);
  const Dataset data = RandomSmall(rng, 12, 30);
  FitOptions pruned = Options(2);
  FitOptions full = pruned;
  full.full_sensitivity_profile = true;
  const GammaSelection a = SelectGamma(data, pruned);
  const GammaSelection b = SelectGamma(data, full);
  EXPECT_EQ(a.gamma, b.gamma);
  for (std::size_t i = 0; i < a.table.size(); ++i) {
    EXPECT_EQ(a.table[i].sensitivity.degenerate, b.table[i].sensitivity.degenerate);
    if (!b.table[i].sensitivity.degenerate) {
      EXPECT_NEAR(a.table[i].sensitivity.kappa, b.table[i].sensitivity.kappa, 1e-10);
    }
  }
}

TEST(Fit, DeterministicAndHomogeneous) {
  std::mt19937_64 rng(8);
  const Dataset data = RandomSmall(rng, 10, 20);
  FitOptions options = Options(2);
  options.threads = 2;
  const FitResult a = Fit(data, options);
  const FitResult b = Fit(data, options);
  EXPECT_EQ(a.beta_hat, b.beta_hat);
  EXPECT_EQ(a.sigma_hat, b.sigma_hat);
  EXPECT_EQ(a.objective, b.objective);
  EXPECT_EQ(a.gamma, b.gamma);

  const double lambda = 2.5;
  const FitResult scaled = Fit(Dataset(data.x(), lambda * data.y()), options);
  EXPECT_NEAR(scaled.objective, lambda * a.objective, 1e-9 * (1 + a.objective));
}

}  // namespace
}  // namespace dantzig
