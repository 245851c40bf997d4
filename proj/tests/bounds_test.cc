#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "dantzig/bounds.h"
#include "dantzig/errors.h"

namespace dantzig {
namespace {

TEST(QStarPolicy, Resolve) {
  const Dataset data(Matrix::Ones(2, 1), Vector::Ones(2), Vector::Ones(1));
  Normalization d;
  d.diag = Vector::Ones(1);
  EXPECT_EQ(ResolveQStar(QStarPolicy::Bounded(2.0), data, d, std::nullopt), 16.0);
  EXPECT_EQ(ResolveQStar(QStarPolicy::Fixed(1.5), data, d, std::nullopt), 1.5);
  EXPECT_EQ(ResolveQStar(QStarPolicy::Plugin(), data, d, *data.beta_true()), 0.0);
  EXPECT_THROW(ResolveQStar(QStarPolicy::Plugin(), data, d, std::nullopt),
               std::invalid_argument);
}

TEST(QStarPolicy, ParseRoundTrip) {
  for (const char* text : {"plugin", "bounded:2", "fixed:0.25"}) {
    const QStarPolicy policy = QStarPolicy::Parse(text);
    EXPECT_EQ(QStarPolicy::Parse(policy.ToString()).kind, policy.kind);
    EXPECT_EQ(QStarPolicy::Parse(policy.ToString()).value, policy.value);
  }
  EXPECT_EQ(QStarPolicy::Parse("bounded:2").value, 2.0);
  EXPECT_THROW(QStarPolicy::Parse("bounded:-1"), std::invalid_argument);
  EXPECT_THROW(QStarPolicy::Parse("fixed"), std::invalid_argument);
  EXPECT_THROW(QStarPolicy::Parse("oracle"), std::invalid_argument);
}

TEST(ErrorBounds, ByHand) {
  const ErrorBounds b = ComputeErrorBounds(1.0, 0.5, 1.0, 0.1);
  EXPECT_NEAR(b.l1_bound, 1.8, 1e-14);
  EXPECT_NEAR(b.prediction_bound, 0.54, 1e-14);
}

TEST(ErrorBounds, HomogeneousInR) {
  const ErrorBounds a = ComputeErrorBounds(0.7, 0.3, 2.0, 0.1);
  const ErrorBounds b = ComputeErrorBounds(0.7, 0.3, 2.0, 0.2);
  EXPECT_NEAR(b.l1_bound, 2.0 * a.l1_bound, 1e-14 * b.l1_bound);
  EXPECT_NEAR(b.prediction_bound, 4.0 * a.prediction_bound, 1e-14 * b.prediction_bound);
}

TEST(ErrorBounds, AlgebraicIdentity) {
  // prediction = l1 * (2gamma+1) sqrt(Q*) r / gamma.
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.05, 5.0);
  for (int i = 0; i < 1000; ++i) {
    const double gamma = u(rng), kappa = u(rng), q = u(rng), r = u(rng);
    const ErrorBounds b = ComputeErrorBounds(gamma, kappa, q, r);
    const double rhs = b.l1_bound * (2 * gamma + 1) * std::sqrt(q) * r / gamma;
    EXPECT_NEAR(b.prediction_bound, rhs, 1e-12 * rhs);
  }
}

TEST(ErrorBounds, Monotone) {
  const ErrorBounds base = ComputeErrorBounds(1.0, 0.4, 1.0, 0.2);
  const ErrorBounds more_q = ComputeErrorBounds(1.0, 0.4, 1.5, 0.2);
  const ErrorBounds more_r = ComputeErrorBounds(1.0, 0.4, 1.0, 0.3);
  const ErrorBounds more_kappa = ComputeErrorBounds(1.0, 0.6, 1.0, 0.2);
  EXPECT_GT(more_q.l1_bound, base.l1_bound);
  EXPECT_GT(more_q.prediction_bound, base.prediction_bound);
  EXPECT_GT(more_r.l1_bound, base.l1_bound);
  EXPECT_GT(more_r.prediction_bound, base.prediction_bound);
  EXPECT_LT(more_kappa.l1_bound, base.l1_bound);
  EXPECT_LT(more_kappa.prediction_bound, base.prediction_bound);
}

TEST(ErrorBounds, RateShapeInSAndN) {
  // With kappa = 1/s the bounds scale exactly like s / sqrt(n) and s / n at
  // fixed p.
  const double alpha = 0.05;
  const double p = 200;
  auto r = [&](double n) { return std::sqrt(2 * std::log(4 * p / alpha) / n); };
  const ErrorBounds ref = ComputeErrorBounds(1.0, 1.0, 1.0, r(100));
  for (double s : {1.0, 2.0, 4.0}) {
    for (double n : {100.0, 400.0}) {
      const ErrorBounds b = ComputeErrorBounds(1.0, 1.0 / s, 1.0, r(n));
      EXPECT_NEAR(b.l1_bound / (s / std::sqrt(n)), ref.l1_bound * 10.0, 1e-10 * ref.l1_bound * 10);
      EXPECT_NEAR(b.prediction_bound / (s / n), ref.prediction_bound * 100.0,
                  1e-10 * ref.prediction_bound * 100);
    }
  }
}

TEST(ErrorBounds, Rejects) {
  EXPECT_THROW(ComputeErrorBounds(1.0, 0.0, 1.0, 0.1), DegenerateSensitivityError);
  EXPECT_THROW(ComputeErrorBounds(0.0, 0.5, 1.0, 0.1), std::invalid_argument);
  EXPECT_THROW(ComputeErrorBounds(1.0, 0.5, 0.0, 0.1), std::invalid_argument);
}

}  // namespace
}  // namespace dantzig
