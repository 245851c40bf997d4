#include <cmath>
#include <iomanip>
#include <random>

#include <gtest/gtest.h>

#include "dantzig/errors.h"
#include "dantzig/lp.h"
#include "oracles.h"

namespace dantzig {
namespace {

LpProblem Make(Vector c, Matrix a_ub, Vector b_ub) {
  LpProblem lp;
  lp.objective = std::move(c);
  lp.a_ub = std::move(a_ub);
  lp.b_ub = std::move(b_ub);
  lp.a_eq.resize(0, lp.objective.size());
  lp.b_eq.resize(0);
  return lp;
}

// m <= 6 variables, k <= 6 rows, the last one sum(x) <= 5 so the region is
// bounded. Nonnegative objectives on odd draws exercise the dual path.
LpProblem RandomBounded(std::mt19937_64& rng, int draw) {
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> size(1, 6);
  const int m = size(rng);
  const int k = size(rng) - 1;
  Vector c(m);
  for (int j = 0; j < m; ++j) c(j) = draw % 2 ? std::abs(normal(rng)) : normal(rng);
  Matrix a(k + 1, m);
  Vector b(k + 1);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < m; ++j) a(i, j) = normal(rng);
    b(i) = normal(rng);
  }
  a.row(k).setOnes();
  b(k) = 5.0;
  return Make(c, a, b);
}

TEST(SolveLp, OneVariableBound) {
  const LpSolution s = SolveLp(Make(Vector::Ones(1), -Matrix::Ones(1, 1), -Vector::Ones(1)));
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.x(0), 1.0, 1e-12);
  EXPECT_NEAR(s.objective_value, 1.0, 1e-12);
}

TEST(SolveLp, SimplexVertex) {
  const LpSolution s = SolveLp(Make(-Vector::Ones(2), Matrix::Ones(1, 2), Vector::Ones(1)));
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective_value, -1.0, 1e-12);
}

TEST(SolveLp, Infeasible) {
  const LpProblem lp = Make(Vector::Ones(1), Matrix::Ones(1, 1), -Vector::Ones(1));
  EXPECT_EQ(SolveLp(lp).status, LpStatus::kInfeasible);
  EXPECT_EQ(EnumerateVerticesOracle(lp).status, LpStatus::kInfeasible);
}

TEST(SolveLp, UnboundedWithRay) {
  Matrix a(1, 2);
  a << 1, -1;
  Vector c(2);
  c << -1, 0;
  const LpProblem lp = Make(c, a, Vector::Ones(1));
  const LpSolution s = SolveLp(lp);
  ASSERT_EQ(s.status, LpStatus::kUnbounded);
  ASSERT_EQ(s.ray.size(), 2);
  EXPECT_LT(c.dot(s.ray), 0.0);
  EXPECT_GE(s.ray.minCoeff(), -1e-12);
  EXPECT_LE((a * s.ray).maxCoeff(), 1e-12);
  EXPECT_EQ(EnumerateVerticesOracle(lp).status, LpStatus::kUnbounded);
}

TEST(SolveLp, EqualityRows) {
  LpProblem lp = Make(Vector::Ones(2), Matrix(0, 2), Vector(0));
  lp.a_eq.resize(1, 2);
  lp.a_eq << 1, 2;
  lp.b_eq = Vector::Constant(1, 2.0);
  const LpSolution s = SolveLp(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective_value, 1.0, 1e-12);
  EXPECT_NEAR(s.x(1), 1.0, 1e-12);
}

TEST(SolveLp, DualsCertifyOptimality) {
  std::mt19937_64 rng(3);
  for (int draw = 0; draw < 200; ++draw) {
    const LpProblem lp = RandomBounded(rng, draw);
    const LpSolution s = SolveLp(lp);
    if (s.status != LpStatus::kOptimal) continue;
    ASSERT_EQ(s.dual.size(), lp.b_ub.size());
    EXPECT_LE(s.dual.maxCoeff(), 1e-9);
    const Vector reduced = lp.objective - lp.a_ub.transpose() * s.dual;
    EXPECT_GE(reduced.minCoeff(), -1e-8);
    EXPECT_NEAR(lp.b_ub.dot(s.dual), s.objective_value, 1e-7);
  }
}

TEST(SolveLp, BealeCyclingExample) {
  Vector c(4);
  c << -0.75, 150, -0.02, 6;
  Matrix a(3, 4);
  a << 0.25, -60, -0.04, 9,
       0.5, -90, -0.02, 3,
       0, 0, 1, 0;
  Vector b(3);
  b << 0, 0, 1;
  for (LpPricing pricing : {LpPricing::kDantzig, LpPricing::kDevex}) {
    LpOptions options;
    options.pricing = pricing;
    const LpSolution s = SolveLp(Make(c, a, b), options);
    ASSERT_EQ(s.status, LpStatus::kOptimal);
    EXPECT_NEAR(s.objective_value, -0.05, 1e-12);
  }
}

TEST(SolveLp, ScaleInvariance) {
  std::mt19937_64 rng(11);
  for (int draw = 0; draw < 100; ++draw) {
    LpProblem lp = RandomBounded(rng, draw);
    const LpSolution base = SolveLp(lp);
    if (base.status != LpStatus::kOptimal) continue;
    lp.objective *= 4.0;
    const LpSolution scaled = SolveLp(lp);
    ASSERT_EQ(scaled.status, LpStatus::kOptimal);
    EXPECT_EQ(scaled.x, base.x);
    EXPECT_NEAR(scaled.objective_value, 4.0 * base.objective_value,
                1e-12 * (1.0 + std::abs(base.objective_value)));
  }
}

TEST(SolveLp, Deterministic) {
  std::mt19937_64 rng(5);
  for (int draw = 0; draw < 50; ++draw) {
    const LpProblem lp = RandomBounded(rng, draw);
    const LpSolution a = SolveLp(lp), b = SolveLp(lp);
    EXPECT_EQ(a.status, b.status);
    EXPECT_EQ(a.x, b.x);
    EXPECT_EQ(a.iterations, b.iterations);
  }
}

TEST(SolveLp, AgreesWithBothOracles) {
  std::mt19937_64 rng(17);
  for (int draw = 0; draw < 400; ++draw) {
    const LpProblem lp = RandomBounded(rng, draw);
    const LpSolution reference = EnumerateVerticesOracle(lp);
    const oracle::LpResult independent = oracle::ActiveSetLp(lp);
    ASSERT_EQ(reference.status == LpStatus::kOptimal, independent.feasible);
    for (LpAlgorithm algorithm : {LpAlgorithm::kAuto, LpAlgorithm::kPrimal}) {
      for (LpPricing pricing : {LpPricing::kDantzig, LpPricing::kDevex}) {
        LpOptions options;
        options.algorithm = algorithm;
        options.pricing = pricing;
        const LpSolution s = SolveLp(lp, options);
        ASSERT_EQ(s.status, reference.status) << "draw " << draw;
        if (s.status == LpStatus::kOptimal) {
          EXPECT_NEAR(s.objective_value, reference.objective_value, 1e-7);
          EXPECT_NEAR(s.objective_value, independent.value, 1e-7);
        }
      }
    }
  }
}

TEST(SolveLp, CutoffCertifiesLowerBound) {
  std::mt19937_64 rng(23);
  int cut = 0;
  for (int draw = 1; draw < 400; draw += 2) {
    const LpProblem lp = RandomBounded(rng, draw);
    const LpSolution full = SolveLp(lp);
    if (full.status != LpStatus::kOptimal) continue;
    LpOptions options;
    options.objective_cutoff = 0.5 * full.objective_value;
    options.cutoff_check_interval = 1;
    const LpSolution s = SolveLp(lp, options);
    if (s.status == LpStatus::kCutoff) {
      ++cut;
      EXPECT_GE(s.lower_bound, options.objective_cutoff);
      EXPECT_LE(s.lower_bound, full.objective_value + 1e-9)
          << std::setprecision(17) << s.lower_bound << " " << full.objective_value
          << " cutoff " << options.objective_cutoff;
    } else {
      ASSERT_EQ(s.status, LpStatus::kOptimal);
      EXPECT_NEAR(s.objective_value, full.objective_value, 1e-9);
    }
  }
  EXPECT_GT(cut, 0);
}

TEST(SolveLp, WarmStartAfterRhsChange) {
  std::mt19937_64 rng(29);
  for (int draw = 1; draw < 200; draw += 2) {
    LpProblem lp = RandomBounded(rng, draw);
    const LpSolution first = SolveLp(lp);
    if (first.status != LpStatus::kOptimal || first.basis.empty()) continue;
    lp.b_ub(lp.b_ub.size() - 1) = 7.0;
    LpOptions warm;
    warm.initial_basis = first.basis;
    const LpSolution cold = SolveLp(lp), hot = SolveLp(lp, warm);
    ASSERT_EQ(hot.status, cold.status);
    if (cold.status == LpStatus::kOptimal) {
      EXPECT_NEAR(hot.objective_value, cold.objective_value, 1e-8);
    }
  }
}

TEST(SolveLp, IterationCap) {
  std::mt19937_64 rng(31);
  LpProblem lp;
  do {
    lp = RandomBounded(rng, 0);
  } while (lp.num_variables() < 4 || SolveLp(lp).iterations < 2);
  LpOptions options;
  options.max_iterations = 1;
  EXPECT_THROW(SolveLp(lp, options), LpIterationLimitError);
}

TEST(LpProblem, Validate) {
  LpProblem lp = Make(Vector::Ones(2), Matrix::Ones(1, 3), Vector::Ones(1));
  EXPECT_THROW(lp.Validate(), std::invalid_argument);
  lp = Make(Vector::Ones(2), Matrix::Ones(1, 2), Vector::Ones(1));
  lp.b_ub(0) = std::nan("");
  EXPECT_THROW(SolveLp(lp), std::invalid_argument);
}

TEST(EnumerateVerticesOracle, TrivialProblems) {
  const LpSolution a =
      EnumerateVerticesOracle(Make(Vector::Ones(1), -Matrix::Ones(1, 1), -Vector::Ones(1)));
  ASSERT_EQ(a.status, LpStatus::kOptimal);
  EXPECT_NEAR(a.objective_value, 1.0, 1e-12);
  const LpSolution b =
      EnumerateVerticesOracle(Make(-Vector::Ones(2), Matrix::Ones(1, 2), Vector::Ones(1)));
  ASSERT_EQ(b.status, LpStatus::kOptimal);
  EXPECT_NEAR(b.objective_value, -1.0, 1e-12);
}

TEST(EnumerateVerticesOracle, SizeLimit) {
  const LpProblem lp = Make(Vector::Ones(20), Matrix::Ones(5, 20), Vector::Ones(5));
  EXPECT_THROW(EnumerateVerticesOracle(lp), std::invalid_argument);
}

}  // namespace
}  // namespace dantzig
