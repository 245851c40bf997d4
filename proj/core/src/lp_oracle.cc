#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/LU>
#include <Eigen/QR>

#include "dantzig/lp.h"

namespace dantzig {
namespace {

constexpr double kFeasibleSlack = 1e-9;
constexpr double kImprovingRay = 1e-9;

// Calls visit(subset) for every size-k subset of {0..n-1} in lexicographic
// order.
template <typename Visit>
void ForEachSubset(Eigen::Index n, Eigen::Index k, Visit&& visit) {
  if (k > n) return;
  std::vector<Eigen::Index> subset(k);
  for (Eigen::Index i = 0; i < k; ++i) subset[i] = i;
  while (true) {
    visit(subset);
    Eigen::Index i = k - 1;
    while (i >= 0 && subset[i] == n - k + i) --i;
    if (i < 0) return;
    ++subset[i];
    for (Eigen::Index j = i + 1; j < k; ++j) subset[j] = subset[j - 1] + 1;
  }
}

// Solves system * x = rhs restricted to the columns in subset; returns false
// when that basis is singular.
bool SolveBasis(const Matrix& system, const Vector& rhs,
                const std::vector<Eigen::Index>& subset, Vector& x) {
  const Eigen::Index k = static_cast<Eigen::Index>(subset.size());
  Matrix basis(system.rows(), k);
  for (Eigen::Index i = 0; i < k; ++i) basis.col(i) = system.col(subset[i]);
  Eigen::FullPivLU<Matrix> lu(basis);
  lu.setThreshold(1e-11);
  if (!lu.isInvertible()) return false;
  x = lu.solve(rhs);
  return true;
}

}  // namespace

LpSolution EnumerateVerticesOracle(const LpProblem& problem) {
  problem.Validate();
  const Eigen::Index m = problem.num_variables();
  const Eigen::Index kub = problem.b_ub.size();
  const Eigen::Index keq = problem.b_eq.size();
  if (m + kub + keq > 24) {
    throw std::invalid_argument(
        "vertex enumeration limited to variables + constraints <= 24");
  }

  // Slack form [A_ub I; A_eq 0] z = b, z >= 0.
  const Eigen::Index cols = m + kub;
  const Eigen::Index rows = kub + keq;
  Matrix system = Matrix::Zero(rows, cols);
  Vector rhs(rows);
  if (kub > 0) {
    system.topLeftCorner(kub, m) = problem.a_ub;
    system.block(0, m, kub, kub).setIdentity();
    rhs.head(kub) = problem.b_ub;
  }
  if (keq > 0) {
    system.bottomLeftCorner(keq, m) = problem.a_eq;
    rhs.tail(keq) = problem.b_eq;
  }
  Vector cost = Vector::Zero(cols);
  cost.head(m) = problem.objective;

  LpSolution result;
  result.status = LpStatus::kInfeasible;

  // Reduce to linearly independent rows; inconsistent systems are infeasible.
  Eigen::Index rank = 0;
  Matrix reduced(0, cols);
  Vector reduced_rhs(0);
  if (rows > 0) {
    Eigen::ColPivHouseholderQR<Matrix> qr(system.transpose());
    qr.setThreshold(1e-11);
    rank = qr.rank();
    Matrix augmented(rows, cols + 1);
    augmented << system, rhs;
    Eigen::ColPivHouseholderQR<Matrix> aug_qr(augmented.transpose());
    aug_qr.setThreshold(1e-11);
    if (aug_qr.rank() > rank) return result;
    reduced.resize(rank, cols);
    reduced_rhs.resize(rank);
    for (Eigen::Index i = 0; i < rank; ++i) {
      const Eigen::Index row = qr.colsPermutation().indices()(i);
      reduced.row(i) = system.row(row);
      reduced_rhs(i) = rhs(row);
    }
  }

  const double scale = 1.0 + (rows > 0 ? rhs.cwiseAbs().maxCoeff() : 0.0);
  double best = std::numeric_limits<double>::infinity();
  Vector best_point;
  Vector z;
  ForEachSubset(cols, rank, [&](const std::vector<Eigen::Index>& subset) {
    Vector point = Vector::Zero(cols);
    if (rank > 0) {
      if (!SolveBasis(reduced, reduced_rhs, subset, z)) return;
      if (z.minCoeff() < -kFeasibleSlack * scale) return;
      for (Eigen::Index i = 0; i < rank; ++i) point(subset[i]) = z(i);
    }
    const double value = cost.dot(point);
    if (value < best - 1e-12 * (1.0 + std::abs(value))) {
      best = value;
      best_point = point;
    }
  });
  if (best_point.size() == 0) return result;

  // Extreme rays of {d >= 0, reduced d = 0} normalized by sum(d) = 1.
  Matrix ray_system(rank + 1, cols);
  ray_system.topRows(rank) = reduced;
  ray_system.row(rank).setOnes();
  Vector ray_rhs = Vector::Zero(rank + 1);
  ray_rhs(rank) = 1.0;
  bool unbounded = false;
  Vector ray_point;
  ForEachSubset(cols, rank + 1, [&](const std::vector<Eigen::Index>& subset) {
    if (unbounded) return;
    if (!SolveBasis(ray_system, ray_rhs, subset, z)) return;
    if (z.minCoeff() < -kFeasibleSlack) return;
    Vector direction = Vector::Zero(cols);
    for (Eigen::Index i = 0; i <= rank; ++i) direction(subset[i]) = z(i);
    if (cost.dot(direction) < -kImprovingRay) {
      unbounded = true;
      ray_point = direction.head(m);
    }
  });

  result.x = best_point.head(m);
  if (unbounded) {
    result.status = LpStatus::kUnbounded;
    result.ray = ray_point;
    result.objective_value = -std::numeric_limits<double>::infinity();
    return result;
  }
  result.status = LpStatus::kOptimal;
  result.objective_value = problem.objective.dot(result.x);
  return result;
}

}  // namespace dantzig
