#include "dantzig/sensitivity.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "dantzig/errors.h"
#include "dantzig/parallel.h"

namespace dantzig {
namespace {

void RequireSquare(const GramMatrix& psi) {
  if (psi.psi.rows() != psi.psi.cols() || psi.psi.rows() == 0) {
    throw std::invalid_argument("Psi must be a nonempty square matrix");
  }
}

void RequireTuning(int s, double gamma) {
  if (s < 1) throw std::invalid_argument("sparsity certificate s must be >= 1");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("gamma must be a positive finite number");
  }
}

double LqNorm(const Vector& v, double q) {
  if (std::isinf(q)) return v.cwiseAbs().maxCoeff();
  if (q == 1.0) return v.cwiseAbs().sum();
  return std::pow(v.cwiseAbs().array().pow(q).sum(), 1.0 / q);
}

}  // namespace

void ConeSpec::Validate(Eigen::Index p) const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("cone gamma must be positive and finite");
  }
  if (support.empty()) throw std::invalid_argument("cone support J is empty");
  std::vector<bool> seen(p, false);
  for (Eigen::Index j : support) {
    if (j < 0 || j >= p) throw std::invalid_argument("cone index out of range");
    if (seen[j]) throw std::invalid_argument("duplicate cone index");
    seen[j] = true;
  }
}

CoordinateSensitivity SolveCoordinateSensitivity(const GramMatrix& psi,
                                                 Eigen::Index k, int s,
                                                 double gamma,
                                                 const LpOptions& lp) {
  RequireSquare(psi);
  RequireTuning(s, gamma);
  const Eigen::Index p = psi.dim();
  if (k < 0 || k >= p) throw std::invalid_argument("coordinate out of range");

  // Delta_k is fixed to 1 and eliminated; the remaining coordinates are split
  // as u - v with u, v >= 0. Variables: [u (p-1), v (p-1), t].
  const Eigen::Index q = p - 1;
  Matrix others(p, q);
  for (Eigen::Index j = 0, c = 0; j < p; ++j) {
    if (j != k) others.col(c++) = psi.psi.col(j);
  }
  LpProblem problem;
  problem.objective = Vector::Zero(2 * q + 1);
  problem.objective(2 * q) = 1.0;
  problem.a_ub = Matrix::Zero(2 * p + 1, 2 * q + 1);
  problem.b_ub.resize(2 * p + 1);
  problem.a_ub.block(0, 0, p, q) = others;
  problem.a_ub.block(0, q, p, q) = -others;
  problem.a_ub.block(p, 0, p, q) = -others;
  problem.a_ub.block(p, q, p, q) = others;
  problem.a_ub.block(0, 2 * q, 2 * p, 1).setConstant(-1.0);
  problem.b_ub.head(p) = -psi.psi.col(k);
  problem.b_ub.segment(p, p) = psi.psi.col(k);
  problem.a_ub.block(2 * p, 0, 1, 2 * q).setOnes();
  problem.b_ub(2 * p) = (2.0 + gamma) * s - 1.0;

  LpOptions options = lp;
  if (std::isfinite(options.objective_cutoff)) {
    options.implied_upper = Vector::Constant(2 * q + 1, problem.b_ub(2 * p));
    options.implied_upper(2 * q) = std::numeric_limits<double>::infinity();
  }
  const LpSolution solution = SolveLp(problem, options);
  if (solution.status == LpStatus::kCutoff) {
    CoordinateSensitivity out;
    out.value = solution.lower_bound;
    out.iterations = solution.iterations;
    out.exact = false;
    out.basis = solution.basis;
    return out;
  }
  if (solution.status != LpStatus::kOptimal) {
    throw NumericalError("coordinate sensitivity LP for k=" +
                         std::to_string(k) + " ended " +
                         std::string(ToString(solution.status)));
  }

  CoordinateSensitivity out;
  out.delta = Vector::Zero(p);
  out.delta(k) = 1.0;
  for (Eigen::Index j = 0, c = 0; j < p; ++j) {
    if (j == k) continue;
    out.delta(j) = solution.x(c) - solution.x(q + c);
    ++c;
  }
  out.value = solution.x(2 * q);
  out.iterations = solution.iterations;
  out.basis = solution.basis;
  return out;
}

SensitivityReport KappaOneZero(const GramMatrix& psi, int s, double gamma,
                               const SensitivityOptions& options) {
  RequireSquare(psi);
  RequireTuning(s, gamma);
  const Eigen::Index p = psi.dim();

  std::vector<CoordinateSensitivity> results(p);
  std::vector<Eigen::Index> order = options.order;
  if (order.empty()) {
    order.resize(p);
    for (Eigen::Index k = 0; k < p; ++k) order[k] = k;
  } else {
    std::vector<bool> seen(p, false);
    if (static_cast<Eigen::Index>(order.size()) != p) {
      throw std::invalid_argument("sensitivity order must be a permutation");
    }
    for (Eigen::Index k : order) {
      if (k < 0 || k >= p || seen[k]) {
        throw std::invalid_argument("sensitivity order must be a permutation");
      }
      seen[k] = true;
    }
  }
  // minimum_only works in rounds of `threads` coordinates; each round's
  // cutoff is the minimum over completed rounds, so results do not depend on
  // the thread schedule.
  const std::size_t total = static_cast<std::size_t>(p);
  const std::size_t round =
      options.minimum_only ? std::max<std::size_t>(1, ResolveThreadCount(options.threads))
                           : total;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t start = 0; start < total; start += round) {
    const std::size_t count = std::min(round, total - start);
    const bool skip = best <= kSensitivityDegeneracyTolerance * s;
    LpOptions lp = options.lp;
    if (options.minimum_only) lp.objective_cutoff = best;
    ParallelFor(count, options.threads, [&](std::size_t i) {
      const Eigen::Index k = order[start + i];
      if (skip) {
        results[k].value = 0.0;
        results[k].exact = false;
        return;
      }
      LpOptions warm = lp;
      if (static_cast<Eigen::Index>(options.warm_bases.size()) == p) {
        warm.initial_basis = options.warm_bases[k];
      }
      results[k] = SolveCoordinateSensitivity(psi, k, s, gamma, warm);
    });
    for (std::size_t i = 0; i < count; ++i) {
      const CoordinateSensitivity& result = results[order[start + i]];
      if (result.exact) best = std::min(best, result.value);
    }
  }

  SensitivityReport report;
  report.s = s;
  report.gamma = gamma;
  report.per_k.resize(p);
  report.exact.assign(p, true);
  report.bases.resize(p);
  double minimum = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < p; ++k) {
    // The LP optimum is a nonnegative sup-norm; clip solver round-off.
    report.per_k(k) = std::max(results[k].value, 0.0);
    report.exact[k] = results[k].exact;
    report.bases[k] = std::move(results[k].basis);
    report.lp_iterations += results[k].iterations;
    if (results[k].exact) minimum = std::min(minimum, report.per_k(k));
  }
  report.kappa = minimum / s;
  report.degenerate = report.kappa <= kSensitivityDegeneracyTolerance;
  return report;
}

double BlockSensitivityExact(const GramMatrix& psi, const ConeSpec& cone,
                             const std::vector<Eigen::Index>& block,
                             const LpOptions& lp) {
  RequireSquare(psi);
  const Eigen::Index p = psi.dim();
  cone.Validate(p);
  if (block.empty()) return std::numeric_limits<double>::infinity();

  std::vector<int> in_support(p, 0), in_block(p, 0);
  for (Eigen::Index j : cone.support) in_support[j] = 1;
  for (Eigen::Index j : block) {
    if (j < 0 || j >= p) throw std::invalid_argument("block index out of range");
    in_block[j] = 1;
  }
  // Coordinates whose sign is enumerated: J u J0.
  std::vector<Eigen::Index> signed_coords;
  for (Eigen::Index j = 0; j < p; ++j) {
    if (in_support[j] || in_block[j]) signed_coords.push_back(j);
  }
  const Eigen::Index num_signed = static_cast<Eigen::Index>(signed_coords.size());
  if (num_signed > 12) {
    throw std::invalid_argument(
        "exact block sensitivity limited to |J u J0| <= 12");
  }

  // Variables: w_j >= 0 for signed coordinates (Delta_j = sign_j w_j), then
  // u, v for the free coordinates, then t.
  const Eigen::Index num_free = p - num_signed;
  const Eigen::Index vars = num_signed + 2 * num_free + 1;
  std::vector<Eigen::Index> free_coords;
  for (Eigen::Index j = 0; j < p; ++j) {
    if (!in_support[j] && !in_block[j]) free_coords.push_back(j);
  }

  double best = std::numeric_limits<double>::infinity();
  // Delta -> -Delta leaves everything invariant: fix the first sign.
  const unsigned long patterns = 1ul << (num_signed - 1);
  for (unsigned long pattern = 0; pattern < patterns; ++pattern) {
    Matrix delta_map = Matrix::Zero(p, vars);  // Delta = delta_map * z
    for (Eigen::Index i = 0; i < num_signed; ++i) {
      const double sign = (i > 0 && (pattern >> (i - 1)) & 1ul) ? -1.0 : 1.0;
      delta_map(signed_coords[i], i) = sign;
    }
    for (Eigen::Index i = 0; i < num_free; ++i) {
      delta_map(free_coords[i], num_signed + i) = 1.0;
      delta_map(free_coords[i], num_signed + num_free + i) = -1.0;
    }
    const Matrix psi_delta = psi.psi * delta_map;

    LpProblem problem;
    problem.objective = Vector::Zero(vars);
    problem.objective(vars - 1) = 1.0;
    problem.a_ub = Matrix::Zero(2 * p + 1, vars);
    problem.b_ub = Vector::Zero(2 * p + 1);
    problem.a_ub.topRows(p) = psi_delta;
    problem.a_ub.middleRows(p, p) = -psi_delta;
    problem.a_ub.block(0, vars - 1, 2 * p, 1).setConstant(-1.0);
    // Cone: mass off J minus (1 + gamma) mass on J <= 0.
    for (Eigen::Index i = 0; i < num_signed; ++i) {
      problem.a_ub(2 * p, i) =
          in_support[signed_coords[i]] ? -(1.0 + cone.gamma) : 1.0;
    }
    problem.a_ub.block(2 * p, num_signed, 1, 2 * num_free).setOnes();
    // Normalization |Delta_{J0}|_1 = 1.
    problem.a_eq = Matrix::Zero(1, vars);
    problem.b_eq = Vector::Ones(1);
    for (Eigen::Index i = 0; i < num_signed; ++i) {
      if (in_block[signed_coords[i]]) problem.a_eq(0, i) = 1.0;
    }

    const LpSolution solution = SolveLp(problem, lp);
    if (solution.status == LpStatus::kOptimal) {
      best = std::min(best, std::max(solution.objective_value, 0.0));
    } else if (solution.status == LpStatus::kUnbounded) {
      throw NumericalError("block sensitivity LP reported unbounded");
    }
  }
  return best;
}

std::vector<Vector> SampleCone(const ConeSpec& cone, Eigen::Index p,
                               std::size_t count, unsigned long long seed) {
  cone.Validate(p);
  std::vector<bool> in_support(p, false);
  for (Eigen::Index j : cone.support) in_support[j] = true;
  std::vector<Eigen::Index> off_support;
  for (Eigen::Index j = 0; j < p; ++j) {
    if (!in_support[j]) off_support.push_back(j);
  }

  std::vector<Vector> samples;
  samples.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::mt19937_64 rng(DeriveSeed(seed, i));
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform;
    std::exponential_distribution<double> exponential;
    std::bernoulli_distribution coin;

    Vector delta = Vector::Zero(p);
    double on_mass = 0.0;
    for (Eigen::Index j : cone.support) {
      delta(j) = normal(rng);
      on_mass += std::abs(delta(j));
    }
    if (!off_support.empty()) {
      // Signs uniform, magnitudes a flat Dirichlet split of a uniform
      // fraction of the allowed off-support mass.
      const double budget = uniform(rng) * (1.0 + cone.gamma) * on_mass;
      Vector weights(off_support.size());
      for (Eigen::Index t = 0; t < weights.size(); ++t) {
        weights(t) = exponential(rng);
      }
      const double total = weights.sum();
      for (Eigen::Index t = 0; t < weights.size(); ++t) {
        const double sign = coin(rng) ? 1.0 : -1.0;
        delta(off_support[t]) =
            total > 0.0 ? sign * budget * weights(t) / total : 0.0;
      }
    }
    samples.push_back(std::move(delta));
  }
  return samples;
}

double ReUpperBound(const GramMatrix& psi, const ConeSpec& cone,
                    std::size_t samples, unsigned long long seed) {
  RequireSquare(psi);
  if (samples == 0) throw std::invalid_argument("samples must be >= 1");
  double best = std::numeric_limits<double>::infinity();
  for (const Vector& delta : SampleCone(cone, psi.dim(), samples, seed)) {
    double on_sq = 0.0;
    for (Eigen::Index j : cone.support) on_sq += delta(j) * delta(j);
    if (on_sq == 0.0) continue;
    best = std::min(best, std::abs(delta.dot(psi.psi * delta)) / on_sq);
  }
  return best;
}

double SampledSensitivityUpperBound(const GramMatrix& psi, const ConeSpec& cone,
                                    double q, std::size_t samples,
                                    unsigned long long seed) {
  RequireSquare(psi);
  if (samples == 0) throw std::invalid_argument("samples must be >= 1");
  if (!(q >= 1.0)) throw std::invalid_argument("q must be in [1, inf]");
  double best = std::numeric_limits<double>::infinity();
  for (const Vector& delta : SampleCone(cone, psi.dim(), samples, seed)) {
    const double norm = LqNorm(delta, q);
    if (norm == 0.0) continue;
    best = std::min(best, (psi.psi * delta).cwiseAbs().maxCoeff() / norm);
  }
  return best;
}

}  // namespace dantzig
