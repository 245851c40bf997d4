#pragma once

#include <cstddef>
#include <vector>

#include "dantzig/data.h"
#include "dantzig/lp.h"

namespace dantzig {

// Below this the sensitivity is treated as zero: the tuning constant c would
// be numerically meaningless.
inline constexpr double kSensitivityDegeneracyTolerance = 1e-12;

// Cone of dominant coordinates {Delta : |Delta_{J^c}|_1 <= (1+gamma)|Delta_J|_1}.
struct ConeSpec {
  std::vector<Eigen::Index> support;  // J, zero-based, no duplicates
  double gamma = 1.0;

  // Throws std::invalid_argument unless gamma > 0, J is nonempty and every
  // index lies in [0, p).
  void Validate(Eigen::Index p) const;
};

struct SensitivityReport {
  double kappa = 0.0;        // min(per_k) / s
  Vector per_k;              // inner LP optima, before the 1/s factor
  std::vector<bool> exact;   // false: per_k(k) is only a lower bound
  int s = 1;
  double gamma = 1.0;
  bool degenerate = false;   // kappa <= kSensitivityDegeneracyTolerance
  long lp_iterations = 0;    // summed over the p inner LPs
  std::vector<std::vector<Eigen::Index>> bases;  // final LP basis per k
};

struct SensitivityOptions {
  unsigned threads = 1;  // 0: hardware concurrency
  LpOptions lp;
  // Only kappa is needed: inner LPs stop as soon as they provably cannot
  // undercut the running minimum, and all remaining ones are skipped once the
  // minimum is degenerate. kappa is unchanged; pruned per_k entries hold
  // certified lower bounds that depend on the order and thread count.
  bool minimum_only = false;
  // Processing order for minimum_only (a permutation of 0..p-1); coordinates
  // likely to attain the minimum should come first. Empty: natural order.
  std::vector<Eigen::Index> order;
  // Final LP bases from a previous call with the same Psi and s (typically a
  // smaller gamma), indexed by coordinate; used as dual simplex warm starts.
  std::vector<std::vector<Eigen::Index>> warm_bases;
};

// Minimizer of the k-th inner problem
//   min |Psi Delta|_inf  s.t.  Delta_k = 1, |Delta|_1 <= (2 + gamma) s.
// With a finite lp.objective_cutoff the solve may stop early; `exact` is then
// false and `value` is a lower bound >= the cutoff.
struct CoordinateSensitivity {
  double value = 0.0;
  Vector delta;
  long iterations = 0;
  bool exact = true;
  std::vector<Eigen::Index> basis;
};

CoordinateSensitivity SolveCoordinateSensitivity(const GramMatrix& psi,
                                                 Eigen::Index k, int s,
                                                 double gamma,
                                                 const LpOptions& lp = {});

// Lower bound on the l1 block sensitivity over all supports of size <= s:
// (1/s) min_k of the coordinate problems above. Solves p linear programs.
SensitivityReport KappaOneZero(const GramMatrix& psi, int s, double gamma,
                               const SensitivityOptions& options = {});

// inf |Psi Delta|_inf over Delta in the cone with |Delta_{J0}|_1 = 1, computed
// exactly by one LP per sign pattern on J u J0 (|J u J0| <= 12). Returns
// +infinity when J0 is empty.
double BlockSensitivityExact(const GramMatrix& psi, const ConeSpec& cone,
                             const std::vector<Eigen::Index>& block,
                             const LpOptions& lp = {});

// `count` cone members; sample i depends only on (seed, i), so a longer run
// with the same seed extends a shorter one.
std::vector<Vector> SampleCone(const ConeSpec& cone, Eigen::Index p,
                               std::size_t count, unsigned long long seed);

// min over sampled cone vectors of |Delta' Psi Delta| / |Delta_J|_2^2. An
// upper bound on the restricted eigenvalue; diagnostic only.
double ReUpperBound(const GramMatrix& psi, const ConeSpec& cone,
                    std::size_t samples, unsigned long long seed);

// min over sampled cone vectors of |Psi Delta|_inf / |Delta|_q, an upper bound
// on the lq sensitivity for q in [1, inf] (pass infinity for q = inf).
double SampledSensitivityUpperBound(const GramMatrix& psi, const ConeSpec& cone,
                                    double q, std::size_t samples,
                                    unsigned long long seed);

}  // namespace dantzig
