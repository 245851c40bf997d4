#pragma once

#include <cstddef>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "dantzig/data.h"
#include "dantzig/estimator.h"

namespace dantzig {

// Regressor law for simulated designs. `parameter` is rho for toeplitz and L
// for bounded_uniform; unused for iid_gaussian.
struct DesignLaw {
  enum class Kind { kIidGaussian, kToeplitz, kBoundedUniform };
  Kind kind = Kind::kIidGaussian;
  double parameter = 0.0;

  void Validate() const;
  std::string ToString() const;
  // "iid_gaussian", "toeplitz:RHO", "bounded_uniform:L".
  static DesignLaw Parse(std::string_view text);
};

// Symmetric error laws.
//   gaussian(sd), rademacher(scale): +-scale with equal probability,
//   hetero(scale): sigma_i ~ U[0.5, 1.5] * scale times a standard normal.
struct NoiseLaw {
  enum class Kind { kGaussian, kRademacher, kHeteroSymmetric };
  Kind kind = Kind::kGaussian;
  double scale = 1.0;

  void Validate() const;
  std::string ToString() const;
  // "gaussian:SD", "rademacher:SCALE", "hetero:SCALE".
  static NoiseLaw Parse(std::string_view text);

  double Draw(std::mt19937_64& rng) const;
};

struct SimConfig {
  Eigen::Index n = 100;
  Eigen::Index p = 200;
  Eigen::Index s_true = 3;
  DesignLaw design;
  NoiseLaw noise;
  double beta_magnitude = 1.0;
  std::size_t reps = 100;
  unsigned long long seed = 1;
  // alpha, s, gamma grid, normalization, Q* policy; threads is the worker cap
  // across replications.
  FitOptions fit;

  void Validate() const;
};

// Replication `rep`: beta* has s_true nonzeros of size beta_magnitude with
// alternating signs at the lowest indices, Y = X beta* + U. Deterministic in
// (seed, rep).
Dataset Generate(const SimConfig& config, std::size_t rep);

struct EfronRow {
  double t = 0.0;
  double empirical = 0.0;  // fraction of replications with ratio >= t
  double bound = 0.0;      // 2 exp(-n t^2 / 2)
  double slack = 0.0;      // 3 binomial standard errors at the bound
};

struct EfronTable {
  Eigen::Index n = 0;
  std::size_t reps = 0;
  std::size_t skipped = 0;  // all-zero draws
  std::vector<EfronRow> rows;
};

// Empirical tail of |mean eta| / sqrt(mean eta^2) for i.i.d. symmetric eta.
EfronTable EfronCheck(const NoiseLaw& law, Eigen::Index n, std::size_t reps,
                      const std::vector<double>& t_grid,
                      unsigned long long seed, unsigned threads = 1);

struct ReplicationDiagnostics {
  std::size_t rep = 0;
  bool fit_ok = false;
  std::string error;
  double gamma = 0.0;
  double kappa = 0.0;
  double sigma_hat = 0.0;
  double noise_correlation = 0.0;  // |n^-1 D X'U|_inf
  double g_threshold = 0.0;        // r sqrt(QHat(beta*))
  bool event_g = false;
  double qstar = 0.0;
  double l1_error = 0.0;
  double l1_bound = 0.0;
  double prediction_error = 0.0;
  double prediction_bound = 0.0;
  bool l1_violation = false;
  bool prediction_violation = false;
};

struct CoverageResult {
  std::size_t reps = 0;
  std::size_t violations_g = 0;
  std::size_t violations_l1 = 0;
  std::size_t violations_pred = 0;
  std::size_t violations_any = 0;  // l1 or prediction
  std::size_t fit_failures = 0;
  std::vector<ReplicationDiagnostics> per_rep;
};

// Runs one replication; exceptions from the fit are recorded, not thrown.
ReplicationDiagnostics RunReplication(const SimConfig& config, std::size_t rep);

CoverageResult CoverageExperiment(const SimConfig& config);

}  // namespace dantzig
