#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "dantzig/bounds.h"
#include "dantzig/data.h"
#include "dantzig/lp.h"
#include "dantzig/sensitivity.h"

namespace dantzig {

// Which data-driven bound is minimized over the gamma grid.
enum class GammaCriterion { kL1, kPrediction };

std::string_view ToString(GammaCriterion criterion);
GammaCriterion ParseGammaCriterion(std::string_view text);

struct FitOptions {
  double alpha = 0.05;
  int sparsity = 0;  // certificate s >= |support of beta*|; required
  std::vector<double> gamma_grid = {0.25, 0.5, 1.0, 2.0, 4.0};
  NormalizationMode normalization = NormalizationMode::kRms;
  QStarPolicy qstar = QStarPolicy::Plugin();
  GammaCriterion criterion = GammaCriterion::kL1;
  unsigned threads = 1;
  LpOptions lp;
  // Solve every coordinate LP to optimality instead of pruning those that
  // cannot attain kappa, and compute kappa at gammas above a degenerate one.
  bool full_sensitivity_profile = false;

  // Throws std::invalid_argument.
  void Validate() const;
};

// r = sqrt(2 log(4p/alpha) / n).
double TuningR(Eigen::Index p, Eigen::Index n, double alpha);

// c = (2 gamma + 1) r / kappa. Throws DegenerateSensitivityError when kappa is
// at or below the degeneracy tolerance.
double TuningC(double r, double gamma, double kappa);

// The self-tuned Dantzig program
//   min |D^-1 beta|_1 + c sigma
//   s.t. |n^-1 D X'(Y - X beta)|_inf <= sigma r,  sigma >= 0
// in LP form with variables [beta+ (p), beta- (p), sigma].
LpProblem BuildDantzigLp(const Dataset& data, const Normalization& d, double r,
                         double c);

struct DantzigSolution {
  Vector beta;
  double sigma = 0.0;
  double objective = 0.0;
  long iterations = 0;
};

// Solves BuildDantzigLp. The program is always feasible and bounded below, so
// any other LP outcome throws NumericalError.
DantzigSolution SolveDantzig(const Dataset& data, const Normalization& d,
                             double r, double c, const LpOptions& lp = {});

struct GammaCandidate {
  double gamma = 0.0;
  SensitivityReport sensitivity;
  // Minimized quantity. Uses Q* = 1 when Q* is not yet known (plugin); the
  // argmin does not depend on Q*.
  double criterion_value = 0.0;
  std::optional<ErrorBounds> bounds;  // absent when degenerate or Q* unknown/0
};

struct GammaSelection {
  double gamma = 0.0;
  std::size_t index = 0;
  std::vector<GammaCandidate> table;
};

// Evaluates kappa and the bound criterion at each grid point and returns the
// minimizer (lowest gamma on ties). Throws DegenerateSensitivityError if every
// grid point is degenerate. `qstar` is used for the table's bounds when given;
// otherwise it is resolved from a non-plugin policy.
GammaSelection SelectGamma(const Dataset& data, const FitOptions& options,
                           std::optional<double> qstar = std::nullopt);

struct LpStats {
  long sensitivity_iterations = 0;
  long fit_iterations = 0;
};

struct FitResult {
  Vector beta_hat;
  double sigma_hat = 0.0;
  double objective = 0.0;  // |D^-1 beta_hat|_1 + c sigma_hat
  double r = 0.0;
  double c = 0.0;
  double gamma = 0.0;
  Normalization normalization;
  SensitivityReport sensitivity;
  double qstar = 0.0;
  bool qstar_is_plugin = false;  // no finite-sample guarantee
  std::optional<ErrorBounds> bounds;  // absent when Q* resolves to 0
  std::vector<GammaCandidate> per_gamma;
  LpStats lp_stats;
};

FitResult FitFixedGamma(const Dataset& data, const FitOptions& options,
                        double gamma);

// Gamma selection followed by the fit at the selected gamma.
FitResult Fit(const Dataset& data, const FitOptions& options);

}  // namespace dantzig
