#include "dantzig/estimator.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "dantzig/errors.h"

namespace dantzig {

std::string_view ToString(GammaCriterion criterion) {
  return criterion == GammaCriterion::kL1 ? "l1" : "prediction";
}

GammaCriterion ParseGammaCriterion(std::string_view text) {
  if (text == "l1") return GammaCriterion::kL1;
  if (text == "prediction") return GammaCriterion::kPrediction;
  throw std::invalid_argument("unknown gamma criterion '" + std::string(text) +
                              "' (expected l1 or prediction)");
}

void FitOptions::Validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1)");
  }
  if (sparsity < 1) {
    throw std::invalid_argument("sparsity certificate s must be >= 1");
  }
  if (gamma_grid.empty()) throw std::invalid_argument("gamma grid is empty");
  for (double g : gamma_grid) {
    if (!(g > 0.0) || !std::isfinite(g)) {
      throw std::invalid_argument("gamma grid entries must be positive");
    }
  }
  qstar.Validate();
}

double TuningR(Eigen::Index p, Eigen::Index n, double alpha) {
  if (p < 1 || n < 1 || !(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("tuning r needs p, n >= 1 and alpha in (0,1)");
  }
  return std::sqrt(2.0 * std::log(4.0 * static_cast<double>(p) / alpha) /
                   static_cast<double>(n));
}

double TuningC(double r, double gamma, double kappa) {
  if (!(kappa > kSensitivityDegeneracyTolerance)) {
    throw DegenerateSensitivityError();
  }
  return (2.0 * gamma + 1.0) * r / kappa;
}

LpProblem BuildDantzigLp(const Dataset& data, const Normalization& d, double r,
                         double c) {
  const Eigen::Index p = data.p();
  const double inv_n = 1.0 / static_cast<double>(data.n());
  // gram = n^-1 D X'X, moment = n^-1 D X'Y
  const Matrix gram =
      d.diag.asDiagonal() * (data.x().transpose() * data.x()) * inv_n;
  const Vector moment =
      d.diag.asDiagonal() * (data.x().transpose() * data.y()) * inv_n;

  LpProblem lp;
  lp.objective.resize(2 * p + 1);
  lp.objective.head(p) = d.diag.cwiseInverse();
  lp.objective.segment(p, p) = d.diag.cwiseInverse();
  lp.objective(2 * p) = c;

  lp.a_ub.resize(2 * p, 2 * p + 1);
  lp.b_ub.resize(2 * p);
  // moment - gram beta <= sigma r
  lp.a_ub.block(0, 0, p, p) = -gram;
  lp.a_ub.block(0, p, p, p) = gram;
  lp.b_ub.head(p) = -moment;
  // gram beta - moment <= sigma r
  lp.a_ub.block(p, 0, p, p) = gram;
  lp.a_ub.block(p, p, p, p) = -gram;
  lp.b_ub.tail(p) = moment;
  lp.a_ub.col(2 * p).setConstant(-r);
  return lp;
}

DantzigSolution SolveDantzig(const Dataset& data, const Normalization& d,
                             double r, double c, const LpOptions& lp) {
  if (!(r > 0.0) || !(c > 0.0)) {
    throw std::invalid_argument("tuning constants r and c must be positive");
  }
  const LpSolution solution = SolveLp(BuildDantzigLp(data, d, r, c), lp);
  if (solution.status != LpStatus::kOptimal) {
    throw NumericalError("self-tuned Dantzig LP ended " +
                         std::string(ToString(solution.status)));
  }
  const Eigen::Index p = data.p();
  DantzigSolution out;
  out.beta = solution.x.head(p) - solution.x.segment(p, p);
  out.sigma = solution.x(2 * p);
  out.objective = solution.objective_value;
  out.iterations = solution.iterations;
  return out;
}

namespace {

double CriterionValue(GammaCriterion criterion, double gamma, double kappa,
                      double qstar, double r) {
  const double shape = (gamma + 2.0) * (2.0 * gamma + 1.0) / kappa;
  if (criterion == GammaCriterion::kL1) {
    return shape * std::sqrt(qstar) * r / gamma;
  }
  return shape * (2.0 * gamma + 1.0) * qstar * r * r / (gamma * gamma);
}

std::optional<double> KnownQStar(const FitOptions& options,
                                 const Dataset& data, const Normalization& d) {
  if (options.qstar.needs_reference()) return std::nullopt;
  return ResolveQStar(options.qstar, data, d, std::nullopt);
}

void FillBounds(GammaCandidate& candidate, double qstar, double r) {
  if (candidate.sensitivity.degenerate || !(qstar > 0.0)) {
    candidate.bounds.reset();
    return;
  }
  candidate.bounds = ComputeErrorBounds(candidate.gamma,
                                        candidate.sensitivity.kappa, qstar, r);
}

FitResult FitWithSensitivity(const Dataset& data, const FitOptions& options,
                             const Normalization& d,
                             const SensitivityReport& sensitivity) {
  FitResult result;
  result.normalization = d;
  result.gamma = sensitivity.gamma;
  result.sensitivity = sensitivity;
  result.r = TuningR(data.p(), data.n(), options.alpha);
  result.c = TuningC(result.r, sensitivity.gamma, sensitivity.kappa);

  const DantzigSolution solution =
      SolveDantzig(data, d, result.r, result.c, options.lp);
  result.beta_hat = solution.beta;
  result.sigma_hat = solution.sigma;
  result.objective = solution.objective;
  result.lp_stats.fit_iterations = solution.iterations;
  result.lp_stats.sensitivity_iterations = sensitivity.lp_iterations;

  result.qstar_is_plugin = options.qstar.needs_reference();
  result.qstar =
      ResolveQStar(options.qstar, data, d, std::optional<Vector>(solution.beta));
  if (result.qstar > 0.0) {
    result.bounds = ComputeErrorBounds(result.gamma, sensitivity.kappa,
                                       result.qstar, result.r);
  }
  return result;
}

}  // namespace

GammaSelection SelectGamma(const Dataset& data, const FitOptions& options,
                           std::optional<double> qstar) {
  options.Validate();
  const Normalization d = BuildNormalization(data.x(), options.normalization);
  const GramMatrix psi = ComputePsi(data.x(), d);
  const double r = TuningR(data.p(), data.n(), options.alpha);
  if (!qstar) qstar = KnownQStar(options, data, d);

  SensitivityOptions sensitivity_options;
  sensitivity_options.threads = options.threads;
  sensitivity_options.lp = options.lp;
  sensitivity_options.minimum_only = !options.full_sensitivity_profile;

  // kappa is nonincreasing in gamma, so once some gamma is degenerate every
  // larger one is too. Visit the grid in increasing order.
  std::vector<std::size_t> visit(options.gamma_grid.size());
  for (std::size_t i = 0; i < visit.size(); ++i) visit[i] = i;
  std::stable_sort(visit.begin(), visit.end(), [&](std::size_t a, std::size_t b) {
    return options.gamma_grid[a] < options.gamma_grid[b];
  });
  std::vector<SensitivityReport> reports(visit.size());
  double degenerate_from = std::numeric_limits<double>::infinity();
  for (std::size_t i : visit) {
    const double gamma = options.gamma_grid[i];
    if (!options.full_sensitivity_profile && gamma >= degenerate_from) {
      SensitivityReport& report = reports[i];
      report.s = options.sparsity;
      report.gamma = gamma;
      report.per_k = Vector::Zero(data.p());
      report.exact.assign(data.p(), false);
      report.degenerate = true;
      continue;
    }
    reports[i] = KappaOneZero(psi, options.sparsity, gamma, sensitivity_options);
    if (reports[i].degenerate) degenerate_from = std::min(degenerate_from, gamma);
    // Only the budget rhs changes with gamma: warm-start the next one.
    sensitivity_options.warm_bases = reports[i].bases;
  }

  GammaSelection selection;
  double best = std::numeric_limits<double>::infinity();
  bool found = false;
  for (std::size_t i = 0; i < options.gamma_grid.size(); ++i) {
    const double gamma = options.gamma_grid[i];
    GammaCandidate candidate;
    candidate.gamma = gamma;
    candidate.sensitivity = std::move(reports[i]);
    if (candidate.sensitivity.degenerate) {
      candidate.criterion_value = std::numeric_limits<double>::infinity();
    } else {
      candidate.criterion_value =
          CriterionValue(options.criterion, gamma, candidate.sensitivity.kappa,
                         qstar.value_or(1.0), r);
      if (qstar) FillBounds(candidate, *qstar, r);
      const bool better =
          !found || candidate.criterion_value < best ||
          (candidate.criterion_value == best && gamma < selection.gamma);
      if (better) {
        best = candidate.criterion_value;
        selection.gamma = gamma;
        selection.index = selection.table.size();
        found = true;
      }
    }
    selection.table.push_back(std::move(candidate));
  }
  if (!found) {
    throw DegenerateSensitivityError(
        "sensitivity degenerate at every gamma in the grid; c undefined");
  }
  return selection;
}

FitResult FitFixedGamma(const Dataset& data, const FitOptions& options,
                        double gamma) {
  options.Validate();
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  const Normalization d = BuildNormalization(data.x(), options.normalization);
  const GramMatrix psi = ComputePsi(data.x(), d);
  SensitivityOptions sensitivity_options;
  sensitivity_options.threads = options.threads;
  sensitivity_options.lp = options.lp;
  sensitivity_options.minimum_only = !options.full_sensitivity_profile;
  const SensitivityReport sensitivity =
      KappaOneZero(psi, options.sparsity, gamma, sensitivity_options);
  return FitWithSensitivity(data, options, d, sensitivity);
}

FitResult Fit(const Dataset& data, const FitOptions& options) {
  GammaSelection selection = SelectGamma(data, options);
  const Normalization d = BuildNormalization(data.x(), options.normalization);
  FitResult result = FitWithSensitivity(
      data, options, d, selection.table[selection.index].sensitivity);
  for (GammaCandidate& candidate : selection.table) {
    FillBounds(candidate, result.qstar, result.r);
    result.lp_stats.sensitivity_iterations +=
        &candidate == &selection.table[selection.index]
            ? 0
            : candidate.sensitivity.lp_iterations;
  }
  result.per_gamma = std::move(selection.table);
  return result;
}

}  // namespace dantzig
