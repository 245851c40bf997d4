#include "dantzig/sim.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <stdexcept>

#include "dantzig/bounds.h"
#include "dantzig/errors.h"
#include "dantzig/parallel.h"

namespace dantzig {
namespace {

// Slack on bound comparisons: LP tolerances leak into Delta.
constexpr double kBoundSlack = 1e-8;

double ParseNumber(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto [end, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() ||
      !std::isfinite(value)) {
    throw std::invalid_argument("bad number for " + std::string(what) + ": '" +
                                std::string(text) + "'");
  }
  return value;
}

std::string WithParameter(const char* name, double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%s:%.17g", name, value);
  return buffer;
}

}  // namespace

void DesignLaw::Validate() const {
  if (kind == Kind::kToeplitz && !(parameter > -1.0 && parameter < 1.0)) {
    throw std::invalid_argument("toeplitz rho must lie in (-1, 1)");
  }
  if (kind == Kind::kBoundedUniform && !(parameter > 0.0)) {
    throw std::invalid_argument("bounded_uniform L must be positive");
  }
}

std::string DesignLaw::ToString() const {
  switch (kind) {
    case Kind::kIidGaussian: return "iid_gaussian";
    case Kind::kToeplitz: return WithParameter("toeplitz", parameter);
    case Kind::kBoundedUniform: return WithParameter("bounded_uniform", parameter);
  }
  return "unknown";
}

DesignLaw DesignLaw::Parse(std::string_view text) {
  DesignLaw law;
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const bool has_arg = colon != std::string_view::npos;
  if (head == "iid_gaussian" && !has_arg) {
    law.kind = Kind::kIidGaussian;
  } else if (head == "toeplitz" && has_arg) {
    law.kind = Kind::kToeplitz;
    law.parameter = ParseNumber(text.substr(colon + 1), "toeplitz rho");
  } else if (head == "bounded_uniform" && has_arg) {
    law.kind = Kind::kBoundedUniform;
    law.parameter = ParseNumber(text.substr(colon + 1), "bounded_uniform L");
  } else {
    throw std::invalid_argument(
        "unknown design '" + std::string(text) +
        "' (expected iid_gaussian, toeplitz:RHO or bounded_uniform:L)");
  }
  law.Validate();
  return law;
}

void NoiseLaw::Validate() const {
  if (!(scale >= 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("noise scale must be a nonnegative number");
  }
}

std::string NoiseLaw::ToString() const {
  switch (kind) {
    case Kind::kGaussian: return WithParameter("gaussian", scale);
    case Kind::kRademacher: return WithParameter("rademacher", scale);
    case Kind::kHeteroSymmetric: return WithParameter("hetero", scale);
  }
  return "unknown";
}

NoiseLaw NoiseLaw::Parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("noise law needs a scale, e.g. gaussian:1");
  }
  const std::string_view head = text.substr(0, colon);
  NoiseLaw law;
  if (head == "gaussian") {
    law.kind = Kind::kGaussian;
  } else if (head == "rademacher") {
    law.kind = Kind::kRademacher;
  } else if (head == "hetero") {
    law.kind = Kind::kHeteroSymmetric;
  } else {
    throw std::invalid_argument("unknown noise law '" + std::string(text) +
                                "' (expected gaussian, rademacher or hetero)");
  }
  law.scale = ParseNumber(text.substr(colon + 1), "noise scale");
  law.Validate();
  return law;
}

double NoiseLaw::Draw(std::mt19937_64& rng) const {
  switch (kind) {
    case Kind::kGaussian:
      return scale * std::normal_distribution<double>()(rng);
    case Kind::kRademacher:
      return std::bernoulli_distribution()(rng) ? scale : -scale;
    case Kind::kHeteroSymmetric: {
      const double local =
          scale * std::uniform_real_distribution<double>(0.5, 1.5)(rng);
      return local * std::normal_distribution<double>()(rng);
    }
  }
  return 0.0;
}

void SimConfig::Validate() const {
  if (n < 1 || p < 1) throw std::invalid_argument("n and p must be >= 1");
  if (s_true < 0 || s_true > p) {
    throw std::invalid_argument("s_true must lie in [0, p]");
  }
  if (reps < 1) throw std::invalid_argument("reps must be >= 1");
  if (!std::isfinite(beta_magnitude)) {
    throw std::invalid_argument("beta magnitude must be finite");
  }
  design.Validate();
  noise.Validate();
  fit.Validate();
}

Dataset Generate(const SimConfig& config, std::size_t rep) {
  config.Validate();
  std::mt19937_64 rng(DeriveSeed(config.seed, rep));
  std::normal_distribution<double> normal;

  Matrix x(config.n, config.p);
  const double rho = config.design.parameter;
  const double innovation = std::sqrt(1.0 - rho * rho);
  std::uniform_real_distribution<double> uniform(-config.design.parameter,
                                                 config.design.parameter);
  for (Eigen::Index i = 0; i < config.n; ++i) {
    for (Eigen::Index k = 0; k < config.p; ++k) {
      switch (config.design.kind) {
        case DesignLaw::Kind::kIidGaussian:
          x(i, k) = normal(rng);
          break;
        case DesignLaw::Kind::kToeplitz:
          // AR(1) across columns gives corr(x_j, x_k) = rho^|j-k|.
          x(i, k) = k == 0 ? normal(rng)
                           : rho * x(i, k - 1) + innovation * normal(rng);
          break;
        case DesignLaw::Kind::kBoundedUniform:
          x(i, k) = uniform(rng);
          break;
      }
    }
  }

  Vector beta = Vector::Zero(config.p);
  for (Eigen::Index k = 0; k < config.s_true; ++k) {
    beta(k) = (k % 2 == 0 ? 1.0 : -1.0) * config.beta_magnitude;
  }
  Vector u(config.n);
  for (Eigen::Index i = 0; i < config.n; ++i) u(i) = config.noise.Draw(rng);
  Vector y = x * beta + u;
  return Dataset(std::move(x), std::move(y), std::move(beta));
}

EfronTable EfronCheck(const NoiseLaw& law, Eigen::Index n, std::size_t reps,
                      const std::vector<double>& t_grid,
                      unsigned long long seed, unsigned threads) {
  law.Validate();
  if (n < 1 || reps < 1) throw std::invalid_argument("n and reps must be >= 1");
  for (double t : t_grid) {
    if (!(t >= 0.0)) throw std::invalid_argument("t grid must be >= 0");
  }

  // NaN marks an all-zero draw.
  std::vector<double> ratios(reps);
  ParallelFor(reps, threads, [&](std::size_t rep) {
    std::mt19937_64 rng(DeriveSeed(seed, rep));
    double sum = 0.0, sum_sq = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double eta = law.Draw(rng);
      sum += eta;
      sum_sq += eta * eta;
    }
    ratios[rep] = sum_sq > 0.0 ? std::abs(sum / n) / std::sqrt(sum_sq / n)
                               : std::nan("");
  });

  EfronTable table;
  table.n = n;
  table.reps = reps;
  for (double r : ratios) table.skipped += std::isnan(r) ? 1 : 0;
  const double used = static_cast<double>(reps - table.skipped);
  for (double t : t_grid) {
    EfronRow row;
    row.t = t;
    std::size_t exceed = 0;
    for (double r : ratios) exceed += (!std::isnan(r) && r >= t) ? 1 : 0;
    row.empirical = used > 0 ? static_cast<double>(exceed) / used : 0.0;
    row.bound = 2.0 * std::exp(-static_cast<double>(n) * t * t / 2.0);
    const double capped = std::min(row.bound, 1.0);
    row.slack = used > 0 ? 3.0 * std::sqrt(row.bound * (1.0 - capped) / used)
                         : 0.0;
    table.rows.push_back(row);
  }
  return table;
}

ReplicationDiagnostics RunReplication(const SimConfig& config,
                                      std::size_t rep) {
  ReplicationDiagnostics diag;
  diag.rep = rep;
  const Dataset data = Generate(config, rep);
  const Vector& beta_star = *data.beta_true();
  const Normalization d =
      BuildNormalization(data.x(), config.fit.normalization);
  const double r = TuningR(data.p(), data.n(), config.fit.alpha);

  diag.noise_correlation = ResidualGram(data, d, beta_star).cwiseAbs().maxCoeff();
  diag.g_threshold = r * std::sqrt(QHat(data, d, beta_star));
  diag.event_g = diag.noise_correlation <= diag.g_threshold;

  // Simulation-only: plugin Q* is evaluated at the true coefficients.
  diag.qstar = ResolveQStar(config.fit.qstar, data, d, beta_star);

  FitOptions options = config.fit;
  options.threads = 1;
  try {
    const FitResult fit = Fit(data, options);
    diag.fit_ok = true;
    diag.gamma = fit.gamma;
    diag.kappa = fit.sensitivity.kappa;
    diag.sigma_hat = fit.sigma_hat;

    const Vector delta = ScaledDeviation(d, fit.beta_hat, beta_star);
    const GramMatrix psi = ComputePsi(data.x(), d);
    diag.l1_error = delta.lpNorm<1>();
    diag.prediction_error = delta.dot(psi.psi * delta);
    if (diag.qstar > 0.0) {
      const ErrorBounds b =
          ComputeErrorBounds(fit.gamma, fit.sensitivity.kappa, diag.qstar, r);
      diag.l1_bound = b.l1_bound;
      diag.prediction_bound = b.prediction_bound;
    }
    diag.l1_violation = diag.l1_error > diag.l1_bound + kBoundSlack;
    diag.prediction_violation =
        diag.prediction_error > diag.prediction_bound + kBoundSlack;
  } catch (const std::exception& e) {
    diag.fit_ok = false;
    diag.error = e.what();
  }
  return diag;
}

CoverageResult CoverageExperiment(const SimConfig& config) {
  config.Validate();
  CoverageResult result;
  result.reps = config.reps;
  result.per_rep.resize(config.reps);
  ParallelFor(config.reps, config.fit.threads, [&](std::size_t rep) {
    result.per_rep[rep] = RunReplication(config, rep);
  });
  for (const ReplicationDiagnostics& diag : result.per_rep) {
    if (!diag.event_g) ++result.violations_g;
    if (!diag.fit_ok) {
      ++result.fit_failures;
      continue;
    }
    if (diag.l1_violation) ++result.violations_l1;
    if (diag.prediction_violation) ++result.violations_pred;
    if (diag.l1_violation || diag.prediction_violation) ++result.violations_any;
  }
  return result;
}

}  // namespace dantzig
