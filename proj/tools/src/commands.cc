#include "dantzig/cli/commands.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "dantzig/bounds.h"
#include "dantzig/cli/io.h"
#include "dantzig/errors.h"
#include "dantzig/estimator.h"
#include "dantzig/sensitivity.h"
#include "dantzig/sim.h"

#ifndef DANTZIG_VERSION
#define DANTZIG_VERSION "unknown"
#endif

namespace dantzig::cli {
namespace {

using Clock = std::chrono::steady_clock;

constexpr const char* kRNote = "r = sqrt(2 log(4p/alpha) / n)";
constexpr const char* kKappaNote =
    "kappa = (1/s) min_k min{|Psi Delta|_inf : Delta_k = 1, |Delta|_1 <= (2+gamma)s}";
constexpr const char* kCNote = "c = (2 gamma + 1) r / kappa";
constexpr const char* kL1Note =
    "|D^-1(beta_hat - beta*)|_1 <= (gamma+2)(2gamma+1) sqrt(Q*) r / (gamma kappa)";
constexpr const char* kPredictionNote =
    "Delta' Psi Delta <= (gamma+2)(2gamma+1)^2 Q* r^2 / (gamma^2 kappa)";
constexpr const char* kSigmaNote =
    "argmin of |D^-1 beta|_1 + c sigma s.t. |n^-1 D X'(Y - X beta)|_inf <= sigma r";

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string JoinReals(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out += (i ? "," : "") + FormatReal(values[i]);
  }
  return out;
}

std::string CommandEcho(const std::vector<std::string>& args) {
  std::string out = "dantzig";
  for (const std::string& arg : args) {
    const bool plain =
        !arg.empty() && arg.find_first_of(" \t\"'\\") == std::string::npos;
    out += ' ';
    if (plain) {
      out += arg;
    } else {
      out += '\'' + arg + '\'';
    }
  }
  return out;
}

// Wraps the domain parse helpers so bad flag values are usage errors.
template <typename T, typename F>
T ParseFlag(const std::string& flag, const std::string& text, F parse) {
  try {
    return parse(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError("--" + flag + ": " + e.what());
  }
}

void Validate(const FitOptions& options) {
  try {
    options.Validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

// Flags shared by the estimation-related commands.
struct TuningFlags {
  double alpha = 0.05;
  int sparsity = 0;
  std::vector<double> gamma_grid;
  std::optional<double> gamma;
  std::string normalization = "rms";
  std::string qstar = "plugin";
  std::string select_by = "l1";
  unsigned threads = 1;

  void AddTo(CLI::App& app, bool with_sparsity_required) {
    app.add_option("--alpha", alpha, "Confidence level alpha in (0,1)")
        ->capture_default_str();
    auto* s = app.add_option("--sparsity", sparsity,
                             "Sparsity certificate s >= |support of beta*|");
    if (with_sparsity_required) s->required();
    auto* grid = app.add_option("--gamma-grid", gamma_grid,
                                "Comma-separated gamma grid")
                     ->delimiter(',');
    app.add_option("--gamma", gamma, "Single gamma (no selection)")
        ->excludes(grid);
    app.add_option("--normalization", normalization,
                   "identity, rms or maxabs")
        ->capture_default_str();
    app.add_option("--qstar", qstar, "bounded:L, plugin or fixed:v")
        ->capture_default_str();
    app.add_option("--select-by", select_by,
                   "Bound minimized over the gamma grid: l1 or prediction")
        ->capture_default_str();
    app.add_option("--threads", threads, "Worker threads (0: all cores)")
        ->capture_default_str();
  }

  FitOptions ToFitOptions() const {
    FitOptions options;
    options.alpha = alpha;
    options.sparsity = sparsity;
    if (gamma) {
      options.gamma_grid = {*gamma};
    } else if (!gamma_grid.empty()) {
      options.gamma_grid = gamma_grid;
    }
    options.normalization = ParseFlag<NormalizationMode>(
        "normalization", normalization,
        [](const std::string& t) { return ParseNormalizationMode(t); });
    options.qstar = ParseFlag<QStarPolicy>(
        "qstar", qstar, [](const std::string& t) { return QStarPolicy::Parse(t); });
    options.criterion = ParseFlag<GammaCriterion>(
        "select-by", select_by,
        [](const std::string& t) { return ParseGammaCriterion(t); });
    options.threads = threads;
    Validate(options);
    return options;
  }
};

void AddOptionsSection(Report& report, const FitOptions& options,
                       bool fixed_gamma, std::string name = "options") {
  Section& section = report.AddSection(std::move(name));
  section.Add("alpha", options.alpha);
  section.Add("sparsity", static_cast<std::int64_t>(options.sparsity));
  section.Add("gamma_grid", JoinReals(options.gamma_grid));
  section.Add("gamma_fixed", fixed_gamma);
  section.Add("normalization", std::string(ToString(options.normalization)));
  section.Add("qstar", options.qstar.ToString());
  section.Add("select_by", std::string(ToString(options.criterion)));
  section.Add("threads", static_cast<std::int64_t>(options.threads));
}

void AddRunSection(Report& report, const std::vector<std::string>& args,
                   const std::string& command) {
  Section& section = report.AddSection("run");
  section.Add("command", command);
  section.Add("echo", CommandEcho(args));
  section.Add("version", Version());
}

std::string QStarNote(const QStarPolicy& policy) {
  switch (policy.kind) {
    case QStarPolicy::Kind::kBounded:
      return "Q* = L^4 for regressors and errors bounded by L";
    case QStarPolicy::Kind::kFixed:
      return "Q* supplied by the user";
    case QStarPolicy::Kind::kPlugin:
      break;
  }
  return "Q* = max_k d_kk^2 n^-1 sum_i x_ik^2 (y_i - x_i' beta_hat)^2 (plug-in)";
}

void WarnZeroColumns(const Dataset& data, NormalizationMode mode,
                     std::vector<std::string>& warnings) {
  if (mode != NormalizationMode::kIdentity) return;
  for (Eigen::Index k : ZeroColumns(data.x())) {
    warnings.push_back("regressor column " + std::to_string(k) +
                       " is identically zero");
  }
}

void AddFitSections(Report& report, const FitResult& fit,
                    const FitOptions& options, const Dataset& data) {
  Section& section = report.AddSection("fit");
  section.Add("n", static_cast<std::int64_t>(data.n()));
  section.Add("p", static_cast<std::int64_t>(data.p()));
  section.Add("gamma", fit.gamma);
  section.Add("r", fit.r, kRNote);
  section.Add("kappa", fit.sensitivity.kappa, kKappaNote);
  section.Add("c", fit.c, kCNote);
  section.Add("sigma_hat", fit.sigma_hat, kSigmaNote);
  section.Add("objective", fit.objective, "|D^-1 beta_hat|_1 + c sigma_hat");
  const Normalization& d = fit.normalization;
  section.Add("residual_correlation",
              ResidualGram(data, d, fit.beta_hat).cwiseAbs().maxCoeff(),
              "|n^-1 D X'(Y - X beta_hat)|_inf <= sigma_hat r");
  section.Add("qstar", fit.qstar, QStarNote(options.qstar));
  section.Add("qstar_is_plugin", fit.qstar_is_plugin);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  section.Add("l1_bound", fit.bounds ? fit.bounds->l1_bound : nan, kL1Note);
  section.Add("prediction_bound",
              fit.bounds ? fit.bounds->prediction_bound : nan, kPredictionNote);
  section.Add("sensitivity_lp_iterations",
              static_cast<std::int64_t>(fit.lp_stats.sensitivity_iterations));
  section.Add("fit_lp_iterations",
              static_cast<std::int64_t>(fit.lp_stats.fit_iterations));

  Section& coefficients = report.AddTable("coefficients", {"k", "beta_hat", "d_kk"});
  for (Eigen::Index k = 0; k < data.p(); ++k) {
    coefficients.table.rows.push_back({static_cast<std::int64_t>(k),
                                       fit.beta_hat(k), d.diag(k)});
  }

  if (!fit.per_gamma.empty()) {
    Section& grid = report.AddTable(
        "gamma_grid", {"gamma", "kappa", "degenerate", "criterion", "l1_bound",
                       "prediction_bound"});
    for (const GammaCandidate& candidate : fit.per_gamma) {
      grid.table.rows.push_back(
          {candidate.gamma, candidate.sensitivity.kappa,
           candidate.sensitivity.degenerate, candidate.criterion_value,
           candidate.bounds ? candidate.bounds->l1_bound : nan,
           candidate.bounds ? candidate.bounds->prediction_bound : nan});
    }
  }
}

Outcome CmdFit(const std::vector<std::string>& args, const std::string& input,
               const std::string& response, const TuningFlags& flags) {
  const auto start = Clock::now();
  const FitOptions options = flags.ToFitOptions();
  Outcome outcome;
  const auto load_start = Clock::now();
  const Dataset data = ReadCsvDatasetFile(input, response);
  const double load_seconds = Seconds(load_start);
  WarnZeroColumns(data, options.normalization, outcome.warnings);

  const auto fit_start = Clock::now();
  const FitResult fit = flags.gamma ? FitFixedGamma(data, options, *flags.gamma)
                                    : Fit(data, options);
  const double fit_seconds = Seconds(fit_start);
  if (fit.qstar_is_plugin) {
    outcome.warnings.push_back(
        "plug-in Q* carries no finite-sample guarantee for the bounds");
  }
  if (!fit.bounds) {
    outcome.warnings.push_back("Q* resolved to 0; error bounds not reported");
  }

  Report report;
  AddRunSection(report, args, "fit");
  Section& in = report.AddSection("input");
  in.Add("path", input);
  in.Add("response", response);
  AddOptionsSection(report, options, flags.gamma.has_value());
  AddFitSections(report, fit, options, data);
  Section& timings = report.AddSection("timings");
  timings.Add("load_seconds", load_seconds);
  timings.Add("fit_seconds", fit_seconds);
  timings.Add("total_seconds", Seconds(start));
  outcome.report = std::move(report);
  return outcome;
}

Outcome CmdSensitivity(const std::vector<std::string>& args,
                       const std::string& input, const std::string& psi_path,
                       const std::string& response, const TuningFlags& flags,
                       bool kappa_only) {
  const auto start = Clock::now();
  if (input.empty() == psi_path.empty()) {
    throw UsageError("sensitivity needs exactly one of --input and --psi");
  }
  FitOptions options = flags.ToFitOptions();
  Outcome outcome;

  GramMatrix psi;
  std::string source;
  if (!psi_path.empty()) {
    psi = ReadPsiFile(psi_path);
    source = psi_path;
  } else {
    const Dataset data = ReadCsvDatasetFile(input, response);
    WarnZeroColumns(data, options.normalization, outcome.warnings);
    psi = ComputePsi(data.x(), BuildNormalization(data.x(), options.normalization));
    source = input;
  }

  SensitivityOptions sensitivity_options;
  sensitivity_options.threads = options.threads;
  sensitivity_options.minimum_only = kappa_only;

  const auto solve_start = Clock::now();
  std::vector<SensitivityReport> reports;
  for (double gamma : options.gamma_grid) {
    // Only the budget changes between gammas, so the previous optimal bases
    // remain dual feasible.
    if (!reports.empty()) sensitivity_options.warm_bases = reports.back().bases;
    reports.push_back(
        KappaOneZero(psi, options.sparsity, gamma, sensitivity_options));
    if (reports.back().degenerate) {
      outcome.warnings.push_back("sensitivity degenerate at gamma = " +
                                 FormatReal(gamma) + "; c undefined");
    }
  }
  const double solve_seconds = Seconds(solve_start);

  Report report;
  AddRunSection(report, args, "sensitivity");
  Section& in = report.AddSection("input");
  in.Add("source", source);
  in.Add("kind", std::string(psi_path.empty() ? "dataset" : "psi"));
  Section& opts = report.AddSection("options");
  opts.Add("sparsity", static_cast<std::int64_t>(options.sparsity));
  opts.Add("gamma_grid", JoinReals(options.gamma_grid));
  opts.Add("normalization", std::string(psi_path.empty()
                                            ? ToString(options.normalization)
                                            : std::string_view("given")));
  opts.Add("kappa_only", kappa_only);
  opts.Add("threads", static_cast<std::int64_t>(options.threads));

  Section& summary = report.AddSection("sensitivity");
  summary.Add("p", static_cast<std::int64_t>(psi.dim()));
  summary.Add("s", static_cast<std::int64_t>(options.sparsity));
  summary.Add("kappa_definition", std::string(kKappaNote));
  summary.Add("degeneracy_tolerance", kSensitivityDegeneracyTolerance,
              "kappa at or below this is treated as zero");

  Section& table = report.AddTable(
      "kappa", {"gamma", "kappa", "degenerate", "lp_iterations"});
  for (const SensitivityReport& r : reports) {
    table.table.rows.push_back({r.gamma, r.kappa, r.degenerate,
                                static_cast<std::int64_t>(r.lp_iterations)});
  }
  Section& per_k = report.AddTable("per_k", {"gamma", "k", "value", "exact"});
  for (const SensitivityReport& r : reports) {
    for (Eigen::Index k = 0; k < r.per_k.size(); ++k) {
      per_k.table.rows.push_back({r.gamma, static_cast<std::int64_t>(k),
                                  r.per_k(k), static_cast<bool>(r.exact[k])});
    }
  }
  Section& timings = report.AddSection("timings");
  timings.Add("solve_seconds", solve_seconds);
  timings.Add("total_seconds", Seconds(start));
  outcome.report = std::move(report);
  return outcome;
}

struct SimulateFlags {
  std::string check;
  Eigen::Index n = 100;
  Eigen::Index p = 200;
  Eigen::Index s_true = 3;
  std::string design = "iid_gaussian";
  std::string noise = "gaussian:1";
  double beta_magnitude = 1.0;
  std::size_t reps = 100;
  unsigned long long seed = 1;
  std::vector<double> t_grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
};

Outcome CmdSimulateEfron(const std::vector<std::string>& args,
                         const SimulateFlags& sim, unsigned threads) {
  const auto start = Clock::now();
  const NoiseLaw noise = ParseFlag<NoiseLaw>(
      "noise", sim.noise, [](const std::string& t) { return NoiseLaw::Parse(t); });
  if (sim.n < 1 || sim.reps < 1) throw UsageError("--n and --reps must be >= 1");
  for (double t : sim.t_grid) {
    if (!(t >= 0.0)) throw UsageError("--t-grid entries must be >= 0");
  }
  const EfronTable efron =
      EfronCheck(noise, sim.n, sim.reps, sim.t_grid, sim.seed, threads);

  Outcome outcome;
  Report report;
  AddRunSection(report, args, "simulate");
  Section& opts = report.AddSection("options");
  opts.Add("check", std::string("efron"));
  opts.Add("n", static_cast<std::int64_t>(sim.n));
  opts.Add("noise", noise.ToString());
  opts.Add("reps", static_cast<std::int64_t>(sim.reps));
  opts.Add("seed", static_cast<std::int64_t>(sim.seed));
  opts.Add("t_grid", JoinReals(sim.t_grid));
  opts.Add("threads", static_cast<std::int64_t>(threads));

  Section& summary = report.AddSection("efron");
  summary.Add("statistic", std::string("|mean(eta)| / sqrt(mean(eta^2))"));
  summary.Add("bound", std::string("2 exp(-n t^2 / 2)"));
  summary.Add("slack", std::string("3 sqrt(bound (1 - bound) / reps)"));
  summary.Add("skipped", static_cast<std::int64_t>(efron.skipped),
              "all-zero draws left out of the tail fraction");
  bool all_within = true;
  Section& table = report.AddTable(
      "tail", {"t", "empirical", "bound", "slack", "within"});
  for (const EfronRow& row : efron.rows) {
    const bool within = row.empirical <= row.bound + row.slack;
    all_within = all_within && within;
    table.table.rows.push_back(
        {row.t, row.empirical, row.bound, row.slack, within});
  }
  summary.Add("all_within", all_within);
  if (!all_within) {
    outcome.warnings.push_back("empirical tail exceeds bound plus slack");
  }
  Section& timings = report.AddSection("timings");
  timings.Add("total_seconds", Seconds(start));
  outcome.report = std::move(report);
  return outcome;
}

Outcome CmdSimulateCoverage(const std::vector<std::string>& args,
                            const SimulateFlags& sim, TuningFlags flags) {
  const auto start = Clock::now();
  SimConfig config;
  config.n = sim.n;
  config.p = sim.p;
  config.s_true = sim.s_true;
  config.design = ParseFlag<DesignLaw>(
      "design", sim.design, [](const std::string& t) { return DesignLaw::Parse(t); });
  config.noise = ParseFlag<NoiseLaw>(
      "noise", sim.noise, [](const std::string& t) { return NoiseLaw::Parse(t); });
  config.beta_magnitude = sim.beta_magnitude;
  config.reps = sim.reps;
  config.seed = sim.seed;
  if (flags.sparsity == 0) flags.sparsity = static_cast<int>(sim.s_true);
  config.fit = flags.ToFitOptions();
  try {
    config.Validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const CoverageResult coverage = CoverageExperiment(config);

  Outcome outcome;
  Report report;
  AddRunSection(report, args, "simulate");
  Section& opts = report.AddSection("options");
  opts.Add("check", std::string("coverage"));
  opts.Add("n", static_cast<std::int64_t>(config.n));
  opts.Add("p", static_cast<std::int64_t>(config.p));
  opts.Add("s_true", static_cast<std::int64_t>(config.s_true));
  opts.Add("design", config.design.ToString());
  opts.Add("noise", config.noise.ToString());
  opts.Add("beta_magnitude", config.beta_magnitude);
  opts.Add("reps", static_cast<std::int64_t>(config.reps));
  opts.Add("seed", static_cast<std::int64_t>(config.seed));
  AddOptionsSection(report, config.fit, flags.gamma.has_value(), "fit_options");

  const double reps = static_cast<double>(coverage.reps);
  const double alpha = config.fit.alpha;
  Section& summary = report.AddSection("coverage");
  summary.Add("reps", static_cast<std::int64_t>(coverage.reps));
  summary.Add("violations_g", static_cast<std::int64_t>(coverage.violations_g),
              "G fails: |n^-1 D X'U|_inf > r sqrt(Q-hat(beta*))");
  summary.Add("violations_l1", static_cast<std::int64_t>(coverage.violations_l1),
              kL1Note);
  summary.Add("violations_prediction",
              static_cast<std::int64_t>(coverage.violations_pred),
              kPredictionNote);
  summary.Add("violations_any", static_cast<std::int64_t>(coverage.violations_any),
              "either bound violated");
  summary.Add("fit_failures", static_cast<std::int64_t>(coverage.fit_failures));
  summary.Add("rate_g", static_cast<double>(coverage.violations_g) / reps);
  summary.Add("rate_any", static_cast<double>(coverage.violations_any) / reps);
  summary.Add("threshold_g",
              alpha / 2 + 3 * std::sqrt((alpha / 2) * (1 - alpha / 2) / reps),
              "alpha/2 + 3 sqrt((alpha/2)(1 - alpha/2) / reps)");
  summary.Add("threshold_bounds",
              alpha + 3 * std::sqrt(alpha * (1 - alpha) / reps),
              "alpha + 3 sqrt(alpha (1 - alpha) / reps)");
  if (coverage.fit_failures > 0) {
    outcome.warnings.push_back(std::to_string(coverage.fit_failures) +
                               " replication fits failed");
  }

  Section& table = report.AddTable(
      "replications",
      {"rep", "fit_ok", "gamma", "kappa", "sigma_hat", "noise_correlation",
       "g_threshold", "event_g", "qstar", "l1_error", "l1_bound",
       "prediction_error", "prediction_bound", "error"});
  for (const ReplicationDiagnostics& d : coverage.per_rep) {
    table.table.rows.push_back(
        {static_cast<std::int64_t>(d.rep), d.fit_ok, d.gamma, d.kappa,
         d.sigma_hat, d.noise_correlation, d.g_threshold, d.event_g, d.qstar,
         d.l1_error, d.l1_bound, d.prediction_error, d.prediction_bound,
         d.error});
  }
  Section& timings = report.AddSection("timings");
  timings.Add("total_seconds", Seconds(start));
  outcome.report = std::move(report);
  return outcome;
}

}  // namespace

std::string Version() { return DANTZIG_VERSION; }

Outcome Execute(const std::vector<std::string>& args) {
  CLI::App app{"Self-tuned Dantzig estimation with computable error bounds",
               "dantzig"};
  app.set_version_flag("--version", Version());
  app.require_subcommand(1);
  std::string out_path;

  std::string input, response = "y", psi_path;
  TuningFlags fit_flags, sens_flags, sim_flags;
  bool kappa_only = false;
  SimulateFlags sim;

  CLI::App* fit = app.add_subcommand("fit", "Fit the estimator to a CSV dataset");
  fit->add_option("--input", input, "CSV file with a header row")->required();
  fit->add_option("--response", response, "Response column")->capture_default_str();
  fit->add_option("--out", out_path, "Report path (default stdout)");
  fit_flags.AddTo(*fit, /*with_sparsity_required=*/true);

  CLI::App* sens = app.add_subcommand(
      "sensitivity", "Compute the l1 sensitivity from a dataset or a Psi file");
  auto* sens_input = sens->add_option("--input", input, "CSV dataset");
  sens->add_option("--psi", psi_path, "Whitespace-separated p x p Psi matrix")
      ->excludes(sens_input);
  sens->add_option("--response", response, "Response column")->capture_default_str();
  sens->add_option("--out", out_path, "Report path (default stdout)");
  sens->add_flag("--kappa-only", kappa_only,
                 "Prune coordinates that cannot attain kappa; per_k entries "
                 "marked inexact are lower bounds");
  sens_flags.AddTo(*sens, /*with_sparsity_required=*/true);

  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo checks");
  simulate->add_option("--check", sim.check, "efron or coverage")
      ->required()
      ->check(CLI::IsMember({"efron", "coverage"}));
  simulate->add_option("--n", sim.n, "Observations")->capture_default_str();
  simulate->add_option("--p", sim.p, "Regressors (coverage)")->capture_default_str();
  simulate->add_option("--s-true", sim.s_true, "True support size (coverage)")
      ->capture_default_str();
  simulate->add_option("--design", sim.design,
                       "iid_gaussian, toeplitz:RHO or bounded_uniform:L")
      ->capture_default_str();
  simulate->add_option("--noise", sim.noise,
                       "gaussian:SD, rademacher:SCALE or hetero:SCALE")
      ->capture_default_str();
  simulate->add_option("--beta-magnitude", sim.beta_magnitude,
                       "Size of the nonzero coefficients")
      ->capture_default_str();
  simulate->add_option("--reps", sim.reps, "Replications")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
  simulate->add_option("--t-grid", sim.t_grid, "Thresholds t (efron)")
      ->delimiter(',');
  simulate->add_option("--out", out_path, "Report path (default stdout)");
  sim_flags.AddTo(*simulate, /*with_sparsity_required=*/false);

  Outcome outcome;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    outcome.message = app.help();
    if (!app.get_subcommands().empty()) {
      outcome.message = app.get_subcommands().front()->help();
    }
    return outcome;
  } catch (const CLI::CallForVersion&) {
    outcome.message = Version() + "\n";
    return outcome;
  } catch (const CLI::ParseError& e) {
    outcome.exit_code = kExitUsage;
    outcome.message = e.what();
    return outcome;
  }

  try {
    if (fit->parsed()) {
      outcome = CmdFit(args, input, response, fit_flags);
    } else if (sens->parsed()) {
      outcome = CmdSensitivity(args, input, psi_path, response, sens_flags,
                               kappa_only);
    } else if (sim.check == "efron") {
      outcome = CmdSimulateEfron(args, sim, sim_flags.threads);
    } else {
      outcome = CmdSimulateCoverage(args, sim, sim_flags);
    }
  } catch (const UsageError& e) {
    outcome = {};
    outcome.exit_code = kExitUsage;
    outcome.message = e.what();
  } catch (const DataError& e) {
    outcome = {};
    outcome.exit_code = kExitData;
    outcome.message = e.what();
  } catch (const std::exception& e) {
    outcome = {};
    outcome.exit_code = kExitNumerical;
    outcome.message = e.what();
  }
  outcome.out_path = out_path;
  return outcome;
}

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  Outcome outcome = Execute(args);
  for (const std::string& warning : outcome.warnings) {
    err << "warning: " << warning << '\n';
  }
  if (outcome.exit_code != kExitOk) {
    err << "error: " << outcome.message << '\n';
    return outcome.exit_code;
  }
  if (!outcome.report) {
    out << outcome.message;
    return kExitOk;
  }
  const std::string text = Serialize(*outcome.report);
  if (outcome.out_path.empty()) {
    out << text;
    return kExitOk;
  }
  std::ofstream file(outcome.out_path, std::ios::binary);
  file << text;
  if (!file) {
    err << "error: cannot write '" << outcome.out_path << "'\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace dantzig::cli
