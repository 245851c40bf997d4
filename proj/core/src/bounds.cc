#include "dantzig/bounds.h"

#include <charconv>
#include <cstdio>
#include <string>
#include <cmath>
#include <stdexcept>

#include "dantzig/errors.h"
#include "dantzig/sensitivity.h"

namespace dantzig {
namespace {

double ParsePositive(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto [end, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() ||
      !(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(std::string(what) +
                                " must be a positive number, got '" +
                                std::string(text) + "'");
  }
  return value;
}

}  // namespace

void QStarPolicy::Validate() const {
  if (kind != Kind::kPlugin && !(value > 0.0 && std::isfinite(value))) {
    throw std::invalid_argument("Q* policy parameter must be positive");
  }
}

std::string QStarPolicy::ToString() const {
  char buffer[64];
  switch (kind) {
    case Kind::kBounded:
      std::snprintf(buffer, sizeof(buffer), "bounded:%.17g", value);
      return buffer;
    case Kind::kFixed:
      std::snprintf(buffer, sizeof(buffer), "fixed:%.17g", value);
      return buffer;
    case Kind::kPlugin:
      break;
  }
  return "plugin";
}

QStarPolicy QStarPolicy::Parse(std::string_view text) {
  if (text == "plugin") return Plugin();
  const auto colon = text.find(':');
  if (colon != std::string_view::npos) {
    const std::string_view head = text.substr(0, colon);
    const std::string_view arg = text.substr(colon + 1);
    if (head == "bounded") return Bounded(ParsePositive(arg, "bounded:L"));
    if (head == "fixed") return Fixed(ParsePositive(arg, "fixed:v"));
  }
  throw std::invalid_argument("unknown Q* policy '" + std::string(text) +
                              "' (expected bounded:L, plugin or fixed:v)");
}

double ResolveQStar(const QStarPolicy& policy, const Dataset& data,
                    const Normalization& d,
                    const std::optional<Vector>& beta_ref) {
  policy.Validate();
  switch (policy.kind) {
    case QStarPolicy::Kind::kBounded:
      return std::pow(policy.value, 4);
    case QStarPolicy::Kind::kFixed:
      return policy.value;
    case QStarPolicy::Kind::kPlugin:
      if (!beta_ref) {
        throw std::invalid_argument("plugin Q* needs a reference beta");
      }
      return QHat(data, d, *beta_ref);
  }
  return 0.0;
}

ErrorBounds ComputeErrorBounds(double gamma, double kappa, double qstar,
                               double r) {
  if (!(gamma > 0.0) || !(qstar > 0.0) || !(r > 0.0)) {
    throw std::invalid_argument("error bounds need gamma, Q* and r > 0");
  }
  if (!(kappa > kSensitivityDegeneracyTolerance)) {
    throw DegenerateSensitivityError(
        "sensitivity degenerate; error bounds are infinite");
  }
  ErrorBounds b{};
  const double shape = (gamma + 2.0) * (2.0 * gamma + 1.0);
  b.l1_bound = shape * std::sqrt(qstar) * r / (gamma * kappa);
  b.prediction_bound = shape * (2.0 * gamma + 1.0) * qstar * r * r /
                       (gamma * gamma * kappa);
  b.gamma = gamma;
  b.kappa = kappa;
  b.qstar = qstar;
  b.r = r;
  return b;
}

}  // namespace dantzig
