#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "dantzig/data.h"

namespace dantzig {

// How the constant Q* in the error bounds is obtained. Q* must dominate
// max_k (d_kk^2/n) sum_i x_ki^2 u_i^2 with probability >= 1 - alpha/2.
//   bounded(L): regressors and errors bounded by L with d_kk = 1, Q* = L^4.
//   plugin:     Q-hat at a reference coefficient vector. Carries no
//               finite-sample guarantee; reports flag it.
//   fixed(v):   user-supplied constant.
struct QStarPolicy {
  enum class Kind { kBounded, kPlugin, kFixed };

  Kind kind = Kind::kPlugin;
  double value = 0.0;  // L for bounded, v for fixed

  static QStarPolicy Bounded(double bound) { return {Kind::kBounded, bound}; }
  static QStarPolicy Plugin() { return {Kind::kPlugin, 0.0}; }
  static QStarPolicy Fixed(double v) { return {Kind::kFixed, v}; }

  void Validate() const;
  bool needs_reference() const { return kind == Kind::kPlugin; }
  std::string ToString() const;
  // "bounded:L", "plugin" or "fixed:v". Throws std::invalid_argument.
  static QStarPolicy Parse(std::string_view text);
};

// bounded -> L^4, fixed -> v, plugin -> QHat(data, d, beta_ref).
// Throws std::invalid_argument for plugin without beta_ref.
double ResolveQStar(const QStarPolicy& policy, const Dataset& data,
                    const Normalization& d,
                    const std::optional<Vector>& beta_ref);

struct ErrorBounds {
  double l1_bound = 0.0;          // bound on |Delta|_1
  double prediction_bound = 0.0;  // bound on Delta' Psi Delta
  double gamma = 0.0;
  double kappa = 0.0;
  double qstar = 0.0;
  double r = 0.0;
};

// l1:         (gamma+2)(2gamma+1) sqrt(Q*) r / (gamma kappa)
// prediction: (gamma+2)(2gamma+1)^2 Q* r^2 / (gamma^2 kappa)
// Throws DegenerateSensitivityError when kappa is at or below the degeneracy
// tolerance, std::invalid_argument for non-positive gamma, Q* or r.
ErrorBounds ComputeErrorBounds(double gamma, double kappa, double qstar,
                               double r);

}  // namespace dantzig
