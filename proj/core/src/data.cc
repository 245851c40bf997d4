#include "dantzig/data.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "dantzig/errors.h"

namespace dantzig {
namespace {

void RequireShape(bool ok, const char* what) {
  if (!ok) throw DataError(std::string("shape mismatch: ") + what);
}

}  // namespace

Dataset::Dataset(Matrix x, Vector y, std::optional<Vector> beta_true)
    : x_(std::move(x)), y_(std::move(y)), beta_true_(std::move(beta_true)) {
  if (x_.rows() == 0 || x_.cols() == 0) {
    throw DataError("dataset needs at least one observation and one regressor");
  }
  RequireShape(y_.size() == x_.rows(), "Y length must equal rows of X");
  if (!x_.allFinite()) throw DataError("X contains non-finite entries");
  if (!y_.allFinite()) throw DataError("Y contains non-finite entries");
  if (beta_true_) {
    RequireShape(beta_true_->size() == x_.cols(),
                 "beta_true length must equal columns of X");
    if (!beta_true_->allFinite()) {
      throw DataError("beta_true contains non-finite entries");
    }
  }
}

Vector Dataset::errors() const {
  if (!beta_true_) throw std::logic_error("errors() requires beta_true");
  return y_ - x_ * *beta_true_;
}

std::string_view ToString(NormalizationMode mode) {
  switch (mode) {
    case NormalizationMode::kIdentity: return "identity";
    case NormalizationMode::kRms: return "rms";
    case NormalizationMode::kMaxAbs: return "maxabs";
  }
  return "unknown";
}

NormalizationMode ParseNormalizationMode(std::string_view text) {
  if (text == "identity") return NormalizationMode::kIdentity;
  if (text == "rms") return NormalizationMode::kRms;
  if (text == "maxabs") return NormalizationMode::kMaxAbs;
  throw std::invalid_argument("unknown normalization '" + std::string(text) +
                              "' (expected identity, rms or maxabs)");
}

std::vector<Eigen::Index> ZeroColumns(const Matrix& x) {
  std::vector<Eigen::Index> zero;
  for (Eigen::Index k = 0; k < x.cols(); ++k) {
    if ((x.col(k).array() == 0.0).all()) zero.push_back(k);
  }
  return zero;
}

Normalization BuildNormalization(const Matrix& x, NormalizationMode mode) {
  if (x.size() == 0) throw DataError("cannot normalize an empty design");
  if (!x.allFinite()) throw DataError("X contains non-finite entries");

  Normalization d{mode, Vector::Ones(x.cols())};
  if (mode == NormalizationMode::kIdentity) return d;

  const double n = static_cast<double>(x.rows());
  for (Eigen::Index k = 0; k < x.cols(); ++k) {
    const double scale = mode == NormalizationMode::kRms
                             ? std::sqrt(x.col(k).squaredNorm() / n)
                             : x.col(k).cwiseAbs().maxCoeff();
    if (!(scale > 0.0)) {
      throw DataError("degenerate column " + std::to_string(k) +
                      ": all entries are zero");
    }
    d.diag(k) = 1.0 / scale;
    if (!std::isfinite(d.diag(k))) {
      throw DataError("degenerate column " + std::to_string(k) +
                      ": scale underflows");
    }
  }
  return d;
}

GramMatrix ComputePsi(const Matrix& x, const Normalization& d) {
  RequireShape(d.diag.size() == x.cols(), "D must be p x p");
  const Matrix scaled = x * d.diag.asDiagonal();
  GramMatrix g;
  g.psi.noalias() = scaled.transpose() * scaled;
  g.psi /= static_cast<double>(x.rows());
  // Exact symmetry; the product above is symmetric only up to rounding.
  g.psi = (0.5 * (g.psi + g.psi.transpose())).eval();
  return g;
}

Vector ResidualGram(const Dataset& data, const Normalization& d,
                    const Vector& beta) {
  RequireShape(d.diag.size() == data.p(), "D must be p x p");
  RequireShape(beta.size() == data.p(), "beta must have length p");
  const Vector residual = data.y() - data.x() * beta;
  Vector out = data.x().transpose() * residual;
  return d.diag.cwiseProduct(out) / static_cast<double>(data.n());
}

double QHat(const Dataset& data, const Normalization& d, const Vector& beta) {
  RequireShape(d.diag.size() == data.p(), "D must be p x p");
  RequireShape(beta.size() == data.p(), "beta must have length p");
  const Vector residual_sq = (data.y() - data.x() * beta).array().square();
  // column k: sum_i x_ki^2 * res_i^2
  const Vector weighted =
      data.x().array().square().matrix().transpose() * residual_sq;
  const Vector per_k = d.diag.array().square() * weighted.array() /
                       static_cast<double>(data.n());
  return per_k.maxCoeff();
}

Vector ScaledDeviation(const Normalization& d, const Vector& beta_hat,
                       const Vector& beta_ref) {
  RequireShape(beta_hat.size() == d.diag.size() &&
                   beta_ref.size() == d.diag.size(),
               "beta vectors must have length p");
  return (beta_hat - beta_ref).cwiseQuotient(d.diag);
}

}  // namespace dantzig
