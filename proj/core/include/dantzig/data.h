#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace dantzig {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Observations y_i = x_i' beta* + u_i, stored densely. X is n x p with the
// regressors x_i' as rows. beta_true is set only for simulated data.
class Dataset {
 public:
  // Throws DataError on shape mismatch or non-finite entries.
  Dataset(Matrix x, Vector y, std::optional<Vector> beta_true = std::nullopt);

  Eigen::Index n() const { return x_.rows(); }
  Eigen::Index p() const { return x_.cols(); }
  const Matrix& x() const { return x_; }
  const Vector& y() const { return y_; }
  const std::optional<Vector>& beta_true() const { return beta_true_; }

  // Errors u = Y - X beta*; requires beta_true.
  Vector errors() const;

 private:
  Matrix x_;
  Vector y_;
  std::optional<Vector> beta_true_;
};

enum class NormalizationMode { kIdentity, kRms, kMaxAbs };

std::string_view ToString(NormalizationMode mode);
// Accepts "identity", "rms", "maxabs". Throws std::invalid_argument.
NormalizationMode ParseNormalizationMode(std::string_view text);

// Diagonal scaling D with entries d_kk > 0.
struct Normalization {
  NormalizationMode mode = NormalizationMode::kIdentity;
  Vector diag;
};

// Psi_n = n^-1 D X'X D.
struct GramMatrix {
  Matrix psi;

  Eigen::Index dim() const { return psi.rows(); }
};

// d_kk per mode: 1, (n^-1 sum_i x_ki^2)^(-1/2), or (max_i |x_ki|)^-1.
// A column that is identically zero raises DataError under rms/maxabs; under
// identity it is accepted; callers may warn using ZeroColumns().
Normalization BuildNormalization(const Matrix& x, NormalizationMode mode);

// Indices of columns of x whose entries are all zero.
std::vector<Eigen::Index> ZeroColumns(const Matrix& x);

GramMatrix ComputePsi(const Matrix& x, const Normalization& d);

// The vector n^-1 D X'(Y - X beta). Its sup-norm is what the self-tuned
// constraint bounds by sigma * r.
Vector ResidualGram(const Dataset& data, const Normalization& d,
                    const Vector& beta);

// max_k (d_kk^2 / n) sum_i x_ki^2 (y_i - x_i' beta)^2.
double QHat(const Dataset& data, const Normalization& d, const Vector& beta);

// Delta = D^-1 (beta_hat - beta_ref).
Vector ScaledDeviation(const Normalization& d, const Vector& beta_hat,
                       const Vector& beta_ref);

}  // namespace dantzig
