#include "dantzig/lp.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/LU>

#include "dantzig/errors.h"

namespace dantzig {

void LpProblem::Validate() const {
  const Eigen::Index m = objective.size();
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("malformed LP: " + what);
  };
  if (a_ub.rows() != b_ub.size()) fail("a_ub rows != b_ub length");
  if (a_eq.rows() != b_eq.size()) fail("a_eq rows != b_eq length");
  if (a_ub.rows() > 0 && a_ub.cols() != m) fail("a_ub columns != variables");
  if (a_eq.rows() > 0 && a_eq.cols() != m) fail("a_eq columns != variables");
  if (!objective.allFinite() || !a_ub.allFinite() || !b_ub.allFinite() ||
      !a_eq.allFinite() || !b_eq.allFinite()) {
    fail("non-finite entries");
  }
}

std::string_view ToString(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kCutoff: return "cutoff";
  }
  return "unknown";
}

namespace {

constexpr double kDegenerateStep = 1e-12;
constexpr double kCostPerturbation = 1e-7;

enum class PhaseEnd { kOptimal, kUnbounded, kInfeasible, kCutoff };

// Working form after presolve:
//   rows [0, kub)       a x + s = b          (original <= rows)
//   rows [kub, R)       a x + e = b, b >= 0  (equality rows, possibly negated)
// Columns: structurals, one slack per ub row, an optional single artificial
// with -1 on every ub row whose rhs is negative, then one artificial per
// equality row.
class RevisedSimplex {
 public:
  RevisedSimplex(const LpProblem& problem, const LpOptions& options)
      : problem_(problem), options_(options) {
    m_orig_ = problem.num_variables();
    max_iterations_ = options.max_iterations > 0
                          ? options.max_iterations
                          : 50 * (m_orig_ + problem.num_constraints());
    bland_threshold_ = 2 * (m_orig_ + problem.num_constraints());
  }

  LpSolution Solve() {
    LpSolution solution;
    if (!Presolve()) {
      solution.status = LpStatus::kInfeasible;
      solution.iterations = 0;
      return solution;
    }
    BuildWorkingForm();
    bool dual_start = UseDualSimplex();
    if (dual_start) {
      for (Eigen::Index j = first_artificial_; j < num_cols_; ++j) {
        locked_[j] = true;
      }
      SetPhaseTwoCost();
      // Zero costs make the dual heavily degenerate; a small deterministic
      // perturbation breaks the ties and is removed before the primal pass.
      for (Eigen::Index j = 0; j < m_; ++j) {
        const double spread = 0.5 + 0.5 * std::fmod(0.6180339887 * (j + 1), 1.0);
        cost_(j) += kCostPerturbation * (1.0 + std::abs(cost_(j))) * spread;
      }
      if (!WarmBasis()) {
        InitialBasis(/*with_ub_artificial=*/false);
        dual_start = has_ub_artificial_;
      }
      if (!dual_start) {
        std::fill(locked_.begin(), locked_.end(), false);
        std::fill(is_basic_.begin(), is_basic_.end(), false);
      }
    }
    if (!dual_start) InitialBasis(/*with_ub_artificial=*/true);

    if (dual_start) {
      // The basis is dual feasible; primal feasibility is restored by dual
      // simplex, and the primal pass below only cleans up drift.
      const PhaseEnd end = RunDual(std::isfinite(options_.objective_cutoff));
      SetPhaseTwoCost();
      Refine();
      if (end == PhaseEnd::kInfeasible) {
        solution.status = LpStatus::kInfeasible;
        solution.iterations = iterations_;
        return solution;
      }
      if (end == PhaseEnd::kCutoff) {
        solution.iterations = iterations_;
        solution.x = PrimalPoint();
        solution.status = LpStatus::kCutoff;
        solution.objective_value = problem_.objective.dot(solution.x);
        solution.lower_bound = lower_bound_;
        solution.basis = BasisIds();
        return solution;
      }
    } else if (num_artificial_ > 0) {
      // Phase 1: drive artificials to zero.
      Vector phase1_cost = Vector::Zero(num_cols_);
      phase1_cost.tail(num_artificial_).setOnes();
      cost_ = phase1_cost;
      RunPhase(/*allow_artificial=*/true, /*cutoff=*/false);
      Refine();
      const double infeasibility = CurrentObjective();
      if (infeasibility > options_.feasibility_tolerance * (1.0 + b_scale_)) {
        solution.status = LpStatus::kInfeasible;
        solution.iterations = iterations_;
        return solution;
      }
      DriveOutArtificials();
    }

    SetPhaseTwoCost();
    const PhaseEnd end = RunPhase(/*allow_artificial=*/false,
                                  std::isfinite(options_.objective_cutoff));
    const bool bounded = end != PhaseEnd::kUnbounded;
    Refine();

    solution.iterations = iterations_;
    solution.x = PrimalPoint();
    if (end == PhaseEnd::kCutoff) {
      solution.status = LpStatus::kCutoff;
      solution.objective_value = problem_.objective.dot(solution.x);
      solution.lower_bound = lower_bound_;
      solution.basis = BasisIds();
      return solution;
    }
    if (!bounded || HasImprovingEmptyColumn()) {
      solution.status = LpStatus::kUnbounded;
      solution.ray = bounded ? EmptyColumnRay() : ray_;
      solution.objective_value = -std::numeric_limits<double>::infinity();
      return solution;
    }
    solution.status = LpStatus::kOptimal;
    solution.objective_value = problem_.objective.dot(solution.x);
    solution.lower_bound = solution.objective_value;
    solution.dual = DualPoint();
    solution.basis = BasisIds();
    return solution;
  }

 private:
  // Drops empty rows and columns. Returns false when an empty row is
  // inconsistent.
  bool Presolve() {
    const double tol = options_.feasibility_tolerance;
    for (Eigen::Index i = 0; i < problem_.b_ub.size(); ++i) {
      if (problem_.a_ub.row(i).isZero(0.0)) {
        if (problem_.b_ub(i) < -tol) return false;
      } else {
        ub_rows_.push_back(i);
      }
    }
    for (Eigen::Index i = 0; i < problem_.b_eq.size(); ++i) {
      if (problem_.a_eq.row(i).isZero(0.0)) {
        if (std::abs(problem_.b_eq(i)) > tol) return false;
      } else {
        eq_rows_.push_back(i);
      }
    }
    for (Eigen::Index j = 0; j < m_orig_; ++j) {
      const bool empty =
          (problem_.a_ub.rows() == 0 || problem_.a_ub.col(j).isZero(0.0)) &&
          (problem_.a_eq.rows() == 0 || problem_.a_eq.col(j).isZero(0.0));
      if (empty) {
        empty_cols_.push_back(j);
      } else {
        kept_cols_.push_back(j);
      }
    }
    return true;
  }

  void BuildWorkingForm() {
    kub_ = static_cast<Eigen::Index>(ub_rows_.size());
    keq_ = static_cast<Eigen::Index>(eq_rows_.size());
    rows_ = kub_ + keq_;
    m_ = static_cast<Eigen::Index>(kept_cols_.size());

    structural_.resize(rows_, m_);
    b_.resize(rows_);
    eq_sign_.assign(keq_, 1.0);
    for (Eigen::Index i = 0; i < kub_; ++i) {
      for (Eigen::Index j = 0; j < m_; ++j) {
        structural_(i, j) = problem_.a_ub(ub_rows_[i], kept_cols_[j]);
      }
      b_(i) = problem_.b_ub(ub_rows_[i]);
    }
    for (Eigen::Index e = 0; e < keq_; ++e) {
      const double rhs = problem_.b_eq(eq_rows_[e]);
      eq_sign_[e] = rhs < 0 ? -1.0 : 1.0;
      for (Eigen::Index j = 0; j < m_; ++j) {
        structural_(kub_ + e, j) =
            eq_sign_[e] * problem_.a_eq(eq_rows_[e], kept_cols_[j]);
      }
      b_(kub_ + e) = eq_sign_[e] * rhs;
    }
    b_scale_ = rows_ > 0 ? b_.cwiseAbs().maxCoeff() : 0.0;

    has_ub_artificial_ = kub_ > 0 && b_.head(kub_).minCoeff() < 0.0;
    ub_artificial_ = m_ + kub_;
    num_artificial_ = (has_ub_artificial_ ? 1 : 0) + keq_;
    first_artificial_ = m_ + kub_;
    num_cols_ = m_ + kub_ + num_artificial_;
    eq_artificial_base_ = first_artificial_ + (has_ub_artificial_ ? 1 : 0);

    is_basic_.assign(num_cols_, false);
    locked_.assign(num_cols_, false);

    for (Eigen::Index i = 0; i < kub_; ++i) {
      if (b_(i) >= 0.0 && structural_.row(i).minCoeff() >= 0.0) {
        knapsack_rows_.push_back(i);
      }
    }
  }

  bool IsArtificial(Eigen::Index j) const { return j >= first_artificial_; }

  void LoadColumn(Eigen::Index j, Vector& out) const {
    if (j < m_) {
      out = structural_.col(j);
      return;
    }
    out.setZero(rows_);
    if (j < m_ + kub_) {
      out(j - m_) = 1.0;
    } else if (has_ub_artificial_ && j == ub_artificial_) {
      for (Eigen::Index i = 0; i < kub_; ++i) {
        if (b_(i) < 0.0) out(i) = -1.0;
      }
    } else {
      out(kub_ + (j - eq_artificial_base_)) = 1.0;
    }
  }

  double ColumnDot(Eigen::Index j, const Vector& y) const {
    if (j < m_) return structural_.col(j).dot(y);
    if (j < m_ + kub_) return y(j - m_);
    if (has_ub_artificial_ && j == ub_artificial_) {
      double sum = 0.0;
      for (Eigen::Index i = 0; i < kub_; ++i) {
        if (b_(i) < 0.0) sum -= y(i);
      }
      return sum;
    }
    return y(kub_ + (j - eq_artificial_base_));
  }

  bool UseDualSimplex() const {
    if (options_.algorithm == LpAlgorithm::kPrimal) return false;
    if (keq_ > 0 || rows_ == 0) return false;
    if (!has_ub_artificial_ && options_.initial_basis.empty()) return false;
    for (Eigen::Index j = 0; j < m_; ++j) {
      if (problem_.objective(kept_cols_[j]) < 0.0) return false;
    }
    return true;
  }

  // Loads LpOptions::initial_basis for dual simplex. Returns false (leaving
  // no basis set) when it does not fit this problem, is singular, or is
  // clearly dual infeasible under cost_.
  bool WarmBasis() {
    const std::vector<Eigen::Index>& ids = options_.initial_basis;
    if (static_cast<Eigen::Index>(ids.size()) != rows_) return false;
    std::vector<Eigen::Index> working_of(m_orig_ + problem_.b_ub.size(), -1);
    for (Eigen::Index j = 0; j < m_; ++j) working_of[kept_cols_[j]] = j;
    for (Eigen::Index i = 0; i < kub_; ++i) {
      working_of[m_orig_ + ub_rows_[i]] = m_ + i;
    }
    basis_.assign(rows_, -1);
    std::vector<bool> used(num_cols_, false);
    for (Eigen::Index i = 0; i < rows_; ++i) {
      const Eigen::Index id = ids[i];
      if (id < 0 || id >= static_cast<Eigen::Index>(working_of.size())) return false;
      const Eigen::Index j = working_of[id];
      if (j < 0 || used[j]) return false;
      used[j] = true;
      basis_[i] = j;
    }
    if (!FactorBasis(1e-12)) return false;
    x_basic_ = binv_ * b_;
    for (Eigen::Index j : basis_) is_basic_[j] = true;
    Vector reduced(num_cols_);
    FreshReducedCosts(reduced);
    for (Eigen::Index j = 0; j < first_artificial_; ++j) {
      if (!is_basic_[j] && reduced(j) < -1e-6) {
        std::fill(is_basic_.begin(), is_basic_.end(), false);
        return false;
      }
    }
    since_refactor_ = 0;
    return true;
  }

  std::vector<Eigen::Index> BasisIds() const {
    std::vector<Eigen::Index> ids(rows_);
    for (Eigen::Index i = 0; i < rows_; ++i) {
      const Eigen::Index j = basis_[i];
      if (j >= first_artificial_) return {};
      ids[i] = j < m_ ? kept_cols_[j] : m_orig_ + ub_rows_[j - m_];
    }
    return ids;
  }

  void SetPhaseTwoCost() {
    cost_ = Vector::Zero(num_cols_);
    for (Eigen::Index j = 0; j < m_; ++j) {
      cost_(j) = problem_.objective(kept_cols_[j]);
    }
  }

  void InitialBasis(bool with_ub_artificial) {
    basis_.resize(rows_);
    for (Eigen::Index i = 0; i < kub_; ++i) basis_[i] = m_ + i;
    for (Eigen::Index e = 0; e < keq_; ++e) {
      basis_[kub_ + e] = eq_artificial_base_ + e;
    }
    for (Eigen::Index j : basis_) is_basic_[j] = true;
    binv_ = Matrix::Identity(rows_, rows_);
    x_basic_ = b_;

    if (has_ub_artificial_ && with_ub_artificial) {
      Eigen::Index most_negative = 0;
      for (Eigen::Index i = 1; i < kub_; ++i) {
        if (b_(i) < b_(most_negative)) most_negative = i;
      }
      Vector column;
      LoadColumn(ub_artificial_, column);
      Pivot(ub_artificial_, most_negative, binv_ * column);
    }
  }

  double CurrentObjective() const {
    double value = 0.0;
    for (Eigen::Index i = 0; i < rows_; ++i) {
      value += cost_(basis_[i]) * x_basic_(i);
    }
    return value;
  }

  // alpha = B^-1 a_entering.
  void Pivot(Eigen::Index entering, Eigen::Index leaving_row,
             const Vector& alpha) {
    const double pivot = alpha(leaving_row);
    const double step = x_basic_(leaving_row) / pivot;
    x_basic_ -= step * alpha;
    x_basic_(leaving_row) = step;

    Vector eta = alpha / pivot;
    eta(leaving_row) = (alpha(leaving_row) - 1.0) / pivot;
    const Eigen::RowVectorXd pivot_row = binv_.row(leaving_row);
    binv_.noalias() -= eta * pivot_row;

    is_basic_[basis_[leaving_row]] = false;
    basis_[leaving_row] = entering;
    is_basic_[entering] = true;
    ++since_refactor_;
  }

  // Row covered by a unit basis column (slack or equality artificial), or -1.
  Eigen::Index UnitRow(Eigen::Index j) const {
    if (j >= m_ && j < m_ + kub_) return j - m_;
    if (j >= eq_artificial_base_ && j < num_cols_) {
      return kub_ + (j - eq_artificial_base_);
    }
    return -1;
  }

  // Rebuilds B^-1 from the basis. Unit columns are eliminated first, so only
  // the block of the remaining columns on uncovered rows is factored.
  // Returns false when that block is numerically singular.
  bool FactorBasis(double min_rcond) {
    std::vector<Eigen::Index> covered_by(rows_, -1), other_pos;
    for (Eigen::Index i = 0; i < rows_; ++i) {
      const Eigen::Index row = UnitRow(basis_[i]);
      if (row >= 0 && covered_by[row] < 0) {
        covered_by[row] = i;
      } else {
        other_pos.push_back(i);
      }
    }
    std::vector<Eigen::Index> open_rows;
    for (Eigen::Index r = 0; r < rows_; ++r) {
      if (covered_by[r] < 0) open_rows.push_back(r);
    }
    const Eigen::Index k = static_cast<Eigen::Index>(other_pos.size());
    if (static_cast<Eigen::Index>(open_rows.size()) != k) return false;

    binv_.setZero(rows_, rows_);
    for (Eigen::Index r = 0; r < rows_; ++r) {
      if (covered_by[r] >= 0) binv_(covered_by[r], r) = 1.0;
    }
    if (k == 0) return true;
    Matrix columns(rows_, k);
    Vector column;
    for (Eigen::Index c = 0; c < k; ++c) {
      LoadColumn(basis_[other_pos[c]], column);
      columns.col(c) = column;
    }
    Matrix block(k, k);
    for (Eigen::Index l = 0; l < k; ++l) block.row(l) = columns.row(open_rows[l]);
    const Eigen::PartialPivLU<Matrix> lu(block);
    if (!(lu.rcond() >= min_rcond)) return false;
    const Matrix block_inverse = lu.inverse();
    // x_C = M^-1 b_open; covered x_r = b_r - columns_r x_C.
    for (Eigen::Index c = 0; c < k; ++c) {
      for (Eigen::Index l = 0; l < k; ++l) {
        binv_(other_pos[c], open_rows[l]) = block_inverse(c, l);
      }
    }
    for (Eigen::Index r = 0; r < rows_; ++r) {
      if (covered_by[r] < 0) continue;
      const Eigen::RowVectorXd coupling = columns.row(r);
      if (coupling.isZero(0.0)) continue;
      const Eigen::RowVectorXd w = coupling * block_inverse;
      for (Eigen::Index l = 0; l < k; ++l) {
        binv_(covered_by[r], open_rows[l]) -= w(l);
      }
    }
    return true;
  }

  void Refactor() {
    since_refactor_ = 0;
    if (rows_ == 0) return;
    if (!FactorBasis(1e-14)) {
      throw NumericalError("simplex basis became numerically singular");
    }
    x_basic_ = binv_ * b_;
    x_basic_ += binv_ * (b_ - BasisProduct(x_basic_));
  }

  Vector BasisProduct(const Vector& v) const {
    Vector out = Vector::Zero(rows_);
    for (Eigen::Index i = 0; i < rows_; ++i) {
      const Eigen::Index j = basis_[i];
      if (v(i) == 0.0) continue;
      if (j < m_) {
        out.noalias() += v(i) * structural_.col(j);
      } else {
        Vector column;
        LoadColumn(j, column);
        out.noalias() += v(i) * column;
      }
    }
    return out;
  }

  // One step of iterative refinement of x_B against the current inverse;
  // refactors when the residual stays large.
  void Refine() {
    if (rows_ == 0) return;
    x_basic_ = binv_ * b_;
    Vector residual = b_ - BasisProduct(x_basic_);
    x_basic_ += binv_ * residual;
    residual = b_ - BasisProduct(x_basic_);
    if (residual.cwiseAbs().maxCoeff() >
        1e-2 * options_.feasibility_tolerance * (1.0 + b_scale_)) {
      Refactor();
    }
  }

  Vector Duals() const {
    Vector cost_basic(rows_);
    for (Eigen::Index i = 0; i < rows_; ++i) cost_basic(i) = cost_(basis_[i]);
    return binv_.transpose() * cost_basic;
  }

  void FreshReducedCosts(Vector& reduced) const {
    const Vector y = Duals();
    if (m_ > 0) reduced.head(m_) = cost_.head(m_) - structural_.transpose() * y;
    for (Eigen::Index j = m_; j < num_cols_; ++j) {
      reduced(j) = cost_(j) - ColumnDot(j, y);
    }
  }

  // Row `r` of B^-1 A over all columns.
  void PivotRow(Eigen::Index r, Vector& row) const {
    const Vector rho = binv_.row(r).transpose();
    if (m_ > 0) row.head(m_) = structural_.transpose() * rho;
    for (Eigen::Index j = m_; j < num_cols_; ++j) row(j) = ColumnDot(j, rho);
  }

  // Lagrangian lower bound on the optimum, valid whenever the optimum is
  // below objective_cutoff. y is clipped to the dual sign constraints and
  // structurals with a negative reduced cost are charged at an upper bound:
  // LpOptions::implied_upper, cutoff / c_j when the objective is nonnegative,
  // or jointly through one ub row with nonnegative entries and rhs.
  double LagrangianBound() const {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    Vector y = Duals();
    for (Eigen::Index i = 0; i < kub_; ++i) y(i) = std::min(y(i), 0.0);
    Vector cost(m_);
    for (Eigen::Index j = 0; j < m_; ++j) {
      cost(j) = problem_.objective(kept_cols_[j]);
    }
    const Vector reduced =
        m_ > 0 ? Vector(cost - structural_.transpose() * y) : Vector();
    const bool nonnegative_cost = m_ == 0 || cost.minCoeff() >= 0.0;

    // Per-variable charges; infinite when no individual bound exists. A
    // charge built on cutoff / c_j only holds for points below the cutoff,
    // so a bound that uses one certifies min(bound, cutoff), not the bound.
    Vector charge = Vector::Zero(m_);
    std::vector<char> via_cutoff(m_, 0);
    for (Eigen::Index j = 0; j < m_; ++j) {
      if (reduced(j) >= 0.0) continue;
      double upper = kInf;
      if (options_.implied_upper.size() == m_orig_) {
        upper = options_.implied_upper(kept_cols_[j]);
      }
      if (nonnegative_cost && cost(j) > 0.0 &&
          options_.objective_cutoff / cost(j) < upper) {
        upper = options_.objective_cutoff / cost(j);
        via_cutoff[j] = 1;
      }
      charge(j) = std::isfinite(upper) ? reduced(j) * upper : -kInf;
    }
    double best = charge.sum();
    bool best_via_cutoff = false;
    for (Eigen::Index j = 0; j < m_; ++j) {
      if (charge(j) < 0.0 && via_cutoff[j]) best_via_cutoff = true;
    }
    for (Eigen::Index i : knapsack_rows_) {
      double total = 0.0;
      double worst_ratio = 0.0;
      bool uses_cutoff = false;
      for (Eigen::Index j = 0; j < m_; ++j) {
        if (reduced(j) >= 0.0) continue;
        const double a = structural_(i, j);
        if (a > 0.0) {
          worst_ratio = std::min(worst_ratio, reduced(j) / a);
        } else {
          total += charge(j);
          uses_cutoff = uses_cutoff || (charge(j) < 0.0 && via_cutoff[j]);
        }
      }
      if (total + b_(i) * worst_ratio > best) {
        best = total + b_(i) * worst_ratio;
        best_via_cutoff = uses_cutoff;
      }
    }
    if (!std::isfinite(best)) return -kInf;
    const double bound = b_.dot(y) + best;
    return best_via_cutoff ? std::min(bound, options_.objective_cutoff) : bound;
  }

  // Runs simplex iterations on cost_. Stops early when `use_cutoff` and the
  // Lagrangian bound reaches LpOptions::objective_cutoff.
  PhaseEnd RunPhase(bool allow_artificial, bool use_cutoff) {
    long consecutive_degenerate = 0;
    Vector reduced(num_cols_);
    Vector pivot_row(num_cols_);
    Vector devex = Vector::Ones(num_cols_);
    Vector column;
    FreshReducedCosts(reduced);
    bool fresh = true;
    long since_bound = 0;
    while (true) {
      if (since_refactor_ >= options_.refactor_interval) {
        Refactor();
        FreshReducedCosts(reduced);
        fresh = true;
      }
      if (use_cutoff && ++since_bound >= options_.cutoff_check_interval) {
        since_bound = 0;
        lower_bound_ = LagrangianBound();
        if (lower_bound_ >= options_.objective_cutoff) return PhaseEnd::kCutoff;
      }

      // Pricing.
      const bool bland = consecutive_degenerate >= bland_threshold_;
      const bool use_devex = !bland && options_.pricing == LpPricing::kDevex;
      Eigen::Index entering = -1;
      double best = 0.0;
      for (Eigen::Index j = 0; j < num_cols_; ++j) {
        if (is_basic_[j] || locked_[j]) continue;
        if (!allow_artificial && IsArtificial(j)) continue;
        const double d = reduced(j);
        if (d >= -options_.optimality_tolerance) continue;
        if (bland) {
          entering = j;
          break;
        }
        const double score = use_devex ? d * d / devex(j) : -d;
        if (score > best) {
          best = score;
          entering = j;
        }
      }
      if (entering < 0) {
        if (fresh) return PhaseEnd::kOptimal;
        // Confirm optimality against reduced costs free of update drift.
        FreshReducedCosts(reduced);
        fresh = true;
        continue;
      }

      if (iterations_ >= max_iterations_) {
        throw LpIterationLimitError(
            "simplex iteration limit exceeded (" +
            std::to_string(max_iterations_) + " pivots)");
      }

      LoadColumn(entering, column);
      const Vector alpha = binv_ * column;

      // Ratio test.
      Eigen::Index leaving = -1;
      double min_ratio = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < rows_; ++i) {
        if (alpha(i) <= options_.pivot_tolerance) continue;
        const double ratio = std::max(x_basic_(i), 0.0) / alpha(i);
        if (leaving < 0 || ratio < min_ratio - 1e-12 * (1.0 + min_ratio)) {
          leaving = i;
          min_ratio = ratio;
        } else if (ratio <= min_ratio + 1e-12 * (1.0 + min_ratio)) {
          const bool prefer =
              bland ? basis_[i] < basis_[leaving] : alpha(i) > alpha(leaving);
          if (prefer) {
            leaving = i;
            min_ratio = std::min(min_ratio, ratio);
          }
        }
      }
      if (leaving < 0) {
        ray_ = Vector::Zero(m_orig_);
        if (entering < m_) ray_(kept_cols_[entering]) = 1.0;
        for (Eigen::Index i = 0; i < rows_; ++i) {
          if (basis_[i] < m_) ray_(kept_cols_[basis_[i]]) = -alpha(i);
        }
        return PhaseEnd::kUnbounded;
      }

      if (x_basic_(leaving) < 0.0) x_basic_(leaving) = 0.0;
      const bool degenerate = min_ratio <= kDegenerateStep;
      consecutive_degenerate = degenerate ? consecutive_degenerate + 1 : 0;

      // Reduced costs and reference weights from the pivot row, taken
      // before the inverse changes.
      PivotRow(leaving, pivot_row);
      const double pivot = alpha(leaving);
      const double ratio_q = reduced(entering) / pivot;
      reduced.noalias() -= ratio_q * pivot_row;
      const Eigen::Index leaving_var = basis_[leaving];
      reduced(leaving_var) = -ratio_q;
      reduced(entering) = 0.0;
      if (options_.pricing == LpPricing::kDevex) {
        const double weight_q = devex(entering);
        for (Eigen::Index j = 0; j < num_cols_; ++j) {
          if (is_basic_[j]) continue;
          const double scaled = pivot_row(j) / pivot;
          devex(j) = std::max(devex(j), scaled * scaled * weight_q);
        }
        devex(leaving_var) = std::max(weight_q / (pivot * pivot), 1.0);
      }

      Pivot(entering, leaving, alpha);
      fresh = false;
      ++iterations_;
    }
  }

  // Dual simplex from a dual feasible basis over ub rows only. Returns
  // kOptimal once x_B >= 0 (reduced costs may carry drift; the caller runs a
  // primal pass afterwards), kInfeasible on a dual ray.
  // Recomputes reduced costs and shifts cost_ so none is negative.
  void FreshDualFeasible(Vector& reduced) {
    FreshReducedCosts(reduced);
    for (Eigen::Index j = 0; j < num_cols_; ++j) {
      if (is_basic_[j] || locked_[j] || reduced(j) >= 0.0) continue;
      cost_(j) -= reduced(j);
      reduced(j) = 0.0;
    }
  }

  PhaseEnd RunDual(bool use_cutoff) {
    long consecutive_degenerate = 0;
    Vector reduced(num_cols_);
    Vector pivot_row(num_cols_);
    Vector column;
    FreshDualFeasible(reduced);
    bool fresh = true;
    long since_bound = 0;
    const double primal_tol = options_.feasibility_tolerance * (1.0 + b_scale_);
    while (true) {
      if (since_refactor_ >= options_.refactor_interval) {
        Refactor();
        FreshDualFeasible(reduced);
        fresh = true;
      }
      // The dual objective c_B x_B rises monotonically; certify with the
      // Lagrangian bound before stopping.
      if (use_cutoff && ++since_bound >= options_.cutoff_check_interval) {
        since_bound = 0;
        if (CurrentObjective() >= options_.objective_cutoff) {
          lower_bound_ = LagrangianBound();
          if (lower_bound_ >= options_.objective_cutoff) {
            return PhaseEnd::kCutoff;
          }
        }
      }

      const bool bland = consecutive_degenerate >= bland_threshold_;
      Eigen::Index leaving = -1;
      double best = 0.0;

      for (Eigen::Index i = 0; i < rows_; ++i) {
        const double value = x_basic_(i);
        if (value >= -primal_tol) continue;
        if (bland) {
          if (leaving < 0 || basis_[i] < basis_[leaving]) leaving = i;
          continue;
        }
        const double score = -value;
        if (score > best) {
          best = score;
          leaving = i;
        }
      }
      if (leaving < 0) {
        if (fresh) return PhaseEnd::kOptimal;
        Refactor();
        FreshDualFeasible(reduced);
        fresh = true;
        continue;
      }

      if (iterations_ >= max_iterations_) {
        throw LpIterationLimitError(
            "simplex iteration limit exceeded (" +
            std::to_string(max_iterations_) + " pivots)");
      }

      PivotRow(leaving, pivot_row);
      // Two-pass ratio test: the bound allows reduced costs to dip by the
      // optimality tolerance, then the largest |alpha| within it enters.
      double bound = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < num_cols_; ++j) {
        if (is_basic_[j] || locked_[j]) continue;
        const double a = pivot_row(j);
        if (a >= -options_.pivot_tolerance) continue;
        bound = std::min(bound, (std::max(reduced(j), 0.0) +
                                 options_.optimality_tolerance) / -a);
      }
      Eigen::Index entering = -1;
      double entering_magnitude = 0.0;
      for (Eigen::Index j = 0; j < num_cols_; ++j) {
        if (is_basic_[j] || locked_[j]) continue;
        const double a = pivot_row(j);
        if (a >= -options_.pivot_tolerance) continue;
        const double ratio = std::max(reduced(j), 0.0) / -a;
        if (ratio > bound) continue;
        if (bland) {
          if (entering < 0 || ratio < std::max(reduced(entering), 0.0) /
                                          -pivot_row(entering)) {
            entering = j;
          }
          continue;
        }
        if (-a > entering_magnitude) {
          entering_magnitude = -a;
          entering = j;
        }
      }
      if (entering < 0) {
        if (fresh) return PhaseEnd::kInfeasible;
        Refactor();
        FreshDualFeasible(reduced);
        fresh = true;
        continue;
      }

      LoadColumn(entering, column);
      const Vector alpha = binv_ * column;
      const double pivot = alpha(leaving);
      if (std::abs(pivot - pivot_row(entering)) >
          1e-7 * (1.0 + std::abs(pivot))) {
        if (!fresh) {
          Refactor();
          FreshDualFeasible(reduced);
          fresh = true;
          continue;
        }
      }
      if (reduced(entering) < 0.0) {
        // Shift the cost so the entering reduced cost is exactly zero; the
        // primal pass after dual simplex uses the true costs again.
        cost_(entering) -= reduced(entering);
        reduced(entering) = 0.0;
      }
      const double step = reduced(entering) / -pivot_row(entering);
      consecutive_degenerate =
          step <= kDegenerateStep ? consecutive_degenerate + 1 : 0;

      const double ratio_q = reduced(entering) / pivot_row(entering);
      reduced.noalias() -= ratio_q * pivot_row;
      reduced(basis_[leaving]) = -ratio_q;
      reduced(entering) = 0.0;

      Pivot(entering, leaving, alpha);
      fresh = false;
      ++iterations_;
    }
  }

  // After a feasible phase 1, pivots zero-valued basic artificials out in
  // favour of any non-artificial column with a usable entry. Rows where no
  // such column exists are redundant; their artificial stays basic at zero.
  void DriveOutArtificials() {
    Vector column;
    for (Eigen::Index r = 0; r < rows_; ++r) {
      if (!IsArtificial(basis_[r])) continue;
      const Eigen::RowVectorXd row = binv_.row(r);
      Eigen::Index best = -1;
      double best_magnitude = options_.pivot_tolerance * 1e2;
      for (Eigen::Index j = 0; j < first_artificial_; ++j) {
        if (is_basic_[j]) continue;
        const double entry = std::abs(ColumnDot(j, row.transpose()));
        if (entry > best_magnitude) {
          best_magnitude = entry;
          best = j;
        }
      }
      if (best >= 0) {
        x_basic_(r) = 0.0;
        LoadColumn(best, column);
        Pivot(best, r, binv_ * column);
      }
    }
    for (Eigen::Index j = first_artificial_; j < num_cols_; ++j) {
      locked_[j] = true;
    }
    Refine();
  }

  Vector PrimalPoint() const {
    Vector x = Vector::Zero(m_orig_);
    for (Eigen::Index i = 0; i < rows_; ++i) {
      if (basis_[i] < m_) x(kept_cols_[basis_[i]]) = std::max(x_basic_(i), 0.0);
    }
    return x;
  }

  Vector DualPoint() const {
    const Vector y = rows_ > 0 ? Duals() : Vector();
    Vector dual = Vector::Zero(problem_.num_constraints());
    for (Eigen::Index i = 0; i < kub_; ++i) dual(ub_rows_[i]) = y(i);
    for (Eigen::Index e = 0; e < keq_; ++e) {
      dual(problem_.b_ub.size() + eq_rows_[e]) = eq_sign_[e] * y(kub_ + e);
    }
    return dual;
  }

  bool HasImprovingEmptyColumn() const {
    for (Eigen::Index j : empty_cols_) {
      if (problem_.objective(j) < -options_.optimality_tolerance) return true;
    }
    return false;
  }

  Vector EmptyColumnRay() const {
    Vector ray = Vector::Zero(m_orig_);
    for (Eigen::Index j : empty_cols_) {
      if (problem_.objective(j) < -options_.optimality_tolerance) {
        ray(j) = 1.0;
        break;
      }
    }
    return ray;
  }

  const LpProblem& problem_;
  const LpOptions options_;
  Eigen::Index m_orig_ = 0;
  long max_iterations_ = 0;
  long bland_threshold_ = 0;

  std::vector<Eigen::Index> ub_rows_, eq_rows_, kept_cols_, empty_cols_;
  std::vector<Eigen::Index> knapsack_rows_;
  Eigen::Index kub_ = 0, keq_ = 0, rows_ = 0, m_ = 0;
  Matrix structural_;
  Vector b_;
  double b_scale_ = 0.0;
  std::vector<double> eq_sign_;
  bool has_ub_artificial_ = false;
  Eigen::Index ub_artificial_ = 0, first_artificial_ = 0,
               eq_artificial_base_ = 0, num_artificial_ = 0, num_cols_ = 0;

  std::vector<Eigen::Index> basis_;
  std::vector<bool> is_basic_, locked_;
  Matrix binv_;
  Vector x_basic_;
  Vector cost_;
  Vector ray_;
  double lower_bound_ = -std::numeric_limits<double>::infinity();
  long iterations_ = 0;
  int since_refactor_ = 0;
};

}  // namespace

LpSolution SolveLp(const LpProblem& problem, const LpOptions& options) {
  problem.Validate();
  RevisedSimplex simplex(problem, options);
  return simplex.Solve();
}

}  // namespace dantzig
