#pragma once

#include <limits>
#include <string_view>
#include <vector>

#include "dantzig/data.h"

namespace dantzig {

// minimize objective' x  subject to  a_ub x <= b_ub,  a_eq x = b_eq,  x >= 0.
// An empty constraint block is a 0 x m matrix with an empty rhs.
struct LpProblem {
  Vector objective;
  Matrix a_ub;
  Vector b_ub;
  Matrix a_eq;
  Vector b_eq;

  Eigen::Index num_variables() const { return objective.size(); }
  Eigen::Index num_constraints() const { return b_ub.size() + b_eq.size(); }

  // Throws std::invalid_argument on inconsistent dimensions or non-finite data.
  void Validate() const;
};

// kCutoff only occurs when LpOptions::objective_cutoff is finite: the optimum
// is certified to be >= the cutoff and the solve stopped early.
enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kCutoff };

std::string_view ToString(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  Vector x;                    // primal point (optimal) or last vertex
  double objective_value = 0;  // objective' x when optimal
  // Multipliers ordered [ub rows, eq rows] with c - A'y >= 0 at optimality;
  // ub multipliers are <= 0.
  Vector dual;
  Vector ray;                  // improving direction when unbounded
  double lower_bound = 0;      // certified bound on the optimum (cutoff)
  long iterations = 0;
  // Final basis as column ids: j < num_variables() is a structural,
  // num_variables() + i the slack of ub row i. Empty when a basic
  // artificial remains.
  std::vector<Eigen::Index> basis;
};

enum class LpPricing { kDantzig, kDevex };

// kAuto runs dual simplex when there are no equality rows, the objective is
// nonnegative and the starting basis (LpOptions::initial_basis or the slack
// basis) is primal infeasible; otherwise two-phase primal simplex.
enum class LpAlgorithm { kAuto, kPrimal };

struct LpOptions {
  long max_iterations = 0;  // 0: 50 * (variables + constraints)
  double pivot_tolerance = 1e-10;
  double feasibility_tolerance = 1e-9;
  double optimality_tolerance = 1e-9;
  int refactor_interval = 128;
  LpPricing pricing = LpPricing::kDantzig;
  LpAlgorithm algorithm = LpAlgorithm::kAuto;

  // Stop once the optimum is certified >= objective_cutoff. The certificate
  // is a Lagrangian bound that needs finite upper bounds for variables with
  // a negative reduced cost: `implied_upper` (bounds valid at some optimum,
  // indexed like the variables), cutoff / c_j when every c_j >= 0, or a
  // ub row with nonnegative entries and rhs.
  double objective_cutoff = std::numeric_limits<double>::infinity();
  Vector implied_upper;
  int cutoff_check_interval = 16;

  // Warm start for dual simplex, typically LpSolution::basis of a problem
  // that differs only in b_ub. Ignored unless it is a nonsingular, nearly
  // dual feasible basis of this problem.
  std::vector<Eigen::Index> initial_basis;
};

// Dense revised simplex: two-phase primal, or dual simplex followed by a
// primal clean-up pass. Primal pricing is Dantzig or Devex; both fall back to
// Bland's rule after 2 * (variables + constraints) consecutive degenerate
// pivots. Infeasible and unbounded problems are reported through
// the status; exceeding the iteration cap throws LpIterationLimitError.
LpSolution SolveLp(const LpProblem& problem, const LpOptions& options = {});

// Exhaustive basis enumeration over the slack form. Test oracle only: requires
// variables + constraints <= 24 (throws std::invalid_argument otherwise).
// The dual and iterations fields are left empty.
LpSolution EnumerateVerticesOracle(const LpProblem& problem);

}  // namespace dantzig
