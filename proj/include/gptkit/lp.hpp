#pragma once

// Dense two-phase simplex solver. Every convex decision procedure in the
// library (polytope membership, extremality, perfect distinguishability,
// hidden-variable decompositions) is phrased as one of these problems.

#include <Eigen/Dense>

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

namespace gptkit::lp {

/// Feasibility tolerance shared by the whole library.
inline constexpr double kTolerance = 1e-9;
/// Tolerance used when checking an infeasibility certificate.
inline constexpr double kCertificateTolerance = 1e-7;
inline constexpr std::size_t kDefaultPivotLimit = 1'000'000;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Status { Optimal, Infeasible, Unbounded };

const char* to_string(Status status);

/// maximize    objective . x
/// subject to  eq_matrix x   == eq_rhs
///             ineq_matrix x >= ineq_rhs
///             lower <= x <= upper
///
/// Bounds default to 0 <= x < inf. Use -kInf / kInf for free variables.
struct LpProblem {
  Eigen::VectorXd objective;
  Eigen::MatrixXd eq_matrix;
  Eigen::VectorXd eq_rhs;
  Eigen::MatrixXd ineq_matrix;
  Eigen::VectorXd ineq_rhs;
  std::vector<double> lower;
  std::vector<double> upper;

  LpProblem() = default;
  explicit LpProblem(Eigen::Index num_vars);

  Eigen::Index num_vars() const { return objective.size(); }

  void set_free(Eigen::Index var);
  void set_all_free();
  void add_equality(const Eigen::RowVectorXd& row, double rhs);
  void add_inequality(const Eigen::RowVectorXd& row, double rhs);
};

struct LpResult {
  Status status = Status::Infeasible;
  std::optional<Eigen::VectorXd> solution;  // present iff status == Optimal
  double objective_value = 0.0;
  std::size_t pivots = 0;
  /// For Infeasible results: max_j (y^T A)_j of the normalized Farkas vector
  /// y on the internal standard form (A x = b, x >= 0). Certified when
  /// <= kCertificateTolerance while y^T b > 0.
  double certificate_residual = 0.0;

  bool optimal() const { return status == Status::Optimal; }
};

/// Throws Error(DimensionMismatch) for inconsistent shapes and
/// Error(NumericalFailure) when the pivot limit is exceeded or a result
/// fails its post-check.
LpResult solve(const LpProblem& problem, std::size_t pivot_limit = kDefaultPivotLimit);

/// Largest constraint violation of x (bounds included); 0 when feasible.
double max_violation(const LpProblem& problem, const Eigen::VectorXd& x);

}  // namespace gptkit::lp
