#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <vector>

#include "mpvc/error.hpp"

namespace mpvc {

/// Numerical rank by row echelon with partial pivoting. A pivot is accepted
/// iff |pivot| > max(tol * largest initial row norm, 1e-12).
int rank_with_tol(const Eigen::MatrixXd& M, double tol);

enum class VarSign { NonNegative, Free };

/// maximize objective . v  subject to  A_eq v = b_eq, A_le v <= b_le,
/// and v_k >= 0 for NonNegative variables.
struct LinearProgram {
  int num_vars = 0;
  Eigen::VectorXd objective;
  Eigen::MatrixXd A_eq;
  Eigen::VectorXd b_eq;
  Eigen::MatrixXd A_le;
  Eigen::VectorXd b_le;
  std::vector<VarSign> signs;

  static LinearProgram make(int nvars);
  void add_eq(const Eigen::VectorXd& row, double rhs);
  void add_le(const Eigen::VectorXd& row, double rhs);
};

struct LpOutcome {
  enum class Status { Optimal, Infeasible, Unbounded };
  Status status{Status::Infeasible};
  Eigen::VectorXd solution;  // valid when Optimal
  double value = 0.0;
};

/// Two-phase dense simplex with Bland's anticycling rule; deterministic.
/// Throws Error(IterationLimit) when the iteration cap is hit.
LpOutcome lp_solve(const LinearProgram& lp);

enum class ConeSign { NonNegative, Free, Zero };

/// Searches for a nonzero coefficient vector c with sum_k c_k col_k = 0
/// obeying the per-coefficient sign constraints, normalized so that the sum
/// of the split-nonnegative parts equals one. Returns std::nullopt iff only
/// the zero combination exists.
std::optional<Eigen::VectorXd> cone_nonzero(const std::vector<Eigen::VectorXd>& columns,
                                            const std::vector<ConeSign>& signs);

struct CaratheodoryResult {
  Eigen::VectorXd base_coeffs;                    // one per base vector
  std::vector<std::pair<int, double>> extras;     // (original index, coefficient)
};

/// Rewrites x = (base combination) + sum of extras so that the kept extras
/// retain their coefficient signs and base ∪ kept extras is linearly
/// independent. Preconditions: base independent and the input decomposition
/// valid (checked to residual 1e-8).
CaratheodoryResult caratheodory_reduce(
    const Eigen::VectorXd& x, const std::vector<Eigen::VectorXd>& base,
    const std::vector<std::pair<Eigen::VectorXd, double>>& extras);

/// Central finite differences, the derivative oracle used by tests.
Eigen::VectorXd finite_diff_grad(const std::function<double(const Eigen::VectorXd&)>& f,
                                 const Eigen::VectorXd& x, double h);

}  // namespace mpvc
