#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "mpvc/expr.hpp"

namespace mpvc {

/// Values and gradients of all problem functions at one point.
struct EvalRecord {
  double f = 0.0;
  Eigen::VectorXd grad_f;
  Eigen::VectorXd g, h, G, H;          // constraint values
  Eigen::MatrixXd grad_g, grad_h;      // one row per constraint
  Eigen::MatrixXd grad_G, grad_H;      // one row per vanishing pair
};

/// The active-index partition at a feasible point. Vanishing-pair indices are
/// 0-based and the five subsets partition {0..q-1}.
struct IndexPartition {
  std::vector<int> I_g;                      // active inequalities
  std::vector<int> I_p0, I_pm;               // H > 0 with G = 0 / G < 0
  std::vector<int> I_00, I_0p, I_0m;         // H = 0 with G = 0 / > 0 / < 0
  std::vector<std::string> warnings;         // borderline classifications

  std::vector<int> I_plus() const;           // I_p0 ∪ I_pm
  std::vector<int> I_zero() const;           // I_00 ∪ I_0p ∪ I_0m
  bool contains(const std::vector<int>& set, int i) const;
};

inline constexpr double kDefaultActivityTol = 1e-6;

EvalRecord evaluate(const ProblemInstance& prob, const Eigen::VectorXd& x);

bool is_feasible(const ProblemInstance& prob, const Eigen::VectorXd& x, double tol);

IndexPartition partition_indices(const ProblemInstance& prob, const Eigen::VectorXd& x,
                                 double tol_act = kDefaultActivityTol);

/// Built-in problem registry used throughout the test suite and docs.
const std::vector<ProblemInstance>& registry();
const ProblemInstance& registry_problem(const std::string& name);  // "P1".."P4"

}  // namespace mpvc
