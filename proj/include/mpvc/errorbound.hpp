#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "mpvc/model.hpp"

namespace mpvc {

/// ||h(x)||_1 + ||g^+(x)||_1 + sum_i dist_Delta(G_i(x), H_i(x)).
double residual(const ProblemInstance& prob, const Eigen::VectorXd& x);

enum class DistanceMethod { Grid, Penalty };

/// Upper bound on the Euclidean distance from x to the feasible set.
/// Grid: spiral scan (step 1e-2, box half-width 5) plus segment bisection
/// refinement; requires n <= 3. Penalty: quadratic-penalty minimization of
/// ||w - x||^2 over the lifted constraints.
double dist_to_feasible(const ProblemInstance& prob, const Eigen::VectorXd& x,
                        DistanceMethod method);

struct ErrorBoundReport {
  Eigen::VectorXd center;
  double radius = 0.0;  // delta; samples are drawn in B(center, delta/2)
  int samples = 0;
  struct Sample {
    Eigen::VectorXd point;
    double residual = 0.0;
    double distance = 0.0;  // only for residual > 1e-12
    double ratio = 0.0;
  };
  std::vector<Sample> rows;   // infeasible samples only
  double sup_ratio = 0.0;
  int feasible_count = 0;
  bool vacuous = false;       // every sample was feasible
  DistanceMethod method{DistanceMethod::Grid};
  std::vector<std::string> notes;
};

ErrorBoundReport estimate_modulus(const ProblemInstance& prob, const Eigen::VectorXd& x,
                                  double delta, int samples, std::uint64_t seed);

}  // namespace mpvc
