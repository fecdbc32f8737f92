#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mpvc/model.hpp"
#include "mpvc/stationarity.hpp"

namespace mpvc {

/// A point of the lifted problem: (x, y, z) with y standing for H(x) and z
/// for G(x), constrained componentwise to K = {y >= 0, y z <= 0}.
struct LiftedPoint {
  Eigen::VectorXd x, y, z;

  Eigen::VectorXd stacked() const;
  static LiftedPoint unstack(const Eigen::VectorXd& w, int n, int q);
};

struct PenaltyConfig {
  Eigen::VectorXd anchor;         // reference solution candidate x*
  double radius = 1.0;            // trust ball around the anchor lift
  std::vector<double> schedule =  // geometric penalty weights
      {1e1, 1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8};
  int inner_budget = 2000;        // projected-gradient iterations per weight
  double armijo_slope = 1e-4;
  double armijo_factor = 0.5;
  std::uint64_t seed = 1729;      // reserved for randomized diagnostics
};

struct PenaltyTrace {
  struct Entry {
    double k = 0.0;
    LiftedPoint point;
    double F = 0.0;
    double viol_g = 0.0, viol_h = 0.0, viol_y = 0.0, viol_z = 0.0;  // residual norms
    MultiplierVector mult;  // normalized; alpha = 1/delta
    double delta = 0.0;
    int inner_iterations = 0;
    double inner_residual = 0.0;
    bool budget_exhausted = false;
    bool ball_active = false;
  };
  std::vector<Entry> entries;
  Eigen::VectorXd anchor;
  double anchor_objective = 0.0;
  std::vector<std::string> notes;

  const MultiplierVector& limit_multipliers() const;
};

LiftedPoint lift(const ProblemInstance& prob, const Eigen::VectorXd& x);

/// Value and gradient (in R^{n+2q}) of the penalized objective at weight k.
std::pair<double, Eigen::VectorXd> penalty_value_grad(const ProblemInstance& prob,
                                                      const PenaltyConfig& cfg, double k,
                                                      const LiftedPoint& p);

PenaltyTrace solve_penalty(const ProblemInstance& prob, const PenaltyConfig& cfg,
                           const Eigen::VectorXd& x0);

struct RecoveredMultipliers {
  MultiplierVector mult;  // alpha = 1/delta, eta_G reported with flipped sign
  double delta = 0.0;
};

RecoveredMultipliers recover_multipliers(const ProblemInstance& prob,
                                         const PenaltyConfig& cfg, double k,
                                         const LiftedPoint& p);

struct TraceConditionReport {
  struct Row {
    double k = 0.0;
    bool descent = false;  // f(x^k) < f(anchor)
    bool g_ok = false, h_ok = false, H_ok = false, G_ok = false;
    bool all_ok = false;
  };
  std::vector<Row> rows;  // trace tail, oldest first
  bool vacuous = false;   // limit multipliers all zero
};

TraceConditionReport verify_enhanced_on_trace(const ProblemInstance& prob,
                                              const Eigen::VectorXd& x_anchor,
                                              const MultiplierVector& limit_mult,
                                              const PenaltyTrace& trace);

}  // namespace mpvc
