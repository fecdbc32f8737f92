#pragma once

#include <Eigen/Core>
#include <utility>

#include "mpvc/error.hpp"

namespace mpvc {

// The vanishing-constraint pair sets:
//   Delta = {(a, b) : b >= 0, a*b <= 0}   (a plays G, b plays H)
//   K     = {(y, z) : y >= 0, y*z <= 0}   (componentwise factor of Omega)
// Both decompose into the quadrant sheet {first >= 0 axis ... } and a line
// sheet; closed forms below do explicit case analysis over the two sheets.

/// Exact l1 distance from (a, b) to Delta.
double dist_delta_l1(double a, double b);

/// sum_i max{0, -H_i, min{G_i, H_i}}; equals the summed l1 distances to Delta.
double phi_residual(const Eigen::VectorXd& G_vals, const Eigen::VectorXd& H_vals);

bool in_omega_pair(double y, double z, double tol);

/// Euclidean projection of (y, z) onto K; exact ties prefer the quadrant
/// sheet {y >= 0, z <= 0}.
std::pair<double, double> project_omega_pair(double y, double z);

/// Membership of (xi, zeta) in the limiting normal cone of K at (y, z).
bool in_limiting_normal(double y, double z, double xi, double zeta, double tol);

/// Membership of (xi, zeta) in the Fréchet normal cone of K at (y, z).
bool in_frechet_normal(double y, double z, double xi, double zeta, double tol);

}  // namespace mpvc
