#include "mpvc/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace mpvc {

double dist_delta_l1(double a, double b) {
  // membership first: b >= 0 and (a <= 0 or b = 0)
  if (b >= 0.0 && (a <= 0.0 || b == 0.0)) return 0.0;
  // quadrant sheet {a <= 0, b >= 0}: move a down to 0, b up to 0
  double quad = std::max(a, 0.0) + std::max(-b, 0.0);
  // line sheet {b = 0}: a is free
  double line = std::abs(b);
  return std::min(quad, line);
}

double phi_residual(const Eigen::VectorXd& G_vals, const Eigen::VectorXd& H_vals) {
  if (G_vals.size() != H_vals.size())
    throw Error(ErrorCode::DimensionMismatch, "phi_residual: G/H length mismatch");
  double s = 0.0;
  for (Eigen::Index i = 0; i < G_vals.size(); ++i)
    s += std::max({0.0, -H_vals[i], std::min(G_vals[i], H_vals[i])});
  return s;
}

bool in_omega_pair(double y, double z, double tol) {
  return y >= -tol && y * z <= tol;
}

std::pair<double, double> project_omega_pair(double y, double z) {
  if (y >= 0.0 && (z <= 0.0 || y == 0.0)) return {y, z};
  // candidate on the quadrant sheet {y >= 0, z <= 0}
  double qy = std::max(y, 0.0), qz = std::min(z, 0.0);
  double dq = (y - qy) * (y - qy) + (z - qz) * (z - qz);
  // candidate on the line sheet {y = 0}
  double dl = y * y;
  return dq <= dl ? std::make_pair(qy, qz) : std::make_pair(0.0, z);
}

namespace {

[[noreturn]] void not_in_omega(double y, double z) {
  throw Error(ErrorCode::PointNotInOmega,
              "point (" + std::to_string(y) + ", " + std::to_string(z) +
                  ") is not in the vanishing-constraint set");
}

}  // namespace

bool in_limiting_normal(double y, double z, double xi, double zeta, double tol) {
  bool y0 = std::abs(y) <= tol;
  bool z0 = std::abs(z) <= tol;
  if (!y0 && y > tol) {
    if (z > tol) not_in_omega(y, z);
    if (z0) return std::abs(xi) <= tol && zeta >= -tol;   // y > 0, z = 0
    return std::abs(xi) <= tol && std::abs(zeta) <= tol;  // y > 0, z < 0
  }
  if (y < -tol) not_in_omega(y, z);
  if (z0)  // biactive corner
    return zeta >= -tol && std::abs(xi * zeta) <= tol;
  if (z < -tol) return xi <= tol && std::abs(zeta) <= tol;  // y = 0, z < 0
  return std::abs(zeta) <= tol;                             // y = 0, z > 0
}

bool in_frechet_normal(double y, double z, double xi, double zeta, double tol) {
  bool y0 = std::abs(y) <= tol;
  bool z0 = std::abs(z) <= tol;
  if (!y0 && y > tol) {
    if (z > tol) not_in_omega(y, z);
    if (z0) return std::abs(xi) <= tol && zeta >= -tol;
    return std::abs(xi) <= tol && std::abs(zeta) <= tol;
  }
  if (y < -tol) not_in_omega(y, z);
  if (z0 || z < -tol)  // biactive corner and {y = 0, z < 0} share one row
    return xi <= tol && std::abs(zeta) <= tol;
  return std::abs(zeta) <= tol;  // y = 0, z > 0
}

}  // namespace mpvc
