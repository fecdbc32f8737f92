#include "mpvc/errorbound.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mpvc/geometry.hpp"

namespace mpvc {

double residual(const ProblemInstance& prob, const Eigen::VectorXd& x) {
  double r = 0.0;
  for (const auto& hj : prob.h) r += std::abs(eval(hj, x));
  for (const auto& gi : prob.g) r += std::max(0.0, eval(gi, x));
  for (const auto& vp : prob.vanish)
    r += dist_delta_l1(eval(vp.G, x), eval(vp.H, x));
  return r;
}

namespace {

constexpr double kGridStep = 1e-2;
constexpr double kGridHalfWidth = 5.0;
constexpr double kFeasTol = 1e-9;

// Enumerates the Chebyshev shell {max_j |i_j| = c} of Z^n, n <= 3.
template <typename F>
void for_each_shell_point(int n, int c, F&& fn) {
  if (n == 1) {
    if (c == 0) {
      fn(std::array<int, 3>{0, 0, 0});
    } else {
      fn(std::array<int, 3>{c, 0, 0});
      fn(std::array<int, 3>{-c, 0, 0});
    }
    return;
  }
  if (n == 2) {
    for (int a = -c; a <= c; ++a)
      for (int b = -c; b <= c; ++b)
        if (std::max(std::abs(a), std::abs(b)) == c) fn(std::array<int, 3>{a, b, 0});
    return;
  }
  for (int a = -c; a <= c; ++a)
    for (int b = -c; b <= c; ++b)
      for (int d = -c; d <= c; ++d)
        if (std::max({std::abs(a), std::abs(b), std::abs(d)}) == c)
          fn(std::array<int, 3>{a, b, d});
}

double refine_toward(const ProblemInstance& prob, const Eigen::VectorXd& x,
                     const Eigen::VectorXd& w) {
  // minimal feasible point along [x, w]; w is feasible so the bisection is
  // well defined. Resolution well below the promised 1e-4.
  double lo = 0.0, hi = 1.0;
  const double len = (w - x).norm();
  if (len == 0.0) return 0.0;
  while ((hi - lo) * len > 1e-9) {
    double mid = 0.5 * (lo + hi);
    if (is_feasible(prob, x + mid * (w - x), kFeasTol))
      hi = mid;
    else
      lo = mid;
  }
  return hi * len;
}

double dist_grid(const ProblemInstance& prob, const Eigen::VectorXd& x) {
  if (prob.n > 3)
    throw Error(ErrorCode::PreconditionViolation, "grid method requires n <= 3");
  if (is_feasible(prob, x, kFeasTol)) return 0.0;

  const int max_c = static_cast<int>(std::round(kGridHalfWidth / kGridStep));
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, Eigen::VectorXd>> candidates;

  Eigen::VectorXd w(prob.n);
  for (int c = 0; c <= max_c; ++c) {
    if (c * kGridStep > best) break;  // every further shell is farther away
    for_each_shell_point(prob.n, c, [&](const std::array<int, 3>& idx) {
      for (int j = 0; j < prob.n; ++j) w[j] = x[j] + kGridStep * idx[j];
      double d = (w - x).norm();
      if (d >= best) return;
      if (!is_feasible(prob, w, kFeasTol)) return;
      best = d;
      candidates.emplace_back(d, w);
    });
  }
  if (!std::isfinite(best))
    throw Error(ErrorCode::NoFeasiblePoint,
                "no feasible grid point within the search box");

  std::sort(candidates.begin(), candidates.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  double refined = best;
  const size_t tries = std::min<size_t>(candidates.size(), 5);
  for (size_t i = 0; i < tries; ++i)
    refined = std::min(refined, refine_toward(prob, x, candidates[i].second));
  return refined;
}

double dist_penalty(const ProblemInstance& prob, const Eigen::VectorXd& x) {
  const int n = prob.n, q = prob.q();
  // lifted quadratic penalty for min ||w - x||^2 over the feasible set
  auto value = [&](const Eigen::VectorXd& v, double k) {
    Eigen::VectorXd w = v.head(n);
    double F = (w - x).squaredNorm();
    for (int i = 0; i < prob.m(); ++i) {
      double gp = std::max(0.0, eval(prob.g[i], w));
      F += 0.5 * k * gp * gp;
    }
    for (int j = 0; j < prob.p(); ++j) {
      double hv = eval(prob.h[j], w);
      F += 0.5 * k * hv * hv;
    }
    for (int i = 0; i < q; ++i) {
      double ry = v[n + i] - eval(prob.vanish[i].H, w);
      double rz = v[n + q + i] - eval(prob.vanish[i].G, w);
      F += 0.5 * k * (ry * ry + rz * rz);
    }
    return F;
  };
  auto gradient = [&](const Eigen::VectorXd& v, double k) {
    Eigen::VectorXd w = v.head(n);
    Eigen::VectorXd gx = 2.0 * (w - x);
    Eigen::VectorXd gy(q), gz(q);
    for (int i = 0; i < prob.m(); ++i) {
      auto [gv, gg] = eval_with_grad(prob.g[i], w);
      if (gv > 0.0) gx += k * gv * gg;
    }
    for (int j = 0; j < prob.p(); ++j) {
      auto [hv, hg] = eval_with_grad(prob.h[j], w);
      gx += k * hv * hg;
    }
    for (int i = 0; i < q; ++i) {
      auto [Hv, Hg] = eval_with_grad(prob.vanish[i].H, w);
      auto [Gv, Gg] = eval_with_grad(prob.vanish[i].G, w);
      double ry = v[n + i] - Hv;
      double rz = v[n + q + i] - Gv;
      gx -= k * ry * Hg;
      gx -= k * rz * Gg;
      gy[i] = k * ry;
      gz[i] = k * rz;
    }
    Eigen::VectorXd g(n + 2 * q);
    g << gx, gy, gz;
    return g;
  };
  auto project = [&](Eigen::VectorXd v) {
    for (int i = 0; i < q; ++i) {
      auto [py, pz] = project_omega_pair(v[n + i], v[n + q + i]);
      v[n + i] = py;
      v[n + q + i] = pz;
    }
    return v;
  };

  Eigen::VectorXd v(n + 2 * q);
  v.head(n) = x;
  for (int i = 0; i < q; ++i) {
    v[n + i] = eval(prob.vanish[i].H, x);
    v[n + q + i] = eval(prob.vanish[i].G, x);
  }
  v = project(v);

  for (double k : {1e1, 1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8}) {
    const double tol = std::max(1e-9, 1e-3 / k);
    for (int iter = 0; iter < 500; ++iter) {
      double F = value(v, k);
      Eigen::VectorXd g = gradient(v, k);
      if (!std::isfinite(F) || !g.allFinite())
        throw Error(ErrorCode::NonFiniteValue, "distance penalty became non-finite");
      Eigen::VectorXd mapped = project(v - g);
      if ((v - mapped).lpNorm<Eigen::Infinity>() <= tol) break;
      double t = 1.0;
      bool accepted = false;
      while (t >= 1e-18) {
        Eigen::VectorXd cand = project(v - t * g);
        if (value(cand, k) <= F - 1e-4 * g.dot(v - cand)) {
          v = cand;
          accepted = true;
          break;
        }
        t *= 0.5;
      }
      if (!accepted) break;
    }
  }
  return (v.head(n) - x).norm();
}

}  // namespace

double dist_to_feasible(const ProblemInstance& prob, const Eigen::VectorXd& x,
                        DistanceMethod method) {
  if (x.size() != prob.n)
    throw Error(ErrorCode::DimensionMismatch, "point dimension mismatch");
  return method == DistanceMethod::Grid ? dist_grid(prob, x) : dist_penalty(prob, x);
}

ErrorBoundReport estimate_modulus(const ProblemInstance& prob, const Eigen::VectorXd& x,
                                  double delta, int samples, std::uint64_t seed) {
  if (delta <= 0) throw Error(ErrorCode::PreconditionViolation, "delta must be positive");
  if (!is_feasible(prob, x, kDefaultActivityTol))
    throw Error(ErrorCode::InfeasiblePoint, "error-bound center must be feasible");

  ErrorBoundReport rep;
  rep.center = x;
  rep.radius = delta;
  rep.samples = samples;
  rep.method = prob.n <= 3 ? DistanceMethod::Grid : DistanceMethod::Penalty;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd dir(prob.n);
    for (int i = 0; i < prob.n; ++i) dir[i] = gauss(rng);
    double nrm = dir.norm();
    if (nrm == 0.0) continue;
    double rad = (delta / 2.0) * std::pow(unif(rng), 1.0 / prob.n);
    Eigen::VectorXd w = x + (rad / nrm) * dir;

    double res = residual(prob, w);
    if (res <= 1e-12) {
      ++rep.feasible_count;
      continue;
    }
    ErrorBoundReport::Sample row;
    row.point = w;
    row.residual = res;
    row.distance = dist_to_feasible(prob, w, rep.method);
    row.ratio = row.distance / res;
    rep.sup_ratio = std::max(rep.sup_ratio, row.ratio);
    rep.rows.push_back(std::move(row));
  }
  rep.vacuous = rep.rows.empty();
  if (rep.vacuous)
    rep.notes.push_back("all samples were feasible; no ratios to report");
  return rep;
}

}  // namespace mpvc
