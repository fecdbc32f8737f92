#include "mpvc/penalty.hpp"

#include <algorithm>
#include <cmath>

#include "mpvc/geometry.hpp"

namespace mpvc {

Eigen::VectorXd LiftedPoint::stacked() const {
  Eigen::VectorXd w(x.size() + y.size() + z.size());
  w << x, y, z;
  return w;
}

LiftedPoint LiftedPoint::unstack(const Eigen::VectorXd& w, int n, int q) {
  LiftedPoint p;
  p.x = w.head(n);
  p.y = w.segment(n, q);
  p.z = w.tail(q);
  return p;
}

const MultiplierVector& PenaltyTrace::limit_multipliers() const {
  if (entries.empty())
    throw Error(ErrorCode::PreconditionViolation, "empty penalty trace");
  return entries.back().mult;
}

LiftedPoint lift(const ProblemInstance& prob, const Eigen::VectorXd& x) {
  LiftedPoint p;
  p.x = x;
  p.y.resize(prob.q());
  p.z.resize(prob.q());
  for (int i = 0; i < prob.q(); ++i) {
    p.y[i] = eval(prob.vanish[i].H, x);
    p.z[i] = eval(prob.vanish[i].G, x);
  }
  return p;
}

namespace {

double penalty_value(const ProblemInstance& prob, const Eigen::VectorXd& anchor_lift,
                     double k, const Eigen::VectorXd& w) {
  const int n = prob.n, q = prob.q();
  Eigen::VectorXd x = w.head(n);
  double F = eval(prob.objective, x);
  for (int i = 0; i < prob.m(); ++i) {
    double gp = std::max(0.0, eval(prob.g[i], x));
    F += 0.5 * k * gp * gp;
  }
  for (int j = 0; j < prob.p(); ++j) {
    double hv = eval(prob.h[j], x);
    F += 0.5 * k * hv * hv;
  }
  for (int i = 0; i < q; ++i) {
    double ry = w[n + i] - eval(prob.vanish[i].H, x);
    double rz = w[n + q + i] - eval(prob.vanish[i].G, x);
    F += 0.5 * k * (ry * ry + rz * rz);
  }
  F += 0.5 * (w - anchor_lift).squaredNorm();
  return F;
}

// Diagonal curvature estimate of F_k; the penalty terms make the Hessian
// scale like k along the constraint normals, and an unscaled gradient step
// (~1/k after backtracking) freezes every other direction. Scaling the step
// direction by 1/D restores O(1) conditioning for these separable terms.
Eigen::VectorXd curvature_diagonal(const ProblemInstance& prob, double k,
                                   const Eigen::VectorXd& x) {
  const int n = prob.n, q = prob.q();
  Eigen::VectorXd d = Eigen::VectorXd::Ones(n + 2 * q);
  for (int i = 0; i < prob.m(); ++i) {
    auto [v, gr] = eval_with_grad(prob.g[i], x);
    if (v > 0.0) d.head(n) += k * gr.cwiseProduct(gr);
  }
  for (int j = 0; j < prob.p(); ++j) {
    auto [v, gr] = eval_with_grad(prob.h[j], x);
    (void)v;
    d.head(n) += k * gr.cwiseProduct(gr);
  }
  for (int i = 0; i < q; ++i) {
    Eigen::VectorXd Hg = grad(prob.vanish[i].H, x);
    Eigen::VectorXd Gg = grad(prob.vanish[i].G, x);
    d.head(n) += k * (Hg.cwiseProduct(Hg) + Gg.cwiseProduct(Gg));
    d[n + i] += k;
    d[n + q + i] += k;
  }
  return d;
}

// Projects (y_i, z_i) blocks onto K, then radially into the anchor ball; the
// scaling can leave K on the nonconvex seam, so the pair is alternated a few
// rounds and always ends on an Omega projection.
Eigen::VectorXd project_feasible(const Eigen::VectorXd& w_in,
                                 const Eigen::VectorXd& anchor_lift, double radius,
                                 int n, int q, bool* ball_active) {
  Eigen::VectorXd w = w_in;
  *ball_active = false;
  for (int round = 0; round < 5; ++round) {
    for (int i = 0; i < q; ++i) {
      auto [py, pz] = project_omega_pair(w[n + i], w[n + q + i]);
      w[n + i] = py;
      w[n + q + i] = pz;
    }
    double dist = (w - anchor_lift).norm();
    if (dist <= radius * (1.0 + 1e-12)) return w;
    *ball_active = true;
    w = anchor_lift + (radius / dist) * (w - anchor_lift);
  }
  for (int i = 0; i < q; ++i) {
    auto [py, pz] = project_omega_pair(w[n + i], w[n + q + i]);
    w[n + i] = py;
    w[n + q + i] = pz;
  }
  return w;
}

}  // namespace

std::pair<double, Eigen::VectorXd> penalty_value_grad(const ProblemInstance& prob,
                                                      const PenaltyConfig& cfg, double k,
                                                      const LiftedPoint& p) {
  if (k <= 0) throw Error(ErrorCode::PreconditionViolation, "penalty weight must be positive");
  const int n = prob.n, q = prob.q();
  LiftedPoint anchor = lift(prob, cfg.anchor);
  Eigen::VectorXd c = anchor.stacked();
  Eigen::VectorXd w = p.stacked();

  auto [fv, fg] = eval_with_grad(prob.objective, p.x);
  double F = fv;
  Eigen::VectorXd gx = fg;
  for (int i = 0; i < prob.m(); ++i) {
    auto [v, gr] = eval_with_grad(prob.g[i], p.x);
    double gp = std::max(0.0, v);
    F += 0.5 * k * gp * gp;
    if (gp > 0.0) gx += k * gp * gr;
  }
  for (int j = 0; j < prob.p(); ++j) {
    auto [v, gr] = eval_with_grad(prob.h[j], p.x);
    F += 0.5 * k * v * v;
    gx += k * v * gr;
  }
  Eigen::VectorXd gy(q), gz(q);
  for (int i = 0; i < q; ++i) {
    auto [Hv, Hg] = eval_with_grad(prob.vanish[i].H, p.x);
    auto [Gv, Gg] = eval_with_grad(prob.vanish[i].G, p.x);
    double ry = p.y[i] - Hv;
    double rz = p.z[i] - Gv;
    F += 0.5 * k * (ry * ry + rz * rz);
    gx -= k * ry * Hg;
    gx -= k * rz * Gg;
    gy[i] = k * ry;
    gz[i] = k * rz;
  }
  F += 0.5 * (w - c).squaredNorm();
  Eigen::VectorXd g(n + 2 * q);
  g << gx, gy, gz;
  g += w - c;
  return {F, g};
}

RecoveredMultipliers recover_multipliers(const ProblemInstance& prob,
                                         const PenaltyConfig& cfg, double k,
                                         const LiftedPoint& p) {
  (void)cfg;
  if (k <= 0) throw Error(ErrorCode::PreconditionViolation, "penalty weight must be positive");
  const int m = prob.m(), np = prob.p(), q = prob.q();
  Eigen::VectorXd a(m), b(np), cy(q), cz(q);
  for (int i = 0; i < m; ++i) a[i] = k * std::max(0.0, eval(prob.g[i], p.x));
  for (int j = 0; j < np; ++j) b[j] = k * eval(prob.h[j], p.x);
  for (int i = 0; i < q; ++i) {
    cy[i] = k * (p.y[i] - eval(prob.vanish[i].H, p.x));
    cz[i] = k * (p.z[i] - eval(prob.vanish[i].G, p.x));
  }
  double delta = std::sqrt(1.0 + a.squaredNorm() + b.squaredNorm() + cy.squaredNorm() +
                           cz.squaredNorm());
  RecoveredMultipliers r;
  r.delta = delta;
  r.mult.alpha = 1.0 / delta;
  r.mult.lambda = a / delta;
  r.mult.mu = b / delta;
  r.mult.eta_H = cy / delta;
  r.mult.eta_G = -cz / delta;  // reported in the Def-2.4 orientation
  return r;
}

PenaltyTrace solve_penalty(const ProblemInstance& prob, const PenaltyConfig& cfg,
                           const Eigen::VectorXd& x0) {
  if (cfg.anchor.size() != prob.n || x0.size() != prob.n)
    throw Error(ErrorCode::DimensionMismatch, "anchor/x0 dimension mismatch");
  if (cfg.radius <= 0)
    throw Error(ErrorCode::PreconditionViolation, "ball radius must be positive");
  for (size_t i = 1; i < cfg.schedule.size(); ++i)
    if (cfg.schedule[i] <= cfg.schedule[i - 1])
      throw Error(ErrorCode::PreconditionViolation, "penalty schedule must increase");

  const int n = prob.n, q = prob.q();
  LiftedPoint anchor = lift(prob, cfg.anchor);
  Eigen::VectorXd c = anchor.stacked();

  Eigen::VectorXd w0 = lift(prob, x0).stacked();
  if ((w0 - c).norm() > cfg.radius * (1.0 + 1e-9))
    throw Error(ErrorCode::PreconditionViolation,
                "x0 lift lies outside the ball around the anchor");

  PenaltyTrace trace;
  trace.anchor = cfg.anchor;
  trace.anchor_objective = eval(prob.objective, cfg.anchor);

  bool ball_flag = false;
  Eigen::VectorXd w = project_feasible(w0, c, cfg.radius, n, q, &ball_flag);

  for (double k : cfg.schedule) {
    const double tol = std::max(1e-9, 1e-3 / k);
    int iters = 0;
    double residual = std::numeric_limits<double>::infinity();
    bool exhausted = false;
    bool ball_active = false;

    for (; iters < cfg.inner_budget; ++iters) {
      auto [F, g] = penalty_value_grad(prob, cfg, k, LiftedPoint::unstack(w, n, q));
      if (!std::isfinite(F) || !g.allFinite())
        throw Error(ErrorCode::NonFiniteValue, "penalty objective became non-finite");

      bool ba = false;
      Eigen::VectorXd mapped = project_feasible(w - g, c, cfg.radius, n, q, &ba);
      residual = (w - mapped).lpNorm<Eigen::Infinity>();
      if (residual <= tol) break;

      Eigen::VectorXd dir =
          g.cwiseQuotient(curvature_diagonal(prob, k, w.head(n)));
      double t = 1.0;
      bool accepted = false;
      while (t >= 1e-18) {
        bool ba2 = false;
        Eigen::VectorXd cand = project_feasible(w - t * dir, c, cfg.radius, n, q, &ba2);
        double Fc = penalty_value(prob, c, k, cand);
        if (Fc <= F - cfg.armijo_slope * g.dot(w - cand)) {
          w = cand;
          ball_active = ball_active || ba2;
          accepted = true;
          break;
        }
        t *= cfg.armijo_factor;
      }
      if (!accepted) break;  // no descent step exists at double precision
    }
    if (iters >= cfg.inner_budget) exhausted = true;

    PenaltyTrace::Entry e;
    e.k = k;
    e.point = LiftedPoint::unstack(w, n, q);
    e.F = penalty_value(prob, c, k, w);
    double vg = 0.0;
    for (int i = 0; i < prob.m(); ++i)
      vg = std::max(vg, std::max(0.0, eval(prob.g[i], e.point.x)));
    double vh = 0.0;
    for (int j = 0; j < prob.p(); ++j)
      vh = std::max(vh, std::abs(eval(prob.h[j], e.point.x)));
    double vy = 0.0, vz = 0.0;
    for (int i = 0; i < q; ++i) {
      vy = std::max(vy, std::abs(e.point.y[i] - eval(prob.vanish[i].H, e.point.x)));
      vz = std::max(vz, std::abs(e.point.z[i] - eval(prob.vanish[i].G, e.point.x)));
    }
    e.viol_g = vg;
    e.viol_h = vh;
    e.viol_y = vy;
    e.viol_z = vz;
    RecoveredMultipliers rec = recover_multipliers(prob, cfg, k, e.point);
    e.mult = rec.mult;
    e.delta = rec.delta;
    e.inner_iterations = iters;
    e.inner_residual = residual;
    e.budget_exhausted = exhausted;
    e.ball_active = ball_active || (w - c).norm() >= cfg.radius - 1e-9;
    if (exhausted)
      trace.notes.push_back("inner budget exhausted at k = " + std::to_string(k));
    if (e.ball_active)
      trace.notes.push_back("ball constraint active at k = " + std::to_string(k) +
                            "; multiplier interpretation not claimed");
    trace.entries.push_back(std::move(e));
  }
  return trace;
}

TraceConditionReport verify_enhanced_on_trace(const ProblemInstance& prob,
                                              const Eigen::VectorXd& x_anchor,
                                              const MultiplierVector& limit_mult,
                                              const PenaltyTrace& trace) {
  if (trace.entries.empty())
    throw Error(ErrorCode::PreconditionViolation, "empty penalty trace");
  constexpr double kActive = 1e-12;
  TraceConditionReport rep;
  rep.vacuous = limit_mult.all_zero();
  const double f_star = eval(prob.objective, x_anchor);

  const size_t tail = std::min<size_t>(4, trace.entries.size());
  for (size_t idx = trace.entries.size() - tail; idx < trace.entries.size(); ++idx) {
    const auto& e = trace.entries[idx];
    TraceConditionReport::Row row;
    row.k = e.k;
    const Eigen::VectorXd& xk = e.point.x;
    row.descent = eval(prob.objective, xk) < f_star;
    row.g_ok = true;
    for (int i = 0; i < prob.m(); ++i)
      if (limit_mult.lambda[i] > kActive)
        row.g_ok = row.g_ok && limit_mult.lambda[i] * eval(prob.g[i], xk) > 0.0;
    row.h_ok = true;
    for (int j = 0; j < prob.p(); ++j)
      if (std::abs(limit_mult.mu[j]) > kActive)
        row.h_ok = row.h_ok && limit_mult.mu[j] * eval(prob.h[j], xk) > 0.0;
    row.H_ok = true;
    row.G_ok = true;
    for (int i = 0; i < prob.q(); ++i) {
      if (std::abs(limit_mult.eta_H[i]) > kActive)
        row.H_ok = row.H_ok && limit_mult.eta_H[i] * eval(prob.vanish[i].H, xk) < 0.0;
      if (limit_mult.eta_G[i] > kActive)
        row.G_ok = row.G_ok && limit_mult.eta_G[i] * eval(prob.vanish[i].G, xk) > 0.0;
    }
    if (rep.vacuous) row.g_ok = row.h_ok = row.H_ok = row.G_ok = true;
    row.all_ok = row.descent && row.g_ok && row.h_ok && row.H_ok && row.G_ok;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace mpvc
