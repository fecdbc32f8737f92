#include "mpvc/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mpvc {

std::vector<int> IndexPartition::I_plus() const {
  std::vector<int> r = I_p0;
  r.insert(r.end(), I_pm.begin(), I_pm.end());
  std::sort(r.begin(), r.end());
  return r;
}

std::vector<int> IndexPartition::I_zero() const {
  std::vector<int> r = I_00;
  r.insert(r.end(), I_0p.begin(), I_0p.end());
  r.insert(r.end(), I_0m.begin(), I_0m.end());
  std::sort(r.begin(), r.end());
  return r;
}

bool IndexPartition::contains(const std::vector<int>& set, int i) const {
  return std::find(set.begin(), set.end(), i) != set.end();
}

EvalRecord evaluate(const ProblemInstance& prob, const Eigen::VectorXd& x) {
  if (x.size() != prob.n)
    throw Error(ErrorCode::DimensionMismatch,
                "point has dimension " + std::to_string(x.size()) + ", problem has " +
                    std::to_string(prob.n));
  EvalRecord r;
  const int m = prob.m(), p = prob.p(), q = prob.q();
  auto [fv, fg] = eval_with_grad(prob.objective, x);
  r.f = fv;
  r.grad_f = fg;
  r.g.resize(m);
  r.grad_g.resize(m, prob.n);
  for (int i = 0; i < m; ++i) {
    auto [v, gr] = eval_with_grad(prob.g[i], x);
    r.g[i] = v;
    r.grad_g.row(i) = gr;
  }
  r.h.resize(p);
  r.grad_h.resize(p, prob.n);
  for (int j = 0; j < p; ++j) {
    auto [v, gr] = eval_with_grad(prob.h[j], x);
    r.h[j] = v;
    r.grad_h.row(j) = gr;
  }
  r.G.resize(q);
  r.H.resize(q);
  r.grad_G.resize(q, prob.n);
  r.grad_H.resize(q, prob.n);
  for (int i = 0; i < q; ++i) {
    auto [hv, hg] = eval_with_grad(prob.vanish[i].H, x);
    auto [gv, gg] = eval_with_grad(prob.vanish[i].G, x);
    r.H[i] = hv;
    r.grad_H.row(i) = hg;
    r.G[i] = gv;
    r.grad_G.row(i) = gg;
  }
  return r;
}

bool is_feasible(const ProblemInstance& prob, const Eigen::VectorXd& x, double tol) {
  if (tol <= 0) throw Error(ErrorCode::PreconditionViolation, "tol must be positive");
  if (x.size() != prob.n)
    throw Error(ErrorCode::DimensionMismatch, "point dimension mismatch");
  for (const auto& gi : prob.g)
    if (eval(gi, x) > tol) return false;
  for (const auto& hj : prob.h)
    if (std::abs(eval(hj, x)) > tol) return false;
  for (const auto& vp : prob.vanish) {
    double H = eval(vp.H, x);
    if (H < -tol) return false;
    if (eval(vp.G, x) * H > tol) return false;
  }
  return true;
}

IndexPartition partition_indices(const ProblemInstance& prob, const Eigen::VectorXd& x,
                                 double tol_act) {
  if (tol_act <= 0)
    throw Error(ErrorCode::PreconditionViolation, "tol_act must be positive");
  IndexPartition part;
  EvalRecord r = evaluate(prob, x);

  auto borderline = [&](const char* what, int i, double v) {
    double a = std::abs(v);
    if (a > tol_act && a <= 2.0 * tol_act) {
      std::ostringstream os;
      os << "ambiguous activity: |" << what << "_" << (i + 1) << "| = " << a
         << " lies in (tol_act, 2*tol_act)";
      part.warnings.push_back(os.str());
    }
  };

  for (int i = 0; i < prob.m(); ++i)
    if (std::abs(r.g[i]) <= tol_act) part.I_g.push_back(i);

  for (int i = 0; i < prob.q(); ++i) {
    double H = r.H[i], G = r.G[i];
    borderline("H", i, H);
    borderline("G", i, G);
    bool H0 = std::abs(H) <= tol_act;
    bool G0 = std::abs(G) <= tol_act;
    if (!H0 && H > tol_act) {
      if (G0)
        part.I_p0.push_back(i);
      else if (G < -tol_act)
        part.I_pm.push_back(i);
      else {
        // H > 0 and G > 0 cannot happen at a feasible point
        part.warnings.push_back("pair " + std::to_string(i + 1) +
                                " has H > 0 and G > 0 (infeasible point?)");
        part.I_p0.push_back(i);
      }
    } else {
      if (H < -tol_act)
        part.warnings.push_back("pair " + std::to_string(i + 1) +
                                " has H < 0 (infeasible point?)");
      if (G0)
        part.I_00.push_back(i);
      else if (G > tol_act)
        part.I_0p.push_back(i);
      else
        part.I_0m.push_back(i);
    }
  }
  return part;
}

namespace {

ProblemInstance make(const std::string& name, const std::string& text) {
  ProblemInstance p = parse_problem(text);
  p.name = name;
  return p;
}

}  // namespace

const std::vector<ProblemInstance>& registry() {
  static const std::vector<ProblemInstance> reg = [] {
    std::vector<ProblemInstance> r;
    r.push_back(make("P1",
                     "vars: x1 x2\n"
                     "minimize: x1 + x2^2\n"
                     "vanish: H = x1, G = x2\n"));
    r.push_back(make("P2",
                     "vars: x1 x2\n"
                     "minimize: x1^2 + x2^2\n"
                     "vanish: H = x1, G = -1\n"
                     "vanish: H = -x1, G = -1\n"));
    r.push_back(make("P3",
                     "vars: x1 x2\n"
                     "minimize: x1 + x2\n"
                     "g: -x1 - 1\n"
                     "g: -x2 - 1\n"
                     "vanish: H = x1, G = x2 - 1\n"));
    r.push_back(make("P4",
                     "vars: x1 x2\n"
                     "minimize: x2 - x1\n"
                     "vanish: H = x1, G = x2\n"));
    return r;
  }();
  return reg;
}

const ProblemInstance& registry_problem(const std::string& name) {
  for (const auto& p : registry())
    if (p.name == name) return p;
  throw Error(ErrorCode::UsageError, "no registry problem named '" + name + "'");
}

}  // namespace mpvc
