// Acceptance suite: one pass/fail line per criterion. Exits nonzero if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <vector>

#include "json.hpp"
#include "mpvc/cli.hpp"
#include "mpvc/cq.hpp"
#include "mpvc/errorbound.hpp"
#include "mpvc/geometry.hpp"
#include "mpvc/penalty.hpp"
#include "mpvc/stationarity.hpp"
#include "oracles.hpp"

using namespace mpvc;
using mpvc::testing::grid_dist_delta_l1;
using mpvc::testing::grid_dist_omega_euclid;
using mpvc::testing::sample_feasible;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& what) {
  if (!cond) throw Failure(what);
}

Eigen::VectorXd pt(double a, double b) {
  Eigen::VectorXd x(2);
  x << a, b;
  return x;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- criterion 1: index partition over random feasible points -------------
void criterion_partition() {
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  for (const auto& prob : registry()) {
    for (int t = 0; t < 1000; ++t) {
      Eigen::VectorXd x = sample_feasible(prob.name, rng);
      require(is_feasible(prob, x, 1e-9), prob.name + ": sampler produced infeasible point");
      IndexPartition part = partition_indices(prob, x);
      std::vector<int> all;
      for (const auto* s : {&part.I_p0, &part.I_pm, &part.I_00, &part.I_0p, &part.I_0m})
        all.insert(all.end(), s->begin(), s->end());
      std::sort(all.begin(), all.end());
      require(static_cast<int>(all.size()) == prob.q(), prob.name + ": subsets overlap or miss");
      for (int i = 0; i < prob.q(); ++i)
        require(all[i] == i, prob.name + ": subsets do not cover {1..q}");
    }
  }
  double dt = seconds_since(t0);
  require(dt < 5.0, "partition suite took " + std::to_string(dt) + " s (budget 5 s)");
}

// ---- criterion 2: autodiff vs central differences --------------------------
void criterion_differentiation() {
  std::mt19937_64 rng(2025);
  for (const auto& prob : registry()) {
    std::vector<const Expression*> exprs{&prob.objective};
    for (const auto& e : prob.g) exprs.push_back(&e);
    for (const auto& e : prob.h) exprs.push_back(&e);
    for (const auto& vp : prob.vanish) {
      exprs.push_back(&vp.H);
      exprs.push_back(&vp.G);
    }
    for (const Expression* e : exprs) {
      for (int t = 0; t < 100; ++t) {
        Eigen::VectorXd x = mpvc::testing::random_point(prob.n, rng);
        Eigen::VectorXd ad = grad(*e, x);
        Eigen::VectorXd fd = finite_diff_grad(
            [&](const Eigen::VectorXd& w) { return eval(*e, w); }, x, 1e-6);
        for (int i = 0; i < prob.n; ++i) {
          double scale = std::max(std::abs(ad[i]), std::abs(fd[i]));
          bool ok = scale < 1e-2 ? std::abs(ad[i] - fd[i]) <= 1e-8
                                 : std::abs(ad[i] - fd[i]) / scale <= 1e-6;
          require(ok, prob.name + ": gradient mismatch vs finite differences");
        }
      }
    }
  }
}

// ---- criterion 3: geometry closed forms vs oracles -------------------------
void criterion_geometry() {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int t = 0; t < 1000; ++t) {
    double a = u(rng), b = u(rng);
    Eigen::VectorXd G(1), H(1);
    G << a;
    H << b;
    require(std::abs(dist_delta_l1(a, b) - phi_residual(G, H)) <= 1e-12,
            "dist_delta_l1 != phi_residual");
  }
  for (int t = 0; t < 500; ++t) {
    double a = u(rng), b = u(rng);
    double oracle = grid_dist_delta_l1(a, b);
    require(std::abs(dist_delta_l1(a, b) - oracle) <= 2e-3, "dist_delta_l1 vs grid oracle");
    double y = u(rng), z = u(rng);
    auto [py, pz] = project_omega_pair(y, z);
    double dist = std::hypot(y - py, z - pz);
    require(dist <= grid_dist_omega_euclid(y, z) + 2e-3, "projection vs grid oracle");
  }
}

// ---- criterion 4: normal-cone tables ---------------------------------------
void criterion_normal_cones() {
  const double tol = 1e-6;
  const std::vector<std::pair<double, double>> rows{
      {1.0, -1.0}, {1.5, 0.0}, {0.0, 0.0}, {0.0, -2.0}, {0.0, 2.0}};
  std::mt19937_64 rng(2027);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> ball(-0.1, 0.1);
  for (auto [y, z] : rows) {
    for (int t = 0; t < 100; ++t) {
      double xi = u(rng), zeta = u(rng);
      if (!in_frechet_normal(y, z, xi, zeta, tol)) continue;
      require(in_limiting_normal(y, z, xi, zeta, tol), "Frechet member not limiting");
      int used = 0, guard = 0;
      while (used < 200 && guard < 40000) {
        ++guard;
        auto [wy, wz] = project_omega_pair(y + ball(rng), z + ball(rng));
        double dy = wy - y, dz = wz - z;
        double nrm = std::hypot(dy, dz);
        if (nrm > 0.1 || nrm == 0.0) continue;
        ++used;
        require(xi * dy + zeta * dz <= 0.05 * nrm, "Frechet polar inequality violated");
      }
      require(used == 200, "could not draw 200 nearby feasible samples");
    }
  }
}

// ---- criterion 5: hand-derived certificates --------------------------------
void criterion_certificates() {
  const auto& p1 = registry_problem("P1");
  auto s = certify(p1, pt(0, 0), StationarityKind::S);
  require(s.has_value(), "P1/(0,0) S certificate missing");
  require(std::abs(s->mult.eta_H[0] - 1.0) <= 1e-9 && std::abs(s->mult.eta_G[0]) <= 1e-9,
          "P1/(0,0) S multipliers differ from (eta_H, eta_G) = (1, 0)");
  require(s->residual <= 1e-8, "P1 S residual above 1e-8");

  const auto& p3 = registry_problem("P3");
  auto m = certify(p3, pt(0, -1), StationarityKind::M);
  require(m.has_value(), "P3/(0,-1) M certificate missing");
  require(std::abs(m->mult.lambda[1] - 1.0) <= 1e-9 && std::abs(m->mult.eta_H[0] - 1.0) <= 1e-9,
          "P3/(0,-1) M multipliers differ from (lambda_2, eta_H) = (1, 1)");
  require(m->residual <= 1e-8, "P3 M residual above 1e-8");

  const auto& p4 = registry_problem("P4");
  for (auto kind : {StationarityKind::W, StationarityKind::M, StationarityKind::S})
    require(!certify(p4, pt(0, 0), kind).has_value(),
            "P4/(0,0) unexpectedly certified as stationary");
}

// ---- criterion 6: S => M => W on every certified registry point ------------
void criterion_implication_chain() {
  std::mt19937_64 rng(2028);
  std::vector<std::pair<std::string, Eigen::VectorXd>> points = {
      {"P1", pt(0, 0)}, {"P2", pt(0, 0)}, {"P3", pt(0, -1)}, {"P4", pt(0, 0)}};
  for (const auto& prob : registry())
    for (int t = 0; t < 25; ++t)
      points.emplace_back(prob.name, sample_feasible(prob.name, rng));
  int violations = 0;
  for (const auto& [name, x] : points) {
    const auto& prob = registry_problem(name);
    if (auto s = certify(prob, x, StationarityKind::S)) {
      Certificate as_m = *s, as_w = *s;
      as_m.kind = StationarityKind::M;
      as_w.kind = StationarityKind::W;
      if (!verify_certificate(prob, x, as_m)) ++violations;
      if (!verify_certificate(prob, x, as_w)) ++violations;
    }
    if (auto m = certify(prob, x, StationarityKind::M)) {
      Certificate as_w = *m;
      as_w.kind = StationarityKind::W;
      if (!verify_certificate(prob, x, as_w)) ++violations;
    }
  }
  require(violations == 0, std::to_string(violations) + " implication violations");
}

// ---- criterion 7: CQ verdict fixtures and lattice consistency --------------
void criterion_cq_verdicts() {
  auto find = [](const std::vector<CqVerdict>& vs, CqName n) -> const CqVerdict& {
    for (const auto& v : vs)
      if (v.name == n) return v;
    throw Failure("verdict missing");
  };

  auto p1v = check_all(registry_problem("P1"), pt(0, 0));
  for (auto name : {CqName::LICQ, CqName::MFCQ, CqName::GMFCQ, CqName::Quasinormality})
    require(find(p1v, name).status == CqStatus::Holds, "P1/(0,0) CQ expected Holds");

  const auto& p2 = registry_problem("P2");
  auto p2v = check_all(p2, pt(0, 0));
  for (auto name : {CqName::LICQ, CqName::MFCQ, CqName::GMFCQ}) {
    const CqVerdict& v = find(p2v, name);
    require(v.status == CqStatus::Fails, "P2/(0,0) CQ expected Fails");
    require(v.multiplier_certificate.has_value(), "P2 Fails without certificate");
    const MultiplierVector& mv = v.multiplier_certificate->mult;
    EvalRecord rec = evaluate(p2, pt(0, 0));
    MultiplierVector z = mv;
    z.alpha = 0.0;
    require(stationarity_residual_vector(rec, z).lpNorm<Eigen::Infinity>() <= 1e-9,
            "P2 certificate combination residual above 1e-9");
    require(mv.lambda.lpNorm<1>() + mv.mu.lpNorm<1>() + mv.eta_G.lpNorm<1>() +
                    mv.eta_H.lpNorm<1>() >
                1e-9,
            "P2 certificate is the zero multiplier");
  }
  const CqVerdict& cpld = find(p2v, CqName::CPLD);
  require(cpld.status == CqStatus::Holds && cpld.provenance == CqProvenance::Structural,
          "P2 CPLD expected Holds(structural)");
  const CqVerdict& quasi = find(p2v, CqName::Quasinormality);
  require(quasi.status == CqStatus::Holds && quasi.provenance == CqProvenance::Structural,
          "P2 quasinormality expected Holds by CPLD implication");

  // lattice consistency over random feasible points (check_all throws on
  // any upstream-Holds/downstream-Fails pair)
  std::mt19937_64 rng(2029);
  for (const auto& prob : registry())
    for (int t = 0; t < 50; ++t) check_all(prob, sample_feasible(prob.name, rng));
}

// ---- criterion 8: GMFCQ at minimizers forces alpha-positive Fritz John -----
void criterion_fj_alpha() {
  const std::vector<std::pair<std::string, Eigen::VectorXd>> minimizers = {
      {"P1", pt(0, 0)}, {"P3", pt(0, -1)}};
  for (const auto& [name, x] : minimizers) {
    const auto& prob = registry_problem(name);
    require(check_gmfcq(prob, x).status == CqStatus::Holds, name + ": GMFCQ expected Holds");
    auto fj = certify(prob, x, StationarityKind::FJ_M);
    require(fj.has_value(), name + ": FJ-M certificate missing at a local minimizer");
    require(fj->alpha_positive, name + ": FJ-M certificate has alpha = 0");
  }
}

// ---- criterion 9: penalty solver end to end --------------------------------
void criterion_penalty() {
  auto t0 = std::chrono::steady_clock::now();
  struct Run {
    std::string name;
    Eigen::VectorXd anchor, x0;
    std::function<void(const MultiplierVector&)> check_scaled;
  };
  std::vector<Run> runs;
  runs.push_back({"P1", pt(0, 0), pt(0.5, 0.5), [](const MultiplierVector& m) {
                    require(std::abs(m.eta_H[0] / m.alpha - 1.0) <= 1e-2,
                            "P1 scaled eta_H differs from the exact certificate");
                  }});
  runs.push_back({"P3", pt(0, -1), pt(0.3, -0.5), [](const MultiplierVector& m) {
                    require(std::abs(m.lambda[1] / m.alpha - 1.0) <= 1e-2,
                            "P3 scaled lambda_2 differs from the exact certificate");
                    require(std::abs(m.eta_H[0] / m.alpha - 1.0) <= 1e-2,
                            "P3 scaled eta_H differs from the exact certificate");
                  }});
  for (const auto& run : runs) {
    const auto& prob = registry_problem(run.name);
    PenaltyConfig cfg;
    cfg.anchor = run.anchor;
    PenaltyTrace trace = solve_penalty(prob, cfg, run.x0);
    require((trace.entries.back().point.x - run.anchor).norm() <= 1e-3,
            run.name + ": final iterate not within 1e-3 of the anchor");
    for (const auto& e : trace.entries) {
      require(e.F <= trace.anchor_objective + 1e-8, run.name + ": F_k above f(anchor)+1e-8");
      require(std::abs(e.mult.norm() - 1.0) <= 1e-10, run.name + ": multiplier norm off 1");
    }
    const MultiplierVector& m = trace.limit_multipliers();
    require(m.alpha > 1e-6, run.name + ": limit alpha not positive");
    EvalRecord rec = evaluate(prob, run.anchor);
    require(stationarity_residual_vector(rec, m).lpNorm<Eigen::Infinity>() <= 1e-4,
            run.name + ": limit multipliers violate the FJ-M system at 1e-4");
    run.check_scaled(m);
  }
  double dt = seconds_since(t0);
  require(dt < 30.0, "penalty runs took " + std::to_string(dt) + " s (budget 30 s)");
}

// ---- criterion 10: enhanced stationarity and the Unknown verdict -----------
void criterion_enhanced() {
  const auto& p1 = registry_problem("P1");
  EnhancedOutcome out = certify_enhanced(p1, pt(0, 0), StationarityKind::Enhanced_M);
  require(out.status == EnhancedOutcome::Status::Found, "P1 enhanced-M not certified");
  require(out.certificate.has_value() && out.certificate->witness.has_value(),
          "P1 enhanced-M certificate lacks a witness");
  const auto& cert = *out.certificate;
  const auto& wit = *cert.witness;
  require(wit.points.size() == 8, "witness does not have 8 radius levels");
  for (const auto& w : wit.points) {
    for (int i = 0; i < p1.q(); ++i) {
      if (std::abs(cert.mult.eta_H[i]) > 1e-12)
        require(-cert.mult.eta_H[i] * eval(p1.vanish[i].H, w) >= 1e-10,
                "witness margin below 1e-10 (eta_H)");
      if (cert.mult.eta_G[i] > 1e-12)
        require(cert.mult.eta_G[i] * eval(p1.vanish[i].G, w) >= 1e-10,
                "witness margin below 1e-10 (eta_G)");
    }
    for (int i = 0; i < p1.m(); ++i)
      if (cert.mult.lambda[i] > 1e-12)
        require(cert.mult.lambda[i] * eval(p1.g[i], w) >= 1e-10,
                "witness margin below 1e-10 (lambda)");
  }

  CqVerdict quasi =
      check_sequential_cq(registry_problem("P2"), pt(0, 0), CqName::Quasinormality);
  require(quasi.status == CqStatus::Unknown,
          std::string("P2 quasinormality expected Unknown, got ") +
              cq_status_str(quasi.status));
}

// ---- criterion 11: error-bound stability and residual coupling -------------
void criterion_errorbound() {
  const auto& p3 = registry_problem("P3");
  ErrorBoundReport a = estimate_modulus(p3, pt(0, -1), 1.0, 200, 11);
  ErrorBoundReport b = estimate_modulus(p3, pt(0, -1), 0.5, 200, 11);
  require(!a.vacuous && !b.vacuous, "P3 error-bound sampling vacuous");
  double hi = std::max(a.sup_ratio, b.sup_ratio);
  double lo = std::min(a.sup_ratio, b.sup_ratio);
  require(lo > 0.0 && hi / lo <= 2.0, "sup ratios differ by more than a factor 2");

  std::mt19937_64 rng(2030);
  for (const auto& prob : registry()) {
    for (int t = 0; t < 1000; ++t) {
      Eigen::VectorXd x = mpvc::testing::random_point(2, rng);
      bool feas = is_feasible(prob, x, 1e-9);
      bool zero = residual(prob, x) == 0.0;
      require(feas == zero, prob.name + ": residual zero-set differs from feasibility");
    }
  }
}

// ---- criterion 12: CLI determinism -----------------------------------------
void criterion_determinism() {
  auto invoke = [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = mpvc::run(args, out, err);
    require(code == 0, "CLI exited with " + std::to_string(code) + ": " + err.str());
    return out.str();
  };
  const std::string dir = MPVC_PROBLEMS_DIR;
  const std::vector<std::vector<std::string>> invocations = {
      {"classify", dir + "/p1.mpvc", "--point", "0,0", "--json"},
      {"certify", dir + "/p1.mpvc", "--point", "0,0", "--kind", "enh-m", "--seed", "5",
       "--json"},
      {"check-cq", dir + "/p2.mpvc", "--point", "0,0", "--cq", "all", "--seed", "5",
       "--json"},
      {"solve", dir + "/p3.mpvc", "--anchor", "0,-1", "--x0", "0.3,-0.5", "--json"},
      {"errorbound", dir + "/p3.mpvc", "--center", "0,-1", "--radius", "1", "--samples",
       "60", "--seed", "5", "--json"},
  };
  for (const auto& argv : invocations) {
    nlohmann::json a = nlohmann::json::parse(invoke(argv));
    nlohmann::json b = nlohmann::json::parse(invoke(argv));
    a.erase("timestamp");
    b.erase("timestamp");
    require(a.dump() == b.dump(), "repeated invocation differs beyond the timestamp");
  }
}

struct Criterion {
  int number;
  std::string summary;
  std::function<void()> fn;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "index partition over 1000 random feasible points per problem", criterion_partition},
      {2, "forward-mode gradients vs central finite differences", criterion_differentiation},
      {3, "Delta distance / phi residual / projection vs grid oracles", criterion_geometry},
      {4, "Frechet-vs-limiting normal cone tables and polar inequality", criterion_normal_cones},
      {5, "hand-derived stationarity certificates (P1, P3, P4)", criterion_certificates},
      {6, "S => M => W certificate implication chain", criterion_implication_chain},
      {7, "CQ verdict fixtures, certificates, and lattice consistency", criterion_cq_verdicts},
      {8, "alpha-positive Fritz John under GMFCQ at minimizers", criterion_fj_alpha},
      {9, "penalty solver convergence and multiplier recovery", criterion_penalty},
      {10, "enhanced stationarity witness and honest Unknown", criterion_enhanced},
      {11, "error-bound ratio stability and residual coupling", criterion_errorbound},
      {12, "byte-identical seeded CLI reports (timestamp excluded)", criterion_determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    try {
      c.fn();
      std::printf("[PASS] criterion %2d: %s\n", c.number, c.summary.c_str());
    } catch (const std::exception& e) {
      ++failures;
      std::printf("[FAIL] criterion %2d: %s\n       %s\n", c.number, c.summary.c_str(),
                  e.what());
    }
  }
  if (failures == 0)
    std::printf("all %zu acceptance criteria passed\n", criteria.size());
  else
    std::printf("%d acceptance criteria FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}
