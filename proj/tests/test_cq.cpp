#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "mpvc/cq.hpp"
#include "oracles.hpp"

using namespace mpvc;

namespace {

Eigen::VectorXd pt(double a, double b) {
  Eigen::VectorXd x(2);
  x << a, b;
  return x;
}

// Independent recheck of a multiplier certificate: zero combination under the
// required sign pattern.
void recheck_multiplier_certificate(const ProblemInstance& prob, const Eigen::VectorXd& x,
                                    const MultiplierVector& m, bool enforce_signs) {
  EvalRecord rec = evaluate(prob, x);
  MultiplierVector z = m;
  z.alpha = 0.0;
  CHECK(stationarity_residual_vector(rec, z).lpNorm<Eigen::Infinity>() <= 1e-9);
  double total = m.lambda.lpNorm<1>() + m.mu.lpNorm<1>() + m.eta_G.lpNorm<1>() +
                 m.eta_H.lpNorm<1>();
  CHECK(total > 1e-9);
  if (!enforce_signs) return;
  IndexPartition part = partition_indices(prob, x);
  for (int i = 0; i < prob.m(); ++i) {
    if (part.contains(part.I_g, i))
      CHECK(m.lambda[i] >= -1e-12);
    else
      CHECK(std::abs(m.lambda[i]) <= 1e-12);
  }
  for (int i = 0; i < prob.q(); ++i) {
    bool active_G = part.contains(part.I_p0, i) || part.contains(part.I_00, i);
    if (active_G)
      CHECK(m.eta_G[i] >= -1e-12);
    else
      CHECK(std::abs(m.eta_G[i]) <= 1e-12);
    if (part.contains(part.I_plus(), i)) CHECK(std::abs(m.eta_H[i]) <= 1e-12);
    if (part.contains(part.I_0m, i)) CHECK(m.eta_H[i] >= -1e-12);
    if (part.contains(part.I_00, i)) CHECK(std::abs(m.eta_G[i] * m.eta_H[i]) <= 1e-12);
  }
}

const CqVerdict& find_verdict(const std::vector<CqVerdict>& vs, CqName name) {
  for (const auto& v : vs)
    if (v.name == name) return v;
  throw std::runtime_error("verdict missing");
}

}  // namespace

TEST_CASE("LICQ: P1 holds, P2 fails with a re-verifiable certificate") {
  const auto& p1 = registry_problem("P1");
  CHECK(check_licq(p1, pt(0, 0)).status == CqStatus::Holds);
  // no active constraints away from the corner: vacuous
  CHECK(check_licq(p1, pt(1, -1)).status == CqStatus::Holds);

  const auto& p2 = registry_problem("P2");
  CqVerdict v = check_licq(p2, pt(0, 0));
  REQUIRE(v.status == CqStatus::Fails);
  REQUIRE(v.multiplier_certificate.has_value());
  recheck_multiplier_certificate(p2, pt(0, 0), v.multiplier_certificate->mult, false);
}

TEST_CASE("MFCQ: strict direction on P1, failure with dual certificate on P2") {
  const auto& p1 = registry_problem("P1");
  CqVerdict a = check_mfcq(p1, pt(0, 0));
  CHECK(a.status == CqStatus::Holds);

  const auto& p2 = registry_problem("P2");
  CqVerdict b = check_mfcq(p2, pt(0, 0));
  REQUIRE(b.status == CqStatus::Fails);
  REQUIRE(b.multiplier_certificate.has_value());
  recheck_multiplier_certificate(p2, pt(0, 0), b.multiplier_certificate->mult, true);

  ProblemInstance unconstrained = parse_problem("vars: x1\nminimize: x1^2\n");
  Eigen::VectorXd o(1);
  o << 0.3;
  CHECK(check_mfcq(unconstrained, o).status == CqStatus::Holds);
}

TEST_CASE("GMFCQ: P1 holds, P2 fails with eta_H ray") {
  const auto& p1 = registry_problem("P1");
  CHECK(check_gmfcq(p1, pt(0, 0)).status == CqStatus::Holds);

  const auto& p2 = registry_problem("P2");
  CqVerdict v = check_gmfcq(p2, pt(0, 0));
  REQUIRE(v.status == CqStatus::Fails);
  REQUIRE(v.multiplier_certificate.has_value());
  const auto& m = v.multiplier_certificate->mult;
  CHECK(m.eta_H[0] > 0.0);
  CHECK(m.eta_H[1] > 0.0);
  CHECK(m.eta_H[0] == doctest::Approx(m.eta_H[1]));
  recheck_multiplier_certificate(p2, pt(0, 0), m, true);
}

TEST_CASE("sequential CQs: holds, unknown, and structural-friendly cases") {
  const auto& p1 = registry_problem("P1");
  CqVerdict q1 = check_sequential_cq(p1, pt(0, 0), CqName::Quasinormality);
  CHECK(q1.status == CqStatus::Holds);
  CHECK(q1.provenance == CqProvenance::ExactLP);

  const auto& p2 = registry_problem("P2");
  CqVerdict q2 = check_sequential_cq(p2, pt(0, 0), CqName::Quasinormality);
  CHECK(q2.status == CqStatus::Unknown);  // the witness requirements contradict

  const auto& p3 = registry_problem("P3");
  CqVerdict q3 = check_sequential_cq(p3, pt(0, -1), CqName::Pseudonormality);
  CHECK(q3.status == CqStatus::Holds);
}

TEST_CASE("sequential CQ failure certificates carry a witness") {
  // h = x1^2 at the origin: any mu != 0 annihilates the zero gradient and
  // mu * h(x) > 0 holds at every x != 0, so quasinormality fails
  ProblemInstance prob = parse_problem("vars: x1\nminimize: x1\nh: x1^2\n");
  Eigen::VectorXd o(1);
  o << 0.0;
  for (CqName name : {CqName::Quasinormality, CqName::Pseudonormality}) {
    CqVerdict v = check_sequential_cq(prob, o, name);
    REQUIRE(v.status == CqStatus::Fails);
    REQUIRE(v.multiplier_certificate.has_value());
    REQUIRE(v.multiplier_certificate->witness.has_value());
    recheck_multiplier_certificate(prob, o, v.multiplier_certificate->mult, true);
    // witness re-check: every point satisfies the strict condition
    const auto& m = v.multiplier_certificate->mult;
    for (const auto& w : v.multiplier_certificate->witness->points)
      CHECK(m.mu[0] * eval(prob.h[0], w) >= 1e-10);
  }
}

TEST_CASE("CPLD: exact, structural, and a sampled failure") {
  const auto& p1 = registry_problem("P1");
  CqVerdict a = check_cpld(p1, pt(0, 0));
  CHECK(a.status == CqStatus::Holds);
  CHECK(a.provenance == CqProvenance::ExactLP);

  const auto& p2 = registry_problem("P2");
  CqVerdict b = check_cpld(p2, pt(0, 0));
  CHECK(b.status == CqStatus::Holds);
  CHECK(b.provenance == CqProvenance::Structural);

  // H2's gradient rotates away from H1's as soon as x moves off the axis
  ProblemInstance crafted = parse_problem(
      "vars: x1 x2\n"
      "minimize: x1\n"
      "vanish: H = x1, G = x2\n"
      "vanish: H = x1 + x1*x2, G = x2\n");
  CqVerdict c = check_cpld(crafted, pt(0, 0));
  REQUIRE(c.status == CqStatus::Fails);
  REQUIRE(c.cpld_certificate.has_value());
  const auto& cert = *c.cpld_certificate;
  // re-verify: dependence at x with the certificate multiplier
  recheck_multiplier_certificate(crafted, pt(0, 0), cert.mult, false);
  // re-verify: full rank at the sampled point
  std::vector<Eigen::VectorXd> family;
  for (int i : cert.Ih) family.push_back(grad(crafted.h[i], cert.point));
  for (int i : cert.J0) family.push_back(grad(crafted.g[i], cert.point));
  for (int i : cert.L0H) family.push_back(grad(crafted.vanish[i].H, cert.point));
  for (int i : cert.L0G) family.push_back(grad(crafted.vanish[i].G, cert.point));
  Eigen::MatrixXd M(family.size(), 2);
  for (size_t j = 0; j < family.size(); ++j) M.row(j) = family[j].transpose();
  CHECK(rank_with_tol(M, 1e-9) == static_cast<int>(family.size()));
}

TEST_CASE("detect_structural flags") {
  StructuralReport p3 = detect_structural(registry_problem("P3"));
  CHECK(p3.flags.all_affine);
  CHECK(p3.linear_cq);
  CHECK(p3.pseudonormality_everywhere);

  StructuralReport p1 = detect_structural(registry_problem("P1"));
  CHECK(!p1.flags.all_affine);  // the objective is quadratic
  CHECK(p1.flags.all_G_linear);
  CHECK(p1.flags.all_H_linear);
  CHECK(p1.pseudonormality_everywhere);
  CHECK(p1.linear_cq);

  ProblemInstance gq = parse_problem("vars: x1\nminimize: x1\ng: x1^2\n");
  StructuralReport r = detect_structural(gq);
  CHECK(!r.flags.all_g_concave_or_linear);
  CHECK(!r.pseudonormality_everywhere);
  CHECK(!r.linear_cq);
}

TEST_CASE("check_all: P1 all seven hold") {
  auto verdicts = check_all(registry_problem("P1"), pt(0, 0));
  REQUIRE(verdicts.size() == 7);
  for (const auto& v : verdicts) CHECK(v.status == CqStatus::Holds);
}

TEST_CASE("check_all: P2 failures plus CPLD-implied quasinormality") {
  auto verdicts = check_all(registry_problem("P2"), pt(0, 0));
  CHECK(find_verdict(verdicts, CqName::LICQ).status == CqStatus::Fails);
  CHECK(find_verdict(verdicts, CqName::MFCQ).status == CqStatus::Fails);
  CHECK(find_verdict(verdicts, CqName::GMFCQ).status == CqStatus::Fails);
  const auto& cpld = find_verdict(verdicts, CqName::CPLD);
  CHECK(cpld.status == CqStatus::Holds);
  CHECK(cpld.provenance == CqProvenance::Structural);
  const auto& quasi = find_verdict(verdicts, CqName::Quasinormality);
  CHECK(quasi.status == CqStatus::Holds);
  CHECK(quasi.provenance == CqProvenance::Structural);  // by implication
}

TEST_CASE("check_all: P3 structural verdicts") {
  auto verdicts = check_all(registry_problem("P3"), pt(0, -1));
  CHECK(find_verdict(verdicts, CqName::LinearCQ).status == CqStatus::Holds);
  CHECK(find_verdict(verdicts, CqName::Pseudonormality).status == CqStatus::Holds);
}

TEST_CASE("lattice soundness over random feasible points") {
  std::mt19937_64 rng(71);
  auto chain_index = [](CqName n) -> int {
    switch (n) {
      case CqName::LICQ: return 0;
      case CqName::MFCQ: return 1;
      case CqName::GMFCQ: return 2;
      case CqName::Pseudonormality: return 3;
      case CqName::Quasinormality: return 4;
      default: return -1;
    }
  };
  for (const auto& prob : registry()) {
    for (int t = 0; t < 50; ++t) {
      Eigen::VectorXd x = mpvc::testing::sample_feasible(prob.name, rng);
      std::vector<CqVerdict> verdicts;
      // check_all itself throws on any chain contradiction
      REQUIRE_NOTHROW(verdicts = check_all(prob, x));
      for (const auto& up : verdicts) {
        for (const auto& down : verdicts) {
          int iu = chain_index(up.name), id = chain_index(down.name);
          if (iu < 0 || id < 0 || iu >= id) continue;
          if (up.status == CqStatus::Holds) CHECK(down.status != CqStatus::Fails);
        }
      }
      const auto& cpld = find_verdict(verdicts, CqName::CPLD);
      const auto& quasi = find_verdict(verdicts, CqName::Quasinormality);
      if (cpld.status == CqStatus::Holds) CHECK(quasi.status != CqStatus::Fails);
    }
  }
}

TEST_CASE("GMFCQ holds implies alpha-positive Fritz John at registry minimizers") {
  std::vector<std::pair<std::string, Eigen::VectorXd>> minimizers = {
      {"P1", pt(0, 0)}, {"P3", pt(0, -1)}};
  for (const auto& [name, x] : minimizers) {
    const auto& prob = registry_problem(name);
    REQUIRE(check_gmfcq(prob, x).status == CqStatus::Holds);
    auto fj = certify(prob, x, StationarityKind::FJ_M);
    REQUIRE(fj.has_value());
    CHECK(fj->alpha_positive);
  }
}

TEST_CASE("quasinormality stability diagnostic") {
  StabilityReport rep =
      quasinormality_stability(registry_problem("P1"), pt(0, 0), 0.2, 20, 99);
  CHECK(rep.sampled == 20);
  CHECK(rep.fails == 0);
  CHECK(rep.holds + rep.unknown == rep.sampled);
}
