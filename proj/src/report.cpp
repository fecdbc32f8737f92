#include "mpvc/report.hpp"

#include <chrono>
#include <cstdint>
#include <iomanip>
#include <sstream>

namespace mpvc {

using nlohmann::json;

namespace {

json vec_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

std::string iso_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

}  // namespace

std::string problem_digest(const ProblemInstance& prob) {
  const std::string text = problem_to_text(prob);
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

json to_json(const IndexPartition& part) {
  auto one_based = [](const std::vector<int>& v) {
    json a = json::array();
    for (int i : v) a.push_back(i + 1);
    return a;
  };
  json j;
  j["I_g"] = one_based(part.I_g);
  j["I_+0"] = one_based(part.I_p0);
  j["I_+-"] = one_based(part.I_pm);
  j["I_00"] = one_based(part.I_00);
  j["I_0+"] = one_based(part.I_0p);
  j["I_0-"] = one_based(part.I_0m);
  j["warnings"] = part.warnings;
  return j;
}

json to_json(const MultiplierVector& m) {
  json j;
  j["alpha"] = m.alpha;
  j["lambda"] = vec_to_json(m.lambda);
  j["mu"] = vec_to_json(m.mu);
  j["eta_G"] = vec_to_json(m.eta_G);
  j["eta_H"] = vec_to_json(m.eta_H);
  if (!m.branch.empty()) {
    json b = json::array();
    for (auto side : m.branch)
      b.push_back(side == BiactiveSide::GSide ? "eta_G=0" : "eta_H=0");
    j["I_00_branch"] = b;
  }
  return j;
}

json to_json(const Witness& w) {
  json pts = json::array();
  for (const auto& p : w.points) pts.push_back(vec_to_json(p));
  json j;
  j["points"] = pts;
  j["radii"] = w.radii;
  j["min_margin"] = w.min_margin;
  return j;
}

json to_json(const Certificate& c) {
  json j;
  j["kind"] = kind_name(c.kind);
  j["multipliers"] = to_json(c.mult);
  j["residual"] = c.residual;
  j["alpha_positive"] = c.alpha_positive;
  j["all_zero_multipliers"] = c.all_zero_multipliers;
  if (c.witness) j["witness"] = to_json(*c.witness);
  j["notes"] = c.notes;
  return j;
}

json to_json(const CqVerdict& v) {
  json j;
  j["cq"] = cq_name_str(v.name);
  j["status"] = cq_status_str(v.status);
  j["provenance"] = cq_provenance_str(v.provenance);
  if (v.multiplier_certificate) {
    json c;
    c["multipliers"] = to_json(v.multiplier_certificate->mult);
    c["residual"] = v.multiplier_certificate->residual;
    if (v.multiplier_certificate->witness)
      c["witness"] = to_json(*v.multiplier_certificate->witness);
    j["certificate"] = c;
  }
  if (v.cpld_certificate) {
    const auto& c = *v.cpld_certificate;
    json cj;
    auto one_based = [](const std::vector<int>& v2) {
      json a = json::array();
      for (int i : v2) a.push_back(i + 1);
      return a;
    };
    cj["J_0"] = one_based(c.J0);
    cj["I_h"] = one_based(c.Ih);
    cj["L_0^H"] = one_based(c.L0H);
    cj["L_0^G"] = one_based(c.L0G);
    cj["multipliers"] = to_json(c.mult);
    cj["point"] = vec_to_json(c.point);
    cj["rank_at_point"] = c.rank_at_point;
    j["certificate"] = cj;
  }
  j["notes"] = v.notes;
  return j;
}

json to_json(const PenaltyTrace& t) {
  json entries = json::array();
  for (const auto& e : t.entries) {
    json ej;
    ej["k"] = e.k;
    ej["x"] = vec_to_json(e.point.x);
    ej["y"] = vec_to_json(e.point.y);
    ej["z"] = vec_to_json(e.point.z);
    ej["F"] = e.F;
    ej["violations"] = {{"g", e.viol_g}, {"h", e.viol_h}, {"y", e.viol_y}, {"z", e.viol_z}};
    ej["multipliers"] = to_json(e.mult);
    ej["delta"] = e.delta;
    ej["inner_iterations"] = e.inner_iterations;
    ej["inner_residual"] = e.inner_residual;
    ej["budget_exhausted"] = e.budget_exhausted;
    ej["ball_active"] = e.ball_active;
    entries.push_back(ej);
  }
  json j;
  j["anchor"] = vec_to_json(t.anchor);
  j["anchor_objective"] = t.anchor_objective;
  j["entries"] = entries;
  if (!t.entries.empty()) j["limit_multipliers"] = to_json(t.limit_multipliers());
  j["notes"] = t.notes;
  return j;
}

json to_json(const ErrorBoundReport& r) {
  json rows = json::array();
  for (const auto& s : r.rows) {
    json sj;
    sj["point"] = vec_to_json(s.point);
    sj["residual"] = s.residual;
    sj["distance"] = s.distance;
    sj["ratio"] = s.ratio;
    rows.push_back(sj);
  }
  json j;
  j["center"] = vec_to_json(r.center);
  j["radius"] = r.radius;
  j["samples"] = r.samples;
  j["rows"] = rows;
  j["sup_ratio"] = r.sup_ratio;
  j["feasible_count"] = r.feasible_count;
  j["vacuous"] = r.vacuous;
  j["method"] = r.method == DistanceMethod::Grid ? "grid" : "penalty";
  j["notes"] = r.notes;
  return j;
}

json to_json(const TraceConditionReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    json rj;
    rj["k"] = row.k;
    rj["descent"] = row.descent;
    rj["g_ok"] = row.g_ok;
    rj["h_ok"] = row.h_ok;
    rj["H_ok"] = row.H_ok;
    rj["G_ok"] = row.G_ok;
    rj["all_ok"] = row.all_ok;
    rows.push_back(rj);
  }
  json j;
  j["rows"] = rows;
  j["vacuous"] = r.vacuous;
  return j;
}

std::string trace_to_csv(const PenaltyTrace& t) {
  std::ostringstream os;
  os << "k,F_k,dist_to_anchor,alpha_k,lambda_norm,mu_norm,eta_H_norm,eta_G_norm\n";
  os.precision(17);
  for (const auto& e : t.entries) {
    os << e.k << "," << e.F << "," << (e.point.x - t.anchor).norm() << ","
       << e.mult.alpha << "," << e.mult.lambda.norm() << "," << e.mult.mu.norm() << ","
       << e.mult.eta_H.norm() << "," << e.mult.eta_G.norm() << "\n";
  }
  return os.str();
}

std::string errorbound_to_csv(const ErrorBoundReport& r) {
  std::ostringstream os;
  os << "residual,distance,ratio";
  for (Eigen::Index i = 0; i < r.center.size(); ++i) os << ",x" << (i + 1);
  os << "\n";
  os.precision(17);
  for (const auto& s : r.rows) {
    os << s.residual << "," << s.distance << "," << s.ratio;
    for (Eigen::Index i = 0; i < s.point.size(); ++i) os << "," << s.point[i];
    os << "\n";
  }
  return os.str();
}

json make_report_envelope(const ProblemInstance& prob, const std::string& command) {
  json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["timestamp"] = iso_timestamp();
  j["command"] = command;
  j["problem"] = {{"digest", problem_digest(prob)},
                  {"name", prob.name},
                  {"n", prob.n},
                  {"m", prob.m()},
                  {"p", prob.p()},
                  {"q", prob.q()}};
  j["warnings"] = json::array();
  j["error"] = nullptr;
  return j;
}

}  // namespace mpvc
