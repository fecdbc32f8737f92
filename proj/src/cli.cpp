#include "mpvc/cli.hpp"

#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "mpvc/report.hpp"

namespace mpvc {

namespace {

using nlohmann::json;

Eigen::VectorXd parse_point(const std::string& csv) {
  std::vector<double> vals;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      double v = std::stod(item, &used);
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used])))
        ++used;
      if (used != item.size()) throw std::invalid_argument(item);
      vals.push_back(v);
    } catch (const std::exception&) {
      throw Error(ErrorCode::UsageError, "bad coordinate '" + item + "' in point");
    }
  }
  if (vals.empty()) throw Error(ErrorCode::UsageError, "empty point");
  Eigen::VectorXd x(vals.size());
  for (size_t i = 0; i < vals.size(); ++i) x[i] = vals[i];
  return x;
}

ProblemInstance load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::UsageError, "cannot open problem file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  ProblemInstance prob = parse_problem(ss.str());
  prob.name = path;
  return prob;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::SyntaxError:
    case ErrorCode::UnknownIdentifier:
    case ErrorCode::MissingPairPart:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::UsageError:
      return 2;
    case ErrorCode::InfeasiblePoint:
      return 4;
    default:
      return 3;  // numerical failure
  }
}

void require_feasible(const ProblemInstance& prob, const Eigen::VectorXd& x,
                      double tol_act) {
  if (!is_feasible(prob, x, tol_act))
    throw Error(ErrorCode::InfeasiblePoint, "supplied point is not feasible");
}

std::string fmt_vec(const Eigen::VectorXd& v) {
  std::ostringstream os;
  os << "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << "]";
  return os.str();
}

std::string fmt_set(const std::vector<int>& v) {
  std::ostringstream os;
  os << "{";
  for (size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << (v[i] + 1);
  os << "}";
  return os.str();
}

struct Options {
  bool json = false;
  double tol_act = kDefaultActivityTol;
  std::uint64_t seed = 1729;
  std::string file, point_csv, kind = "m", cq = "all", anchor_csv, x0_csv, center_csv;
  double radius = 1.0;
  double kmax = 1e8;
  int samples = 200;
  std::string csv_path;
};

void emit(const json& report, bool as_json, const std::string& text, std::ostream& out) {
  if (as_json)
    out << report.dump(2) << "\n";
  else
    out << text;
}

int cmd_classify(const Options& opt, std::ostream& out) {
  ProblemInstance prob = load_problem(opt.file);
  Eigen::VectorXd x = parse_point(opt.point_csv);
  json report = make_report_envelope(prob, "classify");
  report["inputs"] = {{"point", std::vector<double>(x.data(), x.data() + x.size())},
                      {"tol_act", opt.tol_act}};
  require_feasible(prob, x, opt.tol_act);
  IndexPartition part = partition_indices(prob, x, opt.tol_act);
  report["results"] = {{"feasible", true}, {"partition", to_json(part)}};
  for (const auto& w : part.warnings) report["warnings"].push_back(w);

  std::ostringstream text;
  text << "point " << fmt_vec(x) << " is feasible\n"
       << "  I_g  = " << fmt_set(part.I_g) << "\n"
       << "  I_+0 = " << fmt_set(part.I_p0) << "  I_+- = " << fmt_set(part.I_pm) << "\n"
       << "  I_00 = " << fmt_set(part.I_00) << "  I_0+ = " << fmt_set(part.I_0p)
       << "  I_0- = " << fmt_set(part.I_0m) << "\n";
  for (const auto& w : part.warnings) text << "  warning: " << w << "\n";
  emit(report, opt.json, text.str(), out);
  return 0;
}

int cmd_certify(const Options& opt, std::ostream& out) {
  ProblemInstance prob = load_problem(opt.file);
  Eigen::VectorXd x = parse_point(opt.point_csv);
  auto kind = kind_from_name(opt.kind);
  if (!kind) throw Error(ErrorCode::UsageError, "unknown kind '" + opt.kind + "'");
  json report = make_report_envelope(prob, "certify");
  report["inputs"] = {{"point", std::vector<double>(x.data(), x.data() + x.size())},
                      {"kind", opt.kind},
                      {"tol_act", opt.tol_act},
                      {"seed", opt.seed}};
  require_feasible(prob, x, opt.tol_act);

  std::ostringstream text;
  if (*kind == StationarityKind::Enhanced_M || *kind == StationarityKind::Enhanced_S) {
    WitnessParams wp;
    wp.seed = opt.seed;
    EnhancedOutcome outcome = certify_enhanced(prob, x, *kind, opt.tol_act, wp);
    const char* status = outcome.status == EnhancedOutcome::Status::Found     ? "found"
                         : outcome.status == EnhancedOutcome::Status::Unknown ? "unknown"
                                                                              : "none";
    report["results"]["status"] = status;
    if (outcome.certificate)
      report["results"]["certificate"] = to_json(*outcome.certificate);
    if (!outcome.note.empty()) report["results"]["note"] = outcome.note;
    text << opt.kind << " certification: " << status << "\n";
    if (outcome.certificate) {
      text << "  eta_H = " << fmt_vec(outcome.certificate->mult.eta_H)
           << ", eta_G = " << fmt_vec(outcome.certificate->mult.eta_G) << "\n";
      if (outcome.certificate->witness)
        text << "  witness levels: " << outcome.certificate->witness->points.size()
             << ", min margin " << outcome.certificate->witness->min_margin << "\n";
    }
  } else {
    auto cert = certify(prob, x, *kind, opt.tol_act);
    report["results"]["status"] = cert ? "found" : "none";
    if (cert) report["results"]["certificate"] = to_json(*cert);
    text << opt.kind << " certification: " << (cert ? "found" : "none") << "\n";
    if (cert) {
      text << "  lambda = " << fmt_vec(cert->mult.lambda)
           << ", mu = " << fmt_vec(cert->mult.mu) << "\n"
           << "  eta_G = " << fmt_vec(cert->mult.eta_G)
           << ", eta_H = " << fmt_vec(cert->mult.eta_H) << "\n"
           << "  residual = " << cert->residual << "\n";
      if (cert->kind == StationarityKind::FJ_M || cert->kind == StationarityKind::FJ_S)
        text << "  alpha = " << cert->mult.alpha
             << " (alpha_positive: " << (cert->alpha_positive ? "yes" : "no") << ")\n";
    }
  }
  emit(report, opt.json, text.str(), out);
  return 0;
}

int cmd_check_cq(const Options& opt, std::ostream& out) {
  ProblemInstance prob = load_problem(opt.file);
  Eigen::VectorXd x = parse_point(opt.point_csv);
  json report = make_report_envelope(prob, "check-cq");
  report["inputs"] = {{"point", std::vector<double>(x.data(), x.data() + x.size())},
                      {"cq", opt.cq},
                      {"tol_act", opt.tol_act},
                      {"seed", opt.seed}};
  require_feasible(prob, x, opt.tol_act);

  SequentialCqParams seq;
  seq.witness.seed = opt.seed;
  CpldParams cpld;
  cpld.seed = opt.seed;

  std::vector<CqVerdict> verdicts;
  if (opt.cq == "all") {
    CheckAllParams params;
    params.sequential = seq;
    params.cpld = cpld;
    verdicts = check_all(prob, x, opt.tol_act, params);
  } else {
    auto name = cq_from_name(opt.cq);
    if (!name) throw Error(ErrorCode::UsageError, "unknown cq '" + opt.cq + "'");
    switch (*name) {
      case CqName::LICQ: verdicts.push_back(check_licq(prob, x, opt.tol_act)); break;
      case CqName::MFCQ: verdicts.push_back(check_mfcq(prob, x, opt.tol_act)); break;
      case CqName::GMFCQ: verdicts.push_back(check_gmfcq(prob, x, opt.tol_act)); break;
      case CqName::Pseudonormality:
      case CqName::Quasinormality:
        verdicts.push_back(check_sequential_cq(prob, x, *name, opt.tol_act, seq));
        break;
      case CqName::CPLD:
        verdicts.push_back(check_cpld(prob, x, opt.tol_act, cpld));
        break;
      case CqName::LinearCQ: {
        StructuralReport sr = detect_structural(prob);
        CqVerdict v;
        v.name = CqName::LinearCQ;
        v.provenance = CqProvenance::Structural;
        v.status = sr.linear_cq ? CqStatus::Holds : CqStatus::Fails;
        v.notes.push_back(sr.linear_cq ? "every constraint function is linear"
                                       : "some constraint function is not linear");
        verdicts.push_back(v);
        break;
      }
    }
  }

  json vj = json::array();
  std::ostringstream text;
  for (const auto& v : verdicts) {
    vj.push_back(to_json(v));
    text << cq_name_str(v.name) << ": " << cq_status_str(v.status) << " ("
         << cq_provenance_str(v.provenance) << ")\n";
    for (const auto& note : v.notes) text << "    " << note << "\n";
  }
  report["results"]["verdicts"] = vj;
  emit(report, opt.json, text.str(), out);
  return 0;
}

int cmd_solve(const Options& opt, std::ostream& out) {
  ProblemInstance prob = load_problem(opt.file);
  PenaltyConfig cfg;
  cfg.anchor = parse_point(opt.anchor_csv);
  cfg.radius = opt.radius;
  cfg.seed = opt.seed;
  cfg.schedule.clear();
  for (double k = 10.0; k <= opt.kmax * (1.0 + 1e-12); k *= 10.0)
    cfg.schedule.push_back(k);
  if (cfg.schedule.empty())
    throw Error(ErrorCode::UsageError, "kmax must be at least 10");
  Eigen::VectorXd x0 = parse_point(opt.x0_csv);

  json report = make_report_envelope(prob, "solve");
  report["inputs"] = {
      {"anchor", std::vector<double>(cfg.anchor.data(), cfg.anchor.data() + cfg.anchor.size())},
      {"x0", std::vector<double>(x0.data(), x0.data() + x0.size())},
      {"radius", cfg.radius},
      {"kmax", opt.kmax},
      {"seed", opt.seed},
      {"tol_act", opt.tol_act}};

  PenaltyTrace trace = solve_penalty(prob, cfg, x0);
  TraceConditionReport cond =
      verify_enhanced_on_trace(prob, cfg.anchor, trace.limit_multipliers(), trace);
  report["results"]["trace"] = to_json(trace);
  report["results"]["condition_report"] = to_json(cond);
  for (const auto& note : trace.notes) report["warnings"].push_back(note);

  if (!opt.csv_path.empty()) {
    std::ofstream csv(opt.csv_path);
    if (!csv)
      throw Error(ErrorCode::UsageError, "cannot write csv '" + opt.csv_path + "'");
    csv << trace_to_csv(trace);
  }

  std::ostringstream text;
  const auto& last = trace.entries.back();
  text << "penalty run finished at k = " << last.k << "\n"
       << "  final x = " << fmt_vec(last.point.x)
       << "  (|x - anchor| = " << (last.point.x - trace.anchor).norm() << ")\n"
       << "  F_k = " << last.F << " vs f(anchor) = " << trace.anchor_objective << "\n"
       << "  alpha = " << last.mult.alpha << ", eta_H = " << fmt_vec(last.mult.eta_H)
       << ", eta_G = " << fmt_vec(last.mult.eta_G) << "\n";
  for (const auto& note : trace.notes) text << "  note: " << note << "\n";
  emit(report, opt.json, text.str(), out);
  return 0;
}

int cmd_errorbound(const Options& opt, std::ostream& out) {
  ProblemInstance prob = load_problem(opt.file);
  Eigen::VectorXd center = parse_point(opt.center_csv);
  json report = make_report_envelope(prob, "errorbound");
  report["inputs"] = {
      {"center", std::vector<double>(center.data(), center.data() + center.size())},
      {"radius", opt.radius},
      {"samples", opt.samples},
      {"seed", opt.seed},
      {"tol_act", opt.tol_act}};

  ErrorBoundReport eb = estimate_modulus(prob, center, opt.radius, opt.samples, opt.seed);
  report["results"]["errorbound"] = to_json(eb);
  for (const auto& note : eb.notes) report["warnings"].push_back(note);

  if (!opt.csv_path.empty()) {
    std::ofstream csv(opt.csv_path);
    if (!csv)
      throw Error(ErrorCode::UsageError, "cannot write csv '" + opt.csv_path + "'");
    csv << errorbound_to_csv(eb);
  }

  std::ostringstream text;
  text << "error-bound sampling around " << fmt_vec(center) << " (delta = " << eb.radius
       << ")\n"
       << "  infeasible samples: " << eb.rows.size()
       << ", feasible: " << eb.feasible_count << "\n"
       << "  sup dist/residual = " << eb.sup_ratio << " (method: "
       << (eb.method == DistanceMethod::Grid ? "grid" : "penalty") << ")\n";
  if (eb.vacuous) text << "  note: all samples feasible, report vacuous\n";
  emit(report, opt.json, text.str(), out);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"MPVC stationarity, constraint-qualification and error-bound toolkit"};
  app.name("mpvc");
  Options opt;
  app.add_flag("--json", opt.json, "emit a JSON report");
  app.add_option("--tol-act", opt.tol_act, "activity tolerance")->capture_default_str();
  app.add_option("--seed", opt.seed, "sampling seed")->capture_default_str();

  auto* classify = app.add_subcommand("classify", "partition the active index sets");
  classify->add_option("file", opt.file)->required();
  classify->add_option("--point", opt.point_csv)->required();

  auto* certify_cmd = app.add_subcommand("certify", "search for a stationarity certificate");
  certify_cmd->add_option("file", opt.file)->required();
  certify_cmd->add_option("--point", opt.point_csv)->required();
  certify_cmd->add_option("--kind", opt.kind, "w|m|s|fj-m|fj-s|enh-m|enh-s")->required();

  auto* checkcq = app.add_subcommand("check-cq", "verify constraint qualifications");
  checkcq->add_option("file", opt.file)->required();
  checkcq->add_option("--point", opt.point_csv)->required();
  checkcq->add_option("--cq", opt.cq, "all|licq|mfcq|gmfcq|pseudo|quasi|cpld|linear");

  auto* solve = app.add_subcommand("solve", "run the penalty scheme with multiplier recovery");
  solve->add_option("file", opt.file)->required();
  solve->add_option("--anchor", opt.anchor_csv)->required();
  solve->add_option("--x0", opt.x0_csv)->required();
  solve->add_option("--radius", opt.radius)->capture_default_str();
  solve->add_option("--kmax", opt.kmax)->capture_default_str();
  solve->add_option("--csv", opt.csv_path, "write per-k rows to this file");

  auto* errorbound = app.add_subcommand("errorbound", "estimate the local error-bound modulus");
  errorbound->add_option("file", opt.file)->required();
  errorbound->add_option("--center", opt.center_csv)->required();
  errorbound->add_option("--radius", opt.radius)->capture_default_str();
  errorbound->add_option("--samples", opt.samples)->capture_default_str();
  errorbound->add_option("--csv", opt.csv_path, "write per-sample rows to this file");

  app.require_subcommand(1);
  for (auto* sub : {classify, certify_cmd, checkcq, solve, errorbound})
    sub->fallthrough();  // global flags may follow subcommand arguments

  std::vector<const char*> argv;
  argv.push_back("mpvc");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (classify->parsed()) return cmd_classify(opt, out);
    if (certify_cmd->parsed()) return cmd_certify(opt, out);
    if (checkcq->parsed()) return cmd_check_cq(opt, out);
    if (solve->parsed()) return cmd_solve(opt, out);
    if (errorbound->parsed()) return cmd_errorbound(opt, out);
    err << "usage error: no subcommand\n";
    return 2;
  } catch (const Error& e) {
    int code = exit_code_for(e);
    if (opt.json) {
      json j;
      j["tool"] = kToolName;
      j["version"] = kToolVersion;
      j["error"] = {{"code", error_code_name(e.code())}, {"message", e.what()}};
      out << j.dump(2) << "\n";
    }
    err << "error: " << e.what() << "\n";
    return code;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace mpvc
