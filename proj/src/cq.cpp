#include "mpvc/cq.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

namespace mpvc {

const char* cq_name_str(CqName n) {
  switch (n) {
    case CqName::LICQ: return "licq";
    case CqName::MFCQ: return "mfcq";
    case CqName::GMFCQ: return "gmfcq";
    case CqName::Pseudonormality: return "pseudonormality";
    case CqName::Quasinormality: return "quasinormality";
    case CqName::CPLD: return "cpld";
    case CqName::LinearCQ: return "linear";
  }
  return "?";
}

std::optional<CqName> cq_from_name(const std::string& s) {
  if (s == "licq") return CqName::LICQ;
  if (s == "mfcq") return CqName::MFCQ;
  if (s == "gmfcq") return CqName::GMFCQ;
  if (s == "pseudo" || s == "pseudonormality") return CqName::Pseudonormality;
  if (s == "quasi" || s == "quasinormality") return CqName::Quasinormality;
  if (s == "cpld") return CqName::CPLD;
  if (s == "linear") return CqName::LinearCQ;
  return std::nullopt;
}

const char* cq_status_str(CqStatus s) {
  switch (s) {
    case CqStatus::Holds: return "holds";
    case CqStatus::Fails: return "fails";
    case CqStatus::Unknown: return "unknown";
  }
  return "?";
}

const char* cq_provenance_str(CqProvenance p) {
  switch (p) {
    case CqProvenance::Structural: return "structural";
    case CqProvenance::ExactLP: return "exact_lp";
    case CqProvenance::Sampled: return "sampled";
  }
  return "?";
}

namespace {

using Role = MultiplierSystem::Role;

// One candidate multiplier column of a cone system. eta_H columns are stored
// as -grad H so that a coefficient c always maps to the multiplier value c.
struct ConeCol {
  Role role;
  int index;
  Eigen::VectorXd col;
  ConeSign sign;
};

MultiplierVector assemble_from_cone(const ProblemInstance& prob,
                                    const std::vector<ConeCol>& cols,
                                    const Eigen::VectorXd& c) {
  MultiplierVector m;
  m.alpha = 0.0;
  m.lambda = Eigen::VectorXd::Zero(prob.m());
  m.mu = Eigen::VectorXd::Zero(prob.p());
  m.eta_G = Eigen::VectorXd::Zero(prob.q());
  m.eta_H = Eigen::VectorXd::Zero(prob.q());
  for (size_t j = 0; j < cols.size(); ++j) {
    switch (cols[j].role) {
      case Role::Lambda: m.lambda[cols[j].index] += c[j]; break;
      case Role::Mu: m.mu[cols[j].index] += c[j]; break;
      case Role::EtaG: m.eta_G[cols[j].index] += c[j]; break;
      case Role::EtaH: m.eta_H[cols[j].index] += c[j]; break;
      case Role::Alpha: break;
    }
  }
  return m;
}

std::optional<Eigen::VectorXd> cone_solve(const std::vector<ConeCol>& cols) {
  if (cols.empty()) return std::nullopt;
  std::vector<Eigen::VectorXd> columns;
  std::vector<ConeSign> signs;
  for (const auto& c : cols) {
    columns.push_back(c.col);
    signs.push_back(c.sign);
  }
  return cone_nonzero(columns, signs);
}

// Vertex sweep over the normalized cone polytope: distinct basic solutions
// found by maximizing deterministic then seeded random objectives.
std::vector<Eigen::VectorXd> cone_vertices(const std::vector<ConeCol>& cols, int cap,
                                           std::uint64_t seed) {
  std::vector<Eigen::VectorXd> out;
  if (cols.empty()) return out;
  const int k = static_cast<int>(cols.size());
  const int n = static_cast<int>(cols[0].col.size());

  std::vector<int> pos(k, -1), neg(k, -1);
  int nv = 0;
  for (int j = 0; j < k; ++j) {
    if (cols[j].sign == ConeSign::Zero) continue;
    pos[j] = nv++;
    if (cols[j].sign == ConeSign::Free) neg[j] = nv++;
  }
  if (nv == 0) return out;

  LinearProgram lp = LinearProgram::make(nv);
  for (int r = 0; r < n; ++r) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(nv);
    for (int j = 0; j < k; ++j) {
      if (pos[j] < 0) continue;
      row[pos[j]] = cols[j].col[r];
      if (neg[j] >= 0) row[neg[j]] = -cols[j].col[r];
    }
    lp.add_eq(row, 0.0);
  }
  lp.add_eq(Eigen::VectorXd::Ones(nv), 1.0);

  std::map<std::vector<long long>, bool> seen;
  auto try_objective = [&](const Eigen::VectorXd& obj) {
    lp.objective = obj;
    LpOutcome o = lp_solve(lp);
    if (o.status != LpOutcome::Status::Optimal) return;
    Eigen::VectorXd c = Eigen::VectorXd::Zero(k);
    for (int j = 0; j < k; ++j) {
      if (pos[j] < 0) continue;
      c[j] = o.solution[pos[j]] - (neg[j] >= 0 ? o.solution[neg[j]] : 0.0);
    }
    std::vector<long long> key(k);
    for (int j = 0; j < k; ++j) key[j] = llround(c[j] * 1e9);
    if (seen.emplace(std::move(key), true).second) out.push_back(c);
  };

  for (int j = 0; j < nv && static_cast<int>(out.size()) < cap; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(nv);
    e[j] = 1.0;
    try_objective(e);
    if (static_cast<int>(out.size()) >= cap) break;
    try_objective(-e);
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int t = 0; t < 4 * cap && static_cast<int>(out.size()) < cap; ++t) {
    Eigen::VectorXd obj(nv);
    for (int j = 0; j < nv; ++j) obj[j] = gauss(rng);
    try_objective(obj);
  }
  return out;
}

// Columns of the homogeneous multiplier system shared by GMFCQ and the
// sequential CQs, for one assignment of the biactive complementarity.
std::vector<ConeCol> gmfcq_columns(const EvalRecord& rec, const IndexPartition& part,
                                   const BranchAssignment& branch) {
  std::vector<ConeCol> cols;
  for (int i : part.I_g)
    cols.push_back({Role::Lambda, i, rec.grad_g.row(i).transpose(), ConeSign::NonNegative});
  for (int j = 0; j < rec.h.size(); ++j)
    cols.push_back({Role::Mu, j, rec.grad_h.row(j).transpose(), ConeSign::Free});
  for (int i : part.I_p0)
    cols.push_back({Role::EtaG, i, rec.grad_G.row(i).transpose(), ConeSign::NonNegative});
  for (int i : part.I_0m)
    cols.push_back({Role::EtaH, i, -rec.grad_H.row(i).transpose(), ConeSign::NonNegative});
  for (int i : part.I_0p)
    cols.push_back({Role::EtaH, i, -rec.grad_H.row(i).transpose(), ConeSign::Free});
  for (size_t b = 0; b < part.I_00.size(); ++b) {
    int i = part.I_00[b];
    if (branch[b] == BiactiveSide::GSide)
      cols.push_back({Role::EtaH, i, -rec.grad_H.row(i).transpose(), ConeSign::Free});
    else
      cols.push_back({Role::EtaG, i, rec.grad_G.row(i).transpose(), ConeSign::NonNegative});
  }
  return cols;
}

BranchAssignment branch_from_mask(std::uint32_t mask, size_t bits) {
  BranchAssignment b(bits);
  for (size_t i = 0; i < bits; ++i)
    b[i] = (mask >> i) & 1u ? BiactiveSide::HSide : BiactiveSide::GSide;
  return b;
}

double combination_residual(const ProblemInstance& prob, const EvalRecord& rec,
                            const MultiplierVector& m) {
  MultiplierVector z = m;
  z.alpha = 0.0;
  return stationarity_residual_vector(rec, z).lpNorm<Eigen::Infinity>();
}

}  // namespace

CqVerdict check_licq(const ProblemInstance& prob, const Eigen::VectorXd& x,
                     double tol_act) {
  EvalRecord rec = evaluate(prob, x);
  IndexPartition part = partition_indices(prob, x, tol_act);
  CqVerdict v;
  v.name = CqName::LICQ;
  v.provenance = CqProvenance::ExactLP;

  std::vector<ConeCol> cols;
  for (int i : part.I_g)
    cols.push_back({Role::Lambda, i, rec.grad_g.row(i).transpose(), ConeSign::Free});
  for (int j = 0; j < prob.p(); ++j)
    cols.push_back({Role::Mu, j, rec.grad_h.row(j).transpose(), ConeSign::Free});
  for (int i : part.I_p0)
    cols.push_back({Role::EtaG, i, rec.grad_G.row(i).transpose(), ConeSign::Free});
  for (size_t b = 0; b < part.I_00.size(); ++b)
    cols.push_back({Role::EtaG, part.I_00[b], rec.grad_G.row(part.I_00[b]).transpose(),
                    ConeSign::Free});
  for (int i : part.I_zero())
    cols.push_back({Role::EtaH, i, -rec.grad_H.row(i).transpose(), ConeSign::Free});

  if (cols.empty()) {
    v.status = CqStatus::Holds;
    v.notes.push_back("no active constraints; independence holds vacuously");
    return v;
  }
  Eigen::MatrixXd M(cols.size(), prob.n);
  for (size_t j = 0; j < cols.size(); ++j) M.row(j) = cols[j].col.transpose();
  if (rank_with_tol(M, 1e-9) == static_cast<int>(cols.size())) {
    v.status = CqStatus::Holds;
    return v;
  }
  v.status = CqStatus::Fails;
  if (auto c = cone_solve(cols)) {
    MultiplierCertificate cert;
    cert.mult = assemble_from_cone(prob, cols, *c);
    cert.residual = combination_residual(prob, rec, cert.mult);
    v.multiplier_certificate = std::move(cert);
  }
  v.notes.push_back("active gradient family is rank deficient");
  return v;
}

CqVerdict check_mfcq(const ProblemInstance& prob, const Eigen::VectorXd& x,
                     double tol_act) {
  EvalRecord rec = evaluate(prob, x);
  IndexPartition part = partition_indices(prob, x, tol_act);
  CqVerdict v;
  v.name = CqName::MFCQ;
  v.provenance = CqProvenance::ExactLP;

  // (a) independence of the equality-type gradients
  std::vector<ConeCol> eq_cols;
  for (int j = 0; j < prob.p(); ++j)
    eq_cols.push_back({Role::Mu, j, rec.grad_h.row(j).transpose(), ConeSign::Free});
  for (int i : part.I_0p)
    eq_cols.push_back({Role::EtaH, i, -rec.grad_H.row(i).transpose(), ConeSign::Free});
  for (int i : part.I_00)
    eq_cols.push_back({Role::EtaH, i, -rec.grad_H.row(i).transpose(), ConeSign::Free});
  if (!eq_cols.empty()) {
    Eigen::MatrixXd M(eq_cols.size(), prob.n);
    for (size_t j = 0; j < eq_cols.size(); ++j) M.row(j) = eq_cols[j].col.transpose();
    if (rank_with_tol(M, 1e-9) != static_cast<int>(eq_cols.size())) {
      v.status = CqStatus::Fails;
      if (auto c = cone_solve(eq_cols)) {
        MultiplierCertificate cert;
        cert.mult = assemble_from_cone(prob, eq_cols, *c);
        cert.residual = combination_residual(prob, rec, cert.mult);
        v.multiplier_certificate = std::move(cert);
      }
      v.notes.push_back("equality-part gradients are dependent");
      return v;
    }
  }

  // (b) strict-direction LP: maximize s, |d|_inf <= 1, s <= 1
  const int n = prob.n;
  LinearProgram lp = LinearProgram::make(n + 1);
  for (int k = 0; k < n; ++k) lp.signs[k] = VarSign::Free;
  lp.objective = Eigen::VectorXd::Zero(n + 1);
  lp.objective[n] = 1.0;
  auto drow = [&](const Eigen::VectorXd& gradient, double s_coeff) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(n + 1);
    row.head(n) = gradient;
    row[n] = s_coeff;
    return row;
  };
  for (int j = 0; j < prob.p(); ++j)
    lp.add_eq(drow(rec.grad_h.row(j).transpose(), 0.0), 0.0);
  for (int i : part.I_0p)
    lp.add_eq(drow(rec.grad_H.row(i).transpose(), 0.0), 0.0);
  for (int i : part.I_00)
    lp.add_eq(drow(rec.grad_H.row(i).transpose(), 0.0), 0.0);
  for (int i : part.I_g)
    lp.add_le(drow(rec.grad_g.row(i).transpose(), 1.0), 0.0);
  for (int i : part.I_0m)
    lp.add_le(drow(-rec.grad_H.row(i).transpose(), 1.0), 0.0);
  for (int i : part.I_p0)
    lp.add_le(drow(rec.grad_G.row(i).transpose(), 1.0), 0.0);
  for (int i : part.I_00)
    lp.add_le(drow(rec.grad_G.row(i).transpose(), 1.0), 0.0);
  for (int k = 0; k < n; ++k) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n + 1);
    e[k] = 1.0;
    lp.add_le(e, 1.0);
    lp.add_le(-e, 1.0);
  }
  {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n + 1);
    e[n] = 1.0;
    lp.add_le(e, 1.0);
  }

  LpOutcome out;
  try {
    out = lp_solve(lp);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::IterationLimit) {
      v.status = CqStatus::Unknown;
      v.notes.push_back("direction LP hit the iteration limit");
      return v;
    }
    throw;
  }
  if (out.status != LpOutcome::Status::Optimal) {
    v.status = CqStatus::Unknown;
    v.notes.push_back("direction LP did not reach an optimum");
    return v;
  }
  if (out.value > 1e-7) {
    v.status = CqStatus::Holds;
    std::ostringstream os;
    os << "strict direction d = [";
    for (int k = 0; k < n; ++k) os << (k ? ", " : "") << out.solution[k];
    os << "] with slack " << out.value;
    v.notes.push_back(os.str());
    return v;
  }

  // transposition certificate: a nonzero sign-feasible combination. The
  // equality part alone is independent by (a), so any combination found here
  // has mass on the strict part.
  std::vector<ConeCol> dual;
  for (int i : part.I_g)
    dual.push_back({Role::Lambda, i, rec.grad_g.row(i).transpose(), ConeSign::NonNegative});
  for (int i : part.I_p0)
    dual.push_back({Role::EtaG, i, rec.grad_G.row(i).transpose(), ConeSign::NonNegative});
  for (int i : part.I_00)
    dual.push_back({Role::EtaG, i, rec.grad_G.row(i).transpose(), ConeSign::NonNegative});
  for (int i : part.I_0m)
    dual.push_back({Role::EtaH, i, -rec.grad_H.row(i).transpose(), ConeSign::NonNegative});
  for (const auto& c : eq_cols) dual.push_back(c);
  if (auto c = cone_solve(dual)) {
    MultiplierCertificate cert;
    cert.mult = assemble_from_cone(prob, dual, *c);
    cert.residual = combination_residual(prob, rec, cert.mult);
    v.multiplier_certificate = std::move(cert);
    v.status = CqStatus::Fails;
    v.notes.push_back("no strict direction; dual multiplier certificate attached");
    return v;
  }
  v.status = CqStatus::Unknown;
  v.notes.push_back("LP slack not above threshold but no dual certificate found");
  return v;
}

CqVerdict check_gmfcq(const ProblemInstance& prob, const Eigen::VectorXd& x,
                      double tol_act) {
  EvalRecord rec = evaluate(prob, x);
  IndexPartition part = partition_indices(prob, x, tol_act);
  CqVerdict v;
  v.name = CqName::GMFCQ;
  v.provenance = CqProvenance::ExactLP;

  const size_t bits = part.I_00.size();
  if (bits > kBranchLimit) {
    v.status = CqStatus::Unknown;
    v.notes.push_back("biactive set too large for branch enumeration");
    return v;
  }
  const std::uint32_t nbranches = bits == 0 ? 1 : (1u << bits);
  for (std::uint32_t mask = 0; mask < nbranches; ++mask) {
    std::vector<ConeCol> cols = gmfcq_columns(rec, part, branch_from_mask(mask, bits));
    if (cols.empty()) continue;  // nothing active: only the zero multiplier
    if (auto c = cone_solve(cols)) {
      MultiplierCertificate cert;
      cert.mult = assemble_from_cone(prob, cols, *c);
      cert.residual = combination_residual(prob, rec, cert.mult);
      v.multiplier_certificate = std::move(cert);
      v.status = CqStatus::Fails;
      return v;
    }
  }
  v.status = CqStatus::Holds;
  if (part.I_g.empty() && prob.p() == 0 && part.I_zero().empty() && part.I_p0.empty())
    v.notes.push_back("no active constraints; holds vacuously");
  return v;
}

CqVerdict check_sequential_cq(const ProblemInstance& prob, const Eigen::VectorXd& x,
                              CqName name, double tol_act,
                              const SequentialCqParams& params) {
  if (name != CqName::Pseudonormality && name != CqName::Quasinormality)
    throw Error(ErrorCode::PreconditionViolation, "not a sequential CQ");
  EvalRecord rec = evaluate(prob, x);
  IndexPartition part = partition_indices(prob, x, tol_act);
  CqVerdict v;
  v.name = name;
  v.provenance = CqProvenance::ExactLP;

  const size_t bits = part.I_00.size();
  if (bits > kBranchLimit) {
    v.status = CqStatus::Unknown;
    v.notes.push_back("biactive set too large for branch enumeration");
    return v;
  }
  const std::uint32_t nbranches = bits == 0 ? 1 : (1u << bits);

  // stage 1: is the multiplier cone trivial?
  bool any_nonzero = false;
  for (std::uint32_t mask = 0; mask < nbranches && !any_nonzero; ++mask) {
    std::vector<ConeCol> cols = gmfcq_columns(rec, part, branch_from_mask(mask, bits));
    if (cols.empty()) continue;
    if (cone_solve(cols)) any_nonzero = true;
  }
  if (!any_nonzero) {
    v.status = CqStatus::Holds;
    v.notes.push_back("multiplier cone is trivial; condition (iii) is vacuous");
    return v;
  }

  // stage 2: hunt for a candidate ray that admits a witness sequence
  const WitnessMode mode =
      name == CqName::Pseudonormality ? WitnessMode::Aggregate : WitnessMode::PerSign;
  for (std::uint32_t mask = 0; mask < nbranches; ++mask) {
    std::vector<ConeCol> cols = gmfcq_columns(rec, part, branch_from_mask(mask, bits));
    if (cols.empty()) continue;
    for (const auto& c : cone_vertices(cols, params.vertex_cap, params.witness.seed)) {
      MultiplierVector m = assemble_from_cone(prob, cols, c);
      if (m.all_zero()) continue;
      auto wit = witness_search(prob, x, m, mode, params.witness);
      if (wit) {
        MultiplierCertificate cert;
        cert.mult = m;
        cert.residual = combination_residual(prob, rec, m);
        cert.witness = std::move(*wit);
        v.multiplier_certificate = std::move(cert);
        v.status = CqStatus::Fails;
        return v;
      }
    }
  }
  v.status = CqStatus::Unknown;
  v.notes.push_back("nonzero multiplier rays exist but none admitted a witness sequence");
  return v;
}

CqVerdict check_cpld(const ProblemInstance& prob, const Eigen::VectorXd& x,
                     double tol_act, const CpldParams& params) {
  if (params.radius <= 0 || params.samples < 1)
    throw Error(ErrorCode::PreconditionViolation, "cpld: radius > 0 and samples >= 1");
  EvalRecord rec = evaluate(prob, x);
  IndexPartition part = partition_indices(prob, x, tol_act);
  CqVerdict v;
  v.name = CqName::CPLD;
  v.provenance = CqProvenance::ExactLP;

  struct PoolEntry {
    Role role;
    int index;
    ConeSign sign;
    bool linear;
  };
  std::vector<PoolEntry> pool;
  for (int i : part.I_g)
    pool.push_back({Role::Lambda, i, ConeSign::NonNegative,
                    prob.g_tags[i] == CurvatureTag::Linear});
  for (int j = 0; j < prob.p(); ++j)
    pool.push_back({Role::Mu, j, ConeSign::Free, prob.h_tags[j] == CurvatureTag::Linear});
  for (int i : part.I_zero())
    pool.push_back({Role::EtaH, i,
                    part.contains(part.I_0m, i) ? ConeSign::NonNegative : ConeSign::Free,
                    prob.H_tags[i] == CurvatureTag::Linear});
  for (int i : part.I_p0)
    pool.push_back({Role::EtaG, i, ConeSign::NonNegative,
                    prob.G_tags[i] == CurvatureTag::Linear});
  for (int i : part.I_00)
    pool.push_back({Role::EtaG, i, ConeSign::NonNegative,
                    prob.G_tags[i] == CurvatureTag::Linear});

  if (static_cast<int>(pool.size()) > params.max_pool) {
    v.status = CqStatus::Unknown;
    v.notes.push_back("candidate family pool exceeds the enumeration bound");
    return v;
  }

  auto grad_of = [&](Role role, int index) -> Eigen::VectorXd {
    switch (role) {
      case Role::Lambda: return rec.grad_g.row(index).transpose();
      case Role::Mu: return rec.grad_h.row(index).transpose();
      case Role::EtaG: return rec.grad_G.row(index).transpose();
      case Role::EtaH: return rec.grad_H.row(index).transpose();
      case Role::Alpha: break;
    }
    throw Error(ErrorCode::PreconditionViolation, "bad role");
  };
  auto grad_at = [&](Role role, int index, const Eigen::VectorXd& w) -> Eigen::VectorXd {
    switch (role) {
      case Role::Lambda: return grad(prob.g[index], w);
      case Role::Mu: return grad(prob.h[index], w);
      case Role::EtaG: return grad(prob.vanish[index].G, w);
      case Role::EtaH: return grad(prob.vanish[index].H, w);
      case Role::Alpha: break;
    }
    throw Error(ErrorCode::PreconditionViolation, "bad role");
  };

  std::mt19937_64 rng(params.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Eigen::VectorXd> sample_points;
  for (int s = 0; s < params.samples; ++s) {
    Eigen::VectorXd dir(prob.n);
    for (int i = 0; i < prob.n; ++i) dir[i] = gauss(rng);
    double nrm = dir.norm();
    if (nrm == 0.0) continue;
    double rad = params.radius * std::pow(unif(rng), 1.0 / prob.n);
    sample_points.push_back(x + (rad / nrm) * dir);
  }

  bool saw_dependence = false;
  bool all_dependent_linear = true;

  const std::uint32_t nsubsets = 1u << pool.size();
  for (std::uint32_t mask = 1; mask < nsubsets; ++mask) {
    std::vector<PoolEntry> family;
    for (size_t j = 0; j < pool.size(); ++j)
      if (mask & (1u << j)) family.push_back(pool[j]);

    // biactive complementarity: indices present with both eta_H and eta_G
    std::vector<int> dup;
    for (int i : part.I_00) {
      bool hasH = false, hasG = false;
      for (const auto& f : family) {
        if (f.role == Role::EtaH && f.index == i) hasH = true;
        if (f.role == Role::EtaG && f.index == i) hasG = true;
      }
      if (hasH && hasG) dup.push_back(i);
    }

    const std::uint32_t nb = dup.empty() ? 1 : (1u << dup.size());
    for (std::uint32_t bmask = 0; bmask < nb; ++bmask) {
      std::vector<ConeCol> cols;
      std::vector<PoolEntry> effective;
      for (const auto& f : family) {
        bool drop = false;
        for (size_t d = 0; d < dup.size(); ++d) {
          bool keep_h = (bmask >> d) & 1u;
          if (f.index == dup[d] && f.role == (keep_h ? Role::EtaG : Role::EtaH))
            drop = true;
        }
        if (drop) continue;
        Eigen::VectorXd col = grad_of(f.role, f.index);
        if (f.role == Role::EtaH) col = -col;
        cols.push_back({f.role, f.index, col, f.sign});
        effective.push_back(f);
      }
      if (cols.empty()) continue;
      auto c = cone_solve(cols);
      if (!c) continue;
      saw_dependence = true;

      bool family_linear = true;
      for (const auto& f : effective) family_linear = family_linear && f.linear;
      if (family_linear) continue;  // constant gradients stay dependent everywhere
      all_dependent_linear = false;

      for (const auto& w : sample_points) {
        Eigen::MatrixXd M(effective.size(), prob.n);
        for (size_t j = 0; j < effective.size(); ++j)
          M.row(j) = grad_at(effective[j].role, effective[j].index, w).transpose();
        int rk = rank_with_tol(M, 1e-9);
        if (rk == static_cast<int>(effective.size())) {
          CpldCertificate cert;
          for (const auto& f : effective) {
            switch (f.role) {
              case Role::Lambda: cert.J0.push_back(f.index); break;
              case Role::Mu: cert.Ih.push_back(f.index); break;
              case Role::EtaH: cert.L0H.push_back(f.index); break;
              case Role::EtaG: cert.L0G.push_back(f.index); break;
              case Role::Alpha: break;
            }
          }
          cert.mult = assemble_from_cone(prob, cols, *c);
          cert.point = w;
          cert.rank_at_point = rk;
          v.cpld_certificate = std::move(cert);
          v.status = CqStatus::Fails;
          v.provenance = CqProvenance::Sampled;
          v.notes.push_back("sign-dependent family becomes independent at a nearby point");
          return v;
        }
      }
    }
  }

  v.status = CqStatus::Holds;
  if (!saw_dependence) {
    v.provenance = CqProvenance::ExactLP;
    v.notes.push_back("no family admits a nonzero sign-feasible dependence");
  } else if (all_dependent_linear) {
    v.provenance = CqProvenance::Structural;
    v.notes.push_back("all dependent families have constant gradients");
  } else {
    v.provenance = CqProvenance::Sampled;
    v.notes.push_back("every dependent family stayed dependent at all sampled points");
  }
  return v;
}

StructuralReport detect_structural(const ProblemInstance& prob) {
  StructuralReport r;
  auto all_linear = [](const std::vector<CurvatureTag>& tags) {
    return std::all_of(tags.begin(), tags.end(),
                       [](CurvatureTag t) { return t == CurvatureTag::Linear; });
  };
  r.flags.all_h_linear = all_linear(prob.h_tags);
  r.flags.all_G_linear = all_linear(prob.G_tags);
  r.flags.all_H_linear = all_linear(prob.H_tags);
  r.flags.all_g_concave_or_linear =
      std::all_of(prob.g_tags.begin(), prob.g_tags.end(), [](CurvatureTag t) {
        return t == CurvatureTag::Linear || t == CurvatureTag::DeclaredConcave;
      });
  const bool constraints_affine = r.flags.all_h_linear && r.flags.all_G_linear &&
                                  r.flags.all_H_linear && all_linear(prob.g_tags);
  r.flags.all_affine =
      constraints_affine && prob.objective_tag == CurvatureTag::Linear;
  r.pseudonormality_everywhere = r.flags.all_h_linear && r.flags.all_G_linear &&
                                 r.flags.all_H_linear && r.flags.all_g_concave_or_linear;
  r.linear_cq = constraints_affine;
  return r;
}

std::vector<CqVerdict> check_all(const ProblemInstance& prob, const Eigen::VectorXd& x,
                                 double tol_act, const CheckAllParams& params) {
  StructuralReport structural = detect_structural(prob);

  std::vector<CqVerdict> verdicts;
  verdicts.push_back(check_licq(prob, x, tol_act));
  verdicts.push_back(check_mfcq(prob, x, tol_act));
  verdicts.push_back(check_gmfcq(prob, x, tol_act));
  verdicts.push_back(
      check_sequential_cq(prob, x, CqName::Pseudonormality, tol_act, params.sequential));
  verdicts.push_back(
      check_sequential_cq(prob, x, CqName::Quasinormality, tol_act, params.sequential));
  verdicts.push_back(check_cpld(prob, x, tol_act, params.cpld));

  CqVerdict lin;
  lin.name = CqName::LinearCQ;
  lin.provenance = CqProvenance::Structural;
  if (structural.linear_cq) {
    lin.status = CqStatus::Holds;
    lin.notes.push_back("every constraint function is linear");
  } else {
    lin.status = CqStatus::Fails;
    lin.notes.push_back("some constraint function is not linear");
  }
  verdicts.push_back(lin);

  auto by_name = [&](CqName n) -> CqVerdict& {
    for (auto& v : verdicts)
      if (v.name == n) return v;
    throw Error(ErrorCode::ConsistencyViolation, "missing verdict");
  };

  auto structural_holds = [&](CqName n, const char* why) {
    CqVerdict& v = by_name(n);
    if (v.status == CqStatus::Fails)
      throw Error(ErrorCode::ConsistencyViolation,
                  std::string(cq_name_str(n)) + " fails but a structural argument proves it");
    if (v.status == CqStatus::Unknown) {
      v.status = CqStatus::Holds;
      v.provenance = CqProvenance::Structural;
      v.notes.push_back(why);
    }
  };
  if (structural.pseudonormality_everywhere) {
    structural_holds(CqName::Pseudonormality,
                     "linear constraints with concave inequalities hold everywhere");
    structural_holds(CqName::Quasinormality, "implied by structural pseudonormality");
  }

  auto propagate = [&](CqName up, CqName down) {
    CqVerdict& u = by_name(up);
    CqVerdict& d = by_name(down);
    if (u.status != CqStatus::Holds) return;
    if (d.status == CqStatus::Fails)
      throw Error(ErrorCode::ConsistencyViolation,
                  std::string(cq_name_str(up)) + " holds but " + cq_name_str(down) +
                      " fails: implication lattice violated");
    if (d.status == CqStatus::Unknown) {
      d.status = CqStatus::Holds;
      d.provenance = CqProvenance::Structural;
      d.notes.push_back(std::string("implied by ") + cq_name_str(up));
    }
  };
  propagate(CqName::LICQ, CqName::MFCQ);
  propagate(CqName::MFCQ, CqName::GMFCQ);
  propagate(CqName::GMFCQ, CqName::Pseudonormality);
  propagate(CqName::Pseudonormality, CqName::Quasinormality);
  propagate(CqName::CPLD, CqName::Quasinormality);
  return verdicts;
}

StabilityReport quasinormality_stability(const ProblemInstance& prob,
                                         const Eigen::VectorXd& x, double radius,
                                         int samples, std::uint64_t seed,
                                         double tol_act) {
  StabilityReport rep;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int attempts = 0;
  while (rep.sampled < samples && attempts < 50 * samples) {
    ++attempts;
    Eigen::VectorXd dir(prob.n);
    for (int i = 0; i < prob.n; ++i) dir[i] = gauss(rng);
    double nrm = dir.norm();
    if (nrm == 0.0) continue;
    Eigen::VectorXd w = x + (radius * std::pow(unif(rng), 1.0 / prob.n) / nrm) * dir;
    if (!is_feasible(prob, w, 1e-9)) continue;
    ++rep.sampled;
    CqVerdict v = check_sequential_cq(prob, w, CqName::Quasinormality, tol_act);
    if (v.status == CqStatus::Holds) ++rep.holds;
    else if (v.status == CqStatus::Fails) ++rep.fails;
    else ++rep.unknown;
  }
  return rep;
}

}  // namespace mpvc
