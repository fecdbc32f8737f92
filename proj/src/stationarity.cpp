#include "mpvc/stationarity.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace mpvc {

const char* kind_name(StationarityKind k) {
  switch (k) {
    case StationarityKind::W: return "w";
    case StationarityKind::M: return "m";
    case StationarityKind::S: return "s";
    case StationarityKind::FJ_M: return "fj-m";
    case StationarityKind::FJ_S: return "fj-s";
    case StationarityKind::Enhanced_M: return "enh-m";
    case StationarityKind::Enhanced_S: return "enh-s";
  }
  return "?";
}

std::optional<StationarityKind> kind_from_name(const std::string& name) {
  if (name == "w") return StationarityKind::W;
  if (name == "m") return StationarityKind::M;
  if (name == "s") return StationarityKind::S;
  if (name == "fj-m") return StationarityKind::FJ_M;
  if (name == "fj-s") return StationarityKind::FJ_S;
  if (name == "enh-m") return StationarityKind::Enhanced_M;
  if (name == "enh-s") return StationarityKind::Enhanced_S;
  return std::nullopt;
}

bool MultiplierVector::all_zero(double tol) const {
  auto small = [tol](const Eigen::VectorXd& v) {
    return v.size() == 0 || v.lpNorm<Eigen::Infinity>() <= tol;
  };
  return small(lambda) && small(mu) && small(eta_G) && small(eta_H);
}

double MultiplierVector::norm() const {
  double s = alpha * alpha + lambda.squaredNorm() + mu.squaredNorm() +
             eta_G.squaredNorm() + eta_H.squaredNorm();
  return std::sqrt(s);
}

Eigen::VectorXd stationarity_residual_vector(const EvalRecord& rec,
                                             const MultiplierVector& mult) {
  Eigen::VectorXd r = mult.alpha * rec.grad_f;
  for (Eigen::Index i = 0; i < rec.g.size(); ++i)
    r += mult.lambda[i] * rec.grad_g.row(i).transpose();
  for (Eigen::Index j = 0; j < rec.h.size(); ++j)
    r += mult.mu[j] * rec.grad_h.row(j).transpose();
  for (Eigen::Index i = 0; i < rec.G.size(); ++i) {
    r += mult.eta_G[i] * rec.grad_G.row(i).transpose();
    r -= mult.eta_H[i] * rec.grad_H.row(i).transpose();
  }
  return r;
}

namespace {

bool is_fj(StationarityKind k) {
  return k == StationarityKind::FJ_M || k == StationarityKind::FJ_S;
}

bool is_m_pattern(StationarityKind k) {
  return k == StationarityKind::M || k == StationarityKind::FJ_M ||
         k == StationarityKind::Enhanced_M;
}

bool is_s_pattern(StationarityKind k) {
  return k == StationarityKind::S || k == StationarityKind::FJ_S ||
         k == StationarityKind::Enhanced_S;
}

StationarityKind base_kind(StationarityKind k) {
  if (k == StationarityKind::Enhanced_M) return StationarityKind::M;
  if (k == StationarityKind::Enhanced_S) return StationarityKind::S;
  return k;
}

struct SystemSpec {
  bool with_alpha = false;       // alpha as an LP variable (FJ kinds)
  bool normalized = false;       // add the L1 normalization row
  Eigen::VectorXd rhs;           // right-hand side of the n gradient rows
};

// Assembles the multiplier LP in explicitly split form (all LP variables
// nonnegative). Free multipliers occupy two adjacent columns u - w.
MultiplierSystem assemble_system(const ProblemInstance& prob, const EvalRecord& rec,
                                 const IndexPartition& part, StationarityKind kind,
                                 const BranchAssignment& branch, const SystemSpec& spec) {
  using Role = MultiplierSystem::Role;
  MultiplierSystem sys;
  std::vector<Eigen::VectorXd> cols;  // gradient (sign-adjusted) per LP var

  auto add_var = [&](Role role, int index, const Eigen::VectorXd& grad_col, bool free_var) {
    sys.labels.push_back({role, index, false});
    cols.push_back(grad_col);
    if (free_var) {
      sys.labels.push_back({role, index, true});
      cols.push_back(-grad_col);
    }
  };

  if (spec.with_alpha) add_var(Role::Alpha, 0, rec.grad_f, false);
  for (int i : part.I_g) add_var(Role::Lambda, i, rec.grad_g.row(i).transpose(), false);
  for (int j = 0; j < prob.p(); ++j)
    add_var(Role::Mu, j, rec.grad_h.row(j).transpose(), true);

  // eta_G lives on I_+0 and, depending on the kind and branch, on I_00
  for (int i : part.I_p0) add_var(Role::EtaG, i, rec.grad_G.row(i).transpose(), false);
  // eta_H >= 0 on I_0-, free on I_0+ (column enters with the minus sign)
  for (int i : part.I_0m) add_var(Role::EtaH, i, -rec.grad_H.row(i).transpose(), false);
  for (int i : part.I_0p) add_var(Role::EtaH, i, -rec.grad_H.row(i).transpose(), true);

  for (size_t b = 0; b < part.I_00.size(); ++b) {
    int i = part.I_00[b];
    if (kind == StationarityKind::W) {
      add_var(Role::EtaG, i, rec.grad_G.row(i).transpose(), false);
      add_var(Role::EtaH, i, -rec.grad_H.row(i).transpose(), true);
    } else if (is_s_pattern(kind)) {
      // eta_G = 0, eta_H >= 0
      add_var(Role::EtaH, i, -rec.grad_H.row(i).transpose(), false);
    } else {  // M pattern: one side pinned to zero per the branch
      if (branch.at(b) == BiactiveSide::GSide)
        add_var(Role::EtaH, i, -rec.grad_H.row(i).transpose(), true);
      else
        add_var(Role::EtaG, i, rec.grad_G.row(i).transpose(), false);
    }
  }

  const int nv = static_cast<int>(cols.size());
  sys.lp = LinearProgram::make(nv);
  for (int r = 0; r < prob.n; ++r) {
    Eigen::VectorXd row(nv);
    for (int j = 0; j < nv; ++j) row[j] = cols[j][r];
    sys.lp.add_eq(row, spec.rhs[r]);
  }
  if (spec.normalized) {
    sys.lp.add_eq(Eigen::VectorXd::Ones(nv), 1.0);
    sys.normalized = true;
  }
  if (spec.with_alpha) {
    // maximize alpha to decide whether an alpha-positive solution exists
    sys.lp.objective = Eigen::VectorXd::Zero(nv);
    sys.lp.objective[0] = 1.0;
  }
  return sys;
}

MultiplierVector extract_multipliers(const ProblemInstance& prob,
                                     const MultiplierSystem& sys,
                                     const Eigen::VectorXd& sol,
                                     const BranchAssignment& branch, bool fj) {
  using Role = MultiplierSystem::Role;
  MultiplierVector m;
  m.alpha = fj ? 0.0 : 1.0;
  m.lambda = Eigen::VectorXd::Zero(prob.m());
  m.mu = Eigen::VectorXd::Zero(prob.p());
  m.eta_G = Eigen::VectorXd::Zero(prob.q());
  m.eta_H = Eigen::VectorXd::Zero(prob.q());
  m.branch = branch;
  for (size_t j = 0; j < sys.labels.size(); ++j) {
    const auto& lab = sys.labels[j];
    double v = lab.negative_part ? -sol[j] : sol[j];
    switch (lab.role) {
      case Role::Alpha: m.alpha += v; break;
      case Role::Lambda: m.lambda[lab.index] += v; break;
      case Role::Mu: m.mu[lab.index] += v; break;
      case Role::EtaG: m.eta_G[lab.index] += v; break;
      case Role::EtaH: m.eta_H[lab.index] += v; break;
    }
  }
  return m;
}

BranchAssignment branch_from_mask(std::uint32_t mask, size_t bits) {
  BranchAssignment b(bits);
  for (size_t i = 0; i < bits; ++i)
    b[i] = (mask >> i) & 1u ? BiactiveSide::HSide : BiactiveSide::GSide;
  return b;
}

}  // namespace

MultiplierSystem build_multiplier_system(const ProblemInstance& prob,
                                         const Eigen::VectorXd& x, StationarityKind kind,
                                         const BranchAssignment& branch, double tol_act) {
  EvalRecord rec = evaluate(prob, x);
  IndexPartition part = partition_indices(prob, x, tol_act);
  if (is_m_pattern(kind) && branch.size() != part.I_00.size())
    throw Error(ErrorCode::PreconditionViolation,
                "branch assignment must cover every biactive index");
  SystemSpec spec;
  spec.with_alpha = is_fj(kind);
  spec.normalized = is_fj(kind);
  spec.rhs = spec.with_alpha ? Eigen::VectorXd::Zero(prob.n).eval()
                             : (-rec.grad_f).eval();
  return assemble_system(prob, rec, part, kind, branch, spec);
}

std::optional<Certificate> certify(const ProblemInstance& prob, const Eigen::VectorXd& x,
                                   StationarityKind kind, double tol_act,
                                   BranchOrder order) {
  if (kind == StationarityKind::Enhanced_M || kind == StationarityKind::Enhanced_S) {
    EnhancedOutcome out = certify_enhanced(prob, x, kind, tol_act);
    if (out.status == EnhancedOutcome::Status::Found) return out.certificate;
    return std::nullopt;
  }

  EvalRecord rec = evaluate(prob, x);
  IndexPartition part = partition_indices(prob, x, tol_act);
  const size_t bits = is_m_pattern(kind) ? part.I_00.size() : 0;
  if (bits > kBranchLimit)
    throw Error(ErrorCode::BranchLimit,
                "biactive set too large: " + std::to_string(bits) + " > " +
                    std::to_string(kBranchLimit));
  const std::uint32_t nbranches = bits == 0 ? 1 : (1u << bits);
  const bool fj = is_fj(kind);

  std::optional<Certificate> first_feasible;
  for (std::uint32_t step = 0; step < nbranches; ++step) {
    std::uint32_t mask = order == BranchOrder::Lexicographic ? step
                                                             : (nbranches - 1 - step);
    BranchAssignment branch =
        is_m_pattern(kind) ? branch_from_mask(mask, bits) : BranchAssignment{};

    SystemSpec spec;
    spec.with_alpha = fj;
    spec.normalized = fj;
    spec.rhs = fj ? Eigen::VectorXd::Zero(prob.n).eval() : (-rec.grad_f).eval();
    MultiplierSystem sys = assemble_system(prob, rec, part, kind, branch, spec);

    LpOutcome out = lp_solve(sys.lp);
    if (out.status != LpOutcome::Status::Optimal) continue;

    Certificate cert;
    cert.kind = kind;
    cert.mult = extract_multipliers(prob, sys, out.solution, branch, fj);
    cert.residual =
        stationarity_residual_vector(rec, cert.mult).lpNorm<Eigen::Infinity>();
    if (cert.residual > 1e-8) {
      cert.notes.push_back("branch rejected: residual above 1e-8");
      continue;
    }
    cert.all_zero_multipliers = cert.mult.all_zero();
    if (fj) cert.alpha_positive = cert.mult.alpha > 1e-8;

    if (fj) {
      // keep the first alpha-positive branch if one exists anywhere
      if (cert.alpha_positive) {
        if (first_feasible) cert.notes.push_back("earlier branch feasible only with alpha = 0");
        return cert;
      }
      if (!first_feasible) first_feasible = cert;
    } else {
      return cert;
    }
  }
  return first_feasible;
}

bool verify_certificate(const ProblemInstance& prob, const Eigen::VectorXd& x,
                        const Certificate& cert, double tol_act) {
  constexpr double kSignTol = 1e-10;
  EvalRecord rec = evaluate(prob, x);
  IndexPartition part = partition_indices(prob, x, tol_act);
  const MultiplierVector& m = cert.mult;
  if (m.lambda.size() != prob.m() || m.mu.size() != prob.p() ||
      m.eta_G.size() != prob.q() || m.eta_H.size() != prob.q())
    return false;

  if (stationarity_residual_vector(rec, m).lpNorm<Eigen::Infinity>() > 1e-8)
    return false;

  const bool fj = is_fj(cert.kind);
  if (fj) {
    if (m.alpha < -kSignTol) return false;
    if (m.norm() <= 1e-10) return false;  // Fritz John vectors are nonzero
  } else if (std::abs(m.alpha - 1.0) > 1e-12) {
    return false;
  }

  for (int i = 0; i < prob.m(); ++i) {
    if (part.contains(part.I_g, i)) {
      if (m.lambda[i] < -kSignTol) return false;
    } else if (std::abs(m.lambda[i]) > kSignTol) {
      return false;
    }
  }
  for (int i = 0; i < prob.q(); ++i) {
    bool p0 = part.contains(part.I_p0, i);
    bool pm = part.contains(part.I_pm, i);
    bool b00 = part.contains(part.I_00, i);
    bool z0p = part.contains(part.I_0p, i);
    bool z0m = part.contains(part.I_0m, i);
    // eta_G: zero off I_+0 ∪ I_00, nonnegative on it
    if (p0 || b00) {
      if (m.eta_G[i] < -kSignTol) return false;
    } else if (std::abs(m.eta_G[i]) > kSignTol) {
      return false;
    }
    // eta_H: zero on I_+, nonnegative on I_0-, free on I_0+
    if (p0 || pm) {
      if (std::abs(m.eta_H[i]) > kSignTol) return false;
    } else if (z0m) {
      if (m.eta_H[i] < -kSignTol) return false;
    }
    (void)z0p;
    if (b00) {
      if (is_s_pattern(cert.kind)) {
        if (std::abs(m.eta_G[i]) > kSignTol) return false;
        if (m.eta_H[i] < -kSignTol) return false;
      } else if (is_m_pattern(cert.kind)) {
        if (std::abs(m.eta_G[i] * m.eta_H[i]) > kSignTol) return false;
      }
      // W leaves eta_H unrestricted on the biactive set
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// witness search
// ---------------------------------------------------------------------------

namespace {

constexpr double kActiveTol = 1e-12;

// Smallest margin over the strict conditions; -inf when some condition fails.
double per_sign_margin(const ProblemInstance& prob, const Eigen::VectorXd& w,
                       const MultiplierVector& m) {
  double margin = std::numeric_limits<double>::infinity();
  bool any = false;
  for (int i = 0; i < prob.m(); ++i) {
    if (m.lambda[i] > kActiveTol) {
      margin = std::min(margin, m.lambda[i] * eval(prob.g[i], w));
      any = true;
    }
  }
  for (int j = 0; j < prob.p(); ++j) {
    if (std::abs(m.mu[j]) > kActiveTol) {
      margin = std::min(margin, m.mu[j] * eval(prob.h[j], w));
      any = true;
    }
  }
  for (int i = 0; i < prob.q(); ++i) {
    if (std::abs(m.eta_H[i]) > kActiveTol) {
      margin = std::min(margin, -m.eta_H[i] * eval(prob.vanish[i].H, w));
      any = true;
    }
    if (m.eta_G[i] > kActiveTol) {
      margin = std::min(margin, m.eta_G[i] * eval(prob.vanish[i].G, w));
      any = true;
    }
  }
  return any ? margin : std::numeric_limits<double>::infinity();
}

double aggregate_margin(const ProblemInstance& prob, const Eigen::VectorXd& w,
                        const MultiplierVector& m) {
  double s = 0.0;
  for (int i = 0; i < prob.m(); ++i)
    if (m.lambda[i] != 0.0) s += m.lambda[i] * eval(prob.g[i], w);
  for (int j = 0; j < prob.p(); ++j)
    if (m.mu[j] != 0.0) s += m.mu[j] * eval(prob.h[j], w);
  for (int i = 0; i < prob.q(); ++i) {
    if (m.eta_G[i] != 0.0) s += m.eta_G[i] * eval(prob.vanish[i].G, w);
    if (m.eta_H[i] != 0.0) s -= m.eta_H[i] * eval(prob.vanish[i].H, w);
  }
  return s;
}

void coordinate_patterns(const Eigen::VectorXd& center, double r,
                         std::vector<Eigen::VectorXd>* out) {
  const int n = static_cast<int>(center.size());
  if (n <= 5) {
    // all sign patterns in {-1,0,1}^n except zero
    int total = 1;
    for (int i = 0; i < n; ++i) total *= 3;
    for (int code = 1; code < total; ++code) {
      Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
      int c = code;
      for (int i = 0; i < n; ++i) {
        int d = c % 3;
        c /= 3;
        s[i] = d == 2 ? -1.0 : static_cast<double>(d);
      }
      if (s.norm() == 0.0) continue;
      out->push_back(center + (r / 2.0) * s / s.norm());
      out->push_back(center + (0.999 * r) * s / s.norm());
    }
  } else {
    for (int i = 0; i < n; ++i) {
      for (double sgn : {1.0, -1.0}) {
        Eigen::VectorXd p = center;
        p[i] += sgn * r / 2.0;
        out->push_back(p);
      }
    }
  }
}

}  // namespace

std::optional<Witness> witness_search(const ProblemInstance& prob,
                                      const Eigen::VectorXd& x,
                                      const MultiplierVector& mult, WitnessMode mode,
                                      const WitnessParams& params) {
  if (mult.all_zero())
    throw Error(ErrorCode::PreconditionViolation,
                "witness_search needs a nonzero multiplier vector");
  Witness wit;
  wit.min_margin = std::numeric_limits<double>::infinity();

  for (int level = 1; level <= params.levels; ++level) {
    double r = params.initial_radius * std::pow(2.0, -level);
    std::vector<Eigen::VectorXd> candidates;
    coordinate_patterns(x, r, &candidates);

    std::mt19937_64 rng(params.seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(level)));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int s = 0; s < params.samples_per_level; ++s) {
      Eigen::VectorXd dir(prob.n);
      for (int i = 0; i < prob.n; ++i) dir[i] = gauss(rng);
      double nrm = dir.norm();
      if (nrm == 0.0) continue;
      double rad = r * std::pow(unif(rng), 1.0 / prob.n);
      candidates.push_back(x + (rad / nrm) * dir);
    }

    bool found = false;
    for (const auto& w : candidates) {
      double margin = mode == WitnessMode::PerSign ? per_sign_margin(prob, w, mult)
                                                   : aggregate_margin(prob, w, mult);
      if (margin >= params.margin) {
        wit.points.push_back(w);
        wit.radii.push_back(r);
        if (std::isfinite(margin)) wit.min_margin = std::min(wit.min_margin, margin);
        found = true;
        break;
      }
    }
    if (!found) return std::nullopt;
  }
  if (!std::isfinite(wit.min_margin)) wit.min_margin = 0.0;
  return wit;
}

EnhancedOutcome certify_enhanced(const ProblemInstance& prob, const Eigen::VectorXd& x,
                                 StationarityKind kind, double tol_act,
                                 const WitnessParams& params) {
  if (kind != StationarityKind::Enhanced_M && kind != StationarityKind::Enhanced_S)
    throw Error(ErrorCode::PreconditionViolation, "certify_enhanced needs an enhanced kind");
  const StationarityKind base = base_kind(kind);

  EvalRecord rec = evaluate(prob, x);
  IndexPartition part = partition_indices(prob, x, tol_act);
  const size_t bits = base == StationarityKind::M ? part.I_00.size() : 0;
  if (bits > kBranchLimit)
    throw Error(ErrorCode::BranchLimit, "biactive set too large for branch enumeration");
  const std::uint32_t nbranches = bits == 0 ? 1 : (1u << bits);

  bool saw_certificate = false;
  for (std::uint32_t mask = 0; mask < nbranches; ++mask) {
    BranchAssignment branch = base == StationarityKind::M
                                  ? branch_from_mask(mask, bits)
                                  : BranchAssignment{};
    SystemSpec spec;
    spec.rhs = -rec.grad_f;
    MultiplierSystem sys = assemble_system(prob, rec, part, base, branch, spec);
    LpOutcome out = lp_solve(sys.lp);
    if (out.status != LpOutcome::Status::Optimal) continue;

    Certificate cert;
    cert.kind = kind;
    cert.mult = extract_multipliers(prob, sys, out.solution, branch, false);
    cert.residual =
        stationarity_residual_vector(rec, cert.mult).lpNorm<Eigen::Infinity>();
    if (cert.residual > 1e-8) continue;
    saw_certificate = true;

    if (cert.mult.all_zero()) {
      // the strict-sequence condition is vacuous for the zero multiplier
      cert.all_zero_multipliers = true;
      cert.notes.push_back("all multipliers zero; witness condition vacuous");
      return {EnhancedOutcome::Status::Found, cert, ""};
    }
    auto wit = witness_search(prob, x, cert.mult, WitnessMode::PerSign, params);
    if (wit) {
      cert.witness = std::move(*wit);
      return {EnhancedOutcome::Status::Found, cert, ""};
    }
  }
  if (saw_certificate)
    return {EnhancedOutcome::Status::Unknown, std::nullopt,
            "a multiplier certificate exists but no witness sequence was found"};
  return {EnhancedOutcome::Status::None, std::nullopt, "no multiplier certificate"};
}

std::optional<MultiplierVector> decompose_normal(const ProblemInstance& prob,
                                                 const Eigen::VectorXd& x,
                                                 const Eigen::VectorXd& v,
                                                 double tol_act) {
  if (v.size() != prob.n)
    throw Error(ErrorCode::DimensionMismatch, "decompose_normal: vector dimension");
  EvalRecord rec = evaluate(prob, x);
  IndexPartition part = partition_indices(prob, x, tol_act);
  const size_t bits = part.I_00.size();
  if (bits > kBranchLimit)
    throw Error(ErrorCode::BranchLimit, "biactive set too large for branch enumeration");
  const std::uint32_t nbranches = bits == 0 ? 1 : (1u << bits);

  for (std::uint32_t mask = 0; mask < nbranches; ++mask) {
    BranchAssignment branch = branch_from_mask(mask, bits);
    SystemSpec spec;
    spec.rhs = v;
    MultiplierSystem sys =
        assemble_system(prob, rec, part, StationarityKind::M, branch, spec);
    LpOutcome out = lp_solve(sys.lp);
    if (out.status != LpOutcome::Status::Optimal) continue;
    MultiplierVector m = extract_multipliers(prob, sys, out.solution, branch, false);
    m.alpha = 0.0;  // pure constraint-normal decomposition, no objective term
    Eigen::VectorXd residual = stationarity_residual_vector(rec, m) - v;
    if (residual.lpNorm<Eigen::Infinity>() > 1e-8) continue;
    return m;
  }
  return std::nullopt;
}

}  // namespace mpvc
