#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mpvc/model.hpp"
#include "mpvc/stationarity.hpp"

namespace mpvc {

enum class CqName { LICQ, MFCQ, GMFCQ, Pseudonormality, Quasinormality, CPLD, LinearCQ };
enum class CqStatus { Holds, Fails, Unknown };
enum class CqProvenance { Structural, ExactLP, Sampled };

const char* cq_name_str(CqName n);
std::optional<CqName> cq_from_name(const std::string& s);
const char* cq_status_str(CqStatus s);
const char* cq_provenance_str(CqProvenance p);

/// A violating multiplier family: labelled gradient columns with coefficients
/// summing to (numerically) zero under the required sign pattern.
struct MultiplierCertificate {
  MultiplierVector mult;             // assembled violating multiplier
  double residual = 0.0;             // inf-norm of the gradient combination
  std::optional<Witness> witness;    // sequential CQs attach the witness
};

/// CPLD failure evidence: a sign-dependent family at x whose gradients become
/// independent at a sampled nearby point.
struct CpldCertificate {
  std::vector<int> J0, Ih, L0H, L0G;  // family index sets (0-based)
  MultiplierVector mult;              // nonzero dependence at x
  Eigen::VectorXd point;              // nearby point with full rank
  int rank_at_point = 0;
};

struct CqVerdict {
  CqName name{CqName::LICQ};
  CqStatus status{CqStatus::Unknown};
  CqProvenance provenance{CqProvenance::ExactLP};
  std::optional<MultiplierCertificate> multiplier_certificate;
  std::optional<CpldCertificate> cpld_certificate;
  std::vector<std::string> notes;
};

struct StructuralFlags {
  bool all_h_linear = false;
  bool all_G_linear = false;
  bool all_H_linear = false;
  bool all_g_concave_or_linear = false;
  bool all_affine = false;  // every function including the objective is linear
};

struct StructuralReport {
  StructuralFlags flags;
  bool pseudonormality_everywhere = false;  // linear constraints + concave g
  bool linear_cq = false;                   // all constraint functions linear
};

CqVerdict check_licq(const ProblemInstance& prob, const Eigen::VectorXd& x,
                     double tol_act = kDefaultActivityTol);
CqVerdict check_mfcq(const ProblemInstance& prob, const Eigen::VectorXd& x,
                     double tol_act = kDefaultActivityTol);
CqVerdict check_gmfcq(const ProblemInstance& prob, const Eigen::VectorXd& x,
                      double tol_act = kDefaultActivityTol);

struct SequentialCqParams {
  int vertex_cap = 64;  // candidate rays per branch
  WitnessParams witness;
};

CqVerdict check_sequential_cq(const ProblemInstance& prob, const Eigen::VectorXd& x,
                              CqName name, double tol_act = kDefaultActivityTol,
                              const SequentialCqParams& params = {});

struct CpldParams {
  double radius = 1e-2;
  int samples = 200;
  int max_pool = 12;  // refuse subset enumeration beyond this many candidates
  std::uint64_t seed = 1729;
};

CqVerdict check_cpld(const ProblemInstance& prob, const Eigen::VectorXd& x,
                     double tol_act = kDefaultActivityTol, const CpldParams& params = {});

StructuralReport detect_structural(const ProblemInstance& prob);

struct CheckAllParams {
  SequentialCqParams sequential;
  CpldParams cpld;
};

/// Runs every checker, applies structural shortcuts and the implication
/// lattice (LICQ -> MFCQ -> GMFCQ -> pseudonormality -> quasinormality and
/// CPLD -> quasinormality). Throws Error(ConsistencyViolation) if an upstream
/// Holds ever meets a downstream Fails.
std::vector<CqVerdict> check_all(const ProblemInstance& prob, const Eigen::VectorXd& x,
                                 double tol_act = kDefaultActivityTol,
                                 const CheckAllParams& params = {});

/// Neighborhood-stability diagnostic: re-runs the quasinormality checker at
/// feasible points sampled around x and tallies the verdicts.
struct StabilityReport {
  int holds = 0, fails = 0, unknown = 0, sampled = 0;
};
StabilityReport quasinormality_stability(const ProblemInstance& prob,
                                         const Eigen::VectorXd& x, double radius,
                                         int samples, std::uint64_t seed,
                                         double tol_act = kDefaultActivityTol);

}  // namespace mpvc
