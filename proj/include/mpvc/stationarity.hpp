#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mpvc/model.hpp"
#include "mpvc/numeric.hpp"

namespace mpvc {

enum class StationarityKind { W, M, S, FJ_M, FJ_S, Enhanced_M, Enhanced_S };

const char* kind_name(StationarityKind k);
std::optional<StationarityKind> kind_from_name(const std::string& name);

/// Which multiplier is pinned to zero on a biactive index.
enum class BiactiveSide { GSide, HSide };  // GSide: eta_G = 0, HSide: eta_H = 0

/// Assignment of a side to every biactive index, in I_00 order.
using BranchAssignment = std::vector<BiactiveSide>;

struct MultiplierVector {
  double alpha = 1.0;       // fixed to 1 for non-Fritz-John kinds
  Eigen::VectorXd lambda;   // size m
  Eigen::VectorXd mu;       // size p
  Eigen::VectorXd eta_G;    // size q
  Eigen::VectorXd eta_H;    // size q
  BranchAssignment branch;  // parallel to the partition's I_00 list

  bool all_zero(double tol = 1e-12) const;  // ignores alpha
  double norm() const;                      // Euclidean, including alpha
};

struct Witness {
  std::vector<Eigen::VectorXd> points;  // one per radius level
  std::vector<double> radii;            // strictly decreasing
  double min_margin = 0.0;              // smallest strict-condition margin seen
};

struct Certificate {
  StationarityKind kind{StationarityKind::M};
  MultiplierVector mult;
  double residual = 0.0;        // inf-norm of the stationarity gradient sum
  bool alpha_positive = false;  // FJ kinds: a solution with alpha > 1e-8 exists
  bool all_zero_multipliers = false;
  std::optional<Witness> witness;
  std::vector<std::string> notes;
};

/// Labels the LP variables of a multiplier system (split into nonnegative
/// parts; `negative_part` marks the w of a free multiplier's u - w split).
struct MultiplierSystem {
  enum class Role { Alpha, Lambda, Mu, EtaG, EtaH };
  struct VarLabel {
    Role role;
    int index;           // constraint / pair index
    bool negative_part;  // second half of a free split
  };
  LinearProgram lp;  // all variables NonNegative; n equality rows (+ optional
                     // normalization row for FJ kinds)
  std::vector<VarLabel> labels;
  bool normalized = false;  // FJ kinds carry the L1 normalization row
};

MultiplierSystem build_multiplier_system(const ProblemInstance& prob,
                                         const Eigen::VectorXd& x, StationarityKind kind,
                                         const BranchAssignment& branch,
                                         double tol_act = kDefaultActivityTol);

enum class BranchOrder { Lexicographic, ReverseLexicographic };

std::optional<Certificate> certify(const ProblemInstance& prob, const Eigen::VectorXd& x,
                                   StationarityKind kind,
                                   double tol_act = kDefaultActivityTol,
                                   BranchOrder order = BranchOrder::Lexicographic);

/// Independent recheck of a certificate: gradient sum and every sign and
/// complementarity condition of the certificate's kind.
bool verify_certificate(const ProblemInstance& prob, const Eigen::VectorXd& x,
                        const Certificate& cert, double tol_act = kDefaultActivityTol);

enum class WitnessMode { PerSign, Aggregate };

struct WitnessParams {
  int levels = 8;          // K
  double initial_radius = 0.5;
  int samples_per_level = 2000;
  double margin = 1e-10;
  std::uint64_t seed = 1729;
};

std::optional<Witness> witness_search(const ProblemInstance& prob,
                                      const Eigen::VectorXd& x,
                                      const MultiplierVector& mult, WitnessMode mode,
                                      const WitnessParams& params = {});

struct EnhancedOutcome {
  enum class Status { Found, None, Unknown };
  Status status{Status::None};
  std::optional<Certificate> certificate;
  std::string note;
};

EnhancedOutcome certify_enhanced(const ProblemInstance& prob, const Eigen::VectorXd& x,
                                 StationarityKind kind,
                                 double tol_act = kDefaultActivityTol,
                                 const WitnessParams& params = {});

/// Writes v as sum lambda grad g + mu grad h + [eta_G grad G - eta_H grad H]
/// under the M-stationarity sign pattern, or returns nullopt.
std::optional<MultiplierVector> decompose_normal(const ProblemInstance& prob,
                                                 const Eigen::VectorXd& x,
                                                 const Eigen::VectorXd& v,
                                                 double tol_act = kDefaultActivityTol);

/// Gradient sum alpha*grad f + ... at x for the given multipliers (Def-2.4
/// orientation: +eta_G on G, -eta_H on H).
Eigen::VectorXd stationarity_residual_vector(const EvalRecord& rec,
                                             const MultiplierVector& mult);

inline constexpr int kBranchLimit = 20;  // refuse beyond 2^20 biactive branches

}  // namespace mpvc
