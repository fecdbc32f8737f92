#include "mpvc/numeric.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace mpvc {

int rank_with_tol(const Eigen::MatrixXd& M, double tol) {
  if (tol <= 0) throw Error(ErrorCode::PreconditionViolation, "tol must be positive");
  if (M.rows() == 0 || M.cols() == 0) return 0;
  Eigen::MatrixXd A = M;
  double max_norm = 0.0;
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    max_norm = std::max(max_norm, A.row(i).norm());
  const double thresh = std::max(tol * max_norm, 1e-12);

  int rank = 0;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < A.cols() && row < A.rows(); ++col) {
    Eigen::Index piv = row;
    double best = std::abs(A(row, col));
    for (Eigen::Index i = row + 1; i < A.rows(); ++i) {
      double a = std::abs(A(i, col));
      if (a > best) {
        best = a;
        piv = i;
      }
    }
    if (best <= thresh) continue;
    A.row(piv).swap(A.row(row));
    for (Eigen::Index i = row + 1; i < A.rows(); ++i) {
      double factor = A(i, col) / A(row, col);
      A.row(i) -= factor * A.row(row);
    }
    ++rank;
    ++row;
  }
  return rank;
}

LinearProgram LinearProgram::make(int nvars) {
  LinearProgram lp;
  lp.num_vars = nvars;
  lp.objective = Eigen::VectorXd::Zero(nvars);
  lp.A_eq.resize(0, nvars);
  lp.b_eq.resize(0);
  lp.A_le.resize(0, nvars);
  lp.b_le.resize(0);
  lp.signs.assign(nvars, VarSign::NonNegative);
  return lp;
}

void LinearProgram::add_eq(const Eigen::VectorXd& row, double rhs) {
  A_eq.conservativeResize(A_eq.rows() + 1, num_vars);
  A_eq.row(A_eq.rows() - 1) = row;
  b_eq.conservativeResize(b_eq.size() + 1);
  b_eq[b_eq.size() - 1] = rhs;
}

void LinearProgram::add_le(const Eigen::VectorXd& row, double rhs) {
  A_le.conservativeResize(A_le.rows() + 1, num_vars);
  A_le.row(A_le.rows() - 1) = row;
  b_le.conservativeResize(b_le.size() + 1);
  b_le[b_le.size() - 1] = rhs;
}

namespace {

constexpr double kEps = 1e-9;

// Dense tableau simplex core. Maximizes over {A v = b, v >= 0} starting from
// the given basis (basis columns must form an identity in T). Bland's rule:
// entering = lowest-index column with negative reduced cost, leaving =
// lowest-index basic variable among the minimum-ratio rows.
struct Tableau {
  Eigen::MatrixXd T;          // rows x (cols + 1); last column is rhs
  std::vector<int> basis;     // basic variable per row
  int cols = 0;

  double rhs(int i) const { return T(i, cols); }

  void pivot(int row, int col) {
    T.row(row) /= T(row, col);
    for (Eigen::Index i = 0; i < T.rows(); ++i) {
      if (i == row) continue;
      double f = T(i, col);
      if (f != 0.0) T.row(i) -= f * T.row(row);
    }
    basis[row] = col;
  }

  // Returns true when optimal; throws on iteration limit.
  bool run(const Eigen::VectorXd& cost, const std::vector<bool>& allowed,
           long max_iter, bool* unbounded) {
    *unbounded = false;
    const int m = static_cast<int>(T.rows());
    // reduced-cost row: r_j = (c_B . column_j) - c_j
    Eigen::VectorXd r(cols);
    for (int j = 0; j < cols; ++j) {
      double cb = 0.0;
      for (int i = 0; i < m; ++i) cb += cost[basis[i]] * T(i, j);
      r[j] = cb - cost[j];
    }
    double obj = 0.0;
    for (int i = 0; i < m; ++i) obj += cost[basis[i]] * rhs(i);

    for (long iter = 0; iter < max_iter; ++iter) {
      int enter = -1;
      for (int j = 0; j < cols; ++j) {
        if (!allowed[j]) continue;
        if (r[j] < -kEps) {
          enter = j;
          break;  // Bland: first improving index
        }
      }
      if (enter < 0) return true;

      int leave = -1;
      double best_ratio = 0.0;
      for (int i = 0; i < m; ++i) {
        if (T(i, enter) > kEps) {
          double ratio = rhs(i) / T(i, enter);
          if (leave < 0 || ratio < best_ratio - kEps ||
              (std::abs(ratio - best_ratio) <= kEps && basis[i] < basis[leave])) {
            leave = i;
            best_ratio = ratio;
          }
        }
      }
      if (leave < 0) {
        *unbounded = true;
        return true;
      }
      pivot(leave, enter);
      // refresh reduced costs for numerical hygiene every pivot is overkill;
      // update incrementally via the pivot row
      for (int j = 0; j < cols; ++j) {
        double cb = 0.0;
        for (int i = 0; i < m; ++i) cb += cost[basis[i]] * T(i, j);
        r[j] = cb - cost[j];
      }
    }
    throw Error(ErrorCode::IterationLimit, "simplex iteration limit reached");
  }
};

}  // namespace

LpOutcome lp_solve(const LinearProgram& lp) {
  const int n = lp.num_vars;
  // map to standard form: split free variables, add slacks
  std::vector<int> pos(n), neg(n, -1);
  int std_vars = 0;
  for (int k = 0; k < n; ++k) {
    pos[k] = std_vars++;
    if (lp.signs[k] == VarSign::Free) neg[k] = std_vars++;
  }
  const int n_eq = static_cast<int>(lp.A_eq.rows());
  const int n_le = static_cast<int>(lp.A_le.rows());
  const int rows = n_eq + n_le;
  const int slack0 = std_vars;
  const int total = std_vars + n_le;  // + slacks

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, total);
  Eigen::VectorXd b(rows);
  auto scatter = [&](int row, const Eigen::VectorXd& src) {
    for (int k = 0; k < n; ++k) {
      A(row, pos[k]) = src[k];
      if (neg[k] >= 0) A(row, neg[k]) = -src[k];
    }
  };
  for (int i = 0; i < n_eq; ++i) {
    scatter(i, lp.A_eq.row(i));
    b[i] = lp.b_eq[i];
  }
  for (int i = 0; i < n_le; ++i) {
    scatter(n_eq + i, lp.A_le.row(i));
    A(n_eq + i, slack0 + i) = 1.0;
    b[n_eq + i] = lp.b_le[i];
  }
  for (int i = 0; i < rows; ++i) {
    if (b[i] < 0) {
      A.row(i) = -A.row(i);
      b[i] = -b[i];
    }
  }

  const int art0 = total;
  const int cols = total + rows;  // + artificials (one per row)
  Tableau tab;
  tab.cols = cols;
  tab.T = Eigen::MatrixXd::Zero(rows, cols + 1);
  tab.T.block(0, 0, rows, total) = A;
  for (int i = 0; i < rows; ++i) {
    tab.T(i, art0 + i) = 1.0;
    tab.T(i, cols) = b[i];
  }
  tab.basis.resize(rows);
  for (int i = 0; i < rows; ++i) tab.basis[i] = art0 + i;

  const long max_iter = 20000 + 100L * (rows + cols);
  std::vector<bool> allowed(cols, true);
  bool unbounded = false;

  if (rows > 0) {
    // phase 1: maximize -sum(artificials)
    Eigen::VectorXd cost1 = Eigen::VectorXd::Zero(cols);
    for (int i = 0; i < rows; ++i) cost1[art0 + i] = -1.0;
    tab.run(cost1, allowed, max_iter, &unbounded);
    double art_sum = 0.0;
    for (int i = 0; i < rows; ++i)
      if (tab.basis[i] >= art0) art_sum += tab.rhs(i);
    if (art_sum > 1e-7) return {LpOutcome::Status::Infeasible, {}, 0.0};

    // drive remaining artificials out of the basis
    for (int i = 0; i < rows; ++i) {
      if (tab.basis[i] < art0) continue;
      int piv = -1;
      for (int j = 0; j < total; ++j) {
        if (std::abs(tab.T(i, j)) > kEps) {
          piv = j;
          break;
        }
      }
      if (piv >= 0) tab.pivot(i, piv);
      // else: redundant row; the artificial stays basic at value zero and its
      // column is banned below, so it can never become positive again
    }
    for (int j = art0; j < cols; ++j) allowed[j] = false;
  }

  // phase 2
  Eigen::VectorXd cost2 = Eigen::VectorXd::Zero(cols);
  for (int k = 0; k < n; ++k) {
    cost2[pos[k]] = lp.objective[k];
    if (neg[k] >= 0) cost2[neg[k]] = -lp.objective[k];
  }
  if (rows == 0) {
    // no constraints at all: any positive-cost direction is unbounded
    for (int j = 0; j < total; ++j)
      if (cost2[j] > kEps) return {LpOutcome::Status::Unbounded, {}, 0.0};
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    return {LpOutcome::Status::Optimal, v, 0.0};
  }
  tab.run(cost2, allowed, max_iter, &unbounded);
  if (unbounded) return {LpOutcome::Status::Unbounded, {}, 0.0};

  Eigen::VectorXd std_sol = Eigen::VectorXd::Zero(cols);
  for (int i = 0; i < rows; ++i) std_sol[tab.basis[i]] = tab.rhs(i);
  Eigen::VectorXd v(n);
  for (int k = 0; k < n; ++k)
    v[k] = std_sol[pos[k]] - (neg[k] >= 0 ? std_sol[neg[k]] : 0.0);

  LpOutcome out;
  out.status = LpOutcome::Status::Optimal;
  out.solution = v;
  out.value = lp.objective.dot(v);
  return out;
}

std::optional<Eigen::VectorXd> cone_nonzero(const std::vector<Eigen::VectorXd>& columns,
                                            const std::vector<ConeSign>& signs) {
  if (columns.empty())
    throw Error(ErrorCode::PreconditionViolation, "cone_nonzero needs at least one column");
  if (columns.size() != signs.size())
    throw Error(ErrorCode::PreconditionViolation, "columns/signs size mismatch");
  const int n = static_cast<int>(columns[0].size());
  const int k = static_cast<int>(columns.size());

  // One LP variable per nonnegative part; free coefficients get a u - w
  // split. A single normalized LP cannot decide nontriviality: u = w is
  // feasible and encodes c = 0. Pinning one coordinate to +-1 per subproblem
  // makes every feasible point a genuine nonzero ray.
  std::vector<int> pos(k, -1), neg(k, -1);
  int nv = 0;
  for (int j = 0; j < k; ++j) {
    if (signs[j] == ConeSign::Zero) continue;
    pos[j] = nv++;
    if (signs[j] == ConeSign::Free) neg[j] = nv++;
  }
  if (nv == 0) return std::nullopt;

  LinearProgram base = LinearProgram::make(nv);
  for (int r = 0; r < n; ++r) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(nv);
    for (int j = 0; j < k; ++j) {
      if (pos[j] < 0) continue;
      row[pos[j]] = columns[j][r];
      if (neg[j] >= 0) row[neg[j]] = -columns[j][r];
    }
    base.add_eq(row, 0.0);
  }

  for (int j = 0; j < k; ++j) {
    if (pos[j] < 0) continue;
    for (double dir : {1.0, -1.0}) {
      if (dir < 0 && neg[j] < 0) continue;  // only free coefficients go negative
      LinearProgram lp = base;
      Eigen::VectorXd pin = Eigen::VectorXd::Zero(nv);
      pin[pos[j]] = 1.0;
      if (neg[j] >= 0) pin[neg[j]] = -1.0;
      lp.add_eq(pin, dir);
      LpOutcome out = lp_solve(lp);
      if (out.status != LpOutcome::Status::Optimal) continue;

      Eigen::VectorXd c = Eigen::VectorXd::Zero(k);
      for (int i = 0; i < k; ++i) {
        if (pos[i] < 0) continue;
        c[i] = out.solution[pos[i]] - (neg[i] >= 0 ? out.solution[neg[i]] : 0.0);
      }
      c /= c.lpNorm<1>();  // the sum of the coefficient magnitudes is one
      Eigen::VectorXd combo = Eigen::VectorXd::Zero(n);
      for (int i = 0; i < k; ++i) combo += c[i] * columns[i];
      if (combo.lpNorm<Eigen::Infinity>() > 1e-9)
        throw Error(ErrorCode::ConsistencyViolation,
                    "cone_nonzero produced a combination with residual > 1e-9");
      return c;
    }
  }
  return std::nullopt;
}

CaratheodoryResult caratheodory_reduce(
    const Eigen::VectorXd& x, const std::vector<Eigen::VectorXd>& base,
    const std::vector<std::pair<Eigen::VectorXd, double>>& extras) {
  const int n = static_cast<int>(x.size());
  const int nb = static_cast<int>(base.size());

  Eigen::MatrixXd B(n, nb);
  for (int j = 0; j < nb; ++j) B.col(j) = base[j];
  if (nb > 0 && rank_with_tol(B.transpose(), 1e-9) < nb)
    throw Error(ErrorCode::PreconditionViolation, "base vectors are not independent");

  std::vector<std::pair<int, double>> kept;  // (original index, coefficient)
  std::vector<Eigen::VectorXd> kept_vec;
  for (size_t j = 0; j < extras.size(); ++j) {
    if (extras[j].second == 0.0)
      throw Error(ErrorCode::PreconditionViolation, "extra coefficient must be nonzero");
    kept.emplace_back(static_cast<int>(j), extras[j].second);
    kept_vec.push_back(extras[j].first);
  }

  // recover base coefficients via least squares and validate the input
  auto solve_base = [&](const Eigen::VectorXd& target) -> Eigen::VectorXd {
    if (nb == 0) return Eigen::VectorXd::Zero(0);
    return B.colPivHouseholderQr().solve(target);
  };
  auto residual_of = [&](const Eigen::VectorXd& beta) {
    Eigen::VectorXd r = x;
    if (nb > 0) r -= B * beta;
    for (size_t j = 0; j < kept.size(); ++j) r -= kept[j].second * kept_vec[j];
    return r.lpNorm<Eigen::Infinity>();
  };
  Eigen::VectorXd target = x;
  for (size_t j = 0; j < kept.size(); ++j) target -= kept[j].second * kept_vec[j];
  Eigen::VectorXd beta = solve_base(target);
  if (residual_of(beta) > 1e-8)
    throw Error(ErrorCode::PreconditionViolation,
                "input is not a valid decomposition of x");

  while (true) {
    const int ne = static_cast<int>(kept.size());
    Eigen::MatrixXd F(n, nb + ne);
    for (int j = 0; j < nb; ++j) F.col(j) = base[j];
    for (int j = 0; j < ne; ++j) F.col(nb + j) = kept_vec[j];
    if (nb + ne == 0 || rank_with_tol(F.transpose(), 1e-9) == nb + ne) break;

    Eigen::FullPivLU<Eigen::MatrixXd> lu(F);
    lu.setThreshold(1e-9);
    Eigen::MatrixXd kernel = lu.kernel();
    int use = -1;
    for (Eigen::Index c = 0; c < kernel.cols(); ++c) {
      if (kernel.col(c).tail(ne).lpNorm<Eigen::Infinity>() > 1e-10) {
        use = static_cast<int>(c);
        break;
      }
    }
    if (use < 0)
      throw Error(ErrorCode::ConsistencyViolation,
                  "dependent family without extra-supported kernel vector");
    Eigen::VectorXd gamma = kernel.col(use);

    // choose the direction with a positive blocking ratio
    auto min_ratio = [&](const Eigen::VectorXd& g) {
      double t = -1.0;
      for (int j = 0; j < ne; ++j) {
        double gj = g[nb + j];
        if (std::abs(gj) < 1e-12) continue;
        double r = kept[j].second / gj;
        if (r > 0 && (t < 0 || r < t)) t = r;
      }
      return t;
    };
    double t = min_ratio(gamma);
    if (t < 0) {
      gamma = -gamma;
      t = min_ratio(gamma);
    }
    if (t < 0)
      throw Error(ErrorCode::ConsistencyViolation, "no blocking ratio in reduction");

    for (int j = 0; j < nb; ++j) beta[j] -= t * gamma[j];
    std::vector<std::pair<int, double>> next;
    std::vector<Eigen::VectorXd> next_vec;
    for (int j = 0; j < ne; ++j) {
      double c = kept[j].second - t * gamma[nb + j];
      if (std::abs(c) <= 1e-12) continue;
      next.emplace_back(kept[j].first, c);
      next_vec.push_back(kept_vec[j]);
    }
    kept = std::move(next);
    kept_vec = std::move(next_vec);
  }

  // re-solve base coefficients against the kept extras for a clean residual
  target = x;
  for (size_t j = 0; j < kept.size(); ++j) target -= kept[j].second * kept_vec[j];
  beta = solve_base(target);
  if (residual_of(beta) > 1e-8)
    throw Error(ErrorCode::ConsistencyViolation, "reduction lost the decomposition");

  CaratheodoryResult result;
  result.base_coeffs = beta;
  result.extras = kept;
  return result;
}

Eigen::VectorXd finite_diff_grad(const std::function<double(const Eigen::VectorXd&)>& f,
                                 const Eigen::VectorXd& x, double h) {
  if (h <= 0) throw Error(ErrorCode::PreconditionViolation, "h must be positive");
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd xp = x, xm = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    g[i] = (f(xp) - f(xm)) / (2.0 * h);
    xp[i] = x[i];
    xm[i] = x[i];
  }
  return g;
}

}  // namespace mpvc
