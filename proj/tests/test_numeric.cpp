#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "mpvc/numeric.hpp"

using namespace mpvc;

namespace {

Eigen::MatrixXd rows2(std::initializer_list<std::pair<double, double>> rs) {
  Eigen::MatrixXd M(rs.size(), 2);
  int i = 0;
  for (auto [a, b] : rs) {
    M(i, 0) = a;
    M(i, 1) = b;
    ++i;
  }
  return M;
}

Eigen::VectorXd v2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("rank_with_tol basics") {
  CHECK(rank_with_tol(rows2({{0, 1}, {1, 0}}), 1e-9) == 2);
  CHECK(rank_with_tol(rows2({{1, 0}, {-1, 0}}), 1e-9) == 1);
  CHECK(rank_with_tol(Eigen::MatrixXd::Zero(3, 2), 1e-9) == 0);
}

TEST_CASE("rank_with_tol is permutation invariant") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int t = 0; t < 50; ++t) {
    Eigen::MatrixXd M(4, 3);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 3; ++j) M(i, j) = u(rng);
    if (t % 3 == 0) M.row(3) = M.row(0) + M.row(1);  // force deficiency sometimes
    int base = rank_with_tol(M, 1e-9);
    std::vector<int> perm{0, 1, 2, 3};
    std::shuffle(perm.begin(), perm.end(), rng);
    Eigen::MatrixXd P(4, 3);
    for (int i = 0; i < 4; ++i) P.row(i) = M.row(perm[i]);
    CHECK(rank_with_tol(P, 1e-9) == base);
  }
}

TEST_CASE("lp_solve: bounded, infeasible, unbounded") {
  {
    LinearProgram lp = LinearProgram::make(1);
    lp.objective[0] = 1.0;
    lp.add_le(Eigen::VectorXd::Ones(1), 3.0);
    LpOutcome out = lp_solve(lp);
    REQUIRE(out.status == LpOutcome::Status::Optimal);
    CHECK(out.value == doctest::Approx(3.0));
    CHECK(out.solution[0] == doctest::Approx(3.0));
  }
  {
    LinearProgram lp = LinearProgram::make(1);
    Eigen::VectorXd one = Eigen::VectorXd::Ones(1);
    lp.add_le(-one, -1.0);  // v >= 1
    lp.add_le(one, 0.0);    // v <= 0
    CHECK(lp_solve(lp).status == LpOutcome::Status::Infeasible);
  }
  {
    LinearProgram lp = LinearProgram::make(1);
    lp.signs[0] = VarSign::Free;
    lp.objective[0] = 1.0;
    CHECK(lp_solve(lp).status == LpOutcome::Status::Unbounded);
  }
}

TEST_CASE("lp_solve optima satisfy constraints and are reproducible") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 25; ++t) {
    LinearProgram lp = LinearProgram::make(3);
    lp.signs[1] = VarSign::Free;
    for (int i = 0; i < 3; ++i) lp.objective[i] = u(rng);
    for (int r = 0; r < 4; ++r) {
      Eigen::VectorXd row(3);
      for (int i = 0; i < 3; ++i) row[i] = u(rng);
      lp.add_le(row, 1.0 + std::abs(u(rng)));
    }
    // box to keep it bounded
    for (int i = 0; i < 3; ++i) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(3);
      e[i] = 1.0;
      lp.add_le(e, 5.0);
      lp.add_le(-e, 5.0);
    }
    LpOutcome a = lp_solve(lp);
    REQUIRE(a.status == LpOutcome::Status::Optimal);
    for (int r = 0; r < lp.A_le.rows(); ++r)
      CHECK(lp.A_le.row(r).dot(a.solution) <= lp.b_le[r] + 1e-9);
    LpOutcome b = lp_solve(lp);
    REQUIRE(b.status == LpOutcome::Status::Optimal);
    CHECK(std::memcmp(a.solution.data(), b.solution.data(),
                      sizeof(double) * a.solution.size()) == 0);
    CHECK(a.value == b.value);
  }
}

TEST_CASE("cone_nonzero matches the worked examples") {
  {
    auto c = cone_nonzero({v2(0, 1), v2(1, 0)},
                          {ConeSign::NonNegative, ConeSign::NonNegative});
    CHECK(!c.has_value());
  }
  {
    auto c = cone_nonzero({v2(1, 0), v2(-1, 0)},
                          {ConeSign::NonNegative, ConeSign::NonNegative});
    REQUIRE(c.has_value());
    CHECK((*c)[0] == doctest::Approx(0.5));
    CHECK((*c)[1] == doctest::Approx(0.5));
  }
  {
    auto c = cone_nonzero({v2(0, 0)}, {ConeSign::NonNegative});
    REQUIRE(c.has_value());
    CHECK((*c)[0] == doctest::Approx(1.0));
  }
}

TEST_CASE("cone_nonzero results are nonzero with tiny combination residual") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int found = 0;
  for (int t = 0; t < 60; ++t) {
    int k = 2 + static_cast<int>(rng() % 4);
    std::vector<Eigen::VectorXd> cols;
    std::vector<ConeSign> signs;
    for (int j = 0; j < k; ++j) {
      cols.push_back(v2(u(rng), u(rng)));
      signs.push_back(rng() % 2 ? ConeSign::NonNegative : ConeSign::Free);
    }
    auto c = cone_nonzero(cols, signs);
    if (!c) continue;
    ++found;
    Eigen::VectorXd combo = Eigen::VectorXd::Zero(2);
    double l1 = 0.0;
    for (int j = 0; j < k; ++j) {
      combo += (*c)[j] * cols[j];
      l1 += std::abs((*c)[j]);
      if (signs[j] == ConeSign::NonNegative) CHECK((*c)[j] >= -1e-12);
    }
    CHECK(combo.lpNorm<Eigen::Infinity>() <= 1e-9);
    CHECK(l1 > 1e-9);
  }
  CHECK(found > 5);  // free signs make dependences common
}

namespace {

// Independent nontriviality oracle: the cone contains a nonzero point iff
// some coordinate can be pushed away from zero inside a unit box.
bool cone_nontrivial_box_oracle(const std::vector<Eigen::VectorXd>& cols,
                                const std::vector<ConeSign>& signs) {
  const int n = static_cast<int>(cols[0].size());
  const int k = static_cast<int>(cols.size());
  for (int j = 0; j < k; ++j) {
    if (signs[j] == ConeSign::Zero) continue;
    for (double dir : {1.0, -1.0}) {
      if (dir < 0 && signs[j] != ConeSign::Free) continue;
      LinearProgram lp = LinearProgram::make(k);
      for (int i = 0; i < k; ++i) {
        if (signs[i] == ConeSign::Free) lp.signs[i] = VarSign::Free;
        Eigen::VectorXd e = Eigen::VectorXd::Zero(k);
        e[i] = 1.0;
        lp.add_le(e, signs[i] == ConeSign::Zero ? 0.0 : 1.0);
        lp.add_le(-e, signs[i] == ConeSign::Zero ? 0.0 : 1.0);
      }
      for (int r = 0; r < n; ++r) {
        Eigen::VectorXd row(k);
        for (int i = 0; i < k; ++i) row[i] = cols[i][r];
        lp.add_eq(row, 0.0);
      }
      lp.objective = Eigen::VectorXd::Zero(k);
      lp.objective[j] = dir;
      LpOutcome out = lp_solve(lp);
      if (out.status == LpOutcome::Status::Optimal && out.value > 1e-9) return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("cone_nonzero verdict matches a box-LP nontriviality oracle") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 80; ++t) {
    int k = 1 + static_cast<int>(rng() % 4);
    std::vector<Eigen::VectorXd> cols;
    std::vector<ConeSign> signs;
    for (int j = 0; j < k; ++j) {
      Eigen::VectorXd c = v2(u(rng), u(rng));
      if (t % 5 == 0 && j == 0) c.setZero();  // exercise zero columns
      cols.push_back(c);
      int s = static_cast<int>(rng() % 3);
      signs.push_back(s == 0 ? ConeSign::NonNegative
                             : s == 1 ? ConeSign::Free : ConeSign::Zero);
    }
    bool trivial_lp = !cone_nonzero(cols, signs).has_value();
    bool trivial_box = !cone_nontrivial_box_oracle(cols, signs);
    CHECK(trivial_lp == trivial_box);
  }
}

TEST_CASE("caratheodory_reduce worked examples") {
  {
    // x = 0.5*(1,0) + 0.25*(2,0): one extra must go, sign preserved
    auto r = caratheodory_reduce(v2(1, 0), {},
                                 {{v2(1, 0), 0.5}, {v2(2, 0), 0.25}});
    REQUIRE(r.extras.size() == 1);
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(2);
    for (auto& [idx, coeff] : r.extras) {
      CHECK(coeff > 0.0);  // original coefficients were positive
      sum += coeff * (idx == 0 ? v2(1, 0) : v2(2, 0));
    }
    CHECK((sum - v2(1, 0)).lpNorm<Eigen::Infinity>() <= 1e-8);
  }
  {
    auto r = caratheodory_reduce(v2(1, 1), {v2(1, 0)}, {{v2(0, 1), 1.0}});
    REQUIRE(r.extras.size() == 1);
    CHECK(r.extras[0].second == doctest::Approx(1.0));
    CHECK(r.base_coeffs[0] == doctest::Approx(1.0));
  }
  {
    auto r = caratheodory_reduce(v2(0, 0), {}, {});
    CHECK(r.extras.empty());
  }
}

TEST_CASE("caratheodory_reduce output is independent and reproduces x") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int t = 0; t < 40; ++t) {
    std::vector<Eigen::VectorXd> base;
    if (t % 2) base.push_back(v2(1.0, 0.25));
    std::vector<std::pair<Eigen::VectorXd, double>> extras;
    int ne = 2 + static_cast<int>(rng() % 4);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(2);
    double beta = u(rng);
    if (!base.empty()) x += beta * base[0];
    for (int j = 0; j < ne; ++j) {
      double coeff = u(rng);
      if (std::abs(coeff) < 0.05) coeff = 0.3;
      Eigen::VectorXd vec = v2(u(rng), u(rng));
      extras.emplace_back(vec, coeff);
      x += coeff * vec;
    }
    auto r = caratheodory_reduce(x, base, extras);

    Eigen::MatrixXd fam(base.size() + r.extras.size(), 2);
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(2);
    int row = 0;
    for (size_t j = 0; j < base.size(); ++j) {
      fam.row(row++) = base[j].transpose();
      sum += r.base_coeffs[j] * base[j];
    }
    for (auto& [idx, coeff] : r.extras) {
      fam.row(row++) = extras[idx].first.transpose();
      sum += coeff * extras[idx].first;
      CHECK(coeff * extras[idx].second > 0.0);  // same sign as the original
    }
    if (row > 0) CHECK(rank_with_tol(fam, 1e-9) == row);
    CHECK((sum - x).lpNorm<Eigen::Infinity>() <= 1e-8);
  }
}

TEST_CASE("finite_diff_grad sanity") {
  auto f = [](const Eigen::VectorXd& x) { return x[0] * x[0]; };
  Eigen::VectorXd x(1);
  x << 1.0;
  CHECK(std::abs(finite_diff_grad(f, x, 1e-6)[0] - 2.0) <= 1e-6);

  auto c = [](const Eigen::VectorXd&) { return 4.0; };
  CHECK(finite_diff_grad(c, x, 1e-6).norm() == doctest::Approx(0.0));

  auto m = [](const Eigen::VectorXd& x2) { return x2[0] * x2[1]; };
  Eigen::VectorXd p(2);
  p << 3.0, 5.0;
  Eigen::VectorXd g = finite_diff_grad(m, p, 1e-6);
  CHECK(std::abs(g[0] - 5.0) <= 1e-6);
  CHECK(std::abs(g[1] - 3.0) <= 1e-6);
}
