#include <gtest/gtest.h>

#include <random>

#include "dobrushin/errors.hpp"
#include "dobrushin/simplex.hpp"
#include "lp_oracle.hpp"

using namespace dobrushin;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an exception";
  return ErrorCode::kUnsupported;
}

// Feasibility, objective and the reduced-cost certificate on the original rows.
void expect_certified(const LinearProgram& lp, const SimplexSolution& s) {
  ASSERT_EQ(s.x.size(), lp.c.size());
  EXPECT_GE(s.x.minCoeff(), -1e-12);
  EXPECT_LE((lp.A * s.x - lp.b).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_NEAR(lp.c.dot(s.x), s.value, 1e-10);
  const Eigen::VectorXd reduced = lp.c - lp.A.transpose() * s.duals;
  EXPECT_GE(reduced.minCoeff(), -1e-10);
  EXPECT_NEAR(lp.b.dot(s.duals), s.value, 1e-9);
}

LinearProgram random_general_lp(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> mdist(2, 4);
  std::uniform_int_distribution<int> ndist(5, 10);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> pos(0.0, 1.0);
  std::bernoulli_distribution zero(0.4);
  const int m = mdist(rng);
  const int n = std::max(ndist(rng), m + 1);
  LinearProgram lp;
  lp.A.resize(m, n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) lp.A(i, j) = u(rng);
  }
  Eigen::VectorXd x0(n);
  for (int j = 0; j < n; ++j) x0(j) = zero(rng) ? 0.0 : pos(rng);
  lp.b = lp.A * x0;
  lp.c.resize(n);
  for (int j = 0; j < n; ++j) lp.c(j) = pos(rng);
  return lp;
}

LinearProgram random_transport_lp(std::mt19937_64& rng) {
  static const int shapes[][2] = {{2, 3}, {2, 4}, {3, 3}, {2, 5}};
  std::uniform_int_distribution<int> pick(0, 3);
  std::uniform_int_distribution<int> units(0, 4);
  std::uniform_real_distribution<double> cost(0.0, 3.0);
  const auto [m, n] = shapes[pick(rng)];
  // Integer masses make degenerate bases common.
  std::vector<double> supply(m), demand(n);
  double total = 0.0;
  for (auto& s : supply) total += (s = units(rng) + 1);
  double left = total;
  for (int j = 0; j + 1 < n; ++j) {
    demand[j] = std::min(left, static_cast<double>(units(rng)));
    left -= demand[j];
  }
  demand[n - 1] = left;
  Eigen::MatrixXd c(m, n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) c(i, j) = std::round(cost(rng));
  }
  LinearProgram lp;
  oracle::transport_system(c, supply, demand, lp.A, lp.b, lp.c);
  return lp;
}

}  // namespace

TEST(Simplex, ForcedValue) {
  LinearProgram lp;
  lp.A = Eigen::MatrixXd::Ones(1, 2);
  lp.b = Eigen::VectorXd::Ones(1);
  lp.c = Eigen::VectorXd::Ones(2);
  const auto s = simplex_solve(lp);
  EXPECT_NEAR(s.value, 1.0, 1e-12);
  expect_certified(lp, s);
}

TEST(Simplex, DiscreteThreeByThreeTransport) {
  Eigen::MatrixXd cost = Eigen::MatrixXd::Ones(3, 3) - Eigen::MatrixXd::Identity(3, 3);
  LinearProgram lp;
  oracle::transport_system(cost, {0.5, 0.3, 0.2}, {0.2, 0.3, 0.5}, lp.A, lp.b, lp.c);
  const auto oracle_value = oracle::enumerate_bases(lp.A, lp.b, lp.c);
  ASSERT_TRUE(oracle_value.feasible);
  EXPECT_NEAR(oracle_value.value, 0.3, 1e-12);
  for (auto rule : {PivotRule::kBland, PivotRule::kDantzig}) {
    const auto s = simplex_solve(lp, {}, {.rule = rule});
    EXPECT_NEAR(s.value, 0.3, 1e-10);
    expect_certified(lp, s);
    // One of the six marginal rows is redundant.
    EXPECT_EQ(s.kept_rows.size(), 6u - 1u);
  }
}

TEST(Simplex, MatchesBasisEnumerationOnRandomInstances) {
  std::mt19937_64 rng(20240611);
  for (int t = 0; t < 50; ++t) {
    const LinearProgram lp = t % 2 == 0 ? random_general_lp(rng) : random_transport_lp(rng);
    ASSERT_LE(lp.c.size(), 10);
    const auto expected = oracle::enumerate_bases(lp.A, lp.b, lp.c);
    ASSERT_TRUE(expected.feasible) << "instance " << t;
    for (auto rule : {PivotRule::kBland, PivotRule::kDantzig}) {
      const auto s = simplex_solve(lp, {}, {.rule = rule});
      EXPECT_NEAR(s.value, expected.value, 1e-9 * std::max(1.0, std::abs(expected.value)))
          << "instance " << t;
      expect_certified(lp, s);
    }
  }
}

TEST(Simplex, AcceptsFeasibleInitialBasis) {
  LinearProgram lp;
  lp.A.resize(2, 4);
  lp.b.resize(2);
  lp.c.resize(4);
  lp.A << 1, 1, 1, 0, 1, -1, 0, 1;
  lp.b << 4, 1;
  lp.c << -1, -2, 0, 0;
  // Slack basis {2, 3} is feasible since b >= 0.
  const auto s = simplex_solve(lp, std::vector<std::size_t>{2, 3});
  EXPECT_NEAR(s.value, -8.0, 1e-12);
  expect_certified(lp, s);
}

TEST(Simplex, RejectsSingularOrInfeasibleInitialBasis) {
  LinearProgram lp;
  lp.A.resize(2, 3);
  lp.b.resize(2);
  lp.c.resize(3);
  lp.A << 1, 1, 0, 1, 1, 1;
  lp.b << 1, 2;
  lp.c << 1, 1, 1;
  EXPECT_EQ(code_of([&] { simplex_solve(lp, std::vector<std::size_t>{0, 1}); }),
            ErrorCode::kInvalidArgument);
  lp.b << 2, 1;  // basis {0, 2} gives x2 = -1
  EXPECT_EQ(code_of([&] { simplex_solve(lp, std::vector<std::size_t>{0, 2}); }),
            ErrorCode::kInvalidArgument);
}

TEST(Simplex, DetectsInfeasibility) {
  LinearProgram lp;
  lp.A = Eigen::MatrixXd::Ones(1, 2);
  lp.b = -Eigen::VectorXd::Ones(1);
  lp.c = Eigen::VectorXd::Ones(2);
  EXPECT_EQ(code_of([&] { simplex_solve(lp); }), ErrorCode::kInfeasibleProgram);
}

TEST(Simplex, DetectsInconsistentRedundantRows) {
  LinearProgram lp;
  lp.A.resize(2, 2);
  lp.b.resize(2);
  lp.c.resize(2);
  lp.A << 1, 1, 2, 2;
  lp.b << 1, 3;
  lp.c << 1, 1;
  EXPECT_EQ(code_of([&] { simplex_solve(lp); }), ErrorCode::kInfeasibleProgram);
  lp.b << 1, 2;
  EXPECT_NEAR(simplex_solve(lp).value, 1.0, 1e-12);
}

TEST(Simplex, DetectsUnboundedness) {
  LinearProgram lp;
  lp.A.resize(1, 2);
  lp.b.resize(1);
  lp.c.resize(2);
  lp.A << 1, -1;
  lp.b << 0;
  lp.c << -1, 0;
  EXPECT_EQ(code_of([&] { simplex_solve(lp); }), ErrorCode::kUnboundedProgram);
}

TEST(Simplex, ReportsCyclingWhenBudgetIsTiny) {
  Eigen::MatrixXd cost(3, 3);
  cost << 4, 1, 3, 2, 5, 1, 3, 2, 6;
  LinearProgram lp;
  oracle::transport_system(cost, {1, 1, 1}, {1, 1, 1}, lp.A, lp.b, lp.c);
  EXPECT_EQ(code_of([&] { simplex_solve(lp, {}, {.rule = PivotRule::kBland, .max_iterations = 1}); }),
            ErrorCode::kDegenerateCycling);
}

TEST(Simplex, RejectsMalformedInput) {
  LinearProgram lp;
  lp.A = Eigen::MatrixXd::Ones(2, 2);
  lp.b = Eigen::VectorXd::Ones(1);
  lp.c = Eigen::VectorXd::Ones(2);
  EXPECT_EQ(code_of([&] { simplex_solve(lp); }), ErrorCode::kInvalidArgument);
}
