#include <gtest/gtest.h>

#include <random>

#include "dobrushin/errors.hpp"
#include "dobrushin/finite_measure.hpp"
#include "oracles.hpp"

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

SpacePtr line_space(int n) {
  Eigen::MatrixXd d(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) d(i, j) = std::abs(i - j);
  }
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return std::make_shared<const FiniteMetricSpace>(labels, d);
}

}  // namespace

TEST(FiniteMetricSpace, AcceptsPathMetric) {
  auto s = line_space(4);
  EXPECT_EQ(s->size(), 4u);
  EXPECT_DOUBLE_EQ(s->distance(0, 3), 3.0);
  EXPECT_FALSE(s->is_discrete());
}

TEST(FiniteMetricSpace, RejectsTriangleViolation) {
  Eigen::MatrixXd d(3, 3);
  d << 0, 1, 5, 1, 0, 1, 5, 1, 0;
  EXPECT_EQ(code_of([&] { FiniteMetricSpace({"a", "b", "c"}, d); }), ErrorCode::kInvalidArgument);
}

TEST(FiniteMetricSpace, RejectsAsymmetryAndZeroOffDiagonal) {
  Eigen::MatrixXd asym(2, 2);
  asym << 0, 1, 2, 0;
  EXPECT_EQ(code_of([&] { FiniteMetricSpace({"a", "b"}, asym); }), ErrorCode::kInvalidArgument);
  Eigen::MatrixXd zero(2, 2);
  zero << 0, 0, 0, 0;
  EXPECT_EQ(code_of([&] { FiniteMetricSpace({"a", "b"}, zero); }), ErrorCode::kInvalidArgument);
  EXPECT_FALSE(metric_axiom_violation(asym, 1e-12).empty());
}

TEST(FiniteMetricSpace, RejectsShapeMismatch) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
  EXPECT_EQ(code_of([&] { FiniteMetricSpace({"a"}, d); }), ErrorCode::kInvalidArgument);
}

TEST(FiniteMetricSpace, DiscreteSpaceIsFlagged) {
  auto s = make_discrete_space(5);
  EXPECT_TRUE(s->is_discrete());
  EXPECT_DOUBLE_EQ(s->distance(1, 4), 1.0);
  EXPECT_DOUBLE_EQ(s->distance(2, 2), 0.0);
  EXPECT_EQ(code_of([] { make_discrete_space(0); }), ErrorCode::kInvalidArgument);
}

TEST(ProductMetricSpace, EncodeDecodeRoundTrip) {
  ProductMetricSpace p(make_discrete_space(3), 4);
  EXPECT_EQ(p.size(), 81u);
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(p.encode(p.decode(i)), i);
  // Site 0 is the least significant digit.
  EXPECT_EQ(p.decode(1), (std::vector<int>{1, 0, 0, 0}));
  EXPECT_EQ(p.decode(3), (std::vector<int>{0, 1, 0, 0}));
}

TEST(ProductMetricSpace, HammingDistanceForDiscreteFactor) {
  ProductMetricSpace p(make_discrete_space(2), 3);
  EXPECT_DOUBLE_EQ(p.distance(std::vector<int>{0, 1, 1}, std::vector<int>{1, 1, 0}), 2.0);
  EXPECT_DOUBLE_EQ(p.distance(0, 7), 3.0);
}

TEST(ProductMetricSpace, SumMetricOverGeneralFactor) {
  ProductMetricSpace p(line_space(3), 2);
  EXPECT_DOUBLE_EQ(p.distance(std::vector<int>{0, 2}, std::vector<int>{2, 1}), 3.0);
  auto m = p.materialize();
  EXPECT_EQ(m->size(), 9u);
  EXPECT_DOUBLE_EQ(m->distance(p.encode(std::vector<int>{0, 2}), p.encode(std::vector<int>{2, 1})), 3.0);
}

TEST(ProductMetricSpace, RejectsBadConfigurations) {
  ProductMetricSpace p(make_discrete_space(2), 3);
  EXPECT_EQ(code_of([&] { p.encode(std::vector<int>{0, 2, 0}); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([&] { p.decode(8); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([&] { ProductMetricSpace(make_discrete_space(2), 0); }), ErrorCode::kInvalidArgument);
}

TEST(ProbabilityVector, ValidatesNormalisation) {
  auto s = make_discrete_space(3);
  EXPECT_NO_THROW(ProbabilityVector(s, {0.2, 0.3, 0.5}));
  EXPECT_EQ(code_of([&] { ProbabilityVector(s, {0.2, 0.3, 0.4}); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([&] { ProbabilityVector(s, {-0.1, 0.6, 0.5}); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([&] { ProbabilityVector(s, {0.5, 0.5}); }), ErrorCode::kInvalidArgument);
}

TEST(ProbabilityVector, FromWeightsNormalises) {
  auto p = ProbabilityVector::from_weights(make_discrete_space(2), {1.0, 3.0});
  EXPECT_DOUBLE_EQ(p[0], 0.25);
  EXPECT_DOUBLE_EQ(p[1], 0.75);
  EXPECT_EQ(code_of([] { ProbabilityVector::from_weights(make_discrete_space(2), {0.0, 0.0}); }),
            ErrorCode::kInvalidArgument);
}

TEST(Coupling, ProductAndDiagonalHaveExactMarginals) {
  auto s = make_discrete_space(3);
  ProbabilityVector mu(s, {0.2, 0.3, 0.5});
  ProbabilityVector nu(s, {0.6, 0.3, 0.1});
  auto prod = Coupling::product(mu, nu);
  EXPECT_LE(prod.marginal_error(), 1e-15);
  // Independent coupling under the discrete metric: 1 - sum mu_i nu_i.
  EXPECT_NEAR(coupling_cost(prod), 1.0 - (0.12 + 0.09 + 0.05), 1e-15);
  auto diag = Coupling::diagonal(mu);
  EXPECT_DOUBLE_EQ(coupling_cost(diag), 0.0);
}

TEST(Coupling, RejectsWrongMarginals) {
  auto s = make_discrete_space(2);
  ProbabilityVector mu(s, {0.5, 0.5});
  Eigen::MatrixXd sigma(2, 2);
  sigma << 0.5, 0.0, 0.0, 0.4;
  EXPECT_EQ(code_of([&] { Coupling(mu, mu, sigma); }), ErrorCode::kInconsistentCoupling);
}

TEST(Coupling, RandomProductCouplingsAreConsistent) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 20; ++t) {
    const int n = 2 + t % 9;
    auto s = std::make_shared<const FiniteMetricSpace>(std::vector<std::string>(n, "x"),
                                                       oracle::random_metric(n, rng));
    ProbabilityVector mu(s, oracle::random_probability(n, rng));
    ProbabilityVector nu(s, oracle::random_probability(n, rng));
    EXPECT_LE(Coupling::product(mu, nu).marginal_error(), 1e-12);
  }
}
