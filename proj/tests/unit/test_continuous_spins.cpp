#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dobrushin/continuous_spins.hpp"
#include "dobrushin/errors.hpp"
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

ConvexPotentialSpec spec(double alpha, int d, const char* g) {
  return {alpha, d, ConvexPotential::parse(g)};
}

}  // namespace

TEST(ConvexPotential, ParsesAndEvaluates) {
  EXPECT_TRUE(ConvexPotential::parse("zero").is_zero());
  EXPECT_DOUBLE_EQ(ConvexPotential::parse("x4")(2.0), 16.0);
  EXPECT_DOUBLE_EQ(ConvexPotential::parse("x2+x4")(2.0), 20.0);
  EXPECT_DOUBLE_EQ(ConvexPotential::parse("quartic:0.5")(2.0), 8.0);
  EXPECT_DOUBLE_EQ(ConvexPotential::parse("poly:1,0,2")(-1.0), 3.0);
  EXPECT_EQ(code_of([] { ConvexPotential::parse("poly:1,-1"); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { ConvexPotential::parse("cosh"); }), ErrorCode::kInvalidArgument);
}

TEST(GibbsDensity, SymmetricWithoutField) {
  const auto rho = gibbs_density_1d(spec(1.0, 1, "zero"), 1.0, 0.0);
  EXPECT_NEAR(rho.mean(), 0.0, 1e-8);
  EXPECT_NEAR(rho.cdf.back(), 1.0, 1e-12);
}

TEST(GibbsDensity, GaussianMoments) {
  for (double alpha : {0.5, 2.0}) {
    for (double beta : {0.5, 4.0}) {
      for (double y : {-1.5, 0.7}) {
        const auto s = spec(alpha, 1, "zero");
        const auto rho = gibbs_density_1d(s, beta, y);
        EXPECT_NEAR(rho.mean(), y / s.alpha_d(), 1e-6);
        EXPECT_NEAR(rho.variance(), 1.0 / (beta * s.alpha_d()), 1e-6);
        EXPECT_LE(rho.tail_mass_bound, 1e-10);
        // Pointwise CDF against the normal distribution.
        const double sd = 1.0 / std::sqrt(beta * s.alpha_d());
        for (std::size_t i = 0; i < rho.grid.size(); i += 997) {
          EXPECT_NEAR(rho.cdf[i], oracle::normal_cdf((rho.grid[i] - y / s.alpha_d()) / sd), 1e-6);
        }
      }
    }
  }
}

TEST(GibbsDensity, QuarticConcentratesAtLargeBeta) {
  const auto s = spec(0.0001, 0, "x4");
  const double v_small = gibbs_density_1d(s, 1.0, 0.0).variance();
  const double v_large = gibbs_density_1d(s, 1e6, 0.0).variance();
  EXPECT_LT(v_large, v_small / 10);
  EXPECT_LT(v_large, 1e-3);
}

TEST(GibbsDensity, GridTooSmall) {
  GridParams grid;
  grid.half_width = 0.5;
  EXPECT_EQ(code_of([&] { gibbs_density_1d(spec(1.0, 0, "zero"), 1.0, 0.0, grid); }),
            ErrorCode::kGridTooSmall);
}

TEST(Contraction, GaussianIsTranslation) {
  for (double alpha : {0.5, 1.0, 2.0}) {
    for (double gap : {0.1, 1.0, 5.0}) {
      const auto r = contraction_check_1d(spec(alpha, 1, "zero"), 1.0, 0.3, 0.3 + gap);
      EXPECT_NEAR(r.w1, gap / (alpha + 4), 1e-6);
      EXPECT_DOUBLE_EQ(r.bound, gap / (alpha + 4));
      EXPECT_TRUE(r.ok);
    }
  }
}

TEST(Contraction, QuarticExample) {
  const auto r = contraction_check_1d(spec(1.0, 1, "x4"), 1.0, 0.0, 2.0);
  EXPECT_TRUE(r.ok);
  EXPECT_GT(r.w1, 0.0);
  EXPECT_LT(r.w1, r.bound);
}

TEST(Contraction, EqualFieldsGiveZero) {
  EXPECT_DOUBLE_EQ(contraction_check_1d(spec(1.0, 1, "x2+x4"), 2.0, 0.4, 0.4).w1, 0.0);
}

TEST(Contraction, SeededSweep) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (const char* g : {"zero", "x4", "x2+x4"}) {
    for (double alpha : {0.5, 1.0, 2.0}) {
      for (double beta : {0.5, 1.0, 4.0}) {
        for (double gap : {0.1, 1.0, 5.0}) {
          const double y = u(rng);
          const auto s = spec(alpha, 1, g);
          const auto r = contraction_check_1d(s, beta, y, y + gap);
          EXPECT_LE(r.w1, r.bound + 1e-6) << g << " " << alpha << " " << beta << " " << gap;
          EXPECT_LE(dominance_violation(s, beta, y, y + gap), 1e-9);
          EXPECT_LE(shifted_dominance_violation(s, beta, y, y + gap), 1e-9);
          EXPECT_LE(running_mean_violation(gibbs_density_1d(s, beta, y)), 1e-9);
        }
      }
    }
  }
}

TEST(Contraction, DominanceRequiresOrderedFields) {
  EXPECT_EQ(code_of([] { dominance_violation(spec(1.0, 1, "zero"), 1.0, 1.0, 0.0); }),
            ErrorCode::kInvalidArgument);
}

TEST(GaussianNd, ZeroCouplingMovesNothing) {
  const Eigen::MatrixXd L = Eigen::MatrixXd::Zero(3, 3);
  const auto r = gaussian_nd_bound_check(L, 1.0, 2, 1.0, Eigen::Vector3d(1, 2, 3), Eigen::Vector3d(0, 0, 0));
  EXPECT_DOUBLE_EQ(r.w1, 0.0);
  EXPECT_TRUE(r.ok);
}

TEST(GaussianNd, IdentityGivesNormOverAlpha) {
  const Eigen::Vector3d y(0.5, -1.0, 2.0), yp(0.0, 1.0, 0.0);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(3, 3);
  const auto e = gaussian_nd_bound_check(I, 2.0, 1, 1.0, y, yp);
  EXPECT_NEAR(e.w1, (y - yp).norm() / 2.0, 1e-12);
  EXPECT_NEAR(e.bound, e.w1, 1e-12);
  EXPECT_TRUE(e.ok);
  const auto s = gaussian_nd_bound_check(I, 2.0, 1, 1.0, y, yp, VectorNorm::kSum);
  EXPECT_NEAR(s.w1, (y - yp).lpNorm<1>() / 2.0, 1e-12);
}

TEST(GaussianNd, DiagonalDecomposesIntoCoordinates) {
  const Eigen::Vector3d l(0.5, 1.0, 2.0), y(0.3, -0.4, 1.0), yp(1.1, 0.2, -0.5);
  const double alpha = 3.0, beta = 1.5;
  const auto r = gaussian_nd_bound_check(l.asDiagonal().toDenseMatrix(), alpha, 1, beta, y, yp,
                                         VectorNorm::kSum);
  double per_coordinate = 0.0;
  for (int k = 0; k < 3; ++k) {
    per_coordinate +=
        contraction_check_1d(spec(alpha, 0, "zero"), beta, l(k) * y(k), l(k) * yp(k)).w1;
  }
  EXPECT_NEAR(r.w1, per_coordinate, 1e-6);
  EXPECT_TRUE(r.ok);
  EXPECT_DOUBLE_EQ(r.operator_norm, 2.0);
  EXPECT_FALSE(r.alpha_condition);
}

TEST(GaussianNd, RejectsBadMatrices) {
  Eigen::MatrixXd L(2, 2);
  L << 1, 0.5, 0, 1;
  const Eigen::Vector2d y(0, 0);
  EXPECT_EQ(code_of([&] { gaussian_nd_bound_check(L, 1, 1, 1, y, y); }), ErrorCode::kInvalidArgument);
  L << 0, 1, 1, 0;  // symmetric but indefinite
  EXPECT_EQ(code_of([&] { gaussian_nd_bound_check(L, 1, 1, 1, y, y); }), ErrorCode::kInvalidArgument);
}

TEST(Coordinatewise, QuarticPair) {
  const Eigen::MatrixXd L = Eigen::MatrixXd::Identity(2, 2);
  const std::vector<ConvexPotential> g(2, ConvexPotential::quartic());
  const auto r = convex2_coordinatewise_check(L, g, 1.0, 1, 1.0, Eigen::Vector2d(0, 1), Eigen::Vector2d(2, -1));
  EXPECT_TRUE(r.ok);
  ASSERT_EQ(r.per_coordinate.size(), 2u);
  EXPECT_NEAR(r.w1_upper, r.per_coordinate[0] + r.per_coordinate[1], 1e-15);
  const auto same = convex2_coordinatewise_check(L, g, 1.0, 1, 1.0, Eigen::Vector2d(0, 1), Eigen::Vector2d(0, 1));
  EXPECT_DOUBLE_EQ(same.w1_upper, 0.0);
}

TEST(Coordinatewise, ZeroPotentialMatchesGaussian) {
  Eigen::MatrixXd L = Eigen::Vector2d(0.5, 1.5).asDiagonal();
  const std::vector<ConvexPotential> g(2, ConvexPotential::zero());
  const Eigen::Vector2d y(0.2, -0.3), yp(-0.4, 0.9);
  const auto c = convex2_coordinatewise_check(L, g, 2.0, 1, 1.0, y, yp);
  const auto n = gaussian_nd_bound_check(L, 2.0, 1, 1.0, y, yp, VectorNorm::kSum);
  EXPECT_NEAR(c.w1_upper, n.w1, 1e-6);
}

TEST(Coordinatewise, NonDiagonalIsUnsupported) {
  Eigen::MatrixXd L(2, 2);
  L << 1, 0.2, 0.2, 1;
  const std::vector<ConvexPotential> g(2);
  EXPECT_EQ(code_of([&] {
              convex2_coordinatewise_check(L, g, 1, 1, 1, Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1));
            }),
            ErrorCode::kUnsupported);
}
