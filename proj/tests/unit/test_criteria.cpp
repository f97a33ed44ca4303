#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "dobrushin/criteria.hpp"
#include "dobrushin/errors.hpp"
#include "dobrushin/transport.hpp"
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

const DsClassEntry& find_class(const DsReport& r, const std::string& id) {
  for (const auto& c : r.cases) {
    for (const auto& cls : c.classes) {
      if (cls.class_id == id) return cls;
    }
  }
  throw std::runtime_error("missing class " + id);
}

}  // namespace

// ---------------------------------------------------------------------------
// Single-site criterion

TEST(Dobrushin, IsingTanhMatchesExplicitMeasures) {
  for (int d : {1, 2, 3}) {
    for (double beta : {0.05, 0.27, 0.9}) {
      const auto r = dobrushin_sup(SpinModel::ising(), d, beta);
      EXPECT_LE(r.cross_check_error, 1e-12);
      EXPECT_DOUBLE_EQ(r.threshold, 1.0 / (2 * d));
      double expected = 0.0;
      for (int S = -2 * d; S + 2 <= 2 * d; S += 2) expected = std::max(expected, oracle::ising_w1(beta, S, S + 2));
      EXPECT_NEAR(r.sup_distance, expected, 1e-15);
    }
  }
}

TEST(Dobrushin, IsingCriticalBounds) {
  for (int d : {2, 3, 4}) {
    const auto b = dobrushin_critical_bound(SpinModel::ising(), d);
    EXPECT_NEAR(b.beta_J_star, oracle::ising_bound(d), 1e-6);
    EXPECT_NEAR(ising_dobrushin_closed_form(d), oracle::ising_bound(d), 1e-15);
    EXPECT_LE(b.hi - b.lo, 1e-6);
    EXPECT_LT(b.value_at_lo, 1.0 / (2 * d));
    EXPECT_GE(b.value_at_hi, 1.0 / (2 * d));
  }
}

TEST(Dobrushin, IsingReferenceValues) {
  EXPECT_NEAR(dobrushin_critical_bound(SpinModel::ising(), 2).beta_J_star, 0.27465, 1e-5);
  EXPECT_NEAR(dobrushin_critical_bound(SpinModel::ising(), 3).beta_J_star, 0.17328, 1e-5);
}

TEST(Dobrushin, OneDimensionalIsingHasNoFiniteBound) {
  EXPECT_EQ(code_of([] { ising_dobrushin_closed_form(1); }), ErrorCode::kNoFiniteBound);
  EXPECT_EQ(code_of([] { dobrushin_critical_bound(SpinModel::ising(), 1); }), ErrorCode::kNoFiniteBound);
}

TEST(Dobrushin, PottsTwoStatesIsTwiceIsing) {
  // Potts weight e^{bJ delta} equals the Ising weight at coupling J/2 up to
  // a constant, so the Potts bound doubles the Ising one.
  const auto b = dobrushin_critical_bound(SpinModel::potts(2), 2);
  EXPECT_NEAR(b.beta_J_star, 2 * oracle::ising_bound(2), 2e-6);
}

TEST(Dobrushin, PottsCrossChecksAgainstLp) {
  const auto r = dobrushin_sup(SpinModel::potts(7), 2, 0.8);
  EXPECT_LE(r.cross_check_error, 1e-10);
  EXPECT_EQ(r.values.size(), 9u);
}

TEST(Dobrushin, PottsLargeQMatchesScalarOracle) {
  BisectionOptions fine;
  fine.tol = 1e-11;
  for (int q : {22, 30, 50, 100}) {
    const auto b = dobrushin_critical_bound(SpinModel::potts(q), 2, fine);
    const double root = oracle::first_crossing(
        [q](double x) { return oracle::potts_all_equal_vs_one_off(q, x); }, 0.25);
    EXPECT_NEAR(b.beta_J_star, root, 1e-8) << "q = " << q;
    EXPECT_EQ(b.witness, "(1 1 1 1)/(1 1 1 2)") << "q = " << q;
  }
}

TEST(Dobrushin, PottsSmallQDominatedByMixedPairing) {
  for (int q : {4, 10, 20}) {
    const auto b = dobrushin_critical_bound(SpinModel::potts(q), 2);
    const double root = oracle::first_crossing(
        [q](double x) { return oracle::potts_one_off_vs_two_two(q, x); }, 0.25);
    EXPECT_NEAR(b.beta_J_star, root, 1e-6) << "q = " << q;
    EXPECT_EQ(b.witness, "(1 1 1 2)/(1 1 2 2)") << "q = " << q;
  }
}

TEST(Dobrushin, PottsAsymptotics) {
  double previous = std::numeric_limits<double>::infinity();
  for (int q : {1000, 10000, 100000}) {
    const auto b = dobrushin_critical_bound(SpinModel::potts(q), 2);
    const double gap = std::abs(b.beta_J_star - 0.25 * std::log(q / 3.0));
    EXPECT_LT(gap, previous);
    previous = gap;
  }
  const auto b3 = dobrushin_critical_bound(SpinModel::potts(100), 3);
  EXPECT_NEAR(b3.beta_J_star, std::log(100 / 3.0) / 6.0, 0.25);
}

TEST(Dobrushin, PottsScanFlagsDecreases) {
  const auto rows = potts_scan(2, 18, 26);
  ASSERT_EQ(rows.size(), 9u);
  bool any = false;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const bool lower = rows[k].bound.beta_J_star < rows[k - 1].bound.beta_J_star - 1e-6;
    EXPECT_EQ(rows[k].below_previous, lower);
    any = any || lower;
  }
  EXPECT_TRUE(any);
}

// ---------------------------------------------------------------------------
// Bisection

TEST(Bisection, FindsLinearCrossing) {
  const auto b = bisect_criterion([](double x) { return CriterionValue{x / 3.0, "lin"}; }, 0.5);
  EXPECT_NEAR(b.beta_J_star, 1.5, 1e-6);
  EXPECT_EQ(b.witness, "lin");
}

TEST(Bisection, WidensBracket) {
  const auto b = bisect_criterion([](double x) { return CriterionValue{x, ""}; }, 20.0);
  EXPECT_NEAR(b.beta_J_star, 20.0, 1e-6);
}

TEST(Bisection, BracketFailure) {
  EXPECT_EQ(code_of([] { bisect_criterion([](double) { return CriterionValue{0.0, ""}; }, 1.0); }),
            ErrorCode::kBracketFailure);
}

TEST(Bisection, MonotonicityViolation) {
  EXPECT_EQ(code_of([] {
              bisect_criterion([](double x) { return CriterionValue{std::sin(4 * x) + x / 10, ""}; }, 1.05);
            }),
            ErrorCode::kMonotonicityViolation);
}

// ---------------------------------------------------------------------------
// Block criterion

TEST(Ds, ThresholdIdentities) {
  EXPECT_DOUBLE_EQ(ds_threshold(LatticeBlock::square2x2()), 0.5);
  EXPECT_DOUBLE_EQ(ds_threshold(LatticeBlock::square3x3()), 0.75);
  EXPECT_DOUBLE_EQ(ds_threshold(LatticeBlock::cube2x2x2()), 1.0 / 3.0);
}

TEST(Ds, SquareTwoClassValues) {
  const auto block = LatticeBlock::square2x2();
  const auto bases = enumerate_block_boundaries(block, BoundaryMode::kCurated);
  const auto r = ds_report(block, SpinModel::ising(), 0.308176, bases);
  // Every flip of the first base gives the same distance.
  for (const auto& cls : r.cases[0].classes) EXPECT_NEAR(cls.w1, 0.4999988, 1e-6) << cls.class_id;
  EXPECT_NEAR(r.cases[0].resulting, 0.4999988, 1e-6);
  // Second base: every flip sits in a group with one spin of each sign.
  for (const auto& cls : r.cases[1].classes) EXPECT_NEAR(cls.w1, 0.4859922, 1e-6) << cls.class_id;
}

TEST(Ds, SquareThreeClassValues) {
  const auto block = LatticeBlock::square3x3();
  const auto r = ds_report(block, SpinModel::ising(), 0.33021,
                           enumerate_block_boundaries(block, BoundaryMode::kCurated));
  EXPECT_NEAR(find_class(r, "1a").w1, 0.8904972, 1e-6);
  EXPECT_NEAR(find_class(r, "1b").w1, 0.6797176, 1e-6);
  EXPECT_NEAR(find_class(r, "2b").w1, 0.7284996, 1e-6);
  EXPECT_NEAR(find_class(r, "2c").w1, 0.6693575, 1e-6);
  EXPECT_NEAR(find_class(r, "2d").w1, 0.6060878, 1e-6);
  EXPECT_NEAR(r.cases[0].resulting, 0.74997747, 1e-7);
  EXPECT_NEAR(r.cases[1].resulting, 0.74238279, 1e-7);
  const double case1 = (1 * find_class(r, "1a").w1 + 2 * find_class(r, "1b").w1) / 3;
  EXPECT_EQ(r.cases[0].resulting, case1);
}

TEST(Ds, WeightsAreNormalised) {
  for (const auto& block : {LatticeBlock::square2x2(), LatticeBlock::square3x3(), LatticeBlock::cube2x2x2()}) {
    const auto r = ds_report(block, SpinModel::ising(), 0.2,
                             enumerate_block_boundaries(block, BoundaryMode::kCurated));
    for (const auto& c : r.cases) {
      double total = 0.0, lo = 1e9, hi = -1e9;
      for (const auto& cls : c.classes) {
        total += cls.weight;
        lo = std::min(lo, cls.w1);
        hi = std::max(hi, cls.w1);
      }
      EXPECT_NEAR(total, 1.0, 1e-14);
      EXPECT_GE(c.resulting, lo - 1e-15);
      EXPECT_LE(c.resulting, hi + 1e-15);
    }
  }
}

TEST(Ds, EvaluatorMatchesDirectLp) {
  const auto block = LatticeBlock::square3x3();
  DsEvaluator ev(block, SpinModel::ising(), 0.31);
  const auto a = BoundaryConfig::parse("(2 0 -2 0 1 -1 1 1)");
  const auto b = BoundaryConfig::parse("(0 0 -2 0 1 -1 1 1)");
  const double direct = wasserstein_lp(block_gibbs(block, SpinModel::ising(), 0.31, a).p,
                                       block_gibbs(block, SpinModel::ising(), 0.31, b).p)
                            .value;
  EXPECT_NEAR(ev.w1(a, b), direct, 1e-12);
  EXPECT_NEAR(ev.w1(b, a), direct, 1e-12);
  EXPECT_EQ(ev.cache_size(), 1u);
}

TEST(Ds, UnsupportedForPotts) {
  EXPECT_EQ(code_of([] { DsEvaluator(LatticeBlock::square2x2(), SpinModel::potts(3), 0.3); }),
            ErrorCode::kUnsupported);
}

TEST(Ds, CubeClassValues) {
  const auto block = LatticeBlock::cube2x2x2();
  const auto r = ds_report(block, SpinModel::ising(), 0.18727,
                           enumerate_block_boundaries(block, BoundaryMode::kCurated));
  EXPECT_NEAR(r.resulting_distance, 0.329999, 1e-5);
  EXPECT_LT(r.resulting_distance, 1.0 / 3.0);
  for (double v : {0.3385898, 0.3128179, 0.3382529, 0.3356344, 0.3337556}) {
    double closest = 1.0;
    for (const auto& c : r.cases) {
      for (const auto& cls : c.classes) closest = std::min(closest, std::abs(cls.w1 - v));
    }
    EXPECT_LE(closest, 1e-6) << v;
  }
}

TEST(Ds, SquareTwoBound) {
  const auto block = LatticeBlock::square2x2();
  const auto b = ds_critical_bound(block, SpinModel::ising(),
                                   enumerate_block_boundaries(block, BoundaryMode::kCurated));
  EXPECT_NEAR(b.beta_J_star, 0.30817, 1e-4);
  EXPECT_GE(b.beta_J_star, dobrushin_critical_bound(SpinModel::ising(), 2).beta_J_star);
}

TEST(Ds, SquareThreeBound) {
  const auto block = LatticeBlock::square3x3();
  const auto b = ds_critical_bound(block, SpinModel::ising(),
                                   enumerate_block_boundaries(block, BoundaryMode::kCurated));
  EXPECT_NEAR(b.beta_J_star, 0.33021, 1e-4);
}

TEST(Ds, CubeBoundAtExactThreshold) {
  // The distance at 0.18727 stays below 1/3, so the crossing of the exact
  // threshold sits higher.
  const auto block = LatticeBlock::cube2x2x2();
  const auto b = ds_critical_bound(block, SpinModel::ising(),
                                   enumerate_block_boundaries(block, BoundaryMode::kCurated));
  EXPECT_GT(b.beta_J_star, 0.18727);
  EXPECT_NEAR(b.beta_J_star, 0.1884697, 1e-6);
  EXPECT_EQ(b.witness, "(-1 1 -1 1 1 -1 1 -1)");
  EXPECT_GE(b.beta_J_star, dobrushin_critical_bound(SpinModel::ising(), 3).beta_J_star);
}

// ---------------------------------------------------------------------------
// Closed-form conditions

TEST(HighTemperature, Bounds) {
  EXPECT_DOUBLE_EQ(high_temp_bound(2, 1.0, 1.0), 1.0 / 24.0);
  EXPECT_DOUBLE_EQ(heisenberg_bound(3, 1.0), 1.0 / (36.0 * M_PI));
  EXPECT_DOUBLE_EQ(heisenberg_improved_bound(3, 1.0), 1.0 / 72.0);
  EXPECT_EQ(code_of([] { high_temp_bound(0, 1, 1); }), ErrorCode::kInvalidArgument);
}

TEST(LongRange, NearestNeighbour) {
  for (int d : {1, 2, 3}) {
    const auto r = long_range_ising_threshold([](double x) { return x < 1.2 ? 0.7 : 0.0; }, d, 3);
    EXPECT_NEAR(r.threshold, 1.0 / (2 * d * 0.7), 1e-15);
    EXPECT_NEAR(r.partial_sum, 2 * d * 0.7, 1e-15);
  }
}

TEST(LongRange, GeometricSeries) {
  const auto r = long_range_ising_threshold([](double x) { return std::pow(2.0, -x); }, 1, 40);
  EXPECT_NEAR(r.threshold, 1.0 / (2 * (1 - std::pow(2.0, -40))), 1e-12);
  EXPECT_NEAR(r.threshold, 0.5, 1e-9);
}

TEST(LongRange, NoInteraction) {
  const auto r = long_range_ising_threshold([](double) { return 0.0; }, 2, 5);
  EXPECT_TRUE(r.no_interaction);
  EXPECT_TRUE(std::isinf(r.threshold));
}

TEST(LongRange, InsufficientTruncation) {
  EXPECT_EQ(code_of([] { long_range_ising_threshold([](double x) { return 1 / (x * x); }, 1, 2, 1.0); }),
            ErrorCode::kInsufficientTruncation);
}

TEST(LongRange, TailBoundsAreValid) {
  // Brute force the remainder to a far radius and compare with the bounds.
  for (int d : {1, 2}) {
    const int r_max = 6, far = d == 1 ? 100000 : 600;
    auto power = [](double x) { return std::pow(x, -4.0); };
    auto expo = [](double x) { return std::exp(-0.8 * x); };
    const double pw = long_range_ising_threshold(power, d, far).partial_sum -
                      long_range_ising_threshold(power, d, r_max).partial_sum;
    const double ex = long_range_ising_threshold(expo, d, far).partial_sum -
                      long_range_ising_threshold(expo, d, r_max).partial_sum;
    EXPECT_GE(power_law_tail_bound(1.0, 4.0, d, r_max), pw);
    EXPECT_GE(exponential_tail_bound(1.0, 0.8, d, r_max), ex);
    EXPECT_LE(power_law_tail_bound(1.0, 4.0, d, r_max), 20 * pw);
  }
  EXPECT_EQ(code_of([] { power_law_tail_bound(1.0, 2.0, 2, 5); }), ErrorCode::kInvalidArgument);
}

TEST(FieldCheck, Examples) {
  auto nn = [](double x) { return x < 1.2 ? 1.0 : 0.0; };
  EXPECT_TRUE(field_uniqueness_check(nn, 5.0, 2, 3));
  EXPECT_FALSE(field_uniqueness_check(nn, 0.0, 2, 3));
  EXPECT_FALSE(field_uniqueness_check(nn, 4.0, 2, 3));
}
