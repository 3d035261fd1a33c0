#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "downcross/analysis.hpp"
#include "downcross/errors.hpp"
#include "oracles.hpp"

using namespace downcross;

namespace {

ScaleFunction make(DriftFamily f, ScaleOptions o = {}) {
  return ScaleFunction(DiffusionModel(std::move(f)), o);
}

OnsetLaw law_for(DriftFamily f, double c, double x0, ScaleOptions o = {}) {
  return OnsetLaw(HazardCurve(make(std::move(f), o), c), x0);
}

}  // namespace

TEST(Hazard, DriftlessIsOneOverC) {
  const auto sf = make(DriftFamily::zero());
  for (double x : {-7.0, 0.0, 3.3, 1e4}) EXPECT_NEAR(hazard(sf, 2.0, x), 0.5, 1e-12);
}

TEST(Hazard, ConstantDriftClosedForm) {
  const auto sf = make(DriftFamily::constant(1.0));
  const double want = 2.0 / (std::exp(2.0) - 1.0);
  EXPECT_NEAR(want, 0.31304, 1e-5);
  for (double x : {-2.0, 0.0, 5.0, 400.0}) EXPECT_NEAR(hazard(sf, 1.0, x), want, 1e-11);
  EXPECT_NEAR(hazard(make(DriftFamily::constant(0.3)), 2.5, 1.0), oracle::hazard_constant(0.3, 2.5),
              1e-11);
}

TEST(Hazard, BesselTendsToOneOverC) {
  const auto sf = make(DriftFamily::bessel(4.0));
  double prev_gap = 1.0;
  for (double x : {10.0, 100.0, 1e4, 1e6}) {
    const double gap = std::abs(hazard(sf, 1.0, x) - 1.0);
    EXPECT_LT(gap, prev_gap);
    prev_gap = gap;
  }
  EXPECT_LT(prev_gap, 1e-5);
}

TEST(Hazard, MatchesNestedSimpsonOracle) {
  // b(x) = 0.3 + 0.1 sin x, a = 1.
  const auto f = DriftFamily::custom([](double x) { return 0.3 + 0.1 * std::sin(x); }, "wavy");
  const auto sf = make(f);
  auto rho = [](long double y) { return 2.0L * (0.3L + 0.1L * std::sin(y)); };
  for (double x : {-1.0, 0.5, 4.0}) {
    EXPECT_NEAR(hazard(sf, 1.5, x), oracle::hazard_nested(rho, 1.5, x), 1e-9);
  }
}

// From tests/oracles/logloglog_scale.py.
TEST(Hazard, LogLogLogMatchesExtendedPrecision) {
  const auto g1 = make(DriftFamily::logloglog(1.0, 1.0));
  const auto g2 = make(DriftFamily::logloglog(1.0, 2.0));
  EXPECT_NEAR(log_hazard(g1, 1.0, 20.0), -3.508469271973839449, 1e-10);
  EXPECT_NEAR(log_hazard(g1, 1.0, 1e6), -16.119129823838197975, 1e-9);
  EXPECT_NEAR(log_hazard(g2, 1.0, 1000.0), -11.954000805678823836, 1e-9);
  EXPECT_NEAR(log_hazard(g2, 1.0, 1e6), -21.127432915977175165, 1e-9);
}

TEST(Hazard, RejectsBadDepth) {
  const auto sf = make(DriftFamily::zero());
  EXPECT_THROW(hazard(sf, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(HazardCurve(sf, -1.0), std::invalid_argument);
}

TEST(HazardCurve, SamplesOnIncreasingGrid) {
  HazardCurve h(make(DriftFamily::constant(1.0)), 1.0);
  const std::vector<double> xs{0.0, 1.0, 2.0};
  const auto& s = h.sample(xs);
  ASSERT_EQ(s.size(), 3u);
  for (const auto& [x, v] : s) EXPECT_GT(v, 0.0);
  const std::vector<double> bad{1.0, 1.0};
  EXPECT_THROW(h.sample(bad), std::invalid_argument);
}

TEST(OnsetSurvival, ZeroOffsetIsOne) {
  EXPECT_EQ(onset_survival(law_for(DriftFamily::logloglog(1.0, 2.0), 1.0, 30.0), 0.0), 1.0);
}

TEST(OnsetSurvival, DriftlessIsExponential) {
  EXPECT_NEAR(onset_survival(law_for(DriftFamily::zero(), 1.0, 0.0), 2.0), std::exp(-2.0), 1e-12);
  EXPECT_NEAR(std::exp(-2.0), 0.13534, 1e-5);
}

TEST(OnsetSurvival, ConstantDriftClosedForm) {
  const double want = std::exp(-2.0 / (std::exp(2.0) - 1.0));
  EXPECT_NEAR(want, 0.7312241105, 1e-10);
  EXPECT_NEAR(onset_survival(law_for(DriftFamily::constant(1.0), 1.0, 0.0), 1.0), want, 1e-11);
}

TEST(OnsetSurvival, NegativeOffsetRejected) {
  EXPECT_THROW(onset_survival(law_for(DriftFamily::zero(), 1.0, 0.0), -0.1), std::invalid_argument);
}

TEST(OnsetSurvival, StartMustLeaveRoomForDepth) {
  EXPECT_THROW(law_for(DriftFamily::bessel(3.0), 1.0, 0.5), DomainError);
}

// Property: survival(0) = 1, values in (0, 1], non-increasing in gamma.
TEST(OnsetProperty, SurvivalIsProper) {
  const OnsetLaw laws[] = {law_for(DriftFamily::constant(0.5), 1.0, 0.0),
                           law_for(DriftFamily::logloglog(1.0, 1.0), 1.0, 10.0),
                           law_for(DriftFamily::bessel(3.0), 0.5, 2.0)};
  std::vector<double> grid;
  for (int i = 0; i <= 60; ++i) grid.push_back(0.25 * i);
  for (const auto& law : laws) {
    const auto s = law.survival_curve(grid);
    EXPECT_EQ(s.front(), 1.0);
    for (std::size_t i = 1; i < s.size(); ++i) {
      EXPECT_LE(s[i], s[i - 1]);
      EXPECT_GT(s[i], 0.0);
    }
    EXPECT_NEAR(s[20], law.survival(grid[20]), 1e-10);
  }
}

TEST(ProductOracle, DriftlessSingleStepByHand) {
  // u = x: upper = P_x(tau_{x+1} < tau_{x-1}) = 1/2,
  // lower = P_x(tau_{x+1} < tau_x) = 0.
  const auto b = onset_survival_product_oracle(law_for(DriftFamily::zero(), 1.0, 0.0), 1.0, 1);
  EXPECT_NEAR(b.upper, 0.5, 1e-12);
  EXPECT_EQ(b.lower, 0.0);
}

TEST(ProductOracle, DriftlessClosedFormProducts) {
  // Step d = gamma/n: upper = (c/(c+d))^n, lower = ((c-d)/c)^n.
  const auto law = law_for(DriftFamily::zero(), 1.0, 0.0);
  for (int n : {2, 10, 100}) {
    const double d = 1.0 / n;
    const auto b = onset_survival_product_oracle(law, 1.0, n);
    EXPECT_NEAR(b.upper, std::pow(1.0 / (1.0 + d), n), 1e-11);
    EXPECT_NEAR(b.lower, std::pow(1.0 - d, n), 1e-11);
  }
}

TEST(ProductOracle, EmptyProduct) {
  const auto b = onset_survival_product_oracle(law_for(DriftFamily::constant(1.0), 1.0, 0.0), 0.0, 5);
  EXPECT_EQ(b.lower, 1.0);
  EXPECT_EQ(b.upper, 1.0);
}

TEST(ProductOracle, ConvergesToAnalytic) {
  const auto law = law_for(DriftFamily::logloglog(1.0, 1.5), 1.0, 20.0);
  const double exact = law.survival(3.0);
  const auto b = onset_survival_product_oracle(law, 3.0, 4000);
  EXPECT_NEAR(b.lower, exact, 1e-3);
  EXPECT_NEAR(b.upper, exact, 1e-3);
}

// Property: lower <= survival <= upper and the width shrinks as n doubles.
TEST(ProductProperty, BracketTightensWithN) {
  const OnsetLaw laws[] = {law_for(DriftFamily::constant(1.0), 1.0, 0.0),
                           law_for(DriftFamily::logloglog(1.0, 2.0), 1.0, 15.0)};
  for (const auto& law : laws) {
    const double exact = law.survival(2.0);
    double prev_width = 2.0;
    for (int n = 1; n <= 512; n *= 2) {
      const auto b = onset_survival_product_oracle(law, 2.0, n);
      EXPECT_LE(b.lower, exact + 1e-12) << "n " << n;
      EXPECT_GE(b.upper, exact - 1e-12) << "n " << n;
      const double width = b.upper - b.lower;
      EXPECT_LT(width, prev_width) << "n " << n;
      if (n >= 4) EXPECT_LT(width / prev_width, 0.75) << "n " << n;
      prev_width = width;
    }
  }
}

TEST(HittingProbability, LinearScale) {
  const auto sf = make(DriftFamily::zero());
  EXPECT_NEAR(hitting_probability(sf, 1.0, 0.0, 4.0), 0.25, 1e-12);
  EXPECT_EQ(hitting_probability(sf, 0.0, 0.0, 4.0), 0.0);
  EXPECT_EQ(hitting_probability(sf, 4.0, 0.0, 4.0), 1.0);
}

TEST(HittingProbability, BesselFourClosedForm) {
  const auto sf = make(DriftFamily::bessel(4.0));
  const double want = (1.0 - 0.25) / (1.0 - 0.01);
  EXPECT_NEAR(want, 0.757576, 1e-6);
  EXPECT_NEAR(hitting_probability(sf, 2.0, 1.0, 10.0), want, 1e-10);
}

TEST(HittingProbability, OrderingViolationsThrow) {
  const auto sf = make(DriftFamily::zero());
  EXPECT_THROW(hitting_probability(sf, 5.0, 0.0, 4.0), DomainError);
  EXPECT_THROW(hitting_probability(sf, 1.0, 4.0, 0.0), DomainError);
  EXPECT_THROW(hitting_probability(sf, 1.0, 1.0, 1.0), DomainError);
}

TEST(HittingProbability, DeepTailStaysInRange) {
  const auto sf = make(DriftFamily::logloglog(1.0, 1.0));
  const double p = hitting_probability(sf, 1e6 - 0.5, 1e6 - 1.0, 1e6);
  EXPECT_GT(p, 0.99);
  EXPECT_LE(p, 1.0);
}

TEST(ReturnProbability, ConstantDriftClosedForm) {
  const auto sf = make(DriftFamily::constant(0.7));
  EXPECT_NEAR(return_probability(sf, 3.0, 1.0), std::exp(-2.0 * 0.7 * 2.0), 1e-10);
}

// Property: the scale identity composes through an intermediate level:
// (u(w)-u(y))/(u(z)-u(y)) = [(u(w)-u(y))/(u(m)-u(y))] * [(u(m)-u(y))/(u(z)-u(y))].
TEST(HittingProperty, ScaleIdentityComposes) {
  const auto sf = make(DriftFamily::logloglog(1.0, 1.0));
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> pos(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const double y = 10.0 + 30.0 * pos(gen);
    const double z = y + 0.2 + 3.0 * pos(gen);
    const double m = y + (z - y) * (0.1 + 0.8 * pos(gen));
    const double w = y + (m - y) * (0.1 + 0.8 * pos(gen));
    const double direct = hitting_probability(sf, w, y, z);
    const double composed = hitting_probability(sf, w, y, m) * hitting_probability(sf, m, y, z);
    EXPECT_NEAR(direct, composed, 1e-9 * direct);
  }
}

// Property: moving the base point leaves every u-ratio quantity unchanged.
TEST(BasePointProperty, InvariantQuantities) {
  const auto f = DriftFamily::logloglog(1.0, 1.5);
  const auto a = make(f);
  const auto b = make(f, {.base_point = 25.0});
  for (double x : {12.0, 40.0, 300.0}) {
    EXPECT_NEAR(hazard(a, 1.0, x), hazard(b, 1.0, x), 1e-10 * hazard(a, 1.0, x));
    EXPECT_NEAR(hitting_probability(a, x, x - 1.0, x + 0.5),
                hitting_probability(b, x, x - 1.0, x + 0.5), 1e-9);
  }
  const OnsetLaw la(HazardCurve(a, 1.0), 15.0);
  const OnsetLaw lb(HazardCurve(b, 1.0), 15.0);
  EXPECT_NEAR(la.survival(4.0), lb.survival(4.0), 1e-9);
}

TEST(LogHazard, SteepDriftStaysFinite) {
  // b = x gives B(x+s) - B(x) = 2xs + s^2, so the hazard integral is
  // e^{2x-1} / (2x-2) up to a relative O(1/x^2).
  const ScaleFunction sf(DiffusionModel(DriftFamily::custom([](double y) { return y; }, "linear")));
  for (double x : {1e3, 1e6}) {
    EXPECT_NEAR(log_hazard(sf, 1.0, x), -(2.0 * x - 1.0) + std::log(2.0 * x - 2.0), 1e-5);
  }
  for (double x : {1e20, 1e300}) {
    const double lh = log_hazard(sf, 1.0, x);
    ASSERT_TRUE(std::isfinite(lh));
    EXPECT_NEAR(lh / (-2.0 * x), 1.0, 1e-12);
  }
}
