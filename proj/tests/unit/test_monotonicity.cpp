#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "downcross/analysis.hpp"
#include "downcross/errors.hpp"

using namespace downcross;

namespace {

ScaleFunction make(DriftFamily f) { return ScaleFunction(DiffusionModel(std::move(f))); }

}  // namespace

TEST(GateauxDerivative, ZeroDirectionIsZero) {
  const auto sf = make(DriftFamily::logloglog(1.0, 1.5));
  EXPECT_EQ(hazard_gateaux_derivative(sf, 1.0, 50.0, [](double) { return 0.0; }), 0.0);
}

TEST(GateauxDerivative, DriftlessUnitDirection) {
  // h(eps) = 2 eps / (e^{2 eps c} - 1) = 1/c - eps + O(eps^2) at c = 1.
  const auto sf = make(DriftFamily::zero());
  EXPECT_NEAR(hazard_gateaux_derivative(sf, 1.0, 3.0, [](double) { return 1.0; }), 1.0, 1e-10);
  // General c: d/d eps at 0 is 1.
  EXPECT_NEAR(hazard_gateaux_derivative(sf, 2.5, 3.0, [](double) { return 1.0; }), 1.0, 1e-10);
}

TEST(GateauxDerivative, NegativeDirectionRaises) {
  const auto sf = make(DriftFamily::constant(1.0));
  EXPECT_THROW(hazard_gateaux_derivative(sf, 1.0, 3.0, [](double) { return -1.0; }), DomainError);
}

TEST(GateauxDerivative, MatchesFiniteDifference) {
  const double c = 1.0;
  const auto q = [](double y) { return 0.5 + 0.3 * std::sin(y); };
  for (double x : {12.0, 40.0, 300.0}) {
    const auto base = DriftFamily::logloglog(c, 1.5);
    const auto sf = make(base);
    const double g = hazard_gateaux_derivative(sf, c, x, q);
    const double eps = 1e-5;
    const auto bumped = make(DriftFamily::sum(
        {base, DriftFamily::custom([&](double y) { return eps * q(y); }, "bump")}));
    const double h0 = HazardCurve(sf, c)(x);
    const double h1 = HazardCurve(bumped, c)(x);
    EXPECT_NEAR((h0 - h1) / eps, g, 1e-4 * std::abs(g) + 1e-9) << "x " << x;
  }
}

TEST(MonotonicityProperty, NonNegativeForNonNegativeDirections) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const double gamma = 0.5 + 1.5 * u(rng);
    const double c = 0.2 + 2.0 * u(rng);
    const double a = u(rng), w = 5.0 * u(rng), phase = 6.0 * u(rng);
    const auto sf = make(DriftFamily::logloglog(c, gamma));
    const auto q = [=](double y) { return a * (1.0 + std::cos(w * y + phase)); };
    const double x = 10.0 + 1e4 * u(rng);
    EXPECT_GE(hazard_gateaux_derivative(sf, c, x, q), -1e-12);
  }
}

TEST(MonotonicityProperty, LargerDriftGivesSmallerHazard) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double beta = 0.1 + u(rng);
    const double extra = u(rng);
    const double amp = u(rng), freq = 3.0 * u(rng);
    const auto b1 = DriftFamily::custom(
        [=](double y) { return beta + amp * std::sin(freq * y); }, "b1");
    const auto b2 = DriftFamily::sum(
        {b1, DriftFamily::custom([=](double y) { return extra * (1.0 + std::sin(y)); }, "gap")});
    const HazardCurve h1(make(b1), 1.0), h2(make(b2), 1.0);
    for (int i = 0; i < 10; ++i) {
      const double x = 20.0 * u(rng);
      EXPECT_GE(h1(x), h2(x) * (1.0 - 1e-12)) << "x " << x;
    }
  }
}
