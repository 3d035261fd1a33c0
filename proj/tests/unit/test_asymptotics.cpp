#include <cmath>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "downcross/analysis.hpp"
#include "downcross/errors.hpp"

using namespace downcross;

TEST(AsymptoticRatio, SweepSettlesNearInverseC) {
  const std::vector<double> xs{1e6, 1e8, 1e10, 1e12};
  const auto s = asymptotic_hazard_sweep(1.0, 1.0, xs);
  ASSERT_EQ(s.ratios.size(), 4u);
  EXPECT_TRUE(s.converged);
  EXPECT_LT(s.last_relative_change, 0.05);
  EXPECT_EQ(s.nearest, "1/c");
  EXPECT_NEAR(s.limit, 1.240233, 1e-5);
  EXPECT_NEAR(s.ratios.front().second, 1.380123, 1e-5);
  EXPECT_LT(s.log_distance_inverse_c, s.log_distance_inverse_c_e2);
}

TEST(AsymptoticRatio, ApproachesOneFarOut) {
  for (double g : {1.0, 1.5}) {
    const double r = asymptotic_hazard_ratio(1.0, g, 1e300);
    const double L = std::log(1e300);
    EXPECT_NEAR(r, 1.0, 3.0 * g * std::log(L) / L) << "gamma " << g;
    EXPECT_GT(r, 1.0);
  }
}

TEST(AsymptoticRatio, FirstOrderCorrection) {
  // r = 1 + 2 gamma log L / L + O((log L / L)^2).
  for (double g : {0.5, 1.0, 2.0}) {
    for (double x : {1e50, 1e150, 1e300}) {
      const double L = std::log(x), l = std::log(L);
      const double r = asymptotic_hazard_ratio(1.0, g, x);
      EXPECT_NEAR(r - 1.0, 2.0 * g * l / L, 0.03 * (2.0 * g * l / L) + 2.0 / L)
          << "gamma " << g << " x " << x;
    }
  }
}

TEST(AsymptoticRatio, ScalesWithDepth) {
  // The limit is 1/c after multiplying by c, so c drops out.
  for (double c : {0.5, 2.0}) {
    const double r = asymptotic_hazard_ratio(c, 1.0, 1e300);
    EXPECT_NEAR(r, 1.0, 0.1) << "c " << c;
  }
}

TEST(AsymptoticRatio, RejectsSmallX) {
  EXPECT_THROW(asymptotic_hazard_ratio(1.0, 1.0, 2.0), std::invalid_argument);
}
