#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "downcross/errors.hpp"
#include "downcross/stats.hpp"

using namespace downcross;

TEST(Dkw, ReferenceValues) {
  EXPECT_NEAR(dkw_bound(10000, 0.05), 0.0135810, 5e-8);
  EXPECT_NEAR(dkw_bound(10000, 0.01), 0.0162762, 5e-8);
  EXPECT_THROW(dkw_bound(0, 0.05), std::invalid_argument);
  EXPECT_THROW(dkw_bound(10, 1.0), std::invalid_argument);
}

TEST(Wilson, ReferenceValues) {
  // 50/100 at 95%: centre 0.5, half width 1.96 sqrt(0.25/100 + 1.96^2/40000) / (1 + 1.96^2/100).
  const auto w = wilson_interval(50, 100);
  EXPECT_NEAR(w.lower, 0.4038315, 1e-6);
  EXPECT_NEAR(w.upper, 0.5961685, 1e-6);
  const auto zero = wilson_interval(0, 20);
  EXPECT_EQ(zero.lower, 0.0);
  EXPECT_NEAR(zero.upper, 0.1611251, 1e-6);
  EXPECT_THROW(wilson_interval(3, 2), std::invalid_argument);
  EXPECT_THROW(wilson_interval(0, 0), std::invalid_argument);
}

TEST(WilsonProperty, ContainsPointEstimate) {
  for (std::size_t n : {1u, 7u, 100u, 12345u}) {
    for (std::size_t k = 0; k <= n; k += std::max<std::size_t>(1, n / 13)) {
      const auto w = wilson_interval(k, n);
      const double p = static_cast<double>(k) / static_cast<double>(n);
      EXPECT_LE(w.lower, p + 1e-15);
      EXPECT_GE(w.upper, p - 1e-15);
      EXPECT_GE(w.lower, 0.0);
      EXPECT_LE(w.upper, 1.0);
    }
  }
}

TEST(EmpiricalSurvival, Counts) {
  const EmpiricalSurvival s({0.5, 1.0, 1.0, 3.0});
  EXPECT_EQ(s(0.0), 1.0);
  EXPECT_EQ(s(0.5), 0.75);
  EXPECT_EQ(s(1.0), 0.25);
  EXPECT_EQ(s(2.9), 0.25);
  EXPECT_EQ(s(3.0), 0.0);
  EXPECT_EQ(EmpiricalSurvival()(1.0), 1.0);
  EXPECT_THROW(EmpiricalSurvival({std::nan("")}), std::invalid_argument);
}

TEST(EmpiricalSurvival, CensoredPathsAreSurvivors) {
  const std::vector<std::optional<double>> onsets{11.0, std::nullopt, 12.0, std::nullopt};
  const std::vector<double> levels{std::numeric_limits<double>::infinity(), 4.0,
                                   std::numeric_limits<double>::infinity(), 6.0};
  const auto s = EmpiricalSurvival::from_onsets(onsets, 10.0, levels);
  EXPECT_EQ(s.size(), 4u);
  EXPECT_EQ(s.censored(), 2u);
  EXPECT_EQ(s.censor_frontier(), 4.0);
  EXPECT_EQ(s(1.5), 0.75);
  EXPECT_EQ(s(2.0), 0.5);
  const std::vector<double> short_levels{1.0};
  EXPECT_THROW(EmpiricalSurvival::from_onsets(onsets, 10.0, short_levels), std::invalid_argument);
}

TEST(EmpiricalSurvivalProperty, MonotoneAndOrderInvariant) {
  std::mt19937_64 rng(1);
  std::exponential_distribution<double> e(1.0);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> xs(200);
    for (auto& x : xs) x = e(rng);
    auto shuffled = xs;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const EmpiricalSurvival a(xs), b(shuffled);
    double prev = 1.0;
    for (double g = -0.5; g < 8.0; g += 0.01) {
      EXPECT_EQ(a(g), b(g));
      EXPECT_LE(a(g), prev);
      EXPECT_GE(a(g), 0.0);
      prev = a(g);
    }
  }
}

TEST(KsDistance, InsufficientData) {
  const EmpiricalSurvival s({1.0, 2.0});
  const std::vector<double> grid{0.5};
  EXPECT_THROW(ks_distance(s, [](double) { return 0.5; }, grid), InsufficientData);
  EXPECT_NO_THROW(ks_distance(s, [](double) { return 0.5; }, grid, 2));
  const EmpiricalSurvival censored({1.0, 2.0}, {0.1});
  EXPECT_THROW(ks_distance(censored, [](double) { return 0.5; }, grid, 2), InsufficientData);
}

TEST(KsDistance, ExactVersusGrid) {
  const EmpiricalSurvival s({1.0, 2.0, 3.0, 4.0});
  auto S = [](double g) { return std::exp(-g / 2.5); };
  std::vector<double> grid;
  for (int i = 0; i <= 100000; ++i) grid.push_back(i * 1e-4);
  const double d_exact = ks_distance_exact(s, S, 4);
  const double d_grid = ks_distance(s, S, grid, 4);
  EXPECT_GE(d_exact + 1e-12, d_grid);
  EXPECT_NEAR(d_exact, d_grid, 1e-3);
}

TEST(KsProperty, InverseTransformSamplesStayInsideDkw) {
  // Offsets drawn from S(g) = exp(-g) by inverse transform.
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t n = 2000;
  const double band = dkw_bound(n, 0.05);
  int inside = 0;
  const int reps = 200;
  for (int rep = 0; rep < reps; ++rep) {
    std::vector<double> xs(n);
    for (auto& x : xs) x = -std::log1p(-u(rng));
    const EmpiricalSurvival s(xs);
    if (ks_distance_exact(s, [](double g) { return std::exp(-g); }) <= band) ++inside;
  }
  EXPECT_GE(inside, static_cast<int>(0.95 * reps) - 4);
}

TEST(KsDistance, AgainstOnsetLaw) {
  const ScaleFunction sf(DiffusionModel(DriftFamily::constant(1.0)));
  const OnsetLaw law(HazardCurve(sf, 1.0), 0.0);
  // Exponential with the constant hazard, by inverse transform.
  const double h = law.hazard()(5.0);
  std::vector<double> xs;
  for (int i = 1; i <= 999; ++i) xs.push_back(-std::log(i / 1000.0) / h);
  const EmpiricalSurvival s(xs);
  std::vector<double> grid;
  for (int i = -10; i <= 400; ++i) grid.push_back(i * 0.05);
  EXPECT_LT(ks_distance(s, law, grid), 2e-3);
}
