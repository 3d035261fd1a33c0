#include <gtest/gtest.h>

#include "downcross/scale.hpp"

using namespace downcross;

namespace {

Transience classify(DriftFamily f) {
  return classify_transience(ScaleFunction(DiffusionModel(std::move(f)))).classification;
}

}  // namespace

TEST(Transience, PositiveConstantDriftGoesUp) {
  const auto v = classify_transience(ScaleFunction(DiffusionModel(DriftFamily::constant(0.5))));
  EXPECT_EQ(v.classification, Transience::TransientToPlusInfinity);
  EXPECT_TRUE(v.left_diverges());
  EXPECT_TRUE(v.right_converges());
}

TEST(Transience, DriftlessIsRecurrent) {
  EXPECT_EQ(classify(DriftFamily::zero()), Transience::Recurrent);
}

TEST(Transience, NegativeDriftGoesDown) {
  EXPECT_EQ(classify(DriftFamily::constant(-0.3)), Transience::TransientToMinusInfinity);
}

TEST(Transience, BesselAboveTwoGoesUp) {
  EXPECT_EQ(classify(DriftFamily::bessel(3.0)), Transience::TransientToPlusInfinity);
  EXPECT_EQ(classify(DriftFamily::bessel(4.0)), Transience::TransientToPlusInfinity);
}

TEST(Transience, BesselTwoIsNotTransientUp) {
  EXPECT_NE(classify(DriftFamily::bessel(2.0)), Transience::TransientToPlusInfinity);
}

TEST(Transience, LogLogLogFamilyGoesUp) {
  for (double g : {0.0, 0.5, 1.0, 2.0}) {
    EXPECT_EQ(classify(DriftFamily::logloglog(1.0, g)), Transience::TransientToPlusInfinity);
  }
}

TEST(Transience, BoundaryExponentIsUndecided) {
  // b = 1/(2x) for x >= 1: e^{-B} ~ 1/x, exactly on the boundary at +inf.
  const auto f = DriftFamily::custom([](double x) { return x >= 1.0 ? 0.5 / x : 0.5; },
                                     "inverse");
  const auto v = classify_transience(ScaleFunction(DiffusionModel(f)));
  EXPECT_EQ(v.right.behavior, TailBehavior::Undecided);
  EXPECT_EQ(v.classification, Transience::Indeterminate);
  EXPECT_NEAR(v.right.fitted_exponent, 1.0, 0.05);
}
