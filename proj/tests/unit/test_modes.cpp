#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "roomgreen/errors.hpp"
#include "roomgreen/modes.hpp"

using namespace roomgreen;

TEST(Modes, RigidWallsGiveIntegerModes) {
  for (int n = 0; n < 5; ++n) {
    const auto m = mode_q(n, 0.0, 0.0);
    EXPECT_NEAR(m.re_part, n, 1e-15);
    EXPECT_NEAR(m.im_part, 0.0, 1e-15);
    EXPECT_NEAR(m.q_tilde.real(), n, 1e-12);
  }
  const auto f = mode_frequencies(testsupport::axis(2.0, 0.0, 0.0), 343.0, 0, 3);
  ASSERT_EQ(f.size(), 4u);
  EXPECT_DOUBLE_EQ(f[1], 85.75);
  EXPECT_DOUBLE_EQ(f[3], 3 * 85.75);
}

TEST(Modes, ReflectionFormMatchesArctanForm) {
  for (Complex bm : {Complex{0.1, 0.1}, Complex{0.1, -0.1}, Complex{0.3, 0.0}, Complex{0.05, 0.2}}) {
    for (Complex bp : {Complex{0.1, 0.1}, Complex{0.2, -0.3}, Complex{0.0, 0.0}}) {
      const auto m = mode_q(2, bm, bp);
      EXPECT_NEAR(m.q_tilde.real(), m.re_part, 1e-10);
      EXPECT_NEAR(m.q_tilde.imag(), m.im_part, 1e-10);
      const Complex rr = reflection_coefficient(bm) * reflection_coefficient(bp);
      const Complex lhs = std::exp(Complex{0.0, 2 * kPi} * m.q_tilde);
      EXPECT_LT(std::abs(lhs - rr), 1e-10 * std::abs(rr));
    }
  }
}

TEST(Modes, ImaginaryPartIsIndependentOfN) {
  const auto a = mode_q(1, {0.1, 0.1}, {0.1, 0.1});
  const auto b = mode_q(7, {0.1, 0.1}, {0.1, 0.1});
  EXPECT_DOUBLE_EQ(a.im_part, b.im_part);
  EXPECT_NEAR(b.re_part - a.re_part, 6.0, 1e-14);
}

TEST(Modes, MassLikeWallsShiftLeftSpringLikeRight) {
  // Im β > 0 (mass-like) lowers the mode frequency, Im β < 0 raises it.
  EXPECT_LT(mode_q(3, {0.1, 0.1}, {0.1, 0.1}).re_part, 3.0);
  EXPECT_GT(mode_q(3, {0.1, -0.1}, {0.1, -0.1}).re_part, 3.0);
  EXPECT_GT(mode_q(3, {0.1, 0.1}, {0.1, 0.1}).im_part, 0.0);
}

TEST(Modes, Errors) {
  EXPECT_THROW(reflection_coefficient(-1.0), InputError);
  EXPECT_THROW(mode_q(1, Complex{0.0, 1.0}, Complex{0.0, 1.0}), DegenerateDenominator);
  EXPECT_THROW(mode_q(1, 1.0, 0.2), AbsorbingPole);
  AxisBoundary tabulated{1.0, Admittance::table({{100.0, {0.1, 0.0}}, {200.0, {0.2, 0.0}}}),
                         Admittance::constant(0.0)};
  EXPECT_THROW(mode_frequencies(tabulated, 343.0, 0, 2), FrequencyDependentAdmittance);
}
