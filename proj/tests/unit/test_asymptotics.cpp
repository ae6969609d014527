#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "roomgreen/asymptotics.hpp"
#include "roomgreen/eigensolver.hpp"
#include "roomgreen/errors.hpp"

using namespace roomgreen;

namespace {

GammaPair case_gamma(int which) {
  const auto fc = testsupport::wall_cases()[which];
  const auto r = testsupport::room_1d(1.0, fc.beta_minus, fc.beta_plus);
  return make_gamma(r.axes[0], make_wave_context(r, 5000.0));
}

double refined_residual(Complex guess, const GammaPair& g, Complex* root = nullptr) {
  SolverParams p;
  const auto res = newton_refine({{guess, Group::G1, 0}}, g, p);
  if (res.points.empty()) return INFINITY;
  if (root) *root = res.points[0].q_hat;
  const Complex q = res.points[0].q_hat;
  return static_cast<double>(std::abs(residual({q.real(), q.imag()}, g)));
}

}  // namespace

TEST(Group1, RigidWallsGiveIntegers) {
  const auto g = make_gamma(0.0, 0.0);
  EXPECT_EQ(group1_guess(2, g), Complex(2.0, 0.0));
  EXPECT_EQ(group1_guess(0, g), Complex(0.0, 0.0));
}

TEST(Group1, ZeroOrderClosedForm) {
  const auto g = make_gamma({0.3, 0.1}, {0.2, -0.4});
  const Complex want = std::sqrt(Complex(0.0, 1.0) * g.sum()) / kPi;
  const Complex got = group1_guess(0, g);
  EXPECT_NEAR(std::abs(got - want), 0.0, 1e-15);
  EXPECT_GE(got.real(), 0.0);
}

TEST(Group1, LightDampingRefinesToRoots) {
  const auto g = case_gamma(0);
  for (int n = 1; n <= 8; ++n) EXPECT_LT(refined_residual(group1_guess(n, g), g), 1e-10) << n;
}

TEST(Group2, ProportionalToNAndLimits) {
  const auto g = case_gamma(1);
  EXPECT_EQ(group2_guess(0, g), Complex(0.0, 0.0));
  const auto soft = make_gamma({1e9, 0.0}, {1e9, 0.0});
  EXPECT_NEAR(std::abs(group2_guess(3, soft) - 3.0), 0.0, 1e-8);
  EXPECT_THROW(group2_guess(1, make_gamma({1.0, 0.0}, {-1.0, 0.0})), InputError);
}

TEST(Group2, HeavyDampingRefinesToRoots) {
  const auto g = case_gamma(1);
  for (int n = 1; n <= 5; ++n) EXPECT_LT(refined_residual(group2_guess(n, g), g), 1e-10) << n;
}

TEST(Group3, SymmetricPairUsesCorrection) {
  const Complex gam{3.0, 4.0};
  const auto c = group3_guess(make_gamma(gam, gam));
  ASSERT_EQ(c.size(), 2u);
  const Complex e = std::exp(Complex(0.0, 1.0) * gam);
  const Complex plus = gam / kPi * (1.0 + 2.0 * e);
  const Complex minus = gam / kPi * (1.0 - 2.0 * e);
  const bool order1 = std::abs(c[0].q_hat - plus) < 1e-14 && std::abs(c[1].q_hat - minus) < 1e-14;
  const bool order2 = std::abs(c[1].q_hat - plus) < 1e-14 && std::abs(c[0].q_hat - minus) < 1e-14;
  EXPECT_TRUE(order1 || order2);
  EXPECT_NE(c[0].q_hat, c[1].q_hat);
}

TEST(Group3, EmptyWithoutPositiveReactance) {
  EXPECT_TRUE(group3_guess(make_gamma({1.0, -2.0}, {3.0, 0.0})).empty());
}

TEST(Group3, HeavyDampingGivesTwoDistinctRoots) {
  const auto g = case_gamma(1);
  const auto c = group3_guess(g);
  ASSERT_EQ(c.size(), 2u);
  Complex r0, r1;
  EXPECT_LT(refined_residual(c[0].q_hat, g, &r0), 1e-10);
  EXPECT_LT(refined_residual(c[1].q_hat, g, &r1), 1e-10);
  EXPECT_GT(std::abs(r0 - r1), 1e-3);
}

TEST(Group1P, LimitsAndErrors) {
  const auto big = make_gamma({1e9, 0.0}, {1e3, 0.0});
  EXPECT_NEAR(std::abs(group1p_guess(2, big) - 2.5), 0.0, 1e-8);
  EXPECT_THROW(group1p_guess(1, make_gamma({1.0, 1.0}, {-1.0, -1.0})), InputError);
}

TEST(Group1P, OneRigidWallRefinesToRoots) {
  const auto g = case_gamma(2);
  for (int n = 0; n <= 3; ++n) EXPECT_LT(refined_residual(group1p_guess(n, g), g), 1e-10) << n;
}

TEST(CandidateSet, RigidWallsAreGroup1Integers) {
  const auto c = candidate_set(make_gamma(0.0, 0.0), 5);
  ASSERT_EQ(c.size(), 6u);
  for (int n = 0; n <= 5; ++n) {
    EXPECT_EQ(c[n].group, Group::G1);
    EXPECT_EQ(c[n].q_hat, Complex(n, 0.0));
  }
}

TEST(CandidateSet, OneRigidWallHasGroup1PUpToThree) {
  const auto c = candidate_set(case_gamma(2), 8);
  std::vector<int> p_orders, g1_orders;
  for (const auto& x : c) {
    EXPECT_TRUE(std::isfinite(x.q_hat.real()) && std::isfinite(x.q_hat.imag()));
    if (x.group == Group::G1P) p_orders.push_back(x.n);
    if (x.group == Group::G1) g1_orders.push_back(x.n);
  }
  // Orders 0..3 lie below the 1P cutoff 3.40; the window extends one order past it.
  EXPECT_EQ(p_orders, (std::vector<int>{0, 1, 2, 3, 4}));
  EXPECT_TRUE(std::find(g1_orders.begin(), g1_orders.end(), 8) != g1_orders.end());
}

TEST(CandidateSet, HeavyDampingClosureCoversAllRoots) {
  const auto g = case_gamma(1);
  SolverParams p;
  p.n_max = 8;
  const auto refined = newton_refine(candidate_set(g, 8), g, p);
  const auto set = canonicalize_and_dedup(refined.points, g, p);
  const auto cases = testsupport::wall_cases();
  for (const auto& want : cases[1].roots) {
    const bool hit = std::any_of(set.roots.begin(), set.roots.end(),
                                 [&](const EigenRoot& r) { return std::abs(r.q_hat - want) < 1e-7; });
    EXPECT_TRUE(hit) << want;
  }
}
