#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "roomgreen/errors.hpp"
#include "roomgreen/greens.hpp"
#include "roomgreen/metrics.hpp"
#include "roomgreen/reference.hpp"

using namespace roomgreen;

namespace {

SolverParams nmax(int n) {
  SolverParams p;
  p.n_max = n;
  return p;
}

RoomSpec room_3d() {
  RoomSpec r;
  r.axes = {testsupport::axis(1.2, {0.05, 0.02}, {0.1, -0.05}),
            testsupport::axis(0.9, {0.08, 0.0}, {0.03, 0.03}),
            testsupport::axis(0.7, {0.02, 0.01}, {0.2, 0.1})};
  return r;
}

}  // namespace

TEST(Green, OneDimensionalMatchesClosedForm) {
  const auto room = testsupport::room_1d(1.0, 0.0, 0.0);
  const auto ctx = make_wave_context(room, 400.0);  // between 343 and 514.5 Hz
  const double lambda = room.speed_of_sound / ctx.frequency;
  const Point x0{0.13, 0, 0};
  std::vector<Point> pts;
  std::vector<Complex> ref;
  for (int i = 0; i < 300; ++i) {
    const double x = -0.5 + i / 299.0;
    if (std::abs(x - x0[0]) <= lambda / 4) continue;
    pts.push_back({x, 0, 0});
    ref.push_back(green_1d_closed_form(room.axes[0], ctx, x0[0], x));
  }
  const auto g = green_eval(room, ctx, x0, pts, nmax(static_cast<int>(std::ceil(20 * ctx.q[0]))));
  EXPECT_LT(l2_relative_error(g.values, ref), 1e-2);
  EXPECT_EQ(g.term_count, g.n_max + 1u);
  EXPECT_EQ(g.points.size(), pts.size());
  EXPECT_EQ(g.room_hash, room.hash());
}

TEST(Green, Reciprocity) {
  const auto room = room_3d();
  const auto ctx = make_wave_context(room, 400.0);
  const auto basis = build_room_basis(room, ctx, nmax(6));
  const Point a{0.2, -0.1, 0.05}, b{-0.35, 0.3, -0.2};
  const Complex gab = green_sum(basis, a, {b})[0];
  const Complex gba = green_sum(basis, b, {a})[0];
  EXPECT_LT(std::abs(gab - gba), 1e-13 * std::abs(gab));
}

TEST(Green, FactorizedEqualsNaive) {
  const auto room = room_3d();
  const auto ctx = make_wave_context(room, 300.0);
  const auto basis = build_room_basis(room, ctx, nmax(4));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  std::vector<Point> pts;
  for (int i = 0; i < 25; ++i) pts.push_back({1.2 * u(rng), 0.9 * u(rng), 0.7 * u(rng)});
  pts.push_back(pts[3]);
  const Point x0{0.1, 0.1, -0.1};
  const auto fast = green_sum(basis, x0, pts);
  const auto slow = green_sum_naive(basis, x0, pts);
  for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_LT(std::abs(fast[i] - slow[i]), 1e-12 * std::abs(slow[i]));
}

TEST(Green, GridPathEqualsPointPath) {
  const auto room = testsupport::room_2d_impedance();
  const auto ctx = make_wave_context(room, 500.0);
  const std::vector<std::vector<double>> axes{{-0.5, -0.1, 0.3, 0.5}, {0.7, -0.7, 0.0}};
  const Point x0{0.2, 0.2, 0.0};
  const auto g = green_eval_grid(room, ctx, x0, axes, nmax(12));
  ASSERT_EQ(g.points.size(), 12u);
  EXPECT_EQ(g.points[1][1], -0.7);  // last axis fastest
  EXPECT_EQ(g.points[3][0], -0.1);
  const auto h = green_eval(room, ctx, x0, g.points, nmax(12));
  for (std::size_t i = 0; i < g.points.size(); ++i) {
    EXPECT_LT(std::abs(g.values[i] - h.values[i]), 1e-12 * std::abs(h.values[i]));
  }
}

TEST(Green, TermCountIsProductOfBasisSizes) {
  const auto room = room_3d();
  const auto ctx = make_wave_context(room, 250.0);
  const auto basis = build_room_basis(room, ctx, nmax(5));
  std::size_t prod = 1;
  for (const auto& a : basis.axes) prod *= a.entries.size();
  EXPECT_EQ(basis.term_count(), prod);
  EXPECT_EQ(multi_index_terms(basis).size(), prod);
  const auto terms = multi_index_terms(basis);
  const auto& t = terms[terms.size() / 2];
  Complex ksq = 0.0, lam = 1.0;
  for (std::size_t j = 0; j < 3; ++j) {
    const auto& e = basis.axes[j].entries[t.n[j]];
    ksq += e.root.k_hat * e.root.k_hat;
    lam *= e.lambda;
  }
  EXPECT_LT(std::abs(ksq - t.k_hat_sq), 1e-12 * std::abs(ksq));
  EXPECT_LT(std::abs(lam - t.lambda_n), 1e-12 * std::abs(lam));
}

TEST(Green, InteriorHelmholtzResidual1D) {
  const auto room = testsupport::room_1d(1.0, {0.1, 0.1}, {0.2, 0.07});
  const auto ctx = make_wave_context(room, 1000.0);
  const double k = ctx.wavenumber, lambda = 2 * kPi / k, h = 1e-3;
  const auto basis = build_room_basis(room, ctx, nmax(static_cast<int>(std::ceil(10 * ctx.q[0]))));
  const Point x0{0.1, 0, 0};
  for (double x : {-0.3, -0.1, 0.35}) {
    ASSERT_GE(std::abs(x - x0[0]), lambda / 4);
    ASSERT_GE(0.5 - std::abs(x), lambda / 4);
    const auto v = green_sum(basis, x0, {{x, 0, 0}, {x + h, 0, 0}, {x - h, 0, 0}});
    const Complex lap = (v[1] + v[2] - 2.0 * v[0]) / (h * h);
    EXPECT_LT(std::abs(lap + k * k * v[0]), 1e-2 * k * k * std::abs(v[0])) << "x = " << x;
  }
}

TEST(Green, InteriorHelmholtzResidual2D) {
  const auto room = testsupport::room_2d_impedance();
  const auto ctx = make_wave_context(room, 500.0);
  const double k = ctx.wavenumber, lambda = 2 * kPi / k, h = 1e-3;
  const int n = static_cast<int>(std::ceil(10 * std::max(ctx.q[0], ctx.q[1])));
  const auto basis = build_room_basis(room, ctx, nmax(n));
  const Point x0{0.2, 0.2, 0};
  for (const Point c : {Point{-0.2, -0.3, 0}, Point{-0.1, 0.15, 0}, Point{0.05, -0.45, 0}}) {
    ASSERT_GE(std::hypot(c[0] - x0[0], c[1] - x0[1]), lambda / 4);
    ASSERT_GE(std::min(0.5 - std::abs(c[0]), 0.7 - std::abs(c[1])), lambda / 4);
    const auto v = green_sum(basis, x0, {c, {c[0] + h, c[1], 0}, {c[0] - h, c[1], 0}, {c[0], c[1] + h, 0}, {c[0], c[1] - h, 0}});
    const Complex lap = (v[1] + v[2] + v[3] + v[4] - 4.0 * v[0]) / (h * h);
    EXPECT_LT(std::abs(lap + k * k * v[0]), 1e-2 * k * k * std::abs(v[0]))
        << "at (" << c[0] << ", " << c[1] << ")";
  }
}

TEST(Green, MatchesFiniteDifferenceReference2D) {
  const auto room = testsupport::room_2d_impedance();
  const auto ctx = make_wave_context(room, 400.0);
  const Point x0{0.2, 0.2, 0};
  const double lambda = room.speed_of_sound / ctx.frequency;
  const auto fdm = fdm_green_2d(room, ctx, x0, 40.0);
  std::vector<Point> pts;
  for (const auto& p : fdm.field.points) {
    if (std::hypot(p[0] - x0[0], p[1] - x0[1]) > lambda / 8) pts.push_back(p);
  }
  const int n = static_cast<int>(std::ceil(10 * std::max(ctx.q[0], ctx.q[1])));
  const auto ee = green_eval(room, ctx, x0, pts, nmax(n));
  EXPECT_LT(l2_relative_error(ee.values, fdm.sample(pts)), 0.05);
}

TEST(Green, BoundaryConditionResidual) {
  const auto room = testsupport::room_2d_impedance();
  const auto ctx = make_wave_context(room, 500.0);
  const double k = ctx.wavenumber;
  const int n = static_cast<int>(std::ceil(10 * std::max(ctx.q[0], ctx.q[1])));
  const auto basis = build_room_basis(room, ctx, nmax(n));
  const Point x0{0.2, 0.2, 0};
  const Complex i{0.0, 1.0};
  const double h = 1e-5;
  const Complex b_right = room.axes[0].beta_plus.at(500.0);
  const Complex b_bottom = room.axes[1].beta_minus.at(500.0);
  for (double y : {-0.4, 0.0, 0.5}) {
    const auto v = green_sum(basis, x0, {{0.5, y, 0}, {0.5 - h, y, 0}});
    const Complex dn = (v[0] - v[1]) / h;
    EXPECT_LT(std::abs(dn + i * k * b_right * v[0]), 5e-2 * k * std::abs(b_right) * std::abs(v[0]));
  }
  for (double x : {-0.3, 0.1}) {
    const auto v = green_sum(basis, x0, {{x, -0.7, 0}, {x, -0.7 + h, 0}});
    const Complex dn = -(v[1] - v[0]) / h;
    EXPECT_LT(std::abs(dn + i * k * b_bottom * v[0]), 5e-2 * k * std::abs(b_bottom) * std::abs(v[0]));
  }
}

TEST(Green, ConvergenceTrendAgainstClosedForm) {
  const auto room = testsupport::room_1d(1.0, {0.1, 0.1}, {0.2, 0.07});
  const auto ctx = make_wave_context(room, 1000.0);
  const double q = ctx.q[0];
  std::vector<Point> pts;
  std::vector<Complex> ref;
  for (int i = 0; i < 200; ++i) {
    const double x = -0.5 + i / 199.0;
    if (std::abs(x - 0.1) < room.speed_of_sound / ctx.frequency / 4) continue;
    pts.push_back({x, 0, 0});
    ref.push_back(green_1d_closed_form(room.axes[0], ctx, 0.1, x));
  }
  const auto err = [&](double factor) {
    return l2_relative_error(green_eval(room, ctx, {0.1, 0, 0}, pts, nmax(static_cast<int>(std::ceil(factor * q)))).values, ref);
  };
  EXPECT_GT(err(0.5) / err(1.5), 5.0);
  EXPECT_GT(err(10.0), err(20.0));
}

TEST(Green, PointsOutsideRoomAreRejected) {
  const auto room = testsupport::room_2d_impedance();
  const auto ctx = make_wave_context(room, 200.0);
  EXPECT_THROW(green_eval(room, ctx, {0.6, 0, 0}, {{0, 0, 0}}, nmax(4)), InputError);
  EXPECT_THROW(green_eval(room, ctx, {0, 0, 0}, {{0, 0.71, 0}}, nmax(4)), InputError);
  EXPECT_THROW(green_eval(room, ctx, {0, 0, 0}, {{0, 0, 0}}, nmax(0)), InputError);
}

TEST(Green, NearResonanceForLosslessWalls) {
  const auto room = testsupport::room_1d(1.0, 0.0, 0.0);
  const auto ctx = make_wave_context(room, 171.5);  // q = 1 exactly
  EXPECT_THROW(green_eval(room, ctx, {0.1, 0, 0}, {{0.3, 0, 0}}, nmax(4)), NearResonance);
}

TEST(TransferFunction, MarksFailuresAndKeepsOrder) {
  const auto room = testsupport::room_1d(1.0, 0.0, 0.0);
  const std::vector<double> f{150.0, 171.5, 200.0, 343.0, 400.0};
  const auto tf = transfer_function(room, {0.1, 0, 0}, {-0.3, 0, 0}, f, nmax(6), 3);
  ASSERT_EQ(tf.values.size(), 5u);
  EXPECT_TRUE(tf.values[0] && tf.values[2] && tf.values[4]);
  EXPECT_FALSE(tf.values[1]);
  EXPECT_FALSE(tf.values[3]);
  EXPECT_EQ(tf.failures.size(), 2u);
  EXPECT_TRUE(std::isnan(tf.spl[1]));
  EXPECT_NE(tf.failures[0].find("171.5"), std::string::npos);
  const auto single = transfer_function(room, {0.1, 0, 0}, {-0.3, 0, 0}, f, nmax(6), 1);
  for (std::size_t i = 0; i < f.size(); ++i) {
    ASSERT_EQ(single.values[i].has_value(), tf.values[i].has_value());
    if (tf.values[i]) EXPECT_EQ(*single.values[i], *tf.values[i]);
  }
}

TEST(TransferFunction, RejectsUnorderedFrequencies) {
  const auto room = testsupport::room_1d(1.0, 0.1, 0.1);
  EXPECT_THROW(transfer_function(room, {0, 0, 0}, {0.1, 0, 0}, {200.0, 100.0}, nmax(4)), InputError);
}

TEST(Spl, Examples) {
  const auto s = spl({kReferencePressure, 10.0 * kReferencePressure, 0.0});
  EXPECT_DOUBLE_EQ(s[0], 0.0);
  EXPECT_DOUBLE_EQ(s[1], 20.0);
  EXPECT_TRUE(std::isinf(s[2]) && s[2] < 0);
  EXPECT_THROW(spl({1.0}, 0.0), InputError);
}
