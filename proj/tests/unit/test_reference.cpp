#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "fixtures.hpp"
#include "roomgreen/errors.hpp"
#include "roomgreen/metrics.hpp"
#include "roomgreen/reference.hpp"

using namespace roomgreen;

TEST(ClosedForm, WallConditionsAndSourceJump) {
  const auto room = testsupport::room_1d(1.3, {0.1, 0.05}, {0.2, -0.1});
  const auto ctx = make_wave_context(room, 420.0);
  const auto& ax = room.axes[0];
  const double k = ctx.wavenumber, h = 1e-6, x0 = 0.21, l = ax.length;
  const Complex i{0.0, 1.0};
  const auto g = [&](double x) { return green_1d_closed_form(ax, ctx, x0, x); };
  // Outward-normal derivative at each wall: ∂G/∂n + ikβG = 0.
  const Complex dl = -(g(-l / 2 + h) - g(-l / 2)) / h;
  EXPECT_LT(std::abs(dl + i * k * ax.beta_minus.at(420.0) * g(-l / 2)), 1e-4 * k * std::abs(g(-l / 2)));
  const Complex dr = (g(l / 2) - g(l / 2 - h)) / h;
  EXPECT_LT(std::abs(dr + i * k * ax.beta_plus.at(420.0) * g(l / 2)), 1e-4 * k * std::abs(g(l / 2)));
  // G″ + k²G = −δ: the derivative jumps by −1 across the source.
  const Complex jump = (g(x0 + 2 * h) - g(x0 + h)) / h - (g(x0 - h) - g(x0 - 2 * h)) / h;
  EXPECT_NEAR(jump.real(), -1.0, 1e-4);
  EXPECT_NEAR(jump.imag(), 0.0, 1e-4);
  EXPECT_LT(std::abs(g(0.4) - green_1d_closed_form(ax, ctx, 0.4, x0)), 1e-14 * std::abs(g(0.4)));
}

TEST(ClosedForm, LosslessResonanceIsDegenerate) {
  const auto room = testsupport::room_1d(1.0, 0.0, 0.0);
  const auto ctx = make_wave_context(room, 343.0);
  EXPECT_THROW(green_1d_closed_form(room.axes[0], ctx, 0.1, 0.2), DegenerateWronskian);
}

TEST(Fdm, SystemIsComplexSymmetric) {
  const auto room = testsupport::room_2d_impedance();
  const auto ctx = make_wave_context(room, 300.0);
  const auto sys = assemble_fdm_2d(room, ctx, {0.13, -0.21, 0}, 20.0);
  std::map<std::pair<std::size_t, std::size_t>, Complex> a;
  for (const auto& e : sys.entries) {
    EXPECT_TRUE(a.emplace(std::pair{e.row, e.col}, e.value).second) << "duplicate entry";
  }
  for (const auto& [rc, v] : a) {
    const auto it = a.find({rc.second, rc.first});
    ASSERT_NE(it, a.end());
    EXPECT_LT(std::abs(it->second - v), 1e-12 * std::abs(v));
  }
  EXPECT_EQ(sys.x.size(), 19u);  // ⌈1.0·300·20/343⌉ = 18 intervals
  EXPECT_EQ(sys.rhs.size(), sys.unknowns());
  Complex total = 0.0;
  for (std::size_t i = 0; i < sys.x.size(); ++i) {
    for (std::size_t j = 0; j < sys.y.size(); ++j) total += sys.rhs[sys.node(i, j)];
  }
  EXPECT_NEAR(total.real() * sys.hx * sys.hy, -1.0, 1e-12);
}

TEST(Fdm, MinimumGridAndLimits) {
  const auto room = testsupport::room_2d_impedance();
  const auto ctx = make_wave_context(room, 20.0);
  const auto sys = assemble_fdm_2d(room, ctx, {0, 0, 0}, 10.0);
  EXPECT_EQ(sys.x.size(), 9u);
  EXPECT_THROW(assemble_fdm_2d(room, ctx, {0, 0, 0}, 9.0), InputError);
  EXPECT_THROW(assemble_fdm_2d(room, ctx, {0.7, 0, 0}, 20.0), InputError);
  const auto hot = make_wave_context(room, 20000.0);
  EXPECT_THROW(fdm_green_2d(room, hot, {0, 0, 0}, 40.0), GridTooLarge);
  EXPECT_THROW(fdm_green_2d(testsupport::room_1d(1.0, 0.1, 0.1), ctx, {0, 0, 0}, 20.0), InputError);
}

TEST(Fdm, SolutionIsReciprocalAtNodes) {
  const auto room = testsupport::room_2d_impedance();
  const auto ctx = make_wave_context(room, 250.0);
  const auto probe = assemble_fdm_2d(room, ctx, {0, 0, 0}, 20.0);
  const Point a{probe.x[3], probe.y[5], 0}, b{probe.x[10], probe.y[17], 0};
  const Complex gab = fdm_green_2d(room, ctx, a, 20.0).at(b[0], b[1]);
  const Complex gba = fdm_green_2d(room, ctx, b, 20.0).at(a[0], a[1]);
  EXPECT_LT(std::abs(gab - gba), 1e-10 * std::abs(gab));
}

TEST(Fdm, SelfConvergenceIsSecondOrder) {
  const auto room = testsupport::room_2d_impedance();
  const auto ctx = make_wave_context(room, 300.0);
  const Point x0{0.2, 0.2, 0};
  const double lambda = room.speed_of_sound / ctx.frequency;
  std::vector<Point> pts;
  for (int i = 0; i < 15; ++i) {
    for (int j = 0; j < 21; ++j) {
      const Point p{-0.5 + i / 14.0, -0.7 + 1.4 * j / 20.0, 0};
      if (std::hypot(p[0] - x0[0], p[1] - x0[1]) > lambda / 8) pts.push_back(p);
    }
  }
  const auto f20 = fdm_green_2d(room, ctx, x0, 20.0).sample(pts);
  const auto f40 = fdm_green_2d(room, ctx, x0, 40.0).sample(pts);
  const auto f80 = fdm_green_2d(room, ctx, x0, 80.0).sample(pts);
  const double ratio = l2_relative_error(f20, f80) / l2_relative_error(f40, f80);
  EXPECT_GT(ratio, 3.0);
  EXPECT_LT(ratio, 5.5);
}

TEST(Banded, MatchesDenseSolve) {
  const std::size_t n = 40, band = 3;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<FdmEntry> entries;
  std::vector<std::vector<Complex>> dense(n, std::vector<Complex>(n));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = r >= band ? r - band : 0; c <= std::min(n - 1, r + band); ++c) {
      // Small diagonal forces row swaps.
      const Complex v{u(rng), u(rng)};
      const Complex a = r == c ? 0.01 * v : v;
      entries.push_back({r, c, a});
      dense[r][c] = a;
    }
  }
  std::vector<Complex> x(n);
  for (auto& v : x) v = {u(rng), u(rng)};
  std::vector<Complex> b(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) b[r] += dense[r][c] * x[c];
  }
  const auto sol = solve_banded(n, band, entries, b);
  for (std::size_t i = 0; i < n; ++i) EXPECT_LT(std::abs(sol[i] - x[i]), 1e-10);
}

TEST(Banded, SingularMatrixFails) {
  std::vector<FdmEntry> entries{{0, 0, 1.0}, {0, 1, 2.0}, {1, 0, 2.0}, {1, 1, 4.0}};
  EXPECT_THROW(solve_banded(2, 1, entries, {1.0, 1.0}), SolveFailure);
}
