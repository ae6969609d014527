#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "roomgreen/eigensolver.hpp"
#include "roomgreen/greens.hpp"
#include "roomgreen/reference.hpp"

using namespace roomgreen;

namespace {

RoomSpec room_2d() {
  RoomSpec r;
  r.axes = {{1.0, Admittance::from_impedance({10.0, -3.0}), Admittance::from_impedance({6.0, 0.0})},
            {1.4, Admittance::from_impedance({12.0, -5.0}), Admittance::from_impedance({4.0, -4.0})}};
  return r;
}

std::vector<Point> grid_points(int n) {
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) pts.push_back({-0.45 + 0.9 * i / (n - 1), -0.65 + 1.3 * j / (n - 1), 0.0});
  return pts;
}

RoomBasis basis_at(double freq, int n_max) {
  const auto room = room_2d();
  SolverParams p;
  p.n_max = n_max;
  return build_room_basis(room, make_wave_context(room, freq), p);
}

void BM_SolveAxis(benchmark::State& state) {
  const auto g = make_gamma(Complex{0.1, 0.1} * 2.0 * kPi * 5000.0 / 343.0, Complex{0.2, 0.07} * 2.0 * kPi * 5000.0 / 343.0);
  SolverParams p;
  p.n_max = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_axis(g, p));
}
BENCHMARK(BM_SolveAxis)->Arg(8)->Arg(40)->Arg(160);

void BM_GreenSumFactorized(benchmark::State& state) {
  const auto basis = basis_at(500.0, static_cast<int>(state.range(0)));
  const auto pts = grid_points(30);
  const Point x0{-0.2, 0.3, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(green_sum(basis, x0, pts));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(pts.size() * basis.term_count()));
}
BENCHMARK(BM_GreenSumFactorized)->Arg(10)->Arg(40);

void BM_GreenSumNaive(benchmark::State& state) {
  const auto basis = basis_at(500.0, static_cast<int>(state.range(0)));
  const auto pts = grid_points(30);
  const Point x0{-0.2, 0.3, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(green_sum_naive(basis, x0, pts));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(pts.size() * basis.term_count()));
}
BENCHMARK(BM_GreenSumNaive)->Arg(10)->Arg(40);

void BM_Fdm2D(benchmark::State& state) {
  const auto room = room_2d();
  const auto ctx = make_wave_context(room, 400.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(fdm_green_2d(room, ctx, {-0.2, 0.3, 0.0}, static_cast<double>(state.range(0))));
}
BENCHMARK(BM_Fdm2D)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
