#pragma once

// Green's function of the rectangular room by eigenfunction expansion
//
//   G_k(x|x0) = Σ_n φ_n(x) φ_n(x0) / (Λ_n (k̂_n² − k²)),
//
// summed over the full tensor product of the per-axis bases, with
// φ_n = Π_j φ_{n_j}, Λ_n = Π_j Λ_{n_j} and k̂_n² = Σ_j k̂_{n_j}².

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "roomgreen/core.hpp"
#include "roomgreen/modal.hpp"

namespace roomgreen {

/// Room-centred coordinates; components beyond the room dimension are ignored.
using Point = std::array<double, 3>;

/// |k̂_n² − k²| < kDenomTol · k² raises NearResonance.
inline constexpr double kDenomTol = 1e-12;
inline constexpr double kReferencePressure = 2e-5;  // Pa

struct RoomBasis {
  std::vector<Basis1D> axes;
  double frequency = 0.0;
  double wavenumber = 0.0;

  /// Number of summed multi-index terms, Π_j (entries of basis j).
  std::size_t term_count() const noexcept;
  std::vector<std::string> warnings() const;
};

RoomBasis build_room_basis(const RoomSpec& room, const WaveContext& ctx, const SolverParams& p);

/// One summand of the series: indices into the per-axis bases.
struct MultiIndexTerm {
  std::array<std::size_t, 3> n{};
  Complex k_hat_sq;  // Σ_j k̂²_{n_j}, rad²/m²
  Complex lambda_n;  // Π_j Λ_{n_j}
};

/// Every term of the full tensor product, last axis varying fastest.
std::vector<MultiIndexTerm> multi_index_terms(const RoomBasis& basis);

struct FieldGrid {
  std::size_t dimension = 0;
  std::vector<Point> points;
  std::vector<Complex> values;  // Pa per unit source strength
  double frequency = 0.0;
  int n_max = 0;
  std::string room_hash;
  std::size_t term_count = 0;
  std::vector<std::string> warnings;
};

/// Series value at each point from prebuilt bases. Per axis, φ is tabulated
/// once per distinct coordinate; the multi-index sum then only multiplies
/// and accumulates.
std::vector<Complex> green_sum(const RoomBasis& basis, const Point& x0,
                               const std::vector<Point>& points);

/// Reference implementation evaluating every term from scratch; used by
/// tests and benchmarks to check the factorized path.
std::vector<Complex> green_sum_naive(const RoomBasis& basis, const Point& x0,
                                     const std::vector<Point>& points);

FieldGrid green_eval(const RoomSpec& room, const WaveContext& ctx, const Point& x0,
                     const std::vector<Point>& points, const SolverParams& p);

/// Tensor grid of per-axis coordinate lists (last axis varies fastest),
/// evaluated by successive mode contractions.
FieldGrid green_eval_grid(const RoomSpec& room, const WaveContext& ctx, const Point& x0,
                          const std::vector<std::vector<double>>& axis_coords,
                          const SolverParams& p);

struct TransferFunction {
  std::vector<double> frequencies;
  std::vector<std::optional<Complex>> values;  // empty where the frequency failed
  std::vector<double> spl;                     // dB re 20 µPa; NaN where absent
  std::vector<std::string> failures;
  std::vector<std::string> warnings;
};

using ParamsAt = std::function<SolverParams(double frequency)>;

/// Per-frequency basis rebuild and single-point evaluation. Frequencies are
/// split across `jobs` worker threads; results are stored in input order.
TransferFunction transfer_function(const RoomSpec& room, const Point& x0, const Point& x,
                                   const std::vector<double>& freqs, const ParamsAt& params,
                                   unsigned jobs = 1);
TransferFunction transfer_function(const RoomSpec& room, const Point& x0, const Point& x,
                                   const std::vector<double>& freqs, const SolverParams& p,
                                   unsigned jobs = 1);

/// 20 log10(|value| / p0); exact zeros map to -infinity.
std::vector<double> spl(const std::vector<Complex>& values, double p0 = kReferencePressure);

}  // namespace roomgreen
