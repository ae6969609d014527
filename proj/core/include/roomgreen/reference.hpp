#pragma once

// Independent Green's-function references: the exact 1D solution built from
// boundary-matched homogeneous solutions, and a finite-difference solver for
// 2D rooms.

#include <cstddef>
#include <vector>

#include "roomgreen/core.hpp"
#include "roomgreen/greens.hpp"

namespace roomgreen {

/// G(x|x0) = −u₋(min)u₊(max)/W with
///   u₋(x) = cos(k(x+l/2)) + iβ₋ sin(k(x+l/2)),
///   u₊(x) = cos(k(l/2−x)) + iβ₊ sin(k(l/2−x)),
/// W = u₋u₊′ − u₋′u₊. Throws DegenerateWronskian at a lossless resonance.
Complex green_1d_closed_form(const AxisBoundary& axis, const WaveContext& ctx, double x0, double x);

inline constexpr double kMinEpw = 10.0;
inline constexpr std::size_t kMaxFdmUnknowns = 200000;

struct FdmEntry {
  std::size_t row;
  std::size_t col;
  Complex value;
};

/// Assembled 5-point system. Wall rows are halved (corners quartered) after
/// ghost elimination so the operator is complex-symmetric.
struct FdmSystem {
  std::vector<double> x;  // node coordinates along axis 0
  std::vector<double> y;  // node coordinates along axis 1
  double hx = 0.0;
  double hy = 0.0;
  std::vector<FdmEntry> entries;  // unique (row, col) pairs
  std::vector<Complex> rhs;

  std::size_t unknowns() const noexcept { return x.size() * y.size(); }
  /// Node (i, j) of axis 0/1 to its unknown index in natural order (y fastest).
  std::size_t node(std::size_t i, std::size_t j) const noexcept { return i * y.size() + j; }
};

/// Grid: N_j = max(8, ⌈l_j f epw / c⌉) intervals per axis. The unit source
/// is spread over the four surrounding nodes with bilinear weights.
FdmSystem assemble_fdm_2d(const RoomSpec& room, const WaveContext& ctx, const Point& x0, double epw);

struct FdmField {
  FieldGrid field;  // every node, axis 1 varying fastest
  std::vector<double> x;
  std::vector<double> y;

  /// Bilinear interpolation of the nodal solution.
  Complex at(double px, double py) const;
  std::vector<Complex> sample(const std::vector<Point>& points) const;
};

/// Throws GridTooLarge above kMaxFdmUnknowns and SolveFailure on a singular
/// system.
FdmField fdm_green_2d(const RoomSpec& room, const WaveContext& ctx, const Point& x0, double epw);

/// Banded LU with partial pivoting for a square matrix of half-bandwidth
/// `band`; exposed for testing.
std::vector<Complex> solve_banded(std::size_t n, std::size_t band,
                                  const std::vector<FdmEntry>& entries, std::vector<Complex> rhs);

}  // namespace roomgreen
