#pragma once

// Domain types shared by every stage of the solver: wall admittances, room
// geometry, the per-frequency wave context, the dimensionless boundary
// parameters γ± of one axis, and Newton/dedup solver settings.
//
// Conventions
//   * Coordinates are measured from the room centre: axis j spans
//     [-l_j/2, l_j/2].
//   * Boundary condition on every wall: ∂p/∂n + i k β p = 0 with outward
//     normal n.
//   * q = k l / π is the dimensionless excitation wavenumber of an axis.

#include <complex>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace roomgreen {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

/// Normalized surface admittance β of one wall, either constant or tabulated
/// against frequency. Tables are interpolated linearly on Re and Im
/// separately and never extrapolated.
class Admittance {
 public:
  struct Row {
    double frequency;  // Hz
    Complex beta;
  };

  Admittance() = default;

  static Admittance constant(Complex beta);
  /// β = 1/ζ from a normalized impedance ζ ≠ 0.
  static Admittance from_impedance(Complex zeta);
  /// Rows must have strictly increasing frequencies (at least two rows).
  static Admittance table(std::vector<Row> rows);
  /// Comma-separated rows "f_hz, re_beta, im_beta"; blank lines and lines
  /// starting with '#' are skipped.
  static Admittance parse_table(std::istream& in, const std::string& source = "<stream>");
  static Admittance load_table(const std::filesystem::path& path);

  /// Throws InputError outside the table range.
  Complex at(double frequency) const;

  bool is_constant() const noexcept { return rows_.empty(); }
  /// Constant and exactly 0 + 0i.
  bool is_rigid() const noexcept { return is_constant() && value_ == Complex{}; }
  const std::vector<Row>& rows() const noexcept { return rows_; }
  std::string describe() const;

 private:
  Complex value_{};
  std::vector<Row> rows_;
};

/// One axis of the room: its length and the admittance of the wall at
/// x = -l/2 (beta_minus) and x = +l/2 (beta_plus).
struct AxisBoundary {
  double length = 1.0;  // m
  Admittance beta_minus;
  Admittance beta_plus;

  void validate() const;
};

struct RoomSpec {
  std::vector<AxisBoundary> axes;  // 1 to 3 axes
  double speed_of_sound = 343.0;   // m/s

  std::size_t dimension() const noexcept { return axes.size(); }
  void validate() const;
  /// Stable FNV-1a digest of geometry and admittances, for output metadata.
  std::string hash() const;
};

struct WaveContext {
  double frequency = 0.0;      // Hz
  double wavenumber = 0.0;     // k = 2πf/c, rad/m
  std::vector<double> q;       // k l_j / π per axis
};

WaveContext make_wave_context(const RoomSpec& room, double frequency);

/// γ± = β± k l for one axis plus the derived group cutoffs.
struct GammaPair {
  Complex minus{};
  Complex plus{};
  /// γ₋γ₊/(γ₋+γ₊); empty when γ₋+γ₊ = 0.
  std::optional<Complex> parallel;
  double a12 = 0.0;   // √|γ₋γ₊| / π, cutoff between groups 1 and 2
  double a11p = 0.0;  // |γ₋+γ₊| / π, cutoff between groups 1 and 1P
  double length = 1.0;      // axis length the pair was built for (m)
  double wavenumber = 0.0;  // excitation k (rad/m); 0 when built from raw γ

  Complex sum() const noexcept { return minus + plus; }
  Complex product() const noexcept { return minus * plus; }
};

GammaPair make_gamma(Complex gamma_minus, Complex gamma_plus);
GammaPair make_gamma(const AxisBoundary& axis, const WaveContext& ctx);

struct SolverParams {
  int n_max = 0;               // truncation order
  int n_newton = 100;          // Newton iteration cap
  double alpha_newton = 0.3;   // damping
  double eps_newton = 1e-11;   // tolerance on the scaled residual
  double dedup_tol = 1e-4;     // root-coincidence distance in q̂-space
  double zero_tol = 1e-4;      // trivial-root threshold

  void validate() const;
};

}  // namespace roomgreen
