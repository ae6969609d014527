#pragma once

// Eigenfunctions φ(x) = cos(πq̂x/l + b̂) of one axis, x ∈ [-l/2, l/2], their
// phase offsets b̂ and normalization Λ = ∫φ² dx, assembled into a basis.

#include <string>
#include <vector>

#include "roomgreen/core.hpp"
#include "roomgreen/eigensolver.hpp"

namespace roomgreen {

/// Entries with |Λ| < kLambdaWarnTol · l are flagged near-defective.
inline constexpr double kLambdaWarnTol = 1e-6;

struct ModalRoot {
  EigenRoot root;
  Complex b_hat;
  Complex lambda;  // m
  bool near_defective = false;
};

struct Basis1D {
  AxisBoundary axis;
  double frequency = 0.0;
  double wavenumber = 0.0;
  GammaPair gamma;
  std::vector<ModalRoot> entries;  // constant mode first when present
  bool has_constant_mode = false;
  RootSet roots;
  std::vector<std::string> warnings;

  double length() const noexcept { return axis.length; }
};

/// b̂ from the right-wall condition πq̂ tan(πq̂/2 + b̂) = iγ₊, principal
/// branch, with Re(b̂) reduced to (-π, π]. When that form is ill-conditioned
/// the left-wall form is used instead. Throws LeftBcViolation when neither
/// choice satisfies both wall conditions to 1e-8 relative.
Complex b_from_q(const EigenRoot& root, const GammaPair& g);

/// Λ = (l/2)(1 + sin(πq̂) cos(2b̂)/(πq̂)); Λ = l·cos²(b̂) at q̂ = 0.
Complex lambda_of(Complex q_hat, Complex b_hat, double length);
Complex lambda_of(const EigenRoot& root, Complex b_hat, double length);

Complex eigenfunction_eval(const ModalRoot& mode, double length, double x);
Complex eigenfunction_derivative(const ModalRoot& mode, double length, double x);

struct WallResiduals {
  double left = 0.0;
  double right = 0.0;
};

/// Relative residuals of πq̂ sin(πq̂/2 ∓ b̂) − iγ∓ cos(πq̂/2 ∓ b̂) at both walls.
WallResiduals wall_residuals(Complex q_hat, Complex b_hat, const GammaPair& g);

Basis1D build_basis(const AxisBoundary& axis, double frequency, double wavenumber,
                    const SolverParams& p);
Basis1D build_basis(const RoomSpec& room, std::size_t axis_index, const WaveContext& ctx,
                    const SolverParams& p);

}  // namespace roomgreen
