#pragma once

// Closed-form resonance modes of one axis with frequency-independent walls:
//
//   q̃ = (1/π) arctan(i(β₋+β₊)/(1+β₋β₊)) + n,
//
// equivalently e^{2πiq̃} = R₋R₊ with R = (1−β)/(1+β), so that
// Re q̃ = arg(R₋R₊)/(2π) + n and Im q̃ = −ln|R₋R₊|/(2π).

#include <vector>

#include "roomgreen/core.hpp"

namespace roomgreen {

struct ModeValue {
  Complex q_tilde;       // arctan form, branch-aligned to re_part
  int n = 0;
  double re_part = 0.0;  // arg(R₋R₊)/(2π) + n, arg in (−π, π]
  double im_part = 0.0;  // −ln|R₋R₊|/(2π), the same for every n
};

/// Throws InputError at β = −1.
Complex reflection_coefficient(Complex beta);

/// Throws DegenerateDenominator when 1 + β₋β₊ = 0 and AbsorbingPole when
/// R₋R₊ = 0. The arctan and reflection-coefficient forms are cross-checked
/// to 1e-10.
ModeValue mode_q(int n, Complex beta_minus, Complex beta_plus);

/// f_n = Re(q̃)·c/(2l) for n in [n_first, n_last]. Tabulated admittance
/// throws FrequencyDependentAdmittance.
std::vector<double> mode_frequencies(const AxisBoundary& axis, double speed_of_sound,
                                     int n_first, int n_last);

}  // namespace roomgreen
