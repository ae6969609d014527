#pragma once

// First-order closed-form guesses for the roots q̂ of the axis eigenvalue
// condition ((πq̂)² + γ₋γ₊) tan(πq̂) = i(γ₋+γ₊)(πq̂), one family per
// admittance regime, and the over-inclusive selection that feeds Newton.

#include <string_view>
#include <vector>

#include "roomgreen/core.hpp"

namespace roomgreen {

/// Where a root came from. G1..G1P are asymptotic families; Oracle marks
/// roots recovered by argument-principle enumeration and Constant the
/// rigid-wall constant mode.
enum class Group { G1, G2, G3, G3SymPlus, G3SymMinus, G1P, Oracle, Constant };

std::string_view to_string(Group g) noexcept;

struct Candidate {
  Complex q_hat;
  Group group = Group::G1;
  int n = 0;  // branch index; unused for group 3
};

/// Hard walls: ½(n + √(n² + 4i(γ₋+γ₊)/π²)), root branch with Re ≥ 0.
Complex group1_guess(int n, const GammaPair& g);

/// Soft walls: n(1 + i/((γ₋∥γ₊) − i)). Throws InputError if γ₋+γ₊ = 0.
Complex group2_guess(int n, const GammaPair& g);

/// Negative reactance: γ₋/π and γ₊/π, or (γ/π)(1 ± 2e^{iγ}) when
/// |γ₋ − γ₊| ≤ symmetric_tol·max(1, |γ₋|). Only values with Im(γ) > 0.
std::vector<Candidate> group3_guess(const GammaPair& g, double symmetric_tol = 1e-9);

/// Highly asymmetric walls: (n + ½)(1 + i/(γ₋+γ₊)). Throws if γ₋+γ₊ = 0.
Complex group1p_guess(int n, const GammaPair& g);

/// All guesses for branches 0..n_max. Over-inclusive: neighbouring regimes
/// overlap and duplicates are left for the deduplication step.
std::vector<Candidate> candidate_set(const GammaPair& g, int n_max);

}  // namespace roomgreen
