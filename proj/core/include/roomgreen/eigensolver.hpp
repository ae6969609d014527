#pragma once

// Roots of the axis eigenvalue condition in pole-free product form
//
//   v(q̂) = ((πq̂)² + γ₋γ₊) sin(πq̂) − i(γ₋+γ₊)(πq̂) cos(πq̂) = 0,
//
// refined from asymptotic guesses by damped Newton, reduced to one
// representative per ±q̂ pair, and checked against the asymptotic root count
// #Q₊ ∩ {|q̂| ≤ m + ½} = m + 1 (or m in the degenerate case
// γ₋γ₊ = i(γ₋+γ₊)).
//
// v grows like e^{π|Im q̂|}, so the residual is evaluated in extended
// precision and convergence is judged on the scaled residual
// |v| / (max(1, |πq̂|² + |γ₋γ₊| + |γ₋+γ₊||πq̂|) · cosh(π Im q̂)).

#include <complex>
#include <string>
#include <vector>

#include "roomgreen/asymptotics.hpp"
#include "roomgreen/core.hpp"

namespace roomgreen {

using ComplexL = std::complex<long double>;

ComplexL residual(ComplexL q_hat, const GammaPair& g);
ComplexL residual_derivative(ComplexL q_hat, const GammaPair& g);

/// Magnitude bound of the terms of v at q̂; |v| / residual_scale ≤ ~3.
long double residual_scale(ComplexL q_hat, const GammaPair& g);
double scaled_residual(ComplexL q_hat, const GammaPair& g);

struct EigenRoot {
  Complex q_hat;
  double residual = 0.0;         // |v(q̂)|
  double scaled_residual = 0.0;  // |v(q̂)| / residual_scale(q̂)
  Group group = Group::G1;
  Complex k_hat;                 // π q̂ / l (rad/m)
};

struct RefinedPoint {
  Complex q_hat;
  double scaled_residual = 0.0;
  Group group = Group::G1;
  int n = 0;
};

struct NewtonResult {
  std::vector<RefinedPoint> points;
  std::vector<std::string> warnings;
};

/// Damped Newton q̂ ← q̂ − α v/v′ from each candidate, stopping when the
/// scaled residual reaches eps_newton, followed by a few undamped polishing
/// steps. Candidates that hit |v′| ≈ 0, leave the finite range or exhaust
/// n_newton iterations are dropped with a warning.
NewtonResult newton_refine(const std::vector<Candidate>& candidates, const GammaPair& g,
                           const SolverParams& p);

struct RootSet {
  std::vector<EigenRoot> roots;  // sorted by Re then Im
  GammaPair gamma;
  int n_max = 0;
  int expected = 0;  // count required inside |q̂| ≤ n_max + ½
  int counted = 0;   // roots found inside |q̂| ≤ n_max + ½
  bool fallback_used = false;
  /// Count accepted from the winding oracle because n_max is below the order
  /// where the asymptotic count is certified; `expected` then differs from `counted`.
  bool count_from_oracle = false;
  std::vector<std::string> warnings;
};

/// Maps each point to its Q₊ representative, drops |q̂| ≤ zero_tol, merges
/// points closer than dedup_tol (lowest residual wins) and sorts.
RootSet canonicalize_and_dedup(const std::vector<RefinedPoint>& points, const GammaPair& g,
                               const SolverParams& p);

/// Asymptotic root count: m if γ₋γ₊ = i(γ₋+γ₊) (to degeneracy_tol), else m + 1.
int expected_count(int m, const GammaPair& g, double degeneracy_tol = 1e-9);

/// Smallest m for which π²R² − 2π|γ₋+γ₊|R − |γ₋γ₊| > 0 with R = m + ½,
/// i.e. from which the Rouché argument behind the asymptotic count is certified.
int rouche_order(const GammaPair& g);

/// Counts roots with |q̂| ≤ m + ½.
int count_in_disk(const std::vector<EigenRoot>& roots, int m);

/// Full pipeline: candidates → Newton → dedup → count check, with the
/// winding-oracle fallback on a count mismatch. Throws CountMismatch when the
/// count is still wrong and n_max ≥ rouche_order(g). Below that order the
/// theorem does not apply and the oracle-verified count is accepted with a
/// warning.
RootSet solve_axis(const GammaPair& g, const SolverParams& p);

}  // namespace roomgreen
