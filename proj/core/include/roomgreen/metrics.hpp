#pragma once

#include <vector>

#include "roomgreen/core.hpp"

namespace roomgreen {

/// ℰ = √(Σ|p − p_ref|² / Σ|p_ref|²). Throws InputError on length mismatch
/// or a zero reference norm.
double l2_relative_error(const std::vector<Complex>& p, const std::vector<Complex>& p_ref);

/// Frequency Response Assurance Criterion,
/// |Σ h1·conj(h2)|² / (Σ|h1|² Σ|h2|²), in [0, 1].
double frac(const std::vector<Complex>& h1, const std::vector<Complex>& h2);

}  // namespace roomgreen
