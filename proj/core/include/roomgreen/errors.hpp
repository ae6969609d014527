#pragma once

#include <stdexcept>
#include <string>

namespace roomgreen {

/// Invalid input: bad configuration, violated precondition, out-of-range
/// evaluation. The CLI maps these to exit code 1.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical failure of an otherwise valid computation (exit code 2).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Asymptotic root count still disagrees after the winding-oracle fallback.
class CountMismatch : public NumericalError {
 public:
  CountMismatch(const std::string& what, int found, int expected)
      : NumericalError(what), found_(found), expected_(expected) {}
  int found() const noexcept { return found_; }
  int expected() const noexcept { return expected_; }

 private:
  int found_;
  int expected_;
};

/// A Green's-function denominator k̂² − k² is (nearly) zero.
class NearResonance : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Singular linear system in the finite-difference reference.
class SolveFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// A contour of the argument-principle oracle passes through a root.
class ContourOnRoot : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class MaxDepth : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Closed-form 1D reference evaluated at an exact lossless resonance.
class DegenerateWronskian : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Phase offset b̂ reproduces neither wall condition: the root is spurious.
class LeftBcViolation : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// 1 + β₋β₊ = 0 in the resonance-mode formula.
class DegenerateDenominator : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// |R₋R₊| = 0: a perfectly absorbing wall, the mode damping is infinite.
class AbsorbingPole : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Closed-form mode formulas need frequency-independent admittance.
class FrequencyDependentAdmittance : public InputError {
 public:
  using InputError::InputError;
};

/// Finite-difference grid exceeds the desk-scale unknown budget.
class GridTooLarge : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace roomgreen
