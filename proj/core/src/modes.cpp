#include "roomgreen/modes.hpp"

#include <cmath>
#include <sstream>

#include "roomgreen/errors.hpp"

namespace roomgreen {

Complex reflection_coefficient(Complex beta) {
  if (beta == Complex{-1.0, 0.0}) throw InputError("reflection coefficient has a pole at beta = -1");
  return (1.0 - beta) / (1.0 + beta);
}

ModeValue mode_q(int n, Complex beta_minus, Complex beta_plus) {
  const Complex den = 1.0 + beta_minus * beta_plus;
  if (std::abs(den) < 1e-14) {
    std::ostringstream os;
    os << "1 + beta- beta+ = 0 for beta- = " << beta_minus << ", beta+ = " << beta_plus;
    throw DegenerateDenominator(os.str());
  }
  const Complex i{0.0, 1.0};
  const Complex q_atan = std::atan(i * (beta_minus + beta_plus) / den) / kPi + static_cast<double>(n);

  const Complex r = reflection_coefficient(beta_minus) * reflection_coefficient(beta_plus);
  if (std::abs(r) == 0.0) {
    throw AbsorbingPole("R- R+ = 0: a perfectly absorbing wall has no finite resonance mode");
  }
  // std::arg returns (−π, π] except for a negative zero imaginary part.
  double a = std::arg(r);
  if (a == -kPi) a = kPi;

  ModeValue m;
  m.n = n;
  m.re_part = a / (2.0 * kPi) + n;
  m.im_part = -std::log(std::abs(r)) / (2.0 * kPi);

  const double shift = std::round(m.re_part - q_atan.real());
  m.q_tilde = q_atan + shift;
  const double tol = 1e-10 * std::max(1.0, std::abs(m.q_tilde));
  if (std::abs(m.q_tilde.real() - m.re_part) > tol || std::abs(m.q_tilde.imag() - m.im_part) > tol) {
    std::ostringstream os;
    os.precision(15);
    os << "mode_q: arctan form " << m.q_tilde << " disagrees with reflection form (" << m.re_part
       << ", " << m.im_part << ")";
    throw NumericalError(os.str());
  }
  return m;
}

std::vector<double> mode_frequencies(const AxisBoundary& axis, double speed_of_sound, int n_first,
                                     int n_last) {
  axis.validate();
  if (!axis.beta_minus.is_constant() || !axis.beta_plus.is_constant()) {
    throw FrequencyDependentAdmittance(
        "mode frequencies need frequency-independent admittance; got " +
        axis.beta_minus.describe() + " / " + axis.beta_plus.describe());
  }
  if (!(speed_of_sound > 0.0)) throw InputError("speed of sound must be positive");
  if (n_last < n_first) throw InputError("empty mode index range");
  const Complex bm = axis.beta_minus.at(0.0);
  const Complex bp = axis.beta_plus.at(0.0);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n_last - n_first + 1));
  for (int n = n_first; n <= n_last; ++n) {
    out.push_back(mode_q(n, bm, bp).re_part * speed_of_sound / (2.0 * axis.length));
  }
  return out;
}

}  // namespace roomgreen
