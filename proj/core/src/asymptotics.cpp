#include "roomgreen/asymptotics.hpp"

#include <cmath>

#include "roomgreen/errors.hpp"

namespace roomgreen {

std::string_view to_string(Group g) noexcept {
  switch (g) {
    case Group::G1: return "G1";
    case Group::G2: return "G2";
    case Group::G3: return "G3";
    case Group::G3SymPlus: return "G3_SYM_PLUS";
    case Group::G3SymMinus: return "G3_SYM_MINUS";
    case Group::G1P: return "G1P";
    case Group::Oracle: return "ORACLE";
    case Group::Constant: return "CONSTANT";
  }
  return "?";
}

Complex group1_guess(int n, const GammaPair& g) {
  const Complex i{0.0, 1.0};
  const double nn = n;
  Complex root = std::sqrt(nn * nn + 4.0 * i * g.sum() / (kPi * kPi));
  if (root.real() < 0.0) root = -root;
  return 0.5 * (nn + root);
}

Complex group2_guess(int n, const GammaPair& g) {
  if (!g.parallel) throw InputError("group 2 guess undefined: gamma_minus + gamma_plus = 0");
  const Complex i{0.0, 1.0};
  return static_cast<double>(n) * (1.0 + i / (*g.parallel - i));
}

std::vector<Candidate> group3_guess(const GammaPair& g, double symmetric_tol) {
  std::vector<Candidate> out;
  const Complex i{0.0, 1.0};
  if (std::abs(g.minus - g.plus) <= symmetric_tol * std::max(1.0, std::abs(g.minus))) {
    const Complex gamma = g.minus;
    if (gamma.imag() > 0.0) {
      const Complex corr = 2.0 * std::exp(i * gamma);
      out.push_back({gamma / kPi * (1.0 + corr), Group::G3SymPlus, 0});
      out.push_back({gamma / kPi * (1.0 - corr), Group::G3SymMinus, 0});
    }
    return out;
  }
  if (g.minus.imag() > 0.0) out.push_back({g.minus / kPi, Group::G3, 0});
  if (g.plus.imag() > 0.0) out.push_back({g.plus / kPi, Group::G3, 0});
  return out;
}

Complex group1p_guess(int n, const GammaPair& g) {
  if (g.sum() == Complex{}) throw InputError("group 1P guess undefined: gamma_minus + gamma_plus = 0");
  const Complex i{0.0, 1.0};
  return (n + 0.5) * (1.0 + i / g.sum());
}

std::vector<Candidate> candidate_set(const GammaPair& g, int n_max) {
  if (n_max < 0) throw InputError("n_max must be >= 0");
  std::vector<Candidate> out;
  out.reserve(2 * static_cast<std::size_t>(n_max) + 4);
  const bool sum_defined = g.sum() != Complex{};
  // Each group's window is widened by one order around its cutoffs: a root
  // next to a cutoff can sit in the basin of either neighbouring family, and
  // duplicates are removed downstream.
  constexpr double margin = 1.0;
  for (int n = 0; n <= n_max; ++n) {
    if (n > g.a12 - margin || g.a12 < 1.0) out.push_back({group1_guess(n, g), Group::G1, n});
    if (n < g.a12 + margin && g.parallel) out.push_back({group2_guess(n, g), Group::G2, n});
    if (sum_defined && n < g.a11p + margin && n >= g.a12 - margin) {
      out.push_back({group1p_guess(n, g), Group::G1P, n});
    }
  }
  for (const auto& c : group3_guess(g)) out.push_back(c);
  return out;
}

}  // namespace roomgreen
