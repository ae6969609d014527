#include "roomgreen/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "roomgreen/errors.hpp"

namespace roomgreen {

namespace {

void check_lengths(std::size_t a, std::size_t b, const char* what) {
  if (a == 0 || a != b) {
    throw InputError(std::string(what) + ": inputs must be non-empty and of equal length");
  }
}

}  // namespace

double l2_relative_error(const std::vector<Complex>& p, const std::vector<Complex>& p_ref) {
  check_lengths(p.size(), p_ref.size(), "l2_relative_error");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    num += std::norm(p[i] - p_ref[i]);
    den += std::norm(p_ref[i]);
  }
  if (!(den > 0.0)) throw InputError("l2_relative_error: reference has zero norm");
  return std::sqrt(num / den);
}

double frac(const std::vector<Complex>& h1, const std::vector<Complex>& h2) {
  check_lengths(h1.size(), h2.size(), "frac");
  Complex cross{};
  double n1 = 0.0;
  double n2 = 0.0;
  for (std::size_t i = 0; i < h1.size(); ++i) {
    cross += h1[i] * std::conj(h2[i]);
    n1 += std::norm(h1[i]);
    n2 += std::norm(h2[i]);
  }
  if (!(n1 > 0.0) || !(n2 > 0.0)) throw InputError("frac: input has zero norm");
  return std::clamp(std::norm(cross) / (n1 * n2), 0.0, 1.0);
}

}  // namespace roomgreen
