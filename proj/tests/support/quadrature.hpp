#pragma once

// Adaptive composite 16-point Gauss-Legendre quadrature for complex
// integrands. Nodes are computed from the Legendre recurrence so the rule
// shares nothing with the code under test.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

namespace testsupport {

struct GaussRule {
  std::array<double, 16> x{};
  std::array<double, 16> w{};
};

inline const GaussRule& gauss16() {
  static const GaussRule rule = [] {
    GaussRule r;
    constexpr int n = 16;
    for (int i = 0; i < n; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        const double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      r.x[i] = z;
      r.w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return r;
  }();
  return rule;
}

using Fn = std::function<std::complex<double>(double)>;

inline std::complex<double> gauss_panel(const Fn& f, double a, double b) {
  const auto& r = gauss16();
  const double m = 0.5 * (a + b), h = 0.5 * (b - a);
  std::complex<double> s{};
  for (int i = 0; i < 16; ++i) s += r.w[i] * f(m + h * r.x[i]);
  return h * s;
}

inline std::complex<double> integrate_rec(const Fn& f, double a, double b, std::complex<double> whole,
                                          double tol, int depth) {
  const double m = 0.5 * (a + b);
  const auto left = gauss_panel(f, a, m);
  const auto right = gauss_panel(f, m, b);
  if (depth > 40 || std::abs(left + right - whole) <= tol) return left + right;
  return integrate_rec(f, a, m, left, 0.5 * tol, depth + 1) +
         integrate_rec(f, m, b, right, 0.5 * tol, depth + 1);
}

/// ∫_a^b f, split into `panels` pieces and refined until successive
/// estimates agree to `tol` absolute.
inline std::complex<double> integrate(const Fn& f, double a, double b, double tol = 1e-13,
                                      int panels = 16) {
  std::complex<double> total{};
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h, hi = lo + h;
    total += integrate_rec(f, lo, hi, gauss_panel(f, lo, hi), tol / panels, 0);
  }
  return total;
}

}  // namespace testsupport
