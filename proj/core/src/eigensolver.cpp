#include "roomgreen/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "roomgreen/errors.hpp"
#include "roomgreen/oracle.hpp"

namespace roomgreen {

namespace {

constexpr long double kPiL = std::numbers::pi_v<long double>;
// cosh(π·3000) is still representable in 80-bit long double.
constexpr long double kMaxImag = 3000.0L;

struct SinCos {
  ComplexL sin;
  ComplexL cos;
};

// sinl/cosl run a full Payne-Hanek reduction for any |x| > π/4, which
// dominates the solver's cost. Cody-Waite with π/2 split into 32+32+64 bits
// is exact for |x| < 2^31 and leaves |r| ≤ π/4.
void sincos_real(long double x, long double& s, long double& c) {
  constexpr long double kPio2A = 0xc90fdaa200000000p-63L;
  constexpr long double kPio2B = 0x85a308d300000000p-97L;
  constexpr long double kPio2C = 0x98cc51701b839a25p-132L;
  if (!(std::abs(x) < 0x1p31L)) {
    s = std::sin(x);
    c = std::cos(x);
    return;
  }
  const long double k = std::nearbyint(x * (2.0L / kPiL));
  const long double r = ((x - k * kPio2A) - k * kPio2B) - k * kPio2C;
  const long double sr = std::sin(r);
  const long double cr = std::cos(r);
  switch (static_cast<long long>(k) & 3) {
    case 0: s = sr; c = cr; break;
    case 1: s = cr; c = -sr; break;
    case 2: s = -sr; c = -cr; break;
    default: s = -cr; c = sr; break;
  }
}

SinCos sincos_of(ComplexL z) {
  const long double x = z.real();
  const long double y = z.imag();
  long double sx = 0.0L;
  long double cx = 0.0L;
  sincos_real(x, sx, cx);
  const long double ch = std::cosh(y);
  const long double sh = std::sinh(y);
  return {{sx * ch, cx * sh}, {cx * ch, -sx * sh}};
}

ComplexL to_l(Complex z) { return {z.real(), z.imag()}; }
Complex to_d(ComplexL z) {
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

bool finite(ComplexL z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

std::string format_root(Complex q) {
  std::ostringstream os;
  os.precision(12);
  os << q.real() << (q.imag() < 0 ? "" : "+") << q.imag() << "i";
  return os.str();
}

struct Evaluation {
  ComplexL v;
  ComplexL dv;
  long double scale;
};

// v, v' and the residual scale from one set of sin/cos/cosh/sinh values.
Evaluation evaluate(ComplexL q_hat, const GammaPair& g) {
  const ComplexL i{0.0L, 1.0L};
  const ComplexL z = kPiL * q_hat;
  const ComplexL prod = to_l(g.product());
  const ComplexL sum = to_l(g.sum());
  long double sx = 0.0L, cx = 0.0L;
  sincos_real(z.real(), sx, cx);
  const long double ch = std::cosh(z.imag());
  const long double sh = std::sinh(z.imag());
  const ComplexL s{sx * ch, cx * sh};
  const ComplexL c{cx * ch, -sx * sh};
  Evaluation e;
  e.v = (z * z + prod) * s - i * sum * z * c;
  e.dv = kPiL * (2.0L * z * s + (z * z + prod) * c - i * sum * c + i * sum * z * s);
  const long double az = std::abs(z);
  e.scale = std::max(1.0L, az * az + std::abs(prod) + std::abs(sum) * az) * ch;
  return e;
}

}  // namespace

ComplexL residual(ComplexL q_hat, const GammaPair& g) {
  const ComplexL i{0.0L, 1.0L};
  const ComplexL z = kPiL * q_hat;
  const auto [s, c] = sincos_of(z);
  return (z * z + to_l(g.product())) * s - i * to_l(g.sum()) * z * c;
}

ComplexL residual_derivative(ComplexL q_hat, const GammaPair& g) {
  const ComplexL i{0.0L, 1.0L};
  const ComplexL z = kPiL * q_hat;
  const ComplexL prod = to_l(g.product());
  const ComplexL sum = to_l(g.sum());
  const auto [s, c] = sincos_of(z);
  return kPiL * (2.0L * z * s + (z * z + prod) * c - i * sum * c + i * sum * z * s);
}

long double residual_scale(ComplexL q_hat, const GammaPair& g) {
  const long double z = kPiL * std::abs(q_hat);
  const long double terms = z * z + std::abs(g.product()) + std::abs(g.sum()) * z;
  return std::max(1.0L, terms) * std::cosh(kPiL * q_hat.imag());
}

double scaled_residual(ComplexL q_hat, const GammaPair& g) {
  return static_cast<double>(std::abs(residual(q_hat, g)) / residual_scale(q_hat, g));
}

NewtonResult newton_refine(const std::vector<Candidate>& candidates, const GammaPair& g,
                           const SolverParams& p) {
  p.validate();
  NewtonResult out;
  out.points.reserve(candidates.size());
  int dropped_singular = 0;
  int dropped_unconverged = 0;
  const long double alpha = p.alpha_newton;

  for (const auto& cand : candidates) {
    ComplexL q = to_l(cand.q_hat);
    bool ok = finite(q);
    bool converged = false;
    ComplexL v{};
    double sr = std::numeric_limits<double>::infinity();
    Evaluation ev{};
    for (int it = 0; ok; ++it) {
      ev = evaluate(q, g);
      v = ev.v;
      sr = static_cast<double>(std::abs(v) / ev.scale);
      if (!std::isfinite(sr)) {
        ok = false;
        break;
      }
      if (sr <= p.eps_newton) {
        converged = true;
        break;
      }
      if (it >= p.n_newton) break;
      const ComplexL dv = ev.dv;
      if (!finite(dv) || std::abs(dv) < 1e-300L) {
        ok = false;
        break;
      }
      q -= alpha * v / dv;
      if (!finite(q) || std::abs(q.imag()) > kMaxImag) ok = false;
    }
    if (!ok) {
      ++dropped_singular;
      continue;
    }
    if (!converged) {
      ++dropped_unconverged;
      continue;
    }
    // Undamped polish: quadratic convergence down to the rounding floor.
    for (int k = 0; k < 4 && sr > 0.0; ++k) {
      const ComplexL dv = ev.dv;
      if (!finite(dv) || std::abs(dv) < 1e-300L) break;
      const ComplexL next = q - v / dv;
      if (!finite(next)) break;
      const Evaluation en = evaluate(next, g);
      const double sr_next = static_cast<double>(std::abs(en.v) / en.scale);
      if (!(sr_next < sr)) break;
      q = next;
      ev = en;
      v = en.v;
      sr = sr_next;
    }
    const Complex qd = to_d(q);
    out.points.push_back({qd, scaled_residual(to_l(qd), g), cand.group, cand.n});
  }
  if (dropped_singular > 0) {
    out.warnings.push_back(std::to_string(dropped_singular) +
                           " Newton candidate(s) dropped: vanishing derivative or non-finite iterate");
  }
  if (dropped_unconverged > 0) {
    out.warnings.push_back(std::to_string(dropped_unconverged) +
                           " Newton candidate(s) did not converge within n_newton iterations");
  }
  return out;
}

RootSet canonicalize_and_dedup(const std::vector<RefinedPoint>& points, const GammaPair& g,
                               const SolverParams& p) {
  RootSet set;
  set.gamma = g;
  set.n_max = p.n_max;

  std::vector<RefinedPoint> canon;
  canon.reserve(points.size());
  for (auto pt : points) {
    Complex q = pt.q_hat;
    if (std::abs(q.real()) <= p.zero_tol) {
      if (q.imag() < 0.0) q = -q;
    } else if (q.real() < 0.0) {
      q = -q;
    }
    if (std::abs(q) <= p.zero_tol) continue;
    pt.q_hat = q;
    canon.push_back(pt);
  }
  std::stable_sort(canon.begin(), canon.end(), [](const RefinedPoint& a, const RefinedPoint& b) {
    return a.scaled_residual < b.scaled_residual;
  });

  std::vector<RefinedPoint> kept;
  for (const auto& pt : canon) {
    const bool duplicate = std::any_of(kept.begin(), kept.end(), [&](const RefinedPoint& k) {
      return std::abs(k.q_hat - pt.q_hat) <= p.dedup_tol;
    });
    if (!duplicate) kept.push_back(pt);
  }
  std::sort(kept.begin(), kept.end(), [](const RefinedPoint& a, const RefinedPoint& b) {
    if (a.q_hat.real() != b.q_hat.real()) return a.q_hat.real() < b.q_hat.real();
    return a.q_hat.imag() < b.q_hat.imag();
  });

  set.roots.reserve(kept.size());
  for (const auto& pt : kept) {
    EigenRoot r;
    r.q_hat = pt.q_hat;
    r.residual = static_cast<double>(std::abs(residual(to_l(pt.q_hat), g)));
    r.scaled_residual = pt.scaled_residual;
    r.group = pt.group;
    r.k_hat = kPi * pt.q_hat / g.length;
    set.roots.push_back(r);
  }
  set.counted = count_in_disk(set.roots, p.n_max);
  return set;
}

int expected_count(int m, const GammaPair& g, double degeneracy_tol) {
  if (m < 0) throw InputError("expected_count: m must be >= 0");
  const Complex i{0.0, 1.0};
  const Complex prod = g.product();
  const bool degenerate =
      std::abs(prod - i * g.sum()) <= degeneracy_tol * std::max(1.0, std::abs(prod));
  return degenerate ? m : m + 1;
}

int rouche_order(const GammaPair& g) {
  const double s = std::abs(g.sum());
  const double r_star = (s + std::sqrt(s * s + std::abs(g.product()))) / kPi;
  // smallest m with m + ½ > r_star
  const double m = std::floor(r_star - 0.5) + 1.0;
  return static_cast<int>(std::max(0.0, m));
}

int count_in_disk(const std::vector<EigenRoot>& roots, int m) {
  const double radius = m + 0.5;
  return static_cast<int>(std::count_if(roots.begin(), roots.end(), [&](const EigenRoot& r) {
    return std::abs(r.q_hat) <= radius;
  }));
}

RootSet solve_axis(const GammaPair& g, const SolverParams& p) {
  p.validate();
  const auto candidates = candidate_set(g, p.n_max);
  NewtonResult newton = newton_refine(candidates, g, p);
  RootSet set = canonicalize_and_dedup(newton.points, g, p);
  set.warnings = std::move(newton.warnings);
  set.expected = expected_count(p.n_max, g);
  if (set.counted == set.expected) return set;

  // Asymptotic count mismatch: enumerate the half-disk by the argument principle.
  std::ostringstream note;
  note << "root count " << set.counted << " != expected " << set.expected
       << " at n_max=" << p.n_max << "; winding-oracle fallback activated";
  const double i_max =
      std::max(5.0, 2.0 * std::max(std::abs(g.minus), std::abs(g.plus)) / kPi);
  const double radius = p.n_max + 0.5;
  oracle::SearchRegion region{-0.1, radius + 0.5, -i_max, i_max};
  const oracle::Enumeration found =
      oracle::enumerate_roots(region, g, std::max(p.eps_newton, 1e-12));

  std::vector<RefinedPoint> merged = newton.points;
  for (Complex q : found.roots) merged.push_back({q, scaled_residual(to_l(q), g), Group::Oracle, -1});
  std::vector<std::string> warnings = std::move(set.warnings);
  warnings.push_back(note.str());
  for (const auto& c : found.clusters) {
    if (std::abs(c.center) > p.zero_tol) {
      warnings.push_back("unresolved root cluster of multiplicity " +
                         std::to_string(c.multiplicity) + " near " + format_root(c.center));
    }
  }
  const int expected = set.expected;
  set = canonicalize_and_dedup(merged, g, p);
  set.warnings = std::move(warnings);
  set.expected = expected;
  set.fallback_used = true;
  if (set.counted == set.expected) return set;

  // Oracle-only count inside the disk, on Q₊ representatives.
  SolverParams oracle_params = p;
  std::vector<RefinedPoint> oracle_points;
  for (Complex q : found.roots) oracle_points.push_back({q, 0.0, Group::Oracle, -1});
  const RootSet oracle_set = canonicalize_and_dedup(oracle_points, g, oracle_params);

  const int m0 = rouche_order(g);
  std::ostringstream diag;
  diag << "found " << set.counted << " roots with |q| <= " << radius << ", the asymptotic rule expects "
       << set.expected << " (gamma- = " << format_root(g.minus)
       << ", gamma+ = " << format_root(g.plus) << ", Rouche order m0 = " << m0
       << ", oracle count = " << oracle_set.counted << "); roots:";
  for (const auto& r : set.roots) {
    if (std::abs(r.q_hat) <= radius) diag << ' ' << format_root(r.q_hat);
  }
  if (p.n_max >= m0 || set.counted != oracle_set.counted) {
    throw CountMismatch(diag.str(), set.counted, set.expected);
  }
  set.warnings.push_back("asymptotic root count not certified below Rouche order m0=" +
                         std::to_string(m0) + "; accepted winding-verified count " +
                         std::to_string(oracle_set.counted));
  set.count_from_oracle = true;
  return set;
}

}  // namespace roomgreen
