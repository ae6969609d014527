#include "roomgreen/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "roomgreen/eigensolver.hpp"
#include "roomgreen/errors.hpp"

namespace roomgreen::oracle {

namespace {

constexpr long double kPiL = std::numbers::pi_v<long double>;
constexpr double kClearance = 1e-12;
constexpr double kMinCell = 1e-10;
constexpr int kMaxDepth = 60;

struct Sample {
  ComplexL q;
  long double phase;
  long double reach;  // |v/v'|, roughly the distance to the nearest root over its multiplicity
};

std::string describe(const SearchRegion& r) {
  std::ostringstream os;
  os.precision(10);
  os << "[" << r.re_min << ", " << r.re_max << "] x [" << r.im_min << ", " << r.im_max << "]";
  return os.str();
}

Sample sample(ComplexL q, const GammaPair& g, const SearchRegion& region) {
  const ComplexL v = residual(q, g);
  const long double mag = std::abs(v);
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    throw NumericalError("winding_count: residual overflow on contour " + describe(region));
  }
  if (mag <= kClearance * residual_scale(q, g)) {
    throw ContourOnRoot("contour " + describe(region) + " passes through a root near " +
                        std::to_string(static_cast<double>(q.real())) + "+" +
                        std::to_string(static_cast<double>(q.imag())) + "i");
  }
  const long double dv = std::abs(residual_derivative(q, g));
  return {q, std::arg(v), dv > 0.0L ? mag / dv : std::numeric_limits<long double>::infinity()};
}

long double wrap(long double d) {
  while (d > kPiL) d -= 2 * kPiL;
  while (d <= -kPiL) d += 2 * kPiL;
  return d;
}

// Phase change from a to b. A piece is accepted once its wrapped change is
// below π/2 and it is no longer than |v/v'| at either end; the second test
// stops a piece from aliasing the fast phase turn next to a multiple root.
long double edge_phase(const Sample& a, const Sample& b, const GammaPair& g,
                       const SearchRegion& region, int depth) {
  const long double d = wrap(b.phase - a.phase);
  const long double len = std::abs(b.q - a.q);
  if (std::abs(d) < kPiL / 2 && len <= std::min(a.reach, b.reach)) return d;
  if (depth > 80 || len < 1e-15L * std::max(1.0L, std::abs(a.q))) {
    throw ContourOnRoot("phase of v not resolved on contour " + describe(region));
  }
  const Sample m = sample(0.5L * (a.q + b.q), g, region);
  return edge_phase(a, m, g, region, depth + 1) + edge_phase(m, b, g, region, depth + 1);
}

std::array<ComplexL, 4> corners(const SearchRegion& r) {
  return {ComplexL{r.re_min, r.im_min}, ComplexL{r.re_max, r.im_min},
          ComplexL{r.re_max, r.im_max}, ComplexL{r.re_min, r.im_max}};
}

// Newton polish for a cell known to hold a single simple root.
bool polish_in_cell(const SearchRegion& cell, const GammaPair& g, double tol, Complex& out) {
  ComplexL q{0.5L * (cell.re_min + cell.re_max), 0.5L * (cell.im_min + cell.im_max)};
  const double slack = 0.25 * std::max(cell.width(), cell.height());
  SearchRegion loose{cell.re_min - slack, cell.re_max + slack, cell.im_min - slack,
                     cell.im_max + slack};
  for (int it = 0; it < 60; ++it) {
    const ComplexL v = residual(q, g);
    const ComplexL dv = residual_derivative(q, g);
    if (std::abs(dv) == 0.0L) return false;
    const ComplexL step = v / dv;
    q -= step;
    if (!loose.contains({static_cast<double>(q.real()), static_cast<double>(q.imag())})) return false;
    if (std::abs(step) <= 4e-19L * std::max(1.0L, std::abs(q))) break;
  }
  const Complex qd{static_cast<double>(q.real()), static_cast<double>(q.imag())};
  const double edge_slack = 1e-12 * std::max(1.0, std::abs(qd));
  if (!cell.contains(qd, edge_slack)) return false;
  if (scaled_residual(ComplexL{qd.real(), qd.imag()}, g) > tol) return false;
  out = qd;
  return true;
}

struct Enumerator {
  const GammaPair& g;
  double tol;
  Enumeration result;

  void run(const SearchRegion& cell, int count, int depth) {
    if (count <= 0) return;
    if (depth > kMaxDepth) throw MaxDepth("root enumeration exceeded 60 subdivision levels");
    if (count == 1) {
      Complex root;
      if (polish_in_cell(cell, g, tol, root)) {
        result.roots.push_back(root);
        return;
      }
    }
    const double size = std::max(cell.width(), cell.height());
    if (count >= 2 && size < kMinCell) {
      result.clusters.push_back({{0.5 * (cell.re_min + cell.re_max), 0.5 * (cell.im_min + cell.im_max)},
                                 count});
      return;
    }
    for (int attempt = 0; attempt < 8; ++attempt) {
      const double shift = 0.5 + (attempt % 2 == 0 ? 1.0 : -1.0) * 0.0137 * (1 + attempt / 2);
      std::vector<SearchRegion> parts;
      const bool split_re = cell.width() >= 0.5 * cell.height();
      const bool split_im = cell.height() >= 0.5 * cell.width();
      const double re_cut = cell.re_min + shift * cell.width();
      const double im_cut = cell.im_min + (1.0 - shift) * cell.height();
      std::vector<std::pair<double, double>> re_spans{{cell.re_min, cell.re_max}};
      std::vector<std::pair<double, double>> im_spans{{cell.im_min, cell.im_max}};
      if (split_re) re_spans = {{cell.re_min, re_cut}, {re_cut, cell.re_max}};
      if (split_im) im_spans = {{cell.im_min, im_cut}, {im_cut, cell.im_max}};
      for (const auto& [r0, r1] : re_spans) {
        for (const auto& [i0, i1] : im_spans) parts.push_back({r0, r1, i0, i1});
      }
      std::vector<int> counts;
      int total = 0;
      try {
        for (const auto& part : parts) {
          counts.push_back(winding_count_exact(part, g));
          total += counts.back();
        }
      } catch (const ContourOnRoot&) {
        continue;
      }
      if (total != count) continue;
      for (std::size_t k = 0; k < parts.size(); ++k) run(parts[k], counts[k], depth + 1);
      return;
    }
    if (count >= 2) {
      result.clusters.push_back({{0.5 * (cell.re_min + cell.re_max), 0.5 * (cell.im_min + cell.im_max)},
                                 count});
      return;
    }
    throw ContourOnRoot("could not find a root-free subdivision of " + describe(cell));
  }
};

}  // namespace

void SearchRegion::validate() const {
  if (!(re_min < re_max) || !(im_min < im_max) || !std::isfinite(re_min) ||
      !std::isfinite(re_max) || !std::isfinite(im_min) || !std::isfinite(im_max)) {
    throw InputError("search region bounds must satisfy re_min < re_max, im_min < im_max");
  }
}

bool SearchRegion::contains(Complex z, double slack) const noexcept {
  return z.real() >= re_min - slack && z.real() <= re_max + slack && z.imag() >= im_min - slack &&
         z.imag() <= im_max + slack;
}

int winding_count_exact(const SearchRegion& region, const GammaPair& g) {
  region.validate();
  const auto c = corners(region);
  long double total = 0.0L;
  for (int e = 0; e < 4; ++e) {
    const ComplexL a = c[e];
    const ComplexL b = c[(e + 1) % 4];
    const long double len = std::abs(b - a);
    const int pieces = std::max(16, static_cast<int>(std::ceil(8.0L * len)));
    Sample prev = sample(a, g, region);
    for (int k = 1; k <= pieces; ++k) {
      const ComplexL q = k == pieces ? b : a + (b - a) * (static_cast<long double>(k) / pieces);
      const Sample next = sample(q, g, region);
      total += edge_phase(prev, next, g, region, 0);
      prev = next;
    }
  }
  return static_cast<int>(std::lround(static_cast<double>(total / (2 * kPiL))));
}

namespace {

std::pair<SearchRegion, int> settle(const SearchRegion& region, const GammaPair& g, double dedup_tol) {
  region.validate();
  SearchRegion r = region;
  for (int attempt = 0;; ++attempt) {
    try {
      return {r, winding_count_exact(r, g)};
    } catch (const ContourOnRoot&) {
      if (attempt >= 5) throw;
      r.re_min -= dedup_tol;
      r.re_max += dedup_tol;
      r.im_min -= dedup_tol;
      r.im_max += dedup_tol;
    }
  }
}

}  // namespace

int winding_count(const SearchRegion& region, const GammaPair& g, double dedup_tol) {
  return settle(region, g, dedup_tol).second;
}

Enumeration enumerate_roots(const SearchRegion& region, const GammaPair& g, double tol) {
  const auto [settled, count] = settle(region, g, 1e-4);
  Enumerator e{g, tol, {}};
  e.result.winding = count;
  e.run(settled, count, 0);

  // A root sitting on a shared cut can be polished from both sides.
  std::vector<Complex> unique;
  for (Complex r : e.result.roots) {
    const bool dup = std::any_of(unique.begin(), unique.end(), [&](Complex u) {
      return std::abs(u - r) <= 1e-9 * std::max(1.0, std::abs(r));
    });
    if (!dup) unique.push_back(r);
  }
  std::sort(unique.begin(), unique.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  e.result.roots = std::move(unique);
  return e.result;
}

DiskRoots disk_roots(const GammaPair& g, int m, double zero_tol) {
  if (m < 0) throw InputError("disk_roots: m must be >= 0");
  const double radius = m + 0.5;
  const SearchRegion region{-0.1, radius + 0.1, -radius - 0.1, radius + 0.1};
  const Enumeration found = enumerate_roots(region, g);
  DiskRoots out;
  for (Complex q : found.roots) {
    if (std::abs(q.real()) <= zero_tol ? q.imag() < 0.0 : q.real() < 0.0) q = -q;
    if (std::abs(q) <= zero_tol || std::abs(q) > radius) continue;
    const bool dup = std::any_of(out.roots.begin(), out.roots.end(), [&](Complex u) {
      return std::abs(u - q) <= 1e-9 * std::max(1.0, std::abs(q));
    });
    if (!dup) out.roots.push_back(q);
  }
  for (const auto& c : found.clusters) {
    if (std::abs(c.center) > zero_tol && std::abs(c.center) <= radius) out.unresolved += c.multiplicity;
  }
  std::sort(out.roots.begin(), out.roots.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return out;
}

RootComparison compare_roots(const std::vector<Complex>& a, const std::vector<Complex>& b,
                             double tol) {
  RootComparison out;
  std::vector<bool> used(b.size(), false);
  for (Complex z : a) {
    std::size_t best = b.size();
    double dist = tol;
    for (std::size_t k = 0; k < b.size(); ++k) {
      const double d = std::abs(b[k] - z);
      if (!used[k] && d <= dist) {
        dist = d;
        best = k;
      }
    }
    if (best == b.size()) {
      ++out.only_in_a;
      continue;
    }
    used[best] = true;
    out.max_distance = std::max(out.max_distance, dist);
  }
  out.only_in_b = static_cast<int>(std::count(used.begin(), used.end(), false));
  return out;
}

}  // namespace roomgreen::oracle
