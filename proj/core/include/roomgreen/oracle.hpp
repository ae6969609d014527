#pragma once

// Argument-principle enumeration of the zeros of the eigenvalue residual
// v(q̂) inside axis-aligned rectangles. Independent of the asymptotic
// guesses; used as the solver's fallback and as ground truth in tests.

#include <vector>

#include "roomgreen/core.hpp"

namespace roomgreen::oracle {

struct SearchRegion {
  double re_min = 0.0;
  double re_max = 1.0;
  double im_min = -1.0;
  double im_max = 1.0;

  void validate() const;
  double width() const noexcept { return re_max - re_min; }
  double height() const noexcept { return im_max - im_min; }
  bool contains(Complex z, double slack = 0.0) const noexcept;
};

/// Zeros of v inside `region`, counted with multiplicity. Edges are sampled
/// adaptively until the phase change per segment is below π/2. When a
/// contour passes too close to a root the region is grown by dedup_tol and
/// retried (up to 5 times) before ContourOnRoot is thrown.
int winding_count(const SearchRegion& region, const GammaPair& g, double dedup_tol = 1e-4);

/// Winding count on exactly this contour, no perturbation. Throws
/// ContourOnRoot if the contour touches a root.
int winding_count_exact(const SearchRegion& region, const GammaPair& g);

struct Cluster {
  Complex center;
  int multiplicity = 0;
};

struct Enumeration {
  std::vector<Complex> roots;
  std::vector<Cluster> clusters;  // multiple roots that could not be split
  int winding = 0;                // count on the enclosing region
};

/// Recursive quadrisection down to single-root cells, each polished by
/// Newton. Roots satisfy scaled_residual ≤ tol and are pairwise distinct.
Enumeration enumerate_roots(const SearchRegion& region, const GammaPair& g, double tol = 1e-12);

/// Nontrivial roots with |q̂| ≤ m + ½, one representative per ±q̂ pair
/// (Re > 0, or Re = 0 and Im > 0), found by enumeration alone. Clusters
/// count with their multiplicity in `unresolved`.
struct DiskRoots {
  std::vector<Complex> roots;
  int unresolved = 0;
};
DiskRoots disk_roots(const GammaPair& g, int m, double zero_tol = 1e-4);

struct RootComparison {
  int only_in_a = 0;
  int only_in_b = 0;
  double max_distance = 0.0;  // over matched pairs
};

/// Greedy nearest-neighbour matching; pairs further apart than `tol` stay
/// unmatched.
RootComparison compare_roots(const std::vector<Complex>& a, const std::vector<Complex>& b,
                             double tol);

}  // namespace roomgreen::oracle
