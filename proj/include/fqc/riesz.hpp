#pragma once

#include <vector>

#include "fqc/grid.hpp"

namespace fqc {

/// Funk–Hecke coefficients μ_ℓ of the chordal kernel |ξ−ζ|^{2σ−n} (plain measure),
/// computed by Gauss–Jacobi quadrature of the singular one-dimensional integral.
/// Analytically μ_ℓ = 1/(c_{n,σ} λ_ℓ).
Vec riesz_kernel_coefficients(const ProblemParams& params, int max_degree);

/// Nyström realization of c_{n,σ} ∫ f(ζ)|ξ−ζ|^{2σ−n} dvol(ζ) on a product grid.
///
/// The singular kernel is replaced by its degree-L* harmonic truncation
/// K_L(u) = Σ_{ℓ≤L*} μ_ℓ Z_ℓ(u), with Z_ℓ the zonal reproducing kernel of degree ℓ.
/// The resulting rule is exact on band-limited fields of degree ≤ exactness − L*
/// and maps every bounded field through the same quadrature (no spectral transform
/// of the integrand is needed). Application exploits the rotational symmetry of
/// rings about the x_{n+1} axis: one kernel row per ring and a real DFT along φ.
class RieszOperator {
 public:
  /// Default L* = resolution − 1.
  RieszOperator(GridPtr grid, const ProblemParams& params, int kernel_degree = -1);

  const GridPtr& grid() const { return grid_; }
  const ProblemParams& params() const { return params_; }
  int kernel_degree() const { return L_; }

  Vec apply(const Vec& f) const;
  GridField apply(const GridField& f) const;
  /// Nyström interpolant of the potential at an arbitrary point.
  double evaluate(const Vec& f, const SpherePoint& x) const;
  /// Truncated kernel K_L(u), without the c_{n,σ} factor.
  double kernel(double u) const;

 private:
  GridPtr grid_;
  ProblemParams params_;
  int L_;
  Vec mu_;
  // Per azimuthal frequency m = 0..M/2 a rings × rings matrix of kernel Fourier sums.
  std::vector<Mat> blocks_;
  Mat cos_, sin_;  ///< ring_size × (M/2+1)
};

/// One-shot convenience wrapper around RieszOperator.
GridField riesz_potential(const GridField& f, const ProblemParams& params);

/// Reference rule: plain node sum with the singular node replaced by the analytic
/// cap integral over a cap of the node's weight. First-order accurate; kept for
/// diagnostics and comparisons only.
GridField riesz_potential_cap(const GridField& f, const ProblemParams& params);

/// G(p,q) = (1/(1−cos d(p,q)))^{(n−2σ)/2}. Throws ConfigError for p = q.
double greens_value(const SpherePoint& p, const SpherePoint& q, const ProblemParams& params);

}  // namespace fqc
