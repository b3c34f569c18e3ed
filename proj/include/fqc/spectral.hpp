#pragma once

#include <vector>

#include "fqc/grid.hpp"

namespace fqc {

/// λ_k = Γ(k+n/2+σ)/Γ(k+n/2−σ), via log-Gamma.
double eigenvalue(int k, const ProblemParams& params);

struct OperatorSpectrum {
  ProblemParams params;
  int max_degree = 0;
  Vec eigenvalues;  ///< index k = 0..L

  static OperatorSpectrum make(const ProblemParams& params, int max_degree);
};

/// Real orthonormal harmonic coefficients.
///
/// n = 2: index ℓ²+ℓ+m for |m| ≤ ℓ ≤ L with
///   m = 0: N_ℓ⁰ P_ℓ(cos θ), m > 0: √2 N_ℓ^m P_ℓ^m(cos θ) cos mφ,
///   m < 0: √2 N_ℓ^|m| P_ℓ^|m|(cos θ) sin |m|φ, no Condon–Shortley phase.
/// n = 3: zonal only, index k, Y_k = U_k(x₄)/√(2π²).
struct SpectralField {
  int n = 2;
  int max_degree = 0;
  Vec coeffs;

  static int count(int n, int L) { return n == 2 ? (L + 1) * (L + 1) : L + 1; }
  static int index(int l, int m) { return l * l + l + m; }
  /// Degree of coefficient i.
  int degree_of(int i) const;
};

/// Analysis/synthesis on a grid at maximum degree L (requires 2L ≤ exactness).
class HarmonicTransform {
 public:
  HarmonicTransform(GridPtr grid, int max_degree);
  /// Default degree: resolution − 1.
  explicit HarmonicTransform(GridPtr grid);

  const GridPtr& grid() const { return grid_; }
  int max_degree() const { return L_; }

  /// For n = 3 throws ConfigError when the field is not zonal.
  SpectralField analyze(const GridField& f) const;
  SpectralField analyze(const Vec& values) const;
  GridField synthesize(const SpectralField& c) const;
  /// Values of the band-limited interpolant at an arbitrary point.
  double evaluate(const SpectralField& c, const SpherePoint& x) const;
  /// Ambient gradient (tangential part) of the interpolant at x.
  Vec gradient(const SpectralField& c, const SpherePoint& x) const;

  /// All basis functions at x, ordered like SpectralField::coeffs.
  Vec basis_at(const SpherePoint& x) const;

 private:
  GridPtr grid_;
  int L_;
  Mat legendre_;  ///< rings × (packed ℓ,m ≥ 0) normalized associated Legendre values
  Mat cos_, sin_; ///< ring_size × (L+1) twiddles
};

SpectralField apply_Psigma(const SpectralField& v, const ProblemParams& params);
SpectralField invert_Psigma(const SpectralField& f, const ProblemParams& params);

/// Quadrature inner product ⟨P_σ u, v⟩ through the transform.
double psigma_inner(const HarmonicTransform& T, const GridField& u, const GridField& v,
                    const ProblemParams& params);

/// Real harmonic of degree l, order m at x (n = 2), or zonal Y_l (n = 3, m = 0).
double real_harmonic(int n, int l, int m, const SpherePoint& x);

}  // namespace fqc
