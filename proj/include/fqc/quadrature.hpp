#pragma once

#include <vector>

namespace fqc {

/// One-dimensional quadrature rule.
struct Rule1D {
  std::vector<double> x;
  std::vector<double> w;
  std::size_t size() const { return x.size(); }
};

/// Gauss–Legendre on [a, b].
Rule1D gauss_legendre(int n, double a = -1.0, double b = 1.0);

/// Gauss–Jacobi on [a, b] for the weight (b−x)^alpha (x−a)^beta.
Rule1D gauss_jacobi(int n, double alpha, double beta, double a = -1.0, double b = 1.0);

/// Gauss rule for the weight sqrt(1−x²) on [−1, 1] (Chebyshev of the second kind).
Rule1D gauss_chebyshev_u(int n);

/// Composite Gauss–Legendre with `panels` equal panels of `per_panel` nodes.
Rule1D composite_gauss_legendre(int panels, int per_panel, double a, double b);

/// Sidi-type periodizing transform of [a,b]: dampens algebraic endpoint behaviour.
Rule1D sidi_gauss_legendre(int n, double a, double b);

}  // namespace fqc
