#include "fqc/quadrature.hpp"

#include <cmath>
#include <memory>

#include <gsl/gsl_integration.h>

#include "fqc/params.hpp"

namespace fqc {
namespace {

Rule1D fixed_rule(const gsl_integration_fixed_type* type, int n, double a, double b,
                  double alpha, double beta) {
  if (n < 1) throw ConfigError("quadrature order must be positive");
  std::unique_ptr<gsl_integration_fixed_workspace, decltype(&gsl_integration_fixed_free)> ws(
      gsl_integration_fixed_alloc(type, static_cast<size_t>(n), a, b, alpha, beta),
      &gsl_integration_fixed_free);
  if (!ws) throw NumericalError("gsl_integration_fixed_alloc failed");
  const double* x = gsl_integration_fixed_nodes(ws.get());
  const double* w = gsl_integration_fixed_weights(ws.get());
  Rule1D r;
  r.x.assign(x, x + n);
  r.w.assign(w, w + n);
  return r;
}

}  // namespace

Rule1D gauss_legendre(int n, double a, double b) {
  return fixed_rule(gsl_integration_fixed_legendre, n, a, b, 0.0, 0.0);
}

Rule1D gauss_jacobi(int n, double alpha, double beta, double a, double b) {
  if (alpha <= -1.0 || beta <= -1.0) throw ConfigError("Jacobi exponents must exceed -1");
  return fixed_rule(gsl_integration_fixed_jacobi, n, a, b, alpha, beta);
}

Rule1D gauss_chebyshev_u(int n) {
  return fixed_rule(gsl_integration_fixed_chebyshev2, n, -1.0, 1.0, 0.0, 0.0);
}

Rule1D composite_gauss_legendre(int panels, int per_panel, double a, double b) {
  const Rule1D base = gauss_legendre(per_panel, 0.0, 1.0);
  Rule1D r;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    for (std::size_t i = 0; i < base.size(); ++i) {
      r.x.push_back(a + h * (p + base.x[i]));
      r.w.push_back(h * base.w[i]);
    }
  }
  return r;
}

Rule1D sidi_gauss_legendre(int n, double a, double b) {
  const Rule1D base = gauss_legendre(n, 0.0, 1.0);
  Rule1D r;
  for (std::size_t i = 0; i < base.size(); ++i) {
    const double s = base.x[i];
    const double u = s - std::sin(2.0 * kPi * s) / (2.0 * kPi);
    const double du = 1.0 - std::cos(2.0 * kPi * s);
    r.x.push_back(a + (b - a) * u);
    r.w.push_back((b - a) * du * base.w[i]);
  }
  return r;
}

}  // namespace fqc
