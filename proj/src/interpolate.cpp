#include "fqc/interpolate.hpp"

#include <algorithm>
#include <cmath>

namespace fqc {

Evaluable::Evaluable(ValueFn value, GradFn gradient)
    : value_(std::move(value)), grad_(std::move(gradient)) {}

Evaluable Evaluable::interpolant(std::shared_ptr<const HarmonicTransform> T, const GridField& f) {
  auto c = std::make_shared<SpectralField>(T->analyze(f));
  if (c->n == 2) {
    // Fields symmetric about the x₃ axis: evaluate with a Legendre recurrence in O(L).
    const double scale = std::max(1e-300, sup_norm(c->coeffs));
    bool zonal = true;
    for (int l = 0; l <= c->max_degree && zonal; ++l)
      for (int m = -l; m <= l; ++m)
        if (m != 0 && std::abs(c->coeffs(SpectralField::index(l, m))) > 1e-13 * scale) {
          zonal = false;
          break;
        }
    if (zonal) {
      auto z = std::make_shared<Vec>(c->max_degree + 1);
      for (int l = 0; l <= c->max_degree; ++l)
        (*z)(l) = c->coeffs(SpectralField::index(l, 0)) * std::sqrt((2.0 * l + 1.0) / (4.0 * kPi));
      auto value = [z](const SpherePoint& x) {
        const double u = std::clamp(x(2), -1.0, 1.0);
        double p0 = 1.0, p1 = u, s = (*z)(0);
        if (z->size() > 1) s += (*z)(1) * u;
        for (int l = 2; l < z->size(); ++l) {
          const double p2 = ((2.0 * l - 1.0) * u * p1 - (l - 1.0) * p0) / l;
          s += (*z)(l) * p2;
          p0 = p1;
          p1 = p2;
        }
        return s;
      };
      auto grad = [value](const SpherePoint& x) {
        const double h = 1e-6;
        Vec g(x.size());
        for (int i = 0; i < x.size(); ++i) {
          Vec a = x, b = x;
          a(i) += h;
          b(i) -= h;
          g(i) = (value(a.normalized()) - value(b.normalized())) / (2.0 * h);
        }
        return (g - x.dot(g) * x).eval();
      };
      return Evaluable(value, grad);
    }
  }
  return Evaluable([T, c](const SpherePoint& x) { return T->evaluate(*c, x); },
                   [T, c](const SpherePoint& x) { return T->gradient(*c, x); });
}

GridField conformal_pushforward(const Evaluable& v, const MoebiusParams& m,
                                const ProblemParams& params, const GridPtr& grid) {
  return sample(grid, [&](const SpherePoint& x) {
    return v(moebius_apply(m, x)) * bubble_value(m, x, params);
  });
}

GridField conformal_pushforward(const GridField& v, const MoebiusParams& m,
                                const ProblemParams& params, const HarmonicTransform& T) {
  const SpectralField c = T.analyze(v);
  return sample(v.grid, [&](const SpherePoint& x) {
    return T.evaluate(c, moebius_apply(m, x)) * bubble_value(m, x, params);
  });
}

GridField bubble_field(const GridPtr& grid, const MoebiusParams& m, const ProblemParams& params) {
  return sample(grid, [&](const SpherePoint& x) { return bubble_value(m, x, params); });
}

}  // namespace fqc
