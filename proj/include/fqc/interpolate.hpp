#pragma once

#include <functional>
#include <memory>

#include "fqc/spectral.hpp"

namespace fqc {

/// A function on S^n that can be evaluated anywhere, with its tangential gradient.
/// Either an analytic closure or the band-limited interpolant of a grid field.
class Evaluable {
 public:
  using ValueFn = std::function<double(const SpherePoint&)>;
  using GradFn = std::function<Vec(const SpherePoint&)>;

  Evaluable(ValueFn value, GradFn gradient);
  /// Spectral interpolant of degree T.max_degree().
  static Evaluable interpolant(std::shared_ptr<const HarmonicTransform> T, const GridField& f);

  double operator()(const SpherePoint& x) const { return value_(x); }
  Vec gradient(const SpherePoint& x) const { return grad_(x); }

 private:
  ValueFn value_;
  GradFn grad_;
};

/// T_φ v (x) = v(φ(x))·|det dφ(x)|^{(n−2σ)/(2n)}, sampled on `grid`.
GridField conformal_pushforward(const Evaluable& v, const MoebiusParams& m,
                                const ProblemParams& params, const GridPtr& grid);
/// Same for a grid field, evaluated off-grid through its spectral interpolant.
GridField conformal_pushforward(const GridField& v, const MoebiusParams& m,
                                const ProblemParams& params, const HarmonicTransform& T);
/// T_φ1 sampled on the grid.
GridField bubble_field(const GridPtr& grid, const MoebiusParams& m, const ProblemParams& params);

}  // namespace fqc
