#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fqc/grid.hpp"

namespace fqc {

/// Evaluable function on S^n with the ambient gradient of some extension.
/// Only the tangential part of `gradient` is meaningful.
struct SphereFunction {
  std::string name;
  std::function<double(const SpherePoint&)> value;
  std::function<Vec(const SpherePoint&)> gradient;

  double operator()(const SpherePoint& x) const { return value(x); }
  Vec tangential_gradient(const SpherePoint& x) const;
};

SphereFunction constant_function(double c);
/// 1 + ε x_{axis+1}; axis defaults to the last coordinate.
SphereFunction linear_function(int n, double eps, int axis = -1);
/// 1 + ε (x_{n+1}² − 1/(n+1)).
SphereFunction quadratic_function(int n, double eps);
/// μK + (1−μ).
SphereFunction homotopy(const SphereFunction& K, double mu);
/// x ↦ K(Rᵀx) for an orthogonal R.
SphereFunction rotated(const SphereFunction& K, const Mat& R);

GridField sample(const GridPtr& grid, const SphereFunction& f);

/// Local flatness model at a critical point q0: in the stereographic chart with
/// q0 at the origin, K∘F(y) = K(q0) + Q(y) + R(y). The canonical family is
/// Q(y) = Σ a_j |y_j|^β in the chart's frame.
struct LocalModel {
  SpherePoint q0;
  double beta = 2.0;
  Vec a;                          ///< canonical coefficients (may be empty if Q is custom)
  std::optional<Mat> frame;       ///< chart frame at q0; default tangent_frame(−q0)
  double remainder_order = 0.0;   ///< claimed decay exponent of R
  std::function<double(const Vec&)> custom_Q;
  std::function<Vec(const Vec&)> custom_gradQ;

  static LocalModel canonical(const SpherePoint& q0, double beta, const Vec& a);

  bool is_canonical() const { return !custom_Q; }
  double Q(const Vec& y) const;
  Vec gradQ(const Vec& y) const;
  StereoChart chart() const;
  /// Coefficients multiplied by s (homotopy scaling).
  LocalModel scaled(double s) const;
};

/// Prescribed function K with its declared critical-point models.
struct CurvatureSpec {
  std::string name;
  SphereFunction global;
  std::vector<LocalModel> critical_points;
  double consistency_radius = 0.1;
};

/// Per-model check of K∘F(y) − K(q0) − Q(y) relative to |y|^β at sampled radii.
struct ConsistencyRow {
  int model = 0;
  double radius = 0.0;
  double max_remainder_ratio = 0.0;  ///< max |R(y)|/|y|^β over sampled directions
};
std::vector<ConsistencyRow> consistency_report(const CurvatureSpec& spec, int directions = 16);

/// Homotopy K_μ = μK + (1−μ); models scale by μ.
CurvatureSpec homotopy_family(const CurvatureSpec& spec, double mu);

/// Spec with only a global part and no declared critical points.
CurvatureSpec plain_spec(const SphereFunction& K);

/// Canonical-model curvature: K = 1 + amplitude·Σ_j χ(|y_j|) Q_j(y_j), where y_j
/// is the chart coordinate at q_j and χ a smooth cutoff equal to 1 on |y| ≤ r0
/// and 0 beyond 2·r0. The declared models hold exactly for |y_j| ≤ r0.
CurvatureSpec flatness_demo(int n, const std::vector<SpherePoint>& points, double beta,
                            const std::vector<Vec>& coeffs, double amplitude = 0.1,
                            double r0 = 0.25);
/// Same with one exponent per point.
CurvatureSpec flatness_demo(int n, const std::vector<SpherePoint>& points,
                            const std::vector<double>& betas, const std::vector<Vec>& coeffs,
                            double amplitude = 0.1, double r0 = 0.25);

/// Morse function on S² with eight nondegenerate critical points:
/// K = 1 + (amplitude/20)·(e^{3x₃} − 0.8 Σ_i e^{3x·q_i}), q_i equatorial at 0°, 120°, 240°.
/// Critical points are located by Newton iteration and carry β = 2 models in the
/// Hessian eigenframe.
CurvatureSpec morse_demo(double amplitude = 0.5);

}  // namespace fqc
