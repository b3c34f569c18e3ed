#pragma once

#include "fqc/params.hpp"

namespace fqc {

/// Unit vector in R^{n+1}. Checked with `is_unit`.
using SpherePoint = Vec;

bool is_unit(const SpherePoint& p, double tol = 1e-12);
SpherePoint north_pole(int n);  ///< e_{n+1}
SpherePoint south_pole(int n);  ///< −e_{n+1}

/// Geodesic distance in [0, π], computed as 2·atan2(|p−q|, |p+q|).
double geodesic_distance(const SpherePoint& p, const SpherePoint& q);
double chordal_distance(const SpherePoint& p, const SpherePoint& q);

/// Orthonormal basis (columns) of the tangent space at `pole`.
/// Gram–Schmidt over the standard basis, skipping the axis most aligned with the
/// pole (lowest index on ties); the last column is flipped if needed so that
/// det[E | pole] > 0.
Mat tangent_frame(const SpherePoint& pole);

/// Stereographic chart projecting from `north`; F(0) = −north.
/// F(x) = Σ 2x_i/(1+|x|²) E_i + (|x|²−1)/(1+|x|²) north.
class StereoChart {
 public:
  explicit StereoChart(const SpherePoint& north);
  /// Chart with an explicit tangent frame (columns orthonormal and orthogonal to north).
  StereoChart(const SpherePoint& north, const Mat& frame);
  /// Chart whose origin is mapped to `center`.
  static StereoChart centered_at(const SpherePoint& center) { return StereoChart(-center); }

  int dim() const { return static_cast<int>(frame_.cols()); }
  const SpherePoint& north() const { return north_; }
  SpherePoint center() const { return -north_; }
  const Mat& frame() const { return frame_; }

  SpherePoint forward(const Vec& x) const;
  /// Inverse projection; undefined at the north pole itself.
  Vec inverse(const SpherePoint& p) const;
  /// Jacobian determinant (2/(1+|x|²))^n.
  double jacobian(const Vec& x) const;
  /// Pushes a chart vector v at x to an ambient tangent vector dF_x(v).
  Vec push_vector(const Vec& x, const Vec& v) const;

 private:
  SpherePoint north_;
  Mat frame_;
};

/// Free-function forms of the chart with `pole` as projection point.
SpherePoint stereo_forward(const Vec& x, const SpherePoint& pole);
Vec stereo_inverse(const SpherePoint& p, const SpherePoint& pole);

/// Conformal dilation φ_{P,t}: dilation by t in the chart centred at P.
/// Identified with the ball point p = ((t−1)/t)P.
struct MoebiusParams {
  SpherePoint pole;
  double t = 1.0;
  Vec ball_point;

  static MoebiusParams make(const SpherePoint& pole, double t);
  /// Inverse of the identification; p = 0 gives the identity with pole e_{n+1}.
  static MoebiusParams from_ball(const Vec& p);
  static MoebiusParams identity(int n) { return make(north_pole(n), 1.0); }
};

/// φ_{P,t}(x). Fixes ±P; φ_{P,t1}∘φ_{P,t2} = φ_{P,t1·t2}; points flow toward P for t > 1.
SpherePoint moebius_apply(const MoebiusParams& m, const SpherePoint& x);
/// Conformal factor of φ_{P,t} at x: |dφ(v)| = stretch·|v|.
double moebius_stretch(const MoebiusParams& m, const SpherePoint& x);
/// T_φ1(x) = stretch^{(n−2σ)/2}; peaks at −P with value t^{(n−2σ)/2}.
double bubble_value(const MoebiusParams& m, const SpherePoint& x, const ProblemParams& params);

}  // namespace fqc
