#include "fqc/sphere.hpp"

#include <cmath>

namespace fqc {

bool is_unit(const SpherePoint& p, double tol) { return std::abs(p.norm() - 1.0) <= tol; }

SpherePoint north_pole(int n) {
  SpherePoint p = Vec::Zero(n + 1);
  p(n) = 1.0;
  return p;
}

SpherePoint south_pole(int n) { return -north_pole(n); }

double geodesic_distance(const SpherePoint& p, const SpherePoint& q) {
  return 2.0 * std::atan2((p - q).norm(), (p + q).norm());
}

double chordal_distance(const SpherePoint& p, const SpherePoint& q) { return (p - q).norm(); }

Mat tangent_frame(const SpherePoint& pole) {
  const int d = static_cast<int>(pole.size());
  int skip = 0;
  for (int i = 1; i < d; ++i)
    if (std::abs(pole(i)) > std::abs(pole(skip)) + 1e-14) skip = i;
  Mat basis(d, d);
  basis.col(0) = pole;
  int c = 1;
  for (int i = 0; i < d; ++i) {
    if (i == skip) continue;
    Vec v = Vec::Unit(d, i);
    for (int j = 0; j < c; ++j) v -= basis.col(j).dot(v) * basis.col(j);
    v.normalize();
    basis.col(c++) = v;
  }
  Mat frame = basis.rightCols(d - 1);
  Mat full(d, d);
  full << frame, pole;
  if (full.determinant() < 0.0) frame.col(d - 2) *= -1.0;
  return frame;
}

StereoChart::StereoChart(const SpherePoint& north) : north_(north.normalized()) {
  frame_ = tangent_frame(north_);
}

StereoChart::StereoChart(const SpherePoint& north, const Mat& frame)
    : north_(north.normalized()), frame_(frame) {
  if (frame_.rows() != north_.size() || frame_.cols() != north_.size() - 1)
    throw ConfigError("chart frame has the wrong shape");
  const Mat gram = frame_.transpose() * frame_;
  if ((gram - Mat::Identity(gram.rows(), gram.cols())).norm() > 1e-9 ||
      (frame_.transpose() * north_).norm() > 1e-9)
    throw ConfigError("chart frame must be orthonormal and tangent");
}

SpherePoint StereoChart::forward(const Vec& x) const {
  const double r2 = x.squaredNorm();
  if (!std::isfinite(r2)) return north_;
  // Large |x|: the (r²−1)/(1+r²) form loses nothing, 2x/(1+r²) decays as 1/|x|.
  return (2.0 / (1.0 + r2)) * (frame_ * x) + ((r2 - 1.0) / (1.0 + r2)) * north_;
}

Vec StereoChart::inverse(const SpherePoint& p) const {
  const double s = p.dot(north_);
  return (frame_.transpose() * p) / (1.0 - s);
}

double StereoChart::jacobian(const Vec& x) const {
  return std::pow(2.0 / (1.0 + x.squaredNorm()), dim());
}

Vec StereoChart::push_vector(const Vec& x, const Vec& v) const {
  const double r2 = x.squaredNorm();
  const double den = 1.0 + r2;
  const double xv = x.dot(v);
  return (2.0 / den) * (frame_ * v) - (4.0 * xv / (den * den)) * (frame_ * x) +
         (4.0 * xv / (den * den)) * north_;
}

SpherePoint stereo_forward(const Vec& x, const SpherePoint& pole) {
  return StereoChart(pole).forward(x);
}

Vec stereo_inverse(const SpherePoint& p, const SpherePoint& pole) {
  return StereoChart(pole).inverse(p);
}

MoebiusParams MoebiusParams::make(const SpherePoint& pole, double t) {
  if (!(t >= 1.0)) throw ConfigError("Moebius dilation requires t >= 1");
  MoebiusParams m;
  m.pole = pole.normalized();
  m.t = t;
  m.ball_point = ((t - 1.0) / t) * m.pole;
  return m;
}

MoebiusParams MoebiusParams::from_ball(const Vec& p) {
  const double r = p.norm();
  if (!(r < 1.0)) throw ConfigError("ball point must lie in the open unit ball");
  const int n = static_cast<int>(p.size()) - 1;
  if (r == 0.0) return identity(n);
  MoebiusParams m = make(p / r, 1.0 / (1.0 - r));
  m.ball_point = p;
  return m;
}

SpherePoint moebius_apply(const MoebiusParams& m, const SpherePoint& x) {
  const double s = x.dot(m.pole);
  const double t2 = m.t * m.t;
  const Vec perp = x - s * m.pole;
  const double den = t2 * (1.0 + s) + (1.0 - s);
  return (2.0 * m.t * perp + (t2 * (1.0 + s) - (1.0 - s)) * m.pole) / den;
}

double moebius_stretch(const MoebiusParams& m, const SpherePoint& x) {
  const double s = x.dot(m.pole);
  return 2.0 * m.t / ((1.0 - s) + m.t * m.t * (1.0 + s));
}

double bubble_value(const MoebiusParams& m, const SpherePoint& x, const ProblemParams& params) {
  return std::pow(moebius_stretch(m, x), params.conformal_weight());
}

}  // namespace fqc
