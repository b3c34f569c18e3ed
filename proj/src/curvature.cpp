#include "fqc/curvature.hpp"

#include <algorithm>
#include <cmath>

namespace fqc {
namespace {

// Ambient gradient of the degree-0 extension x ↦ f(x/|x|) by central differences.
Vec numeric_gradient(const std::function<double(const SpherePoint&)>& f, const SpherePoint& x) {
  const int d = static_cast<int>(x.size());
  const double h = 1e-6;
  Vec g(d);
  for (int i = 0; i < d; ++i) {
    Vec a = x, b = x;
    a(i) += h;
    b(i) -= h;
    g(i) = (f(a.normalized()) - f(b.normalized())) / (2.0 * h);
  }
  return g;
}

// C^∞ step: 1 on [0, r0], 0 on [2r0, ∞).
double smooth_cutoff(double r, double r0) {
  if (r <= r0) return 1.0;
  if (r >= 2.0 * r0) return 0.0;
  const double s = (r - r0) / r0;
  const double a = std::exp(-1.0 / (1.0 - s));
  const double b = std::exp(-1.0 / s);
  return a / (a + b);
}

// Unit directions in R^d, deterministic.
std::vector<Vec> sample_directions(int d, int count) {
  std::vector<Vec> out;
  if (d == 1) return {Vec::Constant(1, 1.0), Vec::Constant(1, -1.0)};
  for (int k = 0; k < count; ++k) {
    Vec v(d);
    if (d == 2) {
      const double a = 2.0 * kPi * (k + 0.5) / count;
      v << std::cos(a), std::sin(a);
    } else {
      // Golden-angle spiral on S².
      const double z = 1.0 - 2.0 * (k + 0.5) / count;
      const double r = std::sqrt(1.0 - z * z);
      const double a = k * kPi * (3.0 - std::sqrt(5.0));
      v = Vec::Zero(d);
      v(0) = r * std::cos(a);
      v(1) = r * std::sin(a);
      v(2) = z;
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace

Vec SphereFunction::tangential_gradient(const SpherePoint& x) const {
  const Vec g = gradient(x);
  return g - x.dot(g) * x;
}

SphereFunction constant_function(double c) {
  return {"constant", [c](const SpherePoint&) { return c; },
          [](const SpherePoint& x) { return Vec::Zero(x.size()).eval(); }};
}

SphereFunction linear_function(int n, double eps, int axis) {
  const int ax = axis < 0 ? n : axis;
  if (ax > n) throw ConfigError("linear axis out of range");
  return {"linear-x", [eps, ax](const SpherePoint& x) { return 1.0 + eps * x(ax); },
          [eps, ax](const SpherePoint& x) {
            Vec g = Vec::Zero(x.size());
            g(ax) = eps;
            return g;
          }};
}

SphereFunction quadratic_function(int n, double eps) {
  const double m = 1.0 / (n + 1);
  return {"quadratic-poly",
          [eps, n, m](const SpherePoint& x) { return 1.0 + eps * (x(n) * x(n) - m); },
          [eps, n](const SpherePoint& x) {
            Vec g = Vec::Zero(x.size());
            g(n) = 2.0 * eps * x(n);
            return g;
          }};
}

SphereFunction homotopy(const SphereFunction& K, double mu) {
  if (mu < 0.0 || mu > 1.0) throw ConfigError("homotopy parameter must lie in [0, 1]");
  return {K.name, [K, mu](const SpherePoint& x) { return mu * K(x) + (1.0 - mu); },
          [K, mu](const SpherePoint& x) { return (mu * K.gradient(x)).eval(); }};
}

SphereFunction rotated(const SphereFunction& K, const Mat& R) {
  return {K.name, [K, R](const SpherePoint& x) { return K(R.transpose() * x); },
          [K, R](const SpherePoint& x) { return (R * K.gradient(R.transpose() * x)).eval(); }};
}

GridField sample(const GridPtr& grid, const SphereFunction& f) { return sample(grid, f.value); }

LocalModel LocalModel::canonical(const SpherePoint& q0, double beta, const Vec& a) {
  LocalModel m;
  m.q0 = q0.normalized();
  m.beta = beta;
  m.a = a;
  m.remainder_order = beta + 1.0;
  if (a.size() != q0.size() - 1) throw ConfigError("model needs one coefficient per chart axis");
  return m;
}

double LocalModel::Q(const Vec& y) const {
  if (custom_Q) return custom_Q(y);
  double s = 0.0;
  for (int j = 0; j < a.size(); ++j) s += a(j) * std::pow(std::abs(y(j)), beta);
  return s;
}

Vec LocalModel::gradQ(const Vec& y) const {
  if (custom_Q) {
    if (!custom_gradQ) throw ConfigError("custom flatness model lacks a gradient");
    return custom_gradQ(y);
  }
  Vec g(y.size());
  for (int j = 0; j < a.size(); ++j) {
    const double r = std::abs(y(j));
    g(j) = r == 0.0 ? 0.0 : a(j) * beta * std::pow(r, beta - 1.0) * (y(j) > 0 ? 1.0 : -1.0);
  }
  return g;
}

StereoChart LocalModel::chart() const {
  return frame ? StereoChart(-q0, *frame) : StereoChart(-q0);
}

LocalModel LocalModel::scaled(double s) const {
  LocalModel m = *this;
  m.a = s * a;
  if (custom_Q) {
    auto q = custom_Q;
    auto g = custom_gradQ;
    m.custom_Q = [q, s](const Vec& y) { return s * q(y); };
    if (g) m.custom_gradQ = [g, s](const Vec& y) { return (s * g(y)).eval(); };
  }
  return m;
}

std::vector<ConsistencyRow> consistency_report(const CurvatureSpec& spec, int directions) {
  std::vector<ConsistencyRow> rows;
  for (std::size_t i = 0; i < spec.critical_points.size(); ++i) {
    const LocalModel& m = spec.critical_points[i];
    const StereoChart chart = m.chart();
    const double k0 = spec.global(m.q0);
    const auto dirs = sample_directions(chart.dim(), directions);
    for (double f : {0.125, 0.25, 0.5, 1.0}) {
      const double r = f * spec.consistency_radius;
      double worst = 0.0;
      for (const Vec& d : dirs) {
        const Vec y = r * d;
        const double rem = spec.global(chart.forward(y)) - k0 - m.Q(y);
        worst = std::max(worst, std::abs(rem) / std::pow(r, m.beta));
      }
      rows.push_back({static_cast<int>(i), r, worst});
    }
  }
  return rows;
}

CurvatureSpec homotopy_family(const CurvatureSpec& spec, double mu) {
  CurvatureSpec out = spec;
  out.global = homotopy(spec.global, mu);
  for (auto& m : out.critical_points) m = m.scaled(mu);
  return out;
}

CurvatureSpec plain_spec(const SphereFunction& K) {
  CurvatureSpec s;
  s.name = K.name;
  s.global = K;
  return s;
}

CurvatureSpec flatness_demo(int n, const std::vector<SpherePoint>& points, double beta,
                            const std::vector<Vec>& coeffs, double amplitude, double r0) {
  return flatness_demo(n, points, std::vector<double>(points.size(), beta), coeffs, amplitude, r0);
}

CurvatureSpec flatness_demo(int n, const std::vector<SpherePoint>& points,
                            const std::vector<double>& betas, const std::vector<Vec>& coeffs,
                            double amplitude, double r0) {
  if (points.size() != coeffs.size() || points.size() != betas.size())
    throw ConfigError("one exponent and one coefficient vector per point");
  if (!(r0 > 0.0 && r0 < 0.5)) throw ConfigError("flatness-demo radius must lie in (0, 0.5)");
  CurvatureSpec spec;
  spec.name = "flatness-demo";
  spec.consistency_radius = r0;
  std::vector<LocalModel> unit_models;
  for (std::size_t j = 0; j < points.size(); ++j) {
    if (points[j].size() != n + 1) throw ConfigError("flatness point has wrong dimension");
    unit_models.push_back(LocalModel::canonical(points[j], betas[j], coeffs[j]));
    spec.critical_points.push_back(unit_models.back().scaled(amplitude));
  }
  // Supports must not overlap: chart radius 2r0 is geodesic radius 2·atan(2r0).
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if (geodesic_distance(points[i], points[j]) < 4.0 * std::atan(2.0 * r0))
        throw ConfigError("flatness-demo points are too close for the cutoff radius");
  double bound = 0.0;
  for (const auto& m : unit_models)
    bound = std::max(bound, m.a.cwiseAbs().sum() * std::pow(2.0 * r0, m.beta));
  if (amplitude * bound >= 1.0) throw ConfigError("flatness-demo amplitude makes K nonpositive");
  std::vector<StereoChart> charts;
  for (const auto& m : unit_models) charts.push_back(m.chart());
  auto value = [unit_models, charts, amplitude, r0](const SpherePoint& x) {
    double k = 1.0;
    for (std::size_t j = 0; j < unit_models.size(); ++j) {
      const auto& m = unit_models[j];
      if (x.dot(m.q0) <= 0.0) continue;  // outside every support (|y| ≤ 2r0 < 1)
      const Vec y = charts[j].inverse(x);
      const double c = smooth_cutoff(y.norm(), r0);
      if (c > 0.0) k += amplitude * c * m.Q(y);
    }
    return k;
  };
  spec.global = {"flatness-demo", value,
                 [value](const SpherePoint& x) { return numeric_gradient(value, x); }};
  return spec;
}

CurvatureSpec morse_demo(double amplitude) {
  const double kap = 3.0, depth = 0.8, scale = amplitude / 20.0;
  std::vector<Vec> dips;
  for (int i = 0; i < 3; ++i) {
    Vec q(3);
    const double a = 2.0 * kPi * i / 3.0;
    q << std::cos(a), std::sin(a), 0.0;
    dips.push_back(q);
  }
  auto value = [=](const SpherePoint& x) {
    double f = std::exp(kap * x(2));
    for (const auto& q : dips) f -= depth * std::exp(kap * x.dot(q));
    return 1.0 + scale * f;
  };
  auto gradient = [=](const SpherePoint& x) {
    Vec g = Vec::Zero(3);
    g(2) = kap * std::exp(kap * x(2));
    for (const auto& q : dips) g -= depth * kap * std::exp(kap * x.dot(q)) * q;
    return (scale * g).eval();
  };
  auto hessian = [=](const SpherePoint& x) {
    Mat H = Mat::Zero(3, 3);
    H(2, 2) = kap * kap * std::exp(kap * x(2));
    for (const auto& q : dips) H -= depth * kap * kap * std::exp(kap * x.dot(q)) * q * q.transpose();
    return (scale * H).eval();
  };
  // Riemannian Hessian in the frame E at x.
  auto riemann = [&](const SpherePoint& x, const Mat& E) {
    return (E.transpose() * hessian(x) * E -
            x.dot(gradient(x)) * Mat::Identity(2, 2)).eval();
  };

  CurvatureSpec spec;
  spec.name = "morse-demo";
  spec.global = {"morse-demo", value, gradient};
  spec.consistency_radius = 0.05;
  std::vector<SpherePoint> found;
  for (int i = 0; i < 12; ++i) {
    for (int j = 0; j < 24; ++j) {
      const double th = kPi * (i + 0.5) / 12.0, ph = 2.0 * kPi * j / 24.0;
      SpherePoint x(3);
      x << std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th);
      bool ok = false;
      for (int it = 0; it < 60; ++it) {
        const Mat E = tangent_frame(x);
        const Vec g = E.transpose() * gradient(x);
        if (g.norm() < 1e-13) {
          ok = true;
          break;
        }
        Vec step = riemann(x, E).fullPivLu().solve(-g);
        if (step.norm() > 0.3) step *= 0.3 / step.norm();
        x = (x + E * step).normalized();
      }
      if (!ok) continue;
      bool dup = false;
      for (const auto& p : found) dup = dup || (p - x).norm() < 1e-6;
      if (!dup) found.push_back(x);
    }
  }
  // Deterministic order: by x₃ descending, then azimuth.
  std::sort(found.begin(), found.end(), [](const Vec& a, const Vec& b) {
    if (std::abs(a(2) - b(2)) > 1e-9) return a(2) > b(2);
    return std::atan2(a(1), a(0)) < std::atan2(b(1), b(0));
  });
  for (const auto& q : found) {
    const SpherePoint north = -q;
    const Mat E = tangent_frame(north);
    Eigen::SelfAdjointEigenSolver<Mat> es(riemann(q, E));
    Mat F = E * es.eigenvectors();
    Mat full(3, 3);
    full << F, north;
    if (full.determinant() < 0.0) F.col(1) *= -1.0;
    LocalModel m = LocalModel::canonical(q, 2.0, 2.0 * es.eigenvalues());
    m.frame = F;
    spec.critical_points.push_back(m);
  }
  return spec;
}

}  // namespace fqc
