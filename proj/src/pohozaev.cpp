#include "fqc/pohozaev.hpp"

#include <algorithm>
#include <cmath>

#include "fqc/parallel.hpp"
#include "fqc/quadrature.hpp"

namespace fqc {
namespace {

struct DirRule {
  std::vector<Vec> dirs;
  std::vector<double> w;
};

// Product rule on S^{d-1} (d = 2 or 3), `count` nodes per circle.
DirRule sphere_rule(int d, int count) {
  DirRule r;
  if (d == 2) {
    for (int k = 0; k < count; ++k) {
      const double a = 2.0 * kPi * (k + 0.5) / count;
      Vec v(2);
      v << std::cos(a), std::sin(a);
      r.dirs.push_back(v);
      r.w.push_back(2.0 * kPi / count);
    }
    return r;
  }
  const int nt = std::max(8, count / 4), np = 2 * nt;
  const Rule1D gl = gauss_legendre(nt, -1.0, 1.0);
  for (int i = 0; i < nt; ++i) {
    const double z = gl.x[i], s = std::sqrt(1.0 - z * z);
    for (int k = 0; k < np; ++k) {
      const double a = 2.0 * kPi * (k + 0.5) / np;
      Vec v(3);
      v << s * std::cos(a), s * std::sin(a), z;
      r.dirs.push_back(v);
      r.w.push_back(gl.w[i] * 2.0 * kPi / np);
    }
  }
  return r;
}

// Polar angles ψ ∈ [0, π] about an axis, split at the tangent circle ψ = π/2 and
// sinh-graded toward it on both sides: for |x| near R the exterior start radius
// changes over an angular width of about √(2(R−|x|)/R) there.
Rule1D graded_polar(int per_half, double delta) {
  const Rule1D gl = gauss_legendre(per_half, 0.0, 1.0);
  const double L = 0.5 * kPi, mu = std::asinh(L / delta);
  Rule1D r;
  for (int side = 0; side < 2; ++side)
    for (int i = 0; i < per_half; ++i) {
      const double d = delta * std::sinh(mu * gl.x[i]);
      const double w = delta * std::cosh(mu * gl.x[i]) * mu * gl.w[i];
      r.x.push_back(side == 0 ? L - d : L + d);
      r.w.push_back(w);
    }
  return r;
}

// Direction rule on S^{d-1} adapted to the point x of the ball B_R.
DirRule exterior_rule(const Vec& x, double R, int count) {
  const int d = static_cast<int>(x.size());
  const double r = x.norm();
  const double delta = std::sqrt(2.0 * std::max(R - r, 1e-300) / R);
  Mat basis = Mat::Identity(d, d);
  if (r > 0.0) {
    basis.col(0) = x / r;
    // Complete to an orthonormal basis.
    Eigen::HouseholderQR<Mat> qr(basis.col(0));
    Mat Q = qr.householderQ();
    for (int j = 1; j < d; ++j) basis.col(j) = Q.col(j);
  }
  DirRule out;
  if (d == 2) {
    const Rule1D pol = graded_polar(std::max(4, count / 4), delta);
    for (int sgn : {1, -1})
      for (std::size_t i = 0; i < pol.x.size(); ++i) {
        out.dirs.push_back(std::cos(pol.x[i]) * basis.col(0) +
                           sgn * std::sin(pol.x[i]) * basis.col(1));
        out.w.push_back(pol.w[i]);
      }
    return out;
  }
  const Rule1D pol = graded_polar(std::max(4, count / 8), delta);
  const int np = std::max(8, count / 2);
  for (std::size_t i = 0; i < pol.x.size(); ++i) {
    const double c = std::cos(pol.x[i]), s = std::sin(pol.x[i]);
    for (int k = 0; k < np; ++k) {
      const double a = 2.0 * kPi * (k + 0.5) / np;
      out.dirs.push_back(c * basis.col(0) +
                         s * (std::cos(a) * basis.col(1) + std::sin(a) * basis.col(2)));
      out.w.push_back(pol.w[i] * s * 2.0 * kPi / np);
    }
  }
  return out;
}

class ChartFields {
 public:
  ChartFields(const Evaluable& v, const SphereFunction& K, const SpherePoint& center,
              const ProblemParams& params, double tau)
      : v_(v), K_(K), chart_(StereoChart::centered_at(center)), tau_(tau),
        p_(params.exponent(tau)), c_(params.c_intertwine * params.c_riesz),
        cw_(params.conformal_weight()) {}

  double H(const Vec& y) const { return std::pow(2.0 / (1.0 + y.squaredNorm()), cw_); }
  double u(const Vec& y) const { return H(y) * v_(chart_.forward(y)); }
  double Khat(const Vec& y) const { return c_ * K_(chart_.forward(y)) * std::pow(H(y), tau_); }
  /// K̂·u^p, the density of the Riesz integral.
  double source(const Vec& y) const {
    const SpherePoint x = chart_.forward(y);
    const double h = H(y);
    return c_ * K_(x) * std::pow(h, tau_) * std::pow(h * v_(x), p_);
  }
  /// x·∇K̂ at y = x.
  double radial_Khat(const Vec& y) const {
    const SpherePoint x = chart_.forward(y);
    const double r2 = y.squaredNorm();
    const double h = H(y);
    const double dK = K_.gradient(x).dot(chart_.push_vector(y, y));
    const double dH = -2.0 * cw_ * r2 * h / (1.0 + r2);
    return c_ * (std::pow(h, tau_) * dK + K_(x) * tau_ * std::pow(h, tau_ - 1.0) * dH);
  }
  double p() const { return p_; }

 private:
  const Evaluable& v_;
  const SphereFunction& K_;
  StereoChart chart_;
  double tau_, p_, c_, cw_;
};

struct Exterior {
  double h = 0.0;
  Vec grad;
};

Exterior exterior_integral(const ChartFields& F, const Vec& x, double R, const Rule1D& unit_panel,
                           const PohozaevOptions& opts, double sigma, int n) {
  Exterior e;
  e.grad = Vec::Zero(n);
  const double r = x.norm();
  const DirRule rule = exterior_rule(x, R, opts.exterior_angular);
  for (std::size_t k = 0; k < rule.dirs.size(); ++k) {
    const Vec& om = rule.dirs[k];
    const double xo = x.dot(om);
    const double rho0 = -xo + std::sqrt(xo * xo + R * R - r * r);
    const double S = std::log(opts.far / rho0);
    if (!(S > 0.0)) continue;
    const double panel = S / opts.exterior_panels;
    double ih = 0.0, ig = 0.0;
    for (int pnl = 0; pnl < opts.exterior_panels; ++pnl)
      for (std::size_t j = 0; j < unit_panel.x.size(); ++j) {
        const double s = (pnl + unit_panel.x[j]) * panel;
        const double rho = rho0 * std::exp(s);
        const double f = F.source(x + rho * om);
        const double wr = unit_panel.w[j] * panel;
        const double rs = std::pow(rho, 2.0 * sigma - 1.0);
        ih += wr * f * rs * rho;
        ig += wr * f * rs;
      }
    e.h += rule.w[k] * ih;
    e.grad += rule.w[k] * ig * om;
  }
  e.grad *= n - 2.0 * sigma;
  return e;
}

bool detect_axisymmetric(const ChartFields& F, double R, int n) {
  const DirRule probe = sphere_rule(n, 12);
  for (double r : {0.25 * R, 0.6 * R, 0.95 * R, 2.0 * R}) {
    double ulo = INFINITY, uhi = -INFINITY, klo = INFINITY, khi = -INFINITY;
    for (const Vec& d : probe.dirs) {
      const Vec y = r * d;
      const double u = F.u(y), k = F.Khat(y);
      ulo = std::min(ulo, u);
      uhi = std::max(uhi, u);
      klo = std::min(klo, k);
      khi = std::max(khi, k);
    }
    if (uhi - ulo > 1e-10 * std::abs(uhi) || khi - klo > 1e-10 * std::abs(khi)) return false;
  }
  return true;
}

}  // namespace

PohozaevReport pohozaev_residual(const Evaluable& v, const SphereFunction& K,
                                 const SpherePoint& center, double R,
                                 const ProblemParams& params, double tau,
                                 const PohozaevOptions& opts) {
  if (!(R > 0.0)) throw ConfigError("Pohozaev ball radius must be positive");
  if (opts.radial < 2 || opts.angular < 4 || opts.exterior_angular < 4 ||
      opts.exterior_panels < 1 || opts.exterior_per_panel < 2)
    throw ConfigError("Pohozaev quadrature sizes too small");
  const int n = params.n;
  const double sigma = params.sigma;
  const ChartFields F(v, K, center, params, tau);
  const double p = F.p();
  const double cw = params.conformal_weight();

  PohozaevReport rep;
  rep.axisymmetric = opts.allow_axisymmetric && detect_axisymmetric(F, R, n);

  const Rule1D radial = gauss_legendre(opts.radial, 0.0, 1.0);
  const Rule1D unit_panel = gauss_legendre(opts.exterior_per_panel, 0.0, 1.0);
  const DirRule interior = rep.axisymmetric ? DirRule{{Vec::Unit(n, 0)}, {sphere_volume(n - 1)}}
                                            : sphere_rule(n, opts.angular);

  struct Node {
    Vec x;
    double w;
  };
  std::vector<Node> nodes;
  for (std::size_t i = 0; i < radial.x.size(); ++i) {
    const double s = radial.x[i];
    const double r = R * (1.0 - std::pow(1.0 - s, 3));
    const double dr = 3.0 * R * (1.0 - s) * (1.0 - s) * radial.w[i];
    for (std::size_t k = 0; k < interior.dirs.size(); ++k)
      nodes.push_back({r * interior.dirs[k], dr * std::pow(r, n - 1) * interior.w[k]});
  }

  std::vector<double> t1(nodes.size()), t2(nodes.size()), t3(nodes.size()), t4(nodes.size());
  parallel_for(0, static_cast<int>(nodes.size()), [&](int i) {
    const Vec& x = nodes[i].x;
    const double u = F.u(x), Kh = F.Khat(x);
    const double up = std::pow(u, p);
    const Exterior e = exterior_integral(F, x, R, unit_panel, opts, sigma, n);
    const double hR = e.h, xgrad = x.dot(e.grad);
    t1[i] = nodes[i].w * Kh * up * u;
    t2[i] = nodes[i].w * F.radial_Khat(x) * up * u;
    t3[i] = nodes[i].w * Kh * up * hR;
    t4[i] = nodes[i].w * Kh * up * xgrad;
  });
  double I1 = 0.0, I2 = 0.0, I3 = 0.0, I4 = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    I1 += t1[i];
    I2 += t2[i];
    I3 += t3[i];
    I4 += t4[i];
  }

  const DirRule bnd = rep.axisymmetric ? interior : sphere_rule(n, opts.angular);
  double I5 = 0.0;
  for (std::size_t k = 0; k < bnd.dirs.size(); ++k) {
    const Vec y = R * bnd.dirs[k];
    I5 += bnd.w[k] * F.Khat(y) * std::pow(F.u(y), p + 1.0);
  }
  I5 *= std::pow(R, n - 1);

  rep.T1 = (cw - n / (p + 1.0)) * I1;
  rep.T2 = -I2 / (p + 1.0);
  rep.T3 = cw * I3;
  rep.T4 = I4;
  rep.T5 = -R / (p + 1.0) * I5;
  rep.residual = std::abs(rep.T1 + rep.T2 - rep.T3 - rep.T4 - rep.T5);
  rep.scale = std::abs(rep.T1) + std::abs(rep.T2) + std::abs(rep.T3) + std::abs(rep.T4) +
              std::abs(rep.T5);
  return rep;
}

PohozaevReport pohozaev_residual(const GridField& v, const SphereFunction& K,
                                 std::shared_ptr<const HarmonicTransform> T,
                                 const SpherePoint& center, double R_ball,
                                 const ProblemParams& params, double tau,
                                 const PohozaevOptions& opts) {
  const Evaluable vi = Evaluable::interpolant(std::move(T), v);
  return pohozaev_residual(vi, K, center, R_ball, params, tau, opts);
}

}  // namespace fqc
