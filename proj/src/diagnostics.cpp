#include "fqc/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace fqc {
namespace {

std::vector<Vec> circle_directions(int d, int count) {
  std::vector<Vec> out;
  for (int k = 0; k < count; ++k) {
    Vec v = Vec::Zero(d);
    if (d == 2) {
      const double a = 2.0 * kPi * k / count;
      v << std::cos(a), std::sin(a);
    } else {
      const double z = 1.0 - 2.0 * (k + 0.5) / count;
      const double r = std::sqrt(1.0 - z * z);
      const double a = k * kPi * (3.0 - std::sqrt(5.0));
      v(0) = r * std::cos(a);
      v(1) = r * std::sin(a);
      v(2) = z;
    }
    out.push_back(v);
  }
  return out;
}

// Golden-section minimization on [a, b].
template <class F>
double golden_min(F f, double a, double b, int iters = 120) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

ArgmaxInfo locate_max(const GridField& v, const Evaluable* interp, int plateau_limit) {
  const auto& g = *v.grid;
  ArgmaxInfo info;
  const double vmax = v.values.maxCoeff(), vmin = v.values.minCoeff();
  for (int i = 0; i < g.size(); ++i)
    if (v.values(i) == vmax) {
      info.node = i;
      break;
    }
  info.ties = 0;
  for (int i = 0; i < g.size(); ++i)
    if (v.values(i) >= vmax - 1e-12 * std::abs(vmax)) ++info.ties;
  info.point = g.node(info.node);
  info.value = vmax;
  const bool flat = vmax - vmin <= 1e-9 * std::abs(vmax);

  if (interp && !flat) {
    // Newton ascent in the chart centred at the current iterate.
    SpherePoint x = info.point;
    const int d = g.n;
    const double h = 1e-4;
    for (int it = 0; it < 50; ++it) {
      const StereoChart chart = StereoChart::centered_at(x);
      auto f = [&](const Vec& y) { return (*interp)(chart.forward(y)); };
      const Vec zero = Vec::Zero(d);
      const double f0 = f(zero);
      Vec grad(d);
      Mat H(d, d);
      for (int i = 0; i < d; ++i) {
        const Vec ei = h * Vec::Unit(d, i);
        const double fp = f(ei), fm = f(-ei);
        grad(i) = (fp - fm) / (2.0 * h);
        H(i, i) = (fp - 2.0 * f0 + fm) / (h * h);
        for (int j = 0; j < i; ++j) {
          const Vec ej = h * Vec::Unit(d, j);
          H(i, j) = H(j, i) = (f(ei + ej) - f(ei - ej) - f(ej - ei) + f(-ei - ej)) / (4.0 * h * h);
        }
      }
      Vec step;
      Eigen::SelfAdjointEigenSolver<Mat> es(H);
      if (es.eigenvalues().maxCoeff() < 0.0)
        step = -H.ldlt().solve(grad);
      else
        step = 0.01 * grad / std::max(grad.norm(), 1e-300);
      if (step.norm() > 0.1) step *= 0.1 / step.norm();
      x = chart.forward(step);
      if (step.norm() < 1e-10) break;
    }
    const double fx = (*interp)(x);
    if (fx >= vmax - 1e-13 * std::abs(vmax) && geodesic_distance(x, info.point) < 0.5) {
      info.point = x;
      info.value = fx;
      info.refined = true;
    }
  }
  info.degenerate =
      flat || (info.ties > plateau_limit && !(info.refined && info.value > vmax * (1.0 + 1e-12)));
  return info;
}

double chart_weight(const Vec& y, const ProblemParams& params) {
  return std::pow(2.0 / (1.0 + y.squaredNorm()), params.conformal_weight());
}

ProfileResult profile_error(const GridField& v, const ProblemParams& params,
                            const Evaluable* interp, double tau, double K_at_center,
                            const DiagnosticOptions& opts) {
  const auto& g = *v.grid;
  ProfileResult res;
  const ArgmaxInfo am = locate_max(v, interp, opts.plateau_limit);
  res.center = am.point;
  res.m = am.value;
  res.degenerate = am.degenerate;
  const double H0 = std::pow(2.0, params.conformal_weight());
  res.m_chart = H0 * res.m;
  res.k_predicted = std::pow(K_at_center * std::pow(H0, tau), 1.0 / params.sigma) / 4.0;
  if (res.degenerate) return res;

  const double p = params.exponent(tau);
  const double scale = std::pow(res.m_chart, (p - 1.0) / (2.0 * params.sigma));
  const double e = -params.conformal_weight();
  const StereoChart chart = StereoChart::centered_at(res.center);
  std::vector<double> z2, data;
  for (int j = 0; j < g.size(); ++j) {
    const SpherePoint x = g.node(j);
    if (x.dot(res.center) <= -0.5) continue;
    const Vec y = chart.inverse(x);
    const double z = y.norm() * scale;
    if (z > opts.R_fit) continue;
    z2.push_back(z * z);
    data.push_back(chart_weight(y, params) * v.values(j) / res.m_chart);
  }
  res.samples = static_cast<int>(data.size());
  if (res.samples < 3) throw NumericalError("profile window contains too few grid nodes");
  auto sse = [&](double logk) {
    const double k = std::exp(logk);
    double s = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      const double r = data[i] - std::pow(1.0 + k * z2[i], e);
      s += r * r;
    }
    return s;
  };
  const double l0 = std::log(res.k_predicted);
  res.k_fit = std::exp(golden_min(sse, l0 - 6.0, l0 + 6.0));
  for (std::size_t i = 0; i < data.size(); ++i)
    res.err = std::max(res.err, std::abs(data[i] - std::pow(1.0 + res.k_fit * z2[i], e)));
  return res;
}

double harnack_ratio(const GridField& v, const SpherePoint& center, double r) {
  if (!(r > 0.0) || 2.0 * r > kPi) throw ConfigError("Harnack radius must lie in (0, π/2]");
  const auto& g = *v.grid;
  double hi = -INFINITY, lo = INFINITY;
  for (int j = 0; j < g.size(); ++j) {
    const double d = geodesic_distance(center, g.node(j));
    if (d < 0.5 * r || d > 2.0 * r) continue;
    hi = std::max(hi, v.values(j));
    lo = std::min(lo, v.values(j));
  }
  if (!std::isfinite(hi)) throw NumericalError("Harnack annulus contains no grid nodes");
  if (!(lo > 0.0)) throw NumericalError("Harnack ratio needs a positive field");
  return hi / lo;
}

PairFit fit_pair_limit(const std::vector<double>& radii, const std::vector<double>& values,
                       const ProblemParams& params) {
  if (radii.size() != values.size() || radii.size() < 2)
    throw ConfigError("pair fit needs at least two samples");
  Mat A(radii.size(), 2);
  Vec b(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) {
    A(i, 0) = std::pow(radii[i], 2.0 * params.sigma - params.n);
    A(i, 1) = 1.0;
    b(i) = values[i];
  }
  const Vec x = A.colPivHouseholderQr().solve(b);
  return {x(0), x(1), static_cast<int>(radii.size())};
}

PairFit pair_limit_fit(const Evaluable& v, const SpherePoint& center, double m_chart,
                       const std::vector<double>& probe_radii, const ProblemParams& params) {
  const StereoChart chart = StereoChart::centered_at(center);
  std::vector<double> rs, vals;
  const auto dirs = circle_directions(params.n, 16);
  for (double r : probe_radii)
    for (const Vec& d : dirs) {
      const Vec y = r * d;
      rs.push_back(r);
      vals.push_back(m_chart * chart_weight(y, params) * v(chart.forward(y)));
    }
  return fit_pair_limit(rs, vals, params);
}

double pair_limit_expected(const ProblemParams& params, double K_at_q) {
  return std::pow(2.0, params.n - 2.0 * params.sigma) *
         std::pow(K_at_q, (2.0 * params.sigma - params.n) / (2.0 * params.sigma));
}

double chart_average(const Evaluable& v, const StereoChart& chart, double r,
                     const ProblemParams& params, int directions) {
  const auto dirs = circle_directions(params.n, directions);
  double s = 0.0;
  for (const Vec& d : dirs) {
    const Vec y = r * d;
    s += chart_weight(y, params) * v(chart.forward(y));
  }
  return s / dirs.size();
}

int count_critical_radii(const Evaluable& v, const SpherePoint& center, double r_min,
                         double r_max, const ProblemParams& params, double p) {
  const StereoChart chart = StereoChart::centered_at(center);
  const int samples = 48;
  std::vector<double> w;
  for (int i = 0; i < samples; ++i) {
    const double r = r_min * std::pow(r_max / r_min, i / (samples - 1.0));
    w.push_back(std::pow(r, 2.0 * params.sigma / (p - 1.0)) * chart_average(v, chart, r, params));
  }
  int count = 0;
  for (int i = 1; i + 1 < samples; ++i) {
    const double a = w[i] - w[i - 1], b = w[i + 1] - w[i];
    if (a * b < 0.0) ++count;
  }
  return count;
}

std::vector<MomentRow> moment_table(const GridField& v, const SpherePoint& center,
                                    const ProblemParams& params, double p, double m_chart,
                                    const DiagnosticOptions& opts) {
  const auto& g = *v.grid;
  std::vector<double> orders = opts.moment_orders;
  if (orders.empty()) orders = {-1.0, 0.0, 1.0, static_cast<double>(params.n)};
  const double rho = opts.R_fit * std::pow(m_chart, -(p - 1.0) / (2.0 * params.sigma));
  const StereoChart chart = StereoChart::centered_at(center);
  std::vector<MomentRow> rows;
  for (double s : orders) rows.push_back({s, 0.0, 0.0});
  for (int j = 0; j < g.size(); ++j) {
    const SpherePoint x = g.node(j);
    if (x.dot(center) <= 0.0) continue;  // |y| > 1
    const Vec y = chart.inverse(x);
    const double r = y.norm();
    if (r == 0.0) continue;
    const double u = chart_weight(y, params) * v.values(j);
    const double dy = g.weights(j) / chart.jacobian(y);
    const double base = std::pow(u, p + 1.0) * dy;
    for (auto& row : rows) (r <= rho ? row.inner : row.outer) += std::pow(r, row.s) * base;
  }
  return rows;
}

}  // namespace fqc
