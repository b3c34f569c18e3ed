#include "fqc/degree.hpp"

#include <algorithm>
#include <cmath>

#include "fqc/parallel.hpp"
#include "fqc/quadrature.hpp"

namespace fqc {
namespace {

struct OmegaRule {
  std::vector<Vec> coeffs;  ///< coordinates of ω in the tangent frame
  std::vector<double> w;
};

OmegaRule omega_rule(int n, int angles) {
  OmegaRule r;
  if (n == 2) {
    for (int k = 0; k < angles; ++k) {
      const double a = 2.0 * kPi * k / angles;
      Vec c(2);
      c << std::cos(a), std::sin(a);
      r.coeffs.push_back(c);
      r.w.push_back(2.0 * kPi / angles);
    }
    return r;
  }
  if (n != 3) throw ConfigError("obstruction quadrature is implemented for n = 2, 3");
  const int nt = std::max(4, angles / 4), np = std::max(8, angles / 2);
  const Rule1D gl = gauss_legendre(nt, -1.0, 1.0);
  for (int i = 0; i < nt; ++i) {
    const double z = gl.x[i], s = std::sqrt(1.0 - z * z);
    for (int k = 0; k < np; ++k) {
      const double a = 2.0 * kPi * k / np;
      Vec c(3);
      c << s * std::cos(a), s * std::sin(a), z;
      r.coeffs.push_back(c);
      r.w.push_back(gl.w[i] * 2.0 * kPi / np);
    }
  }
  return r;
}

double det_sign_threshold(const Mat& J) {
  return 1e-8 * std::pow(J.norm(), static_cast<double>(J.rows()));
}

Mat fd_jacobian(const ObstructionField& f, const Vec& p, double h) {
  const int d = static_cast<int>(p.size());
  Mat J(d, d);
  for (int j = 0; j < d; ++j) {
    const Vec e = h * Vec::Unit(d, j);
    J.col(j) = (f(p + e) - f(p - e)) / (2.0 * h);
  }
  return J;
}

Vec sphere_vertex(int d, double theta, double phi) {
  Vec u = Vec::Zero(d);
  u(0) = std::sin(theta) * std::cos(phi);
  u(1) = std::sin(theta) * std::sin(phi);
  u(2) = std::cos(theta);
  return u;
}

}  // namespace

Vec eval_obstruction(const SphereFunction& K, const SpherePoint& P, double t,
                     const ObstructionQuadrature& quad) {
  if (!(t >= 1.0)) throw ConfigError("obstruction field needs t ≥ 1");
  if (!is_unit(P, 1e-10)) throw ConfigError("P must be a unit vector");
  if (!(quad.s_step > 0.0 && quad.s_max > 0.0)) throw ConfigError("invalid obstruction quadrature");
  const int n = static_cast<int>(P.size()) - 1;
  const Mat E = tangent_frame(P);
  const OmegaRule om = omega_rule(n, quad.angles);
  std::vector<Vec> dirs;
  for (const Vec& c : om.coeffs) dirs.push_back(E * c);
  const double L = std::log(t);
  const int steps = static_cast<int>(std::lround(2.0 * quad.s_max / quad.s_step));
  Vec V = Vec::Zero(n + 1);
  for (int j = 0; j <= steps; ++j) {
    const double s = -quad.s_max + j * quad.s_step;
    const double th = std::tanh(s), sh = 1.0 / std::cosh(s);
    const double th0 = std::tanh(s - L), sh0 = 1.0 / std::cosh(s - L);
    const double w = quad.s_step * std::pow(sh0, n);
    if (w < 1e-300) continue;
    double k_sum = 0.0;
    Vec k_omega = Vec::Zero(n + 1);
    for (std::size_t k = 0; k < dirs.size(); ++k) {
      const double Kv = om.w[k] * K(th * P + sh * dirs[k]);
      k_sum += Kv;
      k_omega += Kv * dirs[k];
    }
    V += w * (th0 * k_sum * P + sh0 * k_omega);
  }
  return V;
}

ObstructionField ObstructionField::from_curvature(const SphereFunction& K, int n, double t_star,
                                                  const ObstructionQuadrature& quad) {
  if (!(t_star > 1.0)) throw ConfigError("t* must exceed 1");
  ObstructionField f;
  f.n = n;
  f.radius = (t_star - 1.0) / t_star;
  f.eval = [K, n, quad](const Vec& p) {
    const double r = p.norm();
    if (r >= 1.0) throw ConfigError("ball point outside the unit ball");
    if (r == 0.0) return eval_obstruction(K, north_pole(n), 1.0, quad);
    return eval_obstruction(K, p / r, 1.0 / (1.0 - r), quad);
  };
  return f;
}

ObstructionField ObstructionField::synthetic(int n, double radius,
                                             std::function<Vec(const Vec&)> fn) {
  ObstructionField f;
  f.n = n;
  f.radius = radius;
  f.eval = std::move(fn);
  return f;
}

int kronecker_degree(const ObstructionField& field, int lat, int lon) {
  if (field.n != 2) throw ConfigError("the Kronecker integral is implemented for n = 2");
  if (lat < 2 || lon < 3) throw ConfigError("boundary triangulation too coarse");
  std::vector<Vec> img((lat + 1) * lon);
  parallel_for(0, (lat + 1) * lon, [&](int idx) {
    const int i = idx / lon, j = idx % lon;
    const Vec V = field(field.radius * sphere_vertex(3, kPi * i / lat, 2.0 * kPi * j / lon));
    const double nv = V.norm();
    if (!(nv > 0.0)) throw NumericalError("field vanishes on the boundary sphere");
    img[idx] = V / nv;
  });
  auto at = [&](int i, int j) -> const Vec& { return img[i * lon + (j % lon)]; };
  auto solid = [](const Vec& a, const Vec& b, const Vec& c) {
    const double num = a.dot(b.head<3>().cross(c.head<3>()));
    const double den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
    return 2.0 * std::atan2(num, den);
  };
  double total = 0.0;
  for (int i = 0; i < lat; ++i)
    for (int j = 0; j < lon; ++j) {
      total += solid(at(i, j), at(i + 1, j), at(i + 1, j + 1));
      total += solid(at(i, j), at(i + 1, j + 1), at(i, j + 1));
    }
  const double deg = total / (4.0 * kPi);
  const double rounded = std::round(deg);
  if (std::abs(deg - rounded) > 0.1)
    throw NumericalError("Kronecker sum " + std::to_string(deg) +
                         " is not near an integer; refine the boundary triangulation");
  return static_cast<int>(rounded);
}

DegreeReport brouwer_degree(const ObstructionField& field, const DegreeOptions& opts) {
  const int d = field.n + 1;
  const double rho = field.radius;
  if (!(rho > 0.0)) throw ConfigError("field radius must be positive");
  if (opts.seeds_per_axis < 1) throw ConfigError("seed lattice must be nonempty");
  DegreeReport rep;

  // Boundary margin on a latitude–longitude sample (n = 2) or a spiral (other n).
  std::vector<Vec> bpts;
  if (d == 3) {
    for (int i = 0; i <= opts.boundary_lat; ++i)
      for (int j = 0; j < opts.boundary_lon; ++j)
        bpts.push_back(rho * sphere_vertex(3, kPi * i / opts.boundary_lat,
                                           2.0 * kPi * j / opts.boundary_lon));
  } else {
    const int count = (opts.boundary_lat + 1) * opts.boundary_lon;
    for (int k = 0; k < count; ++k) {
      Vec u = Vec::Zero(d);
      for (int c = 0; c < d; ++c) u(c) = std::cos(2.39996 * k * (c + 1) + 0.5 * c);
      bpts.push_back(rho * u.normalized());
    }
  }
  std::vector<double> bnorm(bpts.size());
  parallel_for(0, static_cast<int>(bpts.size()), [&](int i) { bnorm[i] = field(bpts[i]).norm(); });
  rep.boundary_min_norm = *std::min_element(bnorm.begin(), bnorm.end());
  rep.boundary_max_norm = *std::max_element(bnorm.begin(), bnorm.end());
  if (!(rep.boundary_min_norm > 1e-14 * std::max(1.0, rep.boundary_max_norm)))
    throw NumericalError("obstruction field vanishes on the boundary sphere");
  const double tol = opts.newton_tol * rep.boundary_max_norm;

  std::vector<Vec> seeds;
  const int m = opts.seeds_per_axis;
  int total = 1;
  for (int c = 0; c < d; ++c) total *= m;
  for (int idx = 0; idx < total; ++idx) {
    Vec p(d);
    int rem = idx;
    for (int c = 0; c < d; ++c) {
      p(c) = -rho + (2.0 * (rem % m) + 1.0) * rho / m;
      rem /= m;
    }
    if (p.norm() < rho) seeds.push_back(p);
  }

  struct Found {
    bool ok = false;
    Vec p;
    double residual = 0.0;
  };
  std::vector<Found> found(seeds.size());
  const double h = 1e-6;
  parallel_for(0, static_cast<int>(seeds.size()), [&](int s) {
    Vec p = seeds[s];
    Vec V = field(p);
    for (int it = 0; it < opts.newton_iters; ++it) {
      if (V.norm() <= tol) {
        found[s] = {true, p, V.norm()};
        return;
      }
      const Mat J = fd_jacobian(field, p, h);
      const Eigen::FullPivLU<Mat> lu(J);
      if (!lu.isInvertible()) return;
      const Vec dp = -lu.solve(V);
      double a = 1.0;
      bool moved = false;
      for (int bt = 0; bt < 30; ++bt, a *= 0.5) {
        const Vec q = p + a * dp;
        if (q.norm() >= rho * (1.0 - 1e-12)) continue;
        const Vec Vq = field(q);
        if (Vq.norm() < V.norm()) {
          p = q;
          V = Vq;
          moved = true;
          break;
        }
      }
      if (!moved) return;
    }
    if (V.norm() <= tol) found[s] = {true, p, V.norm()};
  });

  for (const Found& f : found) {
    if (!f.ok) continue;
    const Mat J = fd_jacobian(field, f.p, h);
    const double det = J.determinant();
    const int sign = std::abs(det) <= det_sign_threshold(J) ? 0 : (det > 0 ? 1 : -1);
    bool merged = false;
    for (auto& z : rep.zeros)
      if ((z.p - f.p).norm() <= opts.merge_tol) {
        merged = true;
        if (z.sign != sign) rep.degenerate = true;
        break;
      }
    if (merged) continue;
    rep.zeros.push_back({f.p, sign, f.residual});
    if (sign == 0) rep.degenerate = true;
  }
  if (rep.degenerate) {
    rep.note = "singular or sign-inconsistent Jacobian at a zero; degree withheld";
  } else {
    int deg = 0;
    for (const auto& z : rep.zeros) deg += z.sign;
    rep.degree = deg;
  }
  if (opts.kronecker && field.n == 2) {
    rep.kronecker_degree = kronecker_degree(field, opts.boundary_lat, opts.boundary_lon);
    if (rep.degree && *rep.degree != *rep.kronecker_degree)
      rep.note = "signed-zeros and Kronecker degrees disagree";
  }
  return rep;
}

int index_formula(const CurvatureSpec& spec) {
  if (spec.critical_points.empty()) throw ConfigError("index formula needs declared critical points");
  const int n = static_cast<int>(spec.critical_points.front().q0.size()) - 1;
  int sum = 0;
  for (const auto& m : spec.critical_points) {
    if (!m.is_canonical() || m.a.size() != n)
      throw ConfigError("index formula needs a canonical model at every critical point");
    int neg = 0;
    for (int j = 0; j < n; ++j) {
      if (m.a(j) == 0.0) throw ConfigError("index formula needs nonzero coefficients");
      if (m.a(j) < 0.0) ++neg;
    }
    const double s = m.a.sum();
    if (s == 0.0) throw ConfigError("index formula needs Σa_j ≠ 0");
    if (s < 0.0) sum += (neg % 2 == 0) ? 1 : -1;
  }
  return -1 + ((n % 2 == 0) ? sum : -sum);
}

std::vector<SweepRow> degree_sweep(const SphereFunction& K, int n, const std::vector<double>& ts,
                                   const DegreeOptions& opts, const ObstructionQuadrature& quad) {
  std::vector<SweepRow> rows;
  for (double t : ts) {
    const auto field = ObstructionField::from_curvature(K, n, t, quad);
    const DegreeReport r = brouwer_degree(field, opts);
    rows.push_back({t, r.boundary_min_norm, r.degree, r.kronecker_degree,
                    static_cast<int>(r.zeros.size())});
  }
  return rows;
}

CompactnessReport compactness_certificate(const CurvatureSpec& spec, const ProblemParams& params,
                                          const FlatnessOptions& opts) {
  CompactnessReport rep;
  rep.classification = classify_Kminus(spec, params, opts);
  int members = 0;
  for (const auto& e : rep.classification) members += e.member ? 1 : 0;
  if (members <= 1) {
    rep.branch = CompactnessBranch::AtMostOneMember;
    return rep;
  }
  rep.M = build_matrix_M(spec, rep.classification, params, opts);
  rep.pairs = pair_criterion(rep.M->entries);
  bool all = true;
  for (const auto& pr : rep.pairs) {
    if (pr.holds) continue;
    all = false;
    Mat sub(2, 2);
    sub << rep.M->entries(pr.i, pr.i), rep.M->entries(pr.i, pr.j), rep.M->entries(pr.j, pr.i),
        rep.M->entries(pr.j, pr.j);
    if (kernel_positive_vector(sub)) rep.kernel_pairs.push_back(pr);
  }
  rep.branch = all ? CompactnessBranch::PairCriterion : CompactnessBranch::Neither;
  rep.kernel_vector = kernel_positive_vector(rep.M->entries);
  return rep;
}

std::string to_string(CompactnessBranch b) {
  switch (b) {
    case CompactnessBranch::AtMostOneMember: return "at-most-one-member";
    case CompactnessBranch::PairCriterion: return "pair-criterion";
    case CompactnessBranch::Neither: return "neither";
  }
  return "unknown";
}

}  // namespace fqc
