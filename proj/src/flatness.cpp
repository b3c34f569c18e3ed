#include "fqc/flatness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "fqc/quadrature.hpp"

namespace fqc {
namespace {

using Integrand = std::function<Vec(const Vec& z)>;

struct AngularNode {
  Vec dir;
  double w;
};

// Angular rule on S^{n−1} split into coordinate orthants, Sidi-graded toward the
// orthant edges where |z_j|^β loses smoothness.
std::vector<AngularNode> orthant_rule(int n, int per_edge) {
  std::vector<AngularNode> out;
  if (n == 2) {
    const Rule1D r = sidi_gauss_legendre(per_edge, 0.0, 0.5 * kPi);
    for (int q = 0; q < 4; ++q)
      for (std::size_t i = 0; i < r.size(); ++i) {
        const double a = q * 0.5 * kPi + r.x[i];
        Vec d(2);
        d << std::cos(a), std::sin(a);
        out.push_back({d, r.w[i]});
      }
    return out;
  }
  if (n != 3) throw ConfigError("flatness integrals are implemented for n = 2, 3");
  const Rule1D th = sidi_gauss_legendre(per_edge, 0.0, 0.5 * kPi);
  const Rule1D ph = sidi_gauss_legendre(per_edge, 0.0, 0.5 * kPi);
  for (int sz : {1, -1})
    for (int q = 0; q < 4; ++q)
      for (std::size_t i = 0; i < th.size(); ++i)
        for (std::size_t j = 0; j < ph.size(); ++j) {
          const double t = th.x[i], p = q * 0.5 * kPi + ph.x[j];
          Vec d(3);
          d << std::sin(t) * std::cos(p), std::sin(t) * std::sin(p), sz * std::cos(t);
          out.push_back({d, th.w[i] * ph.w[j] * std::sin(t)});
        }
  return out;
}

// ∫_{R^n} Φ(z) dz in polar coordinates about z = 0 with r = tan s. The integrand
// behaves like s^a near s = 0 and (π/2 − s)^b near s = π/2; Gauss–Jacobi absorbs both.
Vec polar_integral(const Integrand& phi, int n, int dim, double a, double b, int radial,
                   int angular) {
  const Rule1D rs = gauss_jacobi(radial, b, a, 0.0, 0.5 * kPi);
  const auto ang = orthant_rule(n, angular);
  Vec total = Vec::Zero(dim);
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const double s = rs.x[i], r = std::tan(s), c = std::cos(s);
    const double jac = std::pow(r, n - 1) / (c * c) / (std::pow(s, a) * std::pow(0.5 * kPi - s, b));
    Vec acc = Vec::Zero(dim);
    for (const auto& node : ang) acc += node.w * phi(r * node.dir);
    total += rs.w[i] * jac * acc;
  }
  return total;
}

struct Estimate {
  Vec value;
  double error;
};

Estimate estimated(const Integrand& phi, int n, int dim, double a, double b,
                   const FlatnessOptions& opts) {
  if (opts.radial < 4 || opts.angular < 2 || opts.max_refinements < 0)
    throw ConfigError("flatness quadrature too small");
  int radial = opts.radial, angular = opts.angular;
  Vec coarse = polar_integral(phi, n, dim, a, b, radial, angular);
  double err = INFINITY;
  for (int level = 0; level <= opts.max_refinements; ++level) {
    radial *= 2;
    angular *= 2;
    const Vec fine = polar_integral(phi, n, dim, a, b, radial, angular);
    err = (fine - coarse).cwiseAbs().maxCoeff();
    if (err <= opts.tol) return {fine, err};
    coarse = fine;
  }
  throw NumericalError("flatness integral did not reach tolerance (estimate " +
                       std::to_string(err) + ")");
}

void check_args(const LocalModel& model, const Vec& xi, const ProblemParams& params) {
  const int n = params.n;
  if (xi.size() != n) throw ConfigError("shift ξ must have n components");
  if (!(model.beta > 0.0 && model.beta < n))
    throw ConfigError("flatness order must satisfy 0 < β < n for the integrals to converge");
}

double weight(const Vec& y, int n) { return std::pow(1.0 + y.squaredNorm(), -n); }

}  // namespace

VectorIntegral q_gradient_integral(const LocalModel& model, const Vec& xi,
                                   const ProblemParams& params, const FlatnessOptions& opts) {
  check_args(model, xi, params);
  const int n = params.n;
  const double beta = model.beta;
  auto phi = [&](const Vec& z) { return (model.gradQ(z) * weight(z - xi, n)).eval(); };
  const Estimate e = estimated(phi, n, n, n + beta - 2.0, n - beta, opts);
  return {e.value, e.error};
}

ScalarIntegral q_radial_integral(const LocalModel& model, const Vec& xi,
                                 const ProblemParams& params, const FlatnessOptions& opts) {
  check_args(model, xi, params);
  const int n = params.n;
  const double beta = model.beta;
  auto phi = [&](const Vec& z) {
    Vec out(1);
    out(0) = (z - xi).dot(model.gradQ(z)) * weight(z - xi, n);
    return out;
  };
  const Estimate e = estimated(phi, n, 1, n + beta - 2.0, n - beta - 1.0, opts);
  return {e.value(0), e.error};
}

ScalarIntegral q_value_integral(const LocalModel& model, const Vec& xi,
                                const ProblemParams& params, bool conformal,
                                const FlatnessOptions& opts) {
  check_args(model, xi, params);
  const int n = params.n;
  const double beta = model.beta;
  auto phi = [&](const Vec& z) {
    const Vec y = z - xi;
    double w = weight(y, n);
    if (conformal) w *= (1.0 - y.squaredNorm()) / (1.0 + y.squaredNorm());
    Vec out(1);
    out(0) = model.Q(z) * w;
    return out;
  };
  const Estimate e = estimated(phi, n, 1, n + beta - 1.0, n - beta - 1.0, opts);
  return {e.value(0), e.error};
}

ModelCheck check_model(const LocalModel& model, int samples) {
  const int n = static_cast<int>(model.q0.size()) - 1;
  ModelCheck mc;
  mc.grad_lower = INFINITY;
  for (int k = 0; k < samples; ++k) {
    Vec y(n);
    if (n == 2) {
      const double a = 2.0 * kPi * (k + 0.37) / samples;
      y << std::cos(a), std::sin(a);
    } else {
      const double z = 1.0 - 2.0 * (k + 0.5) / samples;
      const double a = k * kPi * (3.0 - std::sqrt(5.0));
      const double s = std::sqrt(1.0 - z * z);
      y = Vec::Zero(n);
      y(0) = s * std::cos(a);
      y(1) = s * std::sin(a);
      y(2) = z;
    }
    const double q1 = model.Q(y);
    for (double lam : {0.5, 2.0})
      mc.homogeneity_error =
          std::max(mc.homogeneity_error, std::abs(model.Q(lam * y) - std::pow(lam, model.beta) * q1));
    const double g = model.gradQ(y).norm();
    mc.grad_lower = std::min(mc.grad_lower, g);
    mc.grad_upper = std::max(mc.grad_upper, g);
  }
  return mc;
}

HypothesisReport check_q_hypotheses(const LocalModel& model, const ProblemParams& params,
                                    double extent, int per_axis, const FlatnessOptions& opts) {
  const int n = params.n;
  if (per_axis < 1) throw ConfigError("ξ-grid needs at least one point per axis");
  HypothesisReport rep;
  rep.q2_min = rep.q3_min = INFINITY;
  int total = 1;
  for (int j = 0; j < n; ++j) total *= per_axis;
  for (int idx = 0; idx < total; ++idx) {
    Vec xi(n);
    int rem = idx;
    for (int j = 0; j < n; ++j) {
      const int k = rem % per_axis;
      rem /= per_axis;
      xi(j) = per_axis == 1 ? 0.0 : -extent + 2.0 * extent * k / (per_axis - 1);
    }
    const double g = q_gradient_integral(model, xi, params, opts).value.norm();
    const double v2 = std::abs(q_value_integral(model, xi, params, true, opts).value);
    const double v3 = std::abs(q_value_integral(model, xi, params, false, opts).value);
    rep.q2_min = std::min(rep.q2_min, std::max(g, v2));
    rep.q3_min = std::min(rep.q3_min, std::max(g, v3));
  }
  rep.q2_flagged = rep.q2_min < 1e-6;
  rep.q3_flagged = rep.q3_min < 1e-6;
  return rep;
}

std::vector<KminusEntry> classify_Kminus(const CurvatureSpec& spec, const ProblemParams& params,
                                         const FlatnessOptions& opts) {
  const int n = params.n;
  const double crit = n - 2.0 * params.sigma;
  std::vector<KminusEntry> out;
  for (std::size_t k = 0; k < spec.critical_points.size(); ++k) {
    const LocalModel& model = spec.critical_points[k];
    if (std::abs(model.beta - crit) > 1e-12) continue;
    KminusEntry e;
    e.model = static_cast<int>(k);
    e.q0 = model.q0;
    Vec eta = Vec::Zero(n);
    auto G = [&](const Vec& x) { return q_gradient_integral(model, x, params, opts).value; };
    Vec g = G(eta);
    const double h = 1e-4;
    for (int it = 0; it < 40 && !e.converged; ++it) {
      if (g.norm() <= 1e-9) {
        e.converged = true;
        break;
      }
      Mat J(n, n);
      for (int j = 0; j < n; ++j) {
        const Vec d = h * Vec::Unit(n, j);
        J.col(j) = (G(eta + d) - G(eta - d)) / (2.0 * h);
      }
      const Eigen::FullPivLU<Mat> lu(J);
      if (!lu.isInvertible()) {
        e.note = "singular Jacobian in the η search";
        break;
      }
      eta -= lu.solve(g);
      if (eta.norm() > 5.0) {
        e.note = "η search left the trust region |η| ≤ 5";
        break;
      }
      g = G(eta);
    }
    if (!e.converged && e.note.empty()) e.note = "η search did not converge";
    e.eta = eta;
    if (e.converged) {
      const ScalarIntegral rad = q_radial_integral(model, eta, params, opts);
      e.radial_value = rad.value;
      // A value inside its own error estimate has no reliable sign.
      const double floor = std::max(rad.error, 1e-14 * model.a.cwiseAbs().sum());
      e.member = rad.value < -floor;
      if (std::abs(rad.value) <= floor) e.note = "radial integral vanishes within its error estimate";
    }
    out.push_back(e);
  }
  return out;
}

double green_function(const SpherePoint& q, const SpherePoint& x, const ProblemParams& params) {
  const double c = 1.0 - std::cos(geodesic_distance(q, x));
  if (!(c > 0.0)) throw NumericalError("Green's function evaluated at its pole");
  return std::pow(1.0 / c, params.conformal_weight());
}

double matrix_M_offdiag(const SpherePoint& qi, const SpherePoint& qj, double Ki, double Kj,
                        const ProblemParams& params) {
  const double n = params.n, s = params.sigma;
  const double pref = std::pow(2.0, (n - 2.0 * s) / 2.0) * (n - 2.0 * s) * (n - 2.0 * s) / (4.0 * n);
  const double vol = std::pow(kPi, n / 2.0) / std::tgamma(s + n / 2.0);
  return -pref * vol * green_function(qi, qj, params) / std::sqrt(Ki * Kj);
}

MatrixM build_matrix_M(const CurvatureSpec& spec, const std::vector<KminusEntry>& members,
                       const ProblemParams& params, const FlatnessOptions& opts) {
  MatrixM M;
  std::vector<const KminusEntry*> use;
  for (const auto& e : members)
    if (e.member) use.push_back(&e);
  if (use.size() < 2) throw ConfigError("matrix M needs at least two members");
  const int k = static_cast<int>(use.size());
  const double s = params.sigma;
  M.entries = Mat::Zero(k, k);
  std::vector<double> Kq(k);
  for (int i = 0; i < k; ++i) {
    M.points.push_back(use[i]->q0);
    M.etas.push_back(use[i]->eta);
    Kq[i] = spec.global(use[i]->q0);
    if (!(Kq[i] > 0.0)) throw ConfigError("K must be positive at the members");
  }
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < i; ++j)
      if (geodesic_distance(M.points[i], M.points[j]) < 1e-12)
        throw ConfigError("coincident points in matrix M");
  for (int i = 0; i < k; ++i) {
    const LocalModel& model = spec.critical_points[use[i]->model];
    const double rad = q_radial_integral(model, use[i]->eta, params, opts).value;
    M.entries(i, i) = -std::pow(Kq[i], -(1.0 + s) / s) * rad;
    for (int j = 0; j < i; ++j)
      M.entries(i, j) = M.entries(j, i) =
          matrix_M_offdiag(M.points[i], M.points[j], Kq[i], Kq[j], params);
  }
  return M;
}

std::vector<PairResult> pair_criterion(const Mat& M) {
  if (M.rows() != M.cols()) throw ConfigError("matrix M must be square");
  std::vector<PairResult> out;
  for (int i = 0; i < M.rows(); ++i)
    for (int j = i + 1; j < M.cols(); ++j)
      out.push_back({i, j, M(i, i) * M(j, j) < M(i, j) * M(i, j)});
  return out;
}

std::optional<Vec> kernel_positive_vector(const Mat& M, double tol) {
  if (M.rows() != M.cols() || M.rows() == 0) throw ConfigError("matrix M must be square");
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, M.cwiseAbs().maxCoeff()))
    throw ConfigError("matrix M must be symmetric");
  const int k = static_cast<int>(M.rows());
  if (k > 16) throw ConfigError("kernel search supports at most 16 points");
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
  const Vec sv = svd.singularValues();
  const double cut = tol * std::max(1.0, sv(0));
  std::vector<int> cols;
  for (int i = 0; i < k; ++i)
    if (sv(i) <= cut) cols.push_back(i);
  if (cols.empty()) return std::nullopt;
  const int d = static_cast<int>(cols.size());
  Mat N(k, d);
  for (int j = 0; j < d; ++j) N.col(j) = svd.matrixV().col(cols[j]);

  // A kernel vector Nc is strictly positive iff 0 lies outside the convex hull of
  // the rows of N; the min-norm point c of that hull then gives r_i·c ≥ |c|² > 0.
  // The hull is small, so every face is tried.
  Vec best;
  double best_norm = INFINITY;
  for (int mask = 1; mask < (1 << k); ++mask) {
    std::vector<int> S;
    for (int i = 0; i < k; ++i)
      if (mask & (1 << i)) S.push_back(i);
    const int m = static_cast<int>(S.size());
    Mat A = Mat::Zero(m + 1, m + 1);
    Vec rhs = Vec::Zero(m + 1);
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) A(a, b) = N.row(S[a]).dot(N.row(S[b]));
      A(a, m) = A(m, a) = 1.0;
    }
    rhs(m) = 1.0;
    const Vec sol = A.completeOrthogonalDecomposition().solve(rhs);
    bool ok = std::abs(sol.head(m).sum() - 1.0) < 1e-9;
    for (int a = 0; a < m && ok; ++a) ok = sol(a) >= -1e-12;
    if (!ok) continue;
    Vec c = Vec::Zero(d);
    for (int a = 0; a < m; ++a) c += sol(a) * N.row(S[a]).transpose();
    const double c2 = c.squaredNorm();
    for (int i = 0; i < k && ok; ++i) ok = N.row(i).dot(c) >= c2 - 1e-12;
    if (ok && c.norm() < best_norm) {
      best_norm = c.norm();
      best = c;
    }
  }
  if (!(best_norm > 1e-9)) return std::nullopt;
  Vec lambda = N * best;
  lambda.normalize();
  if (lambda.minCoeff() <= 1e-12) return std::nullopt;
  return lambda;
}

}  // namespace fqc
