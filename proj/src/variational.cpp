#include "fqc/variational.hpp"

#include <cmath>

namespace fqc {
namespace {

Vec pow_field(const Vec& v, double e) {
  Vec out(v.size());
  for (int i = 0; i < v.size(); ++i) {
    if (!(v(i) > 0.0)) throw NumericalError("field must be positive for the nonlinear term");
    out(i) = std::pow(v(i), e);
  }
  return out;
}

// Columns (1, x_1, …, x_{n+1}) at the grid nodes.
Mat affine_basis(const QuadratureGrid& g) {
  Mat e(g.size(), g.n + 2);
  e.col(0).setOnes();
  e.rightCols(g.n + 1) = g.nodes;
  return e;
}

GridField apply_P(const GridField& v, const ProblemParams& params, const HarmonicTransform& T) {
  return T.synthesize(apply_Psigma(T.analyze(v), params));
}

// Averaged integrals ⨍ (a ∘ b) for field columns.
double avg(const QuadratureGrid& g, const Vec& f, double omega) { return g.weights.dot(f) / omega; }

}  // namespace

double energy_EK(const GridField& v, const GridField& K, const ProblemParams& params,
                 const HarmonicTransform& T) {
  const double q = params.sobolev_exponent();
  const double num = psigma_inner(T, v, v, params) / params.omega_n;
  Vec vq(v.size());
  for (int i = 0; i < v.size(); ++i) vq(i) = std::pow(std::abs(v.values(i)), q);
  const double den = avg(*v.grid, K.values.cwiseProduct(vq), params.omega_n);
  if (!(den > 0.0)) throw NumericalError("energy denominator is not positive");
  return num / std::pow(den, 2.0 / q);
}

double energy_variation(const GridField& v, const GridField& K, const GridField& h,
                        const ProblemParams& params, const HarmonicTransform& T) {
  const auto& g = *v.grid;
  const double q = params.sobolev_exponent(), r = 2.0 / q, om = params.omega_n;
  const Vec vq1 = pow_field(v.values, q - 1.0);
  const GridField Pv = apply_P(v, params, T);
  const double A = avg(g, v.values.cwiseProduct(Pv.values), om);
  const double B = avg(g, K.values.cwiseProduct(vq1).cwiseProduct(v.values), om);
  const Vec grad = (2.0 / std::pow(B, r)) * Pv.values -
                   (r * q * A / std::pow(B, r + 1.0)) * K.values.cwiseProduct(vq1);
  return avg(g, grad.cwiseProduct(h.values), om);
}

BecknerSides beckner_check(const GridField& v, const ProblemParams& params,
                           const HarmonicTransform& T) {
  const double q = params.sobolev_exponent();
  Vec vq(v.size());
  for (int i = 0; i < v.size(); ++i) vq(i) = std::pow(std::abs(v.values(i)), q);
  BecknerSides s;
  s.lhs = std::pow(avg(*v.grid, vq, params.omega_n), 2.0 / q);
  s.rhs = psigma_inner(T, v, v, params) / params.omega_n / params.c_intertwine;
  return s;
}

ConstraintState project_to_S0(const GridField& w_tilde, const ProblemParams& params, double mu0,
                              const Vec& eta0) {
  const auto& g = *w_tilde.grid;
  const double q = params.sobolev_exponent();
  const double om = params.omega_n;
  const Mat e = affine_basis(g);
  Vec z = Vec::Zero(g.n + 2);
  z(0) = mu0;
  if (eta0.size() == g.n + 1) z.tail(g.n + 1) = eta0;
  ConstraintState st;
  Vec w;
  Vec F(g.n + 2);
  for (int it = 0; it < 60; ++it) {
    w = Vec::Ones(g.size()) + e * z + w_tilde.values;
    const Vec wq1 = pow_field(w, q - 1.0);
    const Vec wq = wq1.cwiseProduct(w);
    F(0) = avg(g, wq, om) - 1.0;
    for (int i = 0; i <= g.n; ++i) F(i + 1) = avg(g, g.nodes.col(i).cwiseProduct(wq), om);
    st.iterations = it;
    if (F.cwiseAbs().maxCoeff() < 1e-14) break;
    // F_a = ⨍ w^q e_a − δ_a0, so J_ab = q ⨍ w^{q−1} e_a e_b.
    const Mat J = q * (e.transpose() * (g.weights.cwiseProduct(wq1)).asDiagonal() * e) / om;
    const Vec dz = J.ldlt().solve(-F);
    z += dz;
    if (!z.allFinite() || z.norm() > 10.0)
      throw NumericalError("constraint projection diverged (input too far from 1)");
  }
  if (F.cwiseAbs().maxCoeff() > 1e-9)
    throw NumericalError("constraint projection did not converge");
  st.w = GridField(w_tilde.grid, w);
  st.mu = z(0);
  st.eta = z.tail(g.n + 1);
  st.norm_defect = std::abs(F(0));
  st.moment_defect = F.tail(g.n + 1);
  return st;
}

Vec kazdan_warner_defect(const GridField& v, const SphereFunction& K, const ProblemParams& params) {
  const auto& g = *v.grid;
  const double q = params.sobolev_exponent();
  Vec d = Vec::Zero(g.n + 1);
  for (int j = 0; j < g.size(); ++j) {
    const SpherePoint x = g.node(j);
    d += g.weights(j) * std::pow(std::abs(v.values(j)), q) * K.tangential_gradient(x);
  }
  return d;
}

MultiplierReport lagrange_multipliers(const GridField& w, const SphereFunction& K,
                                      const ProblemParams& params, const HarmonicTransform& T) {
  const auto& g = *w.grid;
  const double q = params.sobolev_exponent();
  const double om = params.omega_n;
  const Vec wq1 = pow_field(w.values, q - 1.0);
  const Vec wq = wq1.cwiseProduct(w.values);
  const GridField Pw = apply_P(w, params, T);
  const Vec Kv = sample(w.grid, K).values;

  // Gram matrix ∫ (δ_ij − x_i x_j) w^q.
  Mat G = Mat::Zero(g.n + 1, g.n + 1);
  for (int j = 0; j < g.size(); ++j) {
    const Vec x = g.node(j);
    G += g.weights(j) * wq(j) * (Mat::Identity(g.n + 1, g.n + 1) - x * x.transpose());
  }
  const Vec d = kazdan_warner_defect(w, K, params);
  const Eigen::FullPivLU<Mat> lu(G);
  if (lu.rank() < g.n + 1) throw NumericalError("singular Gram matrix in multiplier solve");
  const Vec Gd = lu.solve(d);  // Λ = λ·G⁻¹d

  const double A = avg(g, w.values.cwiseProduct(Pw.values), om);
  const double BK = avg(g, Kv.cwiseProduct(wq), om);
  Vec xm(g.n + 1);
  for (int i = 0; i <= g.n; ++i) xm(i) = avg(g, g.nodes.col(i).cwiseProduct(wq), om);
  const double den = BK - xm.dot(Gd);
  if (std::abs(den) < 1e-300) throw NumericalError("degenerate multiplier system");

  MultiplierReport r;
  r.lambda_p = A / den;
  r.Lambda_p = r.lambda_p * Gd;
  const Vec coef = r.lambda_p * Kv - g.nodes * r.Lambda_p;
  // w^{(n+2σ)/(n−2σ)} = w^{q−1}.
  const Vec rr = Pw.values - coef.cwiseProduct(wq1);
  r.euler_lagrange_residual = std::sqrt(avg(g, rr.cwiseAbs2(), om));
  return r;
}

double distance_to_constants(const GridField& K, double s) {
  const auto& g = *K.grid;
  auto cost = [&](double c) {
    double t = 0.0;
    for (int i = 0; i < g.size(); ++i) t += g.weights(i) * std::pow(std::abs(K.values(i) - c), s);
    return t;
  };
  double a = K.values.minCoeff(), b = K.values.maxCoeff();
  if (b - a == 0.0) return 0.0;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = cost(c), fd = cost(d);
  for (int it = 0; it < 200 && b - a > 1e-14 * (1.0 + std::abs(a)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = cost(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = cost(d);
    }
  }
  return std::pow(cost(0.5 * (a + b)), 1.0 / s);
}

namespace {

struct Landscape {
  const ProblemParams& params;
  const QuadratureGrid& g;
  Mat basis;              // nodes × dim, orthonormal harmonics of degrees 2..L
  std::vector<int> degree;
  Vec K;
  Mat e;
  double q, r, om;

  struct Point {
    Vec c, w, grad;
    double mu = 0.0;
    Vec eta;
    double E = 0.0;
  };

  Point eval(const Vec& c, const Point* warm, const GridPtr& grid) const {
    Point p;
    p.c = c;
    const GridField wt(grid, basis * c);
    const ConstraintState st = warm ? project_to_S0(wt, params, warm->mu, warm->eta)
                                    : project_to_S0(wt, params);
    p.w = st.w.values;
    p.mu = st.mu;
    p.eta = st.eta;
    // P_σ w is exact: the pieces are harmonics of known degree.
    Vec lc(c.size());
    for (int k = 0; k < c.size(); ++k) lc(k) = eigenvalue(degree[k], params) * c(k);
    const Vec Pw = Vec::Constant(g.size(), params.c_intertwine * (1.0 + p.mu)) +
                   eigenvalue(1, params) * (g.nodes * p.eta) + basis * lc;
    const Vec wq1 = pow_field(p.w, q - 1.0);
    const double A = g.weights.dot(p.w.cwiseProduct(Pw)) / om;
    const double B = g.weights.dot(K.cwiseProduct(wq1).cwiseProduct(p.w)) / om;
    p.E = A / std::pow(B, r);
    const Vec grad_w = (2.0 / std::pow(B, r)) * Pw -
                       (r * q * A / std::pow(B, r + 1.0)) * K.cwiseProduct(wq1);
    // Remove the part absorbed by the constraint directions (1, x).
    const Mat Mc = e.transpose() * (g.weights.cwiseProduct(wq1)).asDiagonal() * e / om;
    const Vec ge = e.transpose() * g.weights.cwiseProduct(grad_w) / om;
    const Vec gam = Mc.ldlt().solve(ge);
    const Vec red = grad_w - wq1.cwiseProduct(e * gam);
    p.grad = basis.transpose() * g.weights.cwiseProduct(red) / om;
    return p;
  }
};

}  // namespace

MinimizeResult minimize_EK_near_1(const SphereFunction& Kf, const ProblemParams& params,
                                  const HarmonicTransform& T, const MinimizeOptions& opts) {
  const GridPtr& grid = T.grid();
  const auto& g = *grid;
  if (opts.opt_degree > T.max_degree() || opts.opt_degree < 2)
    throw ConfigError("optimization degree must lie in [2, transform degree]");
  const GridField Kg = sample(grid, Kf);
  if ((Kg.values.array() - 1.0).abs().maxCoeff() > opts.trust_K)
    throw ConfigError("K is outside the trust region around 1");

  Landscape L{params, g, Mat(), {}, Kg.values, affine_basis(g), params.sobolev_exponent(),
              2.0 / params.sobolev_exponent(), params.omega_n};
  std::vector<int> idx;
  const int total = SpectralField::count(g.n, opts.opt_degree);
  SpectralField unit;
  unit.n = g.n;
  unit.max_degree = opts.opt_degree;
  for (int i = 0; i < total; ++i) {
    unit.coeffs = Vec::Zero(total);
    unit.coeffs(i) = 1.0;
    const int deg = unit.degree_of(i);
    if (deg < 2) continue;
    idx.push_back(i);
    L.degree.push_back(deg);
  }
  L.basis.resize(g.size(), idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) {
    unit.coeffs = Vec::Zero(total);
    unit.coeffs(idx[k]) = 1.0;
    L.basis.col(k) = T.synthesize(unit).values;
  }
  const int dim = static_cast<int>(idx.size());
  Vec precond(dim);
  for (int k = 0; k < dim; ++k) precond(k) = params.omega_n / (2.0 * eigenvalue(L.degree[k], params));

  auto check_trust = [&](const Landscape::Point& p) {
    if ((p.w.array() - 1.0).abs().maxCoeff() > opts.trust_w)
      throw NumericalError("minimizer escaped the trust region around 1");
  };

  Landscape::Point cur = L.eval(Vec::Zero(dim), nullptr, grid);
  MinimizeResult res;
  int it = 0;
  for (; it < opts.max_iters; ++it) {
    const Vec dir = -precond.cwiseProduct(cur.grad);
    const double slope = cur.grad.dot(dir);
    if (std::sqrt(-slope) < opts.grad_tol) break;
    double alpha = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      Landscape::Point trial = L.eval(cur.c + alpha * dir, &cur, grid);
      if (trial.E <= cur.E + 1e-4 * alpha * slope) {
        cur = std::move(trial);
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    check_trust(cur);
    if (!accepted) break;  // no further decrease at machine precision
  }
  res.iterations = it;

  // Finite-difference Hessian of the reduced gradient.
  auto hessian = [&](const Landscape::Point& p) {
    Mat H(dim, dim);
    const double h = 1e-5;
    for (int k = 0; k < dim; ++k) {
      Vec cp = p.c, cm = p.c;
      cp(k) += h;
      cm(k) -= h;
      H.col(k) = (L.eval(cp, &p, grid).grad - L.eval(cm, &p, grid).grad) / (2.0 * h);
    }
    return Mat(0.5 * (H + H.transpose()));
  };
  Mat H;
  for (int s = 0; s < opts.newton_steps; ++s) {
    H = hessian(cur);
    const Vec step = H.ldlt().solve(-cur.grad);
    Landscape::Point trial = L.eval(cur.c + step, &cur, grid);
    if (trial.grad.norm() < cur.grad.norm()) cur = std::move(trial);
    check_trust(cur);
  }
  if (H.size() == 0) H = hessian(cur);

  Vec D(dim);
  for (int k = 0; k < dim; ++k) D(k) = eigenvalue(L.degree[k], params) / params.omega_n;
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> ges(H, Mat(D.asDiagonal()));
  res.coercivity = dim > 0 ? ges.eigenvalues().minCoeff() : 0.0;

  res.w = GridField(grid, cur.w);
  res.energy = cur.E;
  res.coeffs = cur.c;
  res.gradient_norm = cur.grad.norm();
  res.report = lagrange_multipliers(res.w, Kf, params, T);
  res.distance_sup = (cur.w.array() - 1.0).abs().maxCoeff();
  res.K_distance = distance_to_constants(Kg, 2.0 * params.n / (params.n + 2.0 * params.sigma));
  res.ratio = res.K_distance > 0.0 ? res.distance_sup / res.K_distance : 0.0;
  return res;
}

}  // namespace fqc
