#include "fqc/riesz.hpp"

#include <cmath>

#include "fqc/parallel.hpp"
#include "fqc/quadrature.hpp"

namespace fqc {
namespace {

// Zonal reproducing-kernel prefactors: Z_ℓ(u) = zonal_scale(ℓ)·G_ℓ(u) with
// G = P_ℓ (n = 2) or U_ℓ (n = 3).
double zonal_scale(int n, int l) {
  return n == 2 ? (2.0 * l + 1.0) / (4.0 * kPi) : (l + 1.0) / (2.0 * kPi * kPi);
}

double g_at_one(int n, int l) { return n == 2 ? 1.0 : l + 1.0; }

// G_0..G_L at u.
void gegenbauer_row(int n, int L, double u, double* g) {
  g[0] = 1.0;
  if (L == 0) return;
  g[1] = n == 2 ? u : 2.0 * u;
  for (int l = 2; l <= L; ++l) {
    if (n == 2)
      g[l] = ((2.0 * l - 1.0) * u * g[l - 1] - (l - 1.0) * g[l - 2]) / l;
    else
      g[l] = 2.0 * u * g[l - 1] - g[l - 2];
  }
}

// ∫ over a geodesic cap of radius ρ of |ξ−ζ|^{2σ−n}.
double cap_integral(double rho, const ProblemParams& p) {
  const double e = 2.0 * p.sigma - p.n;
  const Rule1D r = gauss_jacobi(24, 0.0, 2.0 * p.sigma - 1.0, 0.0, rho);
  const double area = sphere_volume(p.n - 1);
  double s = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double th = r.x[i];
    const double c = 2.0 * std::sin(0.5 * th) / th;
    const double sn = std::sin(th) / th;
    s += r.w[i] * std::pow(c, e) * std::pow(sn, p.n - 1);
  }
  return area * s;
}

// Geodesic radius of a cap with the given area.
double cap_radius(double area, int n) {
  const double w = sphere_volume(n - 1);
  double rho = std::pow(area / w * n, 1.0 / n);
  for (int it = 0; it < 60; ++it) {
    const Rule1D r = gauss_legendre(16, 0.0, rho);
    double a = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) a += r.w[i] * std::pow(std::sin(r.x[i]), n - 1);
    const double f = w * a - area;
    const double df = w * std::pow(std::sin(rho), n - 1);
    const double step = f / df;
    rho -= step;
    if (std::abs(step) < 1e-15) break;
  }
  return rho;
}

}  // namespace

Vec riesz_kernel_coefficients(const ProblemParams& params, int max_degree) {
  const int n = params.n;
  const double alpha = params.sigma - 1.0;
  const double beta = 0.5 * (n - 2);
  const Rule1D r = gauss_jacobi(max_degree / 2 + 4, alpha, beta);
  const double pref = sphere_volume(n - 1) * std::pow(2.0, params.sigma - 0.5 * n);
  Vec mu = Vec::Zero(max_degree + 1);
  std::vector<double> g(max_degree + 1);
  for (std::size_t i = 0; i < r.size(); ++i) {
    gegenbauer_row(n, max_degree, r.x[i], g.data());
    for (int l = 0; l <= max_degree; ++l) mu(l) += r.w[i] * g[l] / g_at_one(n, l);
  }
  return pref * mu;
}

RieszOperator::RieszOperator(GridPtr grid, const ProblemParams& params, int kernel_degree)
    : grid_(std::move(grid)), params_(params) {
  if (params.n != grid_->n) throw ConfigError("grid dimension does not match parameters");
  if (!(params.sigma < 0.5 * params.n)) throw ConfigError("Riesz kernel requires sigma < n/2");
  L_ = kernel_degree < 0 ? grid_->resolution - 1 : kernel_degree;
  if (L_ > grid_->exactness_degree) throw ConfigError("kernel degree exceeds grid exactness");
  mu_ = riesz_kernel_coefficients(params, L_);
  for (int l = 0; l <= L_; ++l) mu_(l) *= zonal_scale(params.n, l);

  const int R = grid_->rings, M = grid_->ring_size, H = M / 2 + 1;
  cos_.resize(M, H);
  sin_.resize(M, H);
  for (int k = 0; k < M; ++k)
    for (int m = 0; m < H; ++m) {
      const double a = 2.0 * kPi * k * m / M;
      cos_(k, m) = std::cos(a);
      sin_(k, m) = std::sin(a);
    }
  blocks_.assign(H, Mat(R, R));
  parallel_for(0, R, [&](int a) {
    const SpherePoint xi = grid_->node(a * M);
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> T(R, M);
    for (int j = 0; j < grid_->size(); ++j)
      T(j / M, j % M) = grid_->weights(j) * kernel(xi.dot(grid_->node(j)));
    const Mat hat = T * cos_;
    for (int m = 0; m < H; ++m) blocks_[m].row(a) = hat.col(m).transpose();
  });
}

double RieszOperator::kernel(double u) const {
  std::vector<double> g(L_ + 1);
  gegenbauer_row(params_.n, L_, std::clamp(u, -1.0, 1.0), g.data());
  double s = 0.0;
  for (int l = L_; l >= 0; --l) s += mu_(l) * g[l];
  return s;
}

Vec RieszOperator::apply(const Vec& f) const {
  const int R = grid_->rings, M = grid_->ring_size, H = M / 2 + 1;
  if (f.size() != grid_->size()) throw ConfigError("field size does not match grid");
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> F(
      f.data(), R, M);
  const Mat C = F * cos_;
  const Mat S = F * sin_;
  Mat Co(R, H), So(R, H);
  for (int m = 0; m < H; ++m) {
    Co.col(m) = blocks_[m] * C.col(m);
    So.col(m) = blocks_[m] * S.col(m);
  }
  // Inverse real DFT: interior frequencies count twice, 0 and M/2 once.
  for (int m = 1; m < H - 1; ++m) {
    Co.col(m) *= 2.0;
    So.col(m) *= 2.0;
  }
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> out =
      (Co * cos_.transpose() + So * sin_.transpose()) * (params_.c_riesz / M);
  return Eigen::Map<const Vec>(out.data(), R * M);
}

GridField RieszOperator::apply(const GridField& f) const { return GridField(grid_, apply(f.values)); }

double RieszOperator::evaluate(const Vec& f, const SpherePoint& x) const {
  double s = 0.0;
  for (int j = 0; j < grid_->size(); ++j)
    s += grid_->weights(j) * kernel(x.dot(grid_->node(j))) * f(j);
  return params_.c_riesz * s;
}

GridField riesz_potential(const GridField& f, const ProblemParams& params) {
  return RieszOperator(f.grid, params).apply(f);
}

GridField riesz_potential_cap(const GridField& f, const ProblemParams& params) {
  const auto& g = *f.grid;
  const double e = 2.0 * params.sigma - params.n;
  Vec out(g.size());
  parallel_for(0, g.size(), [&](int i) {
    const SpherePoint xi = g.node(i);
    double s = 0.0;
    for (int j = 0; j < g.size(); ++j) {
      if (j == i) continue;
      s += g.weights(j) * std::pow((xi - g.node(j)).norm(), e) * f.values(j);
    }
    s += f.values(i) * cap_integral(cap_radius(g.weights(i), params.n), params);
    out(i) = params.c_riesz * s;
  });
  return GridField(f.grid, std::move(out));
}

double greens_value(const SpherePoint& p, const SpherePoint& q, const ProblemParams& params) {
  const double chord2 = (p - q).squaredNorm();
  if (chord2 == 0.0) throw ConfigError("Green's function is singular at coincident points");
  return std::pow(2.0 / chord2, params.conformal_weight());
}

}  // namespace fqc
