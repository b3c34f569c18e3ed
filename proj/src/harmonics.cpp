#include "fqc/spectral.hpp"

#include <algorithm>
#include <cmath>

#include <gsl/gsl_sf_legendre.h>

namespace fqc {
namespace {

// Normalized associated Legendre values (no Condon–Shortley phase), packed by
// gsl_sf_legendre_array_index, with the √2 of the real basis folded in for m > 0.
void legendre_row(int L, double x, double* out) {
  std::vector<double> tmp(gsl_sf_legendre_array_n(L));
  if (gsl_sf_legendre_array_e(GSL_SF_LEGENDRE_SPHARM, L, x, 1.0, tmp.data()) != 0)
    throw NumericalError("associated Legendre evaluation failed");
  for (int l = 0; l <= L; ++l)
    for (int m = 0; m <= l; ++m) {
      const size_t i = gsl_sf_legendre_array_index(l, m);
      out[i] = (m == 0 ? 1.0 : std::sqrt(2.0)) * tmp[i];
    }
}

// U_0..U_L at x.
Vec chebyshev_u(int L, double x) {
  Vec u(L + 1);
  u(0) = 1.0;
  if (L >= 1) u(1) = 2.0 * x;
  for (int k = 2; k <= L; ++k) u(k) = 2.0 * x * u(k - 1) - u(k - 2);
  return u;
}

const double kZonal3 = 1.0 / std::sqrt(2.0 * kPi * kPi);

}  // namespace

double eigenvalue(int k, const ProblemParams& params) {
  if (k < 0) throw ConfigError("eigenvalue degree must be nonnegative");
  const double h = 0.5 * params.n;
  return std::exp(std::lgamma(k + h + params.sigma) - std::lgamma(k + h - params.sigma));
}

OperatorSpectrum OperatorSpectrum::make(const ProblemParams& params, int max_degree) {
  OperatorSpectrum s;
  s.params = params;
  s.max_degree = max_degree;
  s.eigenvalues.resize(max_degree + 1);
  for (int k = 0; k <= max_degree; ++k) s.eigenvalues(k) = eigenvalue(k, params);
  return s;
}

int SpectralField::degree_of(int i) const {
  if (n != 2) return i;
  return static_cast<int>(std::floor(std::sqrt(static_cast<double>(i)) + 1e-12));
}

HarmonicTransform::HarmonicTransform(GridPtr grid)
    : HarmonicTransform(grid, grid->resolution - 1) {}

HarmonicTransform::HarmonicTransform(GridPtr grid, int max_degree)
    : grid_(std::move(grid)), L_(max_degree) {
  if (L_ < 0) throw ConfigError("harmonic degree must be nonnegative");
  if (2 * L_ > grid_->exactness_degree)
    throw ConfigError("grid too coarse for the requested harmonic degree");
  const int R = grid_->rings, M = grid_->ring_size;
  if (grid_->n == 2) {
    legendre_.resize(R, gsl_sf_legendre_array_n(L_));
    std::vector<double> row(legendre_.cols());
    for (int r = 0; r < R; ++r) {
      legendre_row(L_, grid_->ring_axis[r], row.data());
      for (int j = 0; j < legendre_.cols(); ++j) legendre_(r, j) = row[j];
    }
    cos_.resize(M, L_ + 1);
    sin_.resize(M, L_ + 1);
    for (int k = 0; k < M; ++k)
      for (int m = 0; m <= L_; ++m) {
        const double a = 2.0 * kPi * k * m / M;
        cos_(k, m) = std::cos(a);
        sin_(k, m) = std::sin(a);
      }
  } else {
    legendre_.resize(R, L_ + 1);
    for (int r = 0; r < R; ++r)
      legendre_.row(r) = kZonal3 * chebyshev_u(L_, grid_->ring_axis[r]).transpose();
  }
}

SpectralField HarmonicTransform::analyze(const GridField& f) const {
  if (f.grid != grid_ && f.grid->size() != grid_->size())
    throw ConfigError("field lives on a different grid");
  return analyze(f.values);
}

SpectralField HarmonicTransform::analyze(const Vec& values) const {
  const auto& g = *grid_;
  const int R = g.rings, M = g.ring_size;
  SpectralField c;
  c.n = g.n;
  c.max_degree = L_;
  c.coeffs = Vec::Zero(SpectralField::count(g.n, L_));
  // Map ring-major values as an R × M row-major matrix.
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> F(
      values.data(), R, M);
  Vec ring_w(R);
  for (int r = 0; r < R; ++r) ring_w(r) = g.weights(r * M);
  if (g.n == 2) {
    const Mat C = F * cos_;
    const Mat S = F * sin_;
    for (int l = 0; l <= L_; ++l)
      for (int m = 0; m <= l; ++m) {
        const size_t p = gsl_sf_legendre_array_index(l, m);
        double a = 0.0, b = 0.0;
        for (int r = 0; r < R; ++r) {
          const double wp = ring_w(r) * legendre_(r, p);
          a += wp * C(r, m);
          b += wp * S(r, m);
        }
        c.coeffs(SpectralField::index(l, m)) = a;
        if (m > 0) c.coeffs(SpectralField::index(l, -m)) = b;
      }
  } else {
    // Zonal check: every node sharing a cos χ level must carry the same value.
    const double scale = std::max(1.0, sup_norm(values));
    std::vector<double> level_lo(g.resolution, INFINITY), level_hi(g.resolution, -INFINITY);
    for (int r = 0; r < R; ++r) {
      const int lv = g.ring_level[r];
      level_lo[lv] = std::min(level_lo[lv], F.row(r).minCoeff());
      level_hi[lv] = std::max(level_hi[lv], F.row(r).maxCoeff());
    }
    for (int lv = 0; lv < g.resolution; ++lv)
      if (level_hi[lv] - level_lo[lv] > 1e-8 * scale)
        throw ConfigError("n = 3 spectral operations support zonal fields only");
    const Vec ring_sum = F.rowwise().sum();
    for (int k = 0; k <= L_; ++k)
      for (int r = 0; r < R; ++r) c.coeffs(k) += ring_w(r) * legendre_(r, k) * ring_sum(r);
  }
  return c;
}

GridField HarmonicTransform::synthesize(const SpectralField& c) const {
  const auto& g = *grid_;
  if (c.n != g.n || c.max_degree > L_) throw ConfigError("spectral field does not fit transform");
  const int R = g.rings, M = g.ring_size;
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> F(R, M);
  if (g.n == 2) {
    Mat Gc = Mat::Zero(R, L_ + 1), Gs = Mat::Zero(R, L_ + 1);
    for (int l = 0; l <= c.max_degree; ++l)
      for (int m = 0; m <= l; ++m) {
        const size_t p = gsl_sf_legendre_array_index(l, m);
        const double a = c.coeffs(SpectralField::index(l, m));
        const double b = m > 0 ? c.coeffs(SpectralField::index(l, -m)) : 0.0;
        Gc.col(m) += a * legendre_.col(p);
        if (m > 0) Gs.col(m) += b * legendre_.col(p);
      }
    F = Gc * cos_.transpose() + Gs * sin_.transpose();
  } else {
    const Vec ring_vals = legendre_.leftCols(c.max_degree + 1) * c.coeffs;
    for (int r = 0; r < R; ++r) F.row(r).setConstant(ring_vals(r));
  }
  return GridField(grid_, Eigen::Map<const Vec>(F.data(), R * M));
}

Vec HarmonicTransform::basis_at(const SpherePoint& x) const {
  const int n = grid_->n;
  Vec b(SpectralField::count(n, L_));
  if (n == 2) {
    std::vector<double> row(gsl_sf_legendre_array_n(L_));
    legendre_row(L_, std::clamp(x(2), -1.0, 1.0), row.data());
    const double phi = std::atan2(x(1), x(0));
    for (int l = 0; l <= L_; ++l)
      for (int m = 0; m <= l; ++m) {
        const double p = row[gsl_sf_legendre_array_index(l, m)];
        b(SpectralField::index(l, m)) = p * std::cos(m * phi);
        if (m > 0) b(SpectralField::index(l, -m)) = p * std::sin(m * phi);
      }
  } else {
    b = kZonal3 * chebyshev_u(L_, std::clamp(x(3), -1.0, 1.0));
  }
  return b;
}

double HarmonicTransform::evaluate(const SpectralField& c, const SpherePoint& x) const {
  return basis_at(x).head(c.coeffs.size()).dot(c.coeffs);
}

Vec HarmonicTransform::gradient(const SpectralField& c, const SpherePoint& x) const {
  // Degree-0 extension f(y/|y|); central differences of the ambient coordinates.
  const int d = static_cast<int>(x.size());
  const double h = 1e-6;
  Vec g(d);
  for (int i = 0; i < d; ++i) {
    Vec a = x, b = x;
    a(i) += h;
    b(i) -= h;
    g(i) = (evaluate(c, a.normalized()) - evaluate(c, b.normalized())) / (2.0 * h);
  }
  return g - x.dot(g) * x;
}

SpectralField apply_Psigma(const SpectralField& v, const ProblemParams& params) {
  SpectralField out = v;
  for (int i = 0; i < v.coeffs.size(); ++i) out.coeffs(i) *= eigenvalue(v.degree_of(i), params);
  return out;
}

SpectralField invert_Psigma(const SpectralField& f, const ProblemParams& params) {
  SpectralField out = f;
  for (int i = 0; i < f.coeffs.size(); ++i) out.coeffs(i) /= eigenvalue(f.degree_of(i), params);
  return out;
}

double psigma_inner(const HarmonicTransform& T, const GridField& u, const GridField& v,
                    const ProblemParams& params) {
  const SpectralField a = T.analyze(u);
  const SpectralField b = T.analyze(v);
  return apply_Psigma(a, params).coeffs.dot(b.coeffs);
}

double real_harmonic(int n, int l, int m, const SpherePoint& x) {
  if (n == 3) {
    if (m != 0) throw ConfigError("n = 3 harmonics are zonal only");
    return kZonal3 * chebyshev_u(l, std::clamp(x(3), -1.0, 1.0))(l);
  }
  const int am = std::abs(m);
  if (am > l) throw ConfigError("harmonic order exceeds degree");
  std::vector<double> row(gsl_sf_legendre_array_n(l));
  legendre_row(l, std::clamp(x(2), -1.0, 1.0), row.data());
  const double p = row[gsl_sf_legendre_array_index(l, am)];
  const double phi = std::atan2(x(1), x(0));
  return m >= 0 ? p * std::cos(am * phi) : p * std::sin(am * phi);
}

}  // namespace fqc
