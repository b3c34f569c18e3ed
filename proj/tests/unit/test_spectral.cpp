#include <doctest.h>

#include <cmath>
#include <random>

#include "fqc/spectral.hpp"

using namespace fqc;

namespace {

SpectralField random_coeffs(int n, int L, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  SpectralField c;
  c.n = n;
  c.max_degree = L;
  c.coeffs.resize(SpectralField::count(n, L));
  for (int i = 0; i < c.coeffs.size(); ++i) c.coeffs(i) = u(rng);
  return c;
}

}  // namespace

TEST_CASE("eigenvalues for n = 2, sigma = 1/2 are k + 1/2") {
  const ProblemParams P = ProblemParams::make(2, 0.5);
  for (int k = 0; k <= 32; ++k) REQUIRE(std::abs(eigenvalue(k, P) - (k + 0.5)) < 1e-12);
}

TEST_CASE("eigenvalue ratio and monotonicity") {
  for (auto [n, s] : {std::pair{2, 0.5}, {2, 0.75}, {2, 0.25}, {3, 1.0}, {3, 0.5}, {4, 1.0}}) {
    const ProblemParams P = ProblemParams::make(n, s);
    CHECK(std::abs(eigenvalue(1, P) / eigenvalue(0, P) - (n + 2 * s) / (n - 2 * s)) < 1e-12);
    const OperatorSpectrum sp = OperatorSpectrum::make(P, 64);
    for (int k = 0; k < 64; ++k) REQUIRE(sp.eigenvalues(k + 1) > sp.eigenvalues(k));
    // Direct Gamma ratio where tgamma does not overflow.
    for (int k = 0; k <= 20; ++k)
      REQUIRE(eigenvalue(k, P) ==
              doctest::Approx(std::tgamma(k + n / 2.0 + s) / std::tgamma(k + n / 2.0 - s)).epsilon(1e-12));
  }
  // σ = 1: λ₀ = (n/2)(n/2 − 1), the conformal Laplacian constant n(n−2)/4; n = 4 gives 2.
  CHECK(eigenvalue(0, ProblemParams::make(4, 1.0)) == doctest::Approx(2.0));
  CHECK(std::isfinite(eigenvalue(10000, ProblemParams::make(2, 0.75))));
}

TEST_CASE("real harmonics are orthonormal on the grid") {
  const GridPtr g = build_grid(2, 16);
  std::vector<GridField> ys;
  std::vector<std::pair<int, int>> lm;
  for (int l = 0; l <= 5; ++l)
    for (int m = -l; m <= l; ++m) {
      ys.push_back(sample(g, [l, m](const SpherePoint& x) { return real_harmonic(2, l, m, x); }));
      lm.push_back({l, m});
    }
  double worst = 0;
  for (std::size_t a = 0; a < ys.size(); ++a)
    for (std::size_t b = 0; b < ys.size(); ++b)
      worst = std::max(worst, std::abs(inner(ys[a], ys[b]) - (a == b ? 1.0 : 0.0)));
  CHECK(worst < 1e-12);

  // No Condon–Shortley phase: Y_1^1 is a positive multiple of x₁.
  Vec x(3);
  x << 1, 0, 0;
  CHECK(real_harmonic(2, 1, 1, x) == doctest::Approx(std::sqrt(3 / (4 * kPi))));
  x << 0, 1, 0;
  CHECK(real_harmonic(2, 1, -1, x) == doctest::Approx(std::sqrt(3 / (4 * kPi))));
  x << 0, 0, 1;
  CHECK(real_harmonic(2, 1, 0, x) == doctest::Approx(std::sqrt(3 / (4 * kPi))));

  const GridPtr g3 = build_grid(3, 16);
  for (int l = 0; l <= 6; ++l)
    for (int k = 0; k <= 6; ++k) {
      const GridField a = sample(g3, [l](const SpherePoint& p) { return real_harmonic(3, l, 0, p); });
      const GridField b = sample(g3, [k](const SpherePoint& p) { return real_harmonic(3, k, 0, p); });
      REQUIRE(std::abs(inner(a, b) - (l == k ? 1.0 : 0.0)) < 1e-12);
    }
}

TEST_CASE("analysis and synthesis round trip") {
  for (int n : {2, 3}) {
    const GridPtr g = build_grid(n, 24);
    const HarmonicTransform T(g, 11);
    const SpectralField c = random_coeffs(n, 11, 7 + n);
    const GridField f = T.synthesize(c);
    const SpectralField back = T.analyze(f);
    CHECK((back.coeffs - c.coeffs).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(sup_norm(T.synthesize(back).values - f.values) < 1e-10);
    // Parseval.
    CHECK(inner(f, f) == doctest::Approx(c.coeffs.squaredNorm()).epsilon(1e-10));
  }
  const GridPtr g = build_grid(2, 16);
  const HarmonicTransform T(g);
  const SpectralField c1 = T.analyze(constant_field(g, 2.5));
  CHECK(c1.coeffs(0) == doctest::Approx(2.5 * std::sqrt(4 * kPi)));
  CHECK(c1.coeffs.tail(c1.coeffs.size() - 1).cwiseAbs().maxCoeff() < 1e-12);
  const SpectralField y1 = T.analyze(sample(g, [](const SpherePoint& x) { return x(0); }));
  int nonzero = 0;
  for (int i = 0; i < y1.coeffs.size(); ++i) nonzero += std::abs(y1.coeffs(i)) > 1e-12;
  CHECK(nonzero == 1);
  CHECK(std::abs(y1.coeffs(SpectralField::index(1, 1))) > 0.1);

  CHECK_THROWS_AS(HarmonicTransform(g, 16), ConfigError);
  const GridPtr g3 = build_grid(3, 12);
  const HarmonicTransform T3(g3);
  CHECK_THROWS_AS(T3.analyze(sample(g3, [](const SpherePoint& x) { return x(0); })), ConfigError);
}

TEST_CASE("interpolant evaluation and gradient off the grid") {
  const GridPtr g = build_grid(2, 20);
  const HarmonicTransform T(g, 10);
  const SpectralField c = random_coeffs(2, 10, 99);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> gd;
  for (int i = 0; i < 20; ++i) {
    Vec x(3);
    x << gd(rng), gd(rng), gd(rng);
    x.normalize();
    double direct = 0;
    for (int l = 0; l <= 10; ++l)
      for (int m = -l; m <= l; ++m) direct += c.coeffs(SpectralField::index(l, m)) * real_harmonic(2, l, m, x);
    REQUIRE(T.evaluate(c, x) == doctest::Approx(direct).epsilon(1e-12));
    // Tangential gradient against a finite difference along a tangent direction.
    const Mat E = tangent_frame(x);
    const double h = 1e-6;
    for (int k = 0; k < 2; ++k) {
      const Vec xp = (x + h * E.col(k)).normalized(), xm = (x - h * E.col(k)).normalized();
      const double fd = (T.evaluate(c, xp) - T.evaluate(c, xm)) / (2 * h);
      REQUIRE(std::abs(T.gradient(c, x).dot(E.col(k)) - fd) < 1e-6);
    }
  }
}

TEST_CASE("P_sigma and its inverse act diagonally") {
  const ProblemParams P = ProblemParams::make(2, 0.5);
  const SpectralField c = random_coeffs(2, 8, 5);
  const SpectralField a = apply_Psigma(c, P);
  CHECK((invert_Psigma(a, P).coeffs - c.coeffs).cwiseAbs().maxCoeff() < 1e-13);
  for (int l = 0; l <= 8; ++l)
    for (int m = -l; m <= l; ++m) {
      const int i = SpectralField::index(l, m);
      REQUIRE(a.coeffs(i) == doctest::Approx((l + 0.5) * c.coeffs(i)).epsilon(1e-13));
    }
  // P_σ(1) = c(n,σ) and self-adjointness of the quadrature form.
  const GridPtr g = build_grid(2, 16);
  const HarmonicTransform T(g);
  const GridField one = constant_field(g, 1.0);
  CHECK(psigma_inner(T, one, one, P) / P.omega_n == doctest::Approx(P.c_intertwine));
  const GridField u = T.synthesize(random_coeffs(2, 15, 8)), v = T.synthesize(random_coeffs(2, 15, 9));
  CHECK(psigma_inner(T, u, v, P) == doctest::Approx(psigma_inner(T, v, u, P)).epsilon(1e-10));
}
