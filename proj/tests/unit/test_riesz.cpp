#include <doctest.h>

#include <cmath>
#include <random>

#include "fqc/riesz.hpp"
#include "fqc/spectral.hpp"

using namespace fqc;

TEST_CASE("closed-form normalization chain for n = 2, sigma = 1/2") {
  const ProblemParams P = ProblemParams::make(2, 0.5);
  CHECK(P.c_riesz == doctest::Approx(1 / (2 * kPi)).epsilon(1e-14));
  CHECK(P.c_intertwine == doctest::Approx(0.5).epsilon(1e-14));
  // ∫_{S²} |ξ−ζ|^{−1} = 2π ∫₀^π sin θ / (2 sin(θ/2)) dθ = 4π.
  CHECK(P.c_riesz * P.c_intertwine * 4 * kPi == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("Riesz operator maps lambda_0 to one") {
  for (auto [n, s] : {std::pair{2, 0.5}, {2, 0.75}, {2, 0.25}, {3, 1.0}, {3, 0.5}}) {
    CAPTURE(n);
    CAPTURE(s);
    const ProblemParams P = ProblemParams::make(n, s);
    // n = 3 grids grow cubically; the refined level there is 20.
    const int coarse = n == 2 ? 16 : 12, fine = n == 2 ? 32 : 20;
    for (int res : {coarse, fine}) {
      const GridPtr g = build_grid(n, res);
      const RieszOperator R(g, P);
      const Vec r = P.c_intertwine * R.apply(Vec::Constant(g->size(), 1.0));
      REQUIRE(sup_norm(r.array() - 1.0) < (res == fine ? 1e-6 : 1e-5));
    }
  }
}

TEST_CASE("kernel coefficients invert the eigenvalues") {
  for (auto [n, s] : {std::pair{2, 0.5}, {2, 0.75}, {3, 1.0}}) {
    const ProblemParams P = ProblemParams::make(n, s);
    const Vec mu = riesz_kernel_coefficients(P, 40);
    for (int l = 0; l <= 40; ++l) REQUIRE(mu(l) * P.c_riesz * eigenvalue(l, P) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("Riesz potential agrees with spectral inversion on band-limited fields") {
  const ProblemParams P = ProblemParams::make(2, 0.5);
  const GridPtr g = build_grid(2, 48);
  const HarmonicTransform T(g, 16);
  const RieszOperator R(g, P);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1, 1);
  SpectralField c;
  c.n = 2;
  c.max_degree = 16;
  c.coeffs.resize(SpectralField::count(2, 16));
  for (int i = 0; i < c.coeffs.size(); ++i) c.coeffs(i) = u(rng);
  const GridField f = T.synthesize(c);
  const GridField spectral = T.synthesize(invert_Psigma(c, P));
  CHECK(sup_norm(R.apply(f).values - spectral.values) < 1e-5);

  // A single degree-1 harmonic maps to Y/λ₁.
  const GridField y1 = sample(g, [](const SpherePoint& x) { return x(1); });
  CHECK(sup_norm(R.apply(y1).values - y1.values / eigenvalue(1, P)) < 1e-5);

  // Off-grid evaluation reproduces the node values.
  const Vec rf = R.apply(f.values);
  for (int i : {0, 100, 1000}) CHECK(R.evaluate(f.values, g->node(i)) == doctest::Approx(rf(i)).epsilon(1e-10));
}

TEST_CASE("positivity of the Riesz potential") {
  const ProblemParams P = ProblemParams::make(2, 0.75);
  const GridPtr g = build_grid(2, 24);
  const RieszOperator R(g, P);
  // A nonnegative bump supported near the north pole.
  const GridField f = sample(g, [](const SpherePoint& x) { return std::max(0.0, x(2) - 0.8); });
  CHECK(f.values.maxCoeff() > 0.0);
  CHECK(R.apply(f).values.minCoeff() > 0.0);
}

TEST_CASE("cap rule agrees with the Nystrom operator to first order") {
  const ProblemParams P = ProblemParams::make(2, 0.5);
  const GridPtr g = build_grid(2, 32);
  const GridField f = sample(g, [](const SpherePoint& x) { return 1 + 0.3 * x(0) * x(2); });
  const GridField a = riesz_potential(f, P), b = riesz_potential_cap(f, P);
  CHECK(sup_norm(a.values - b.values) < 0.05 * sup_norm(a.values));
}

TEST_CASE("Green's function") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> gd;
  for (auto [n, s] : {std::pair{2, 0.5}, {2, 0.75}, {3, 1.0}}) {
    const ProblemParams P = ProblemParams::make(n, s);
    CHECK(greens_value(north_pole(n), south_pole(n), P) == doctest::Approx(std::pow(2.0, (2 * s - n) / 2)));
    CHECK_THROWS_AS(greens_value(north_pole(n), north_pole(n), P), ConfigError);
    for (int i = 0; i < 100; ++i) {
      Vec p(n + 1), q(n + 1);
      for (int k = 0; k <= n; ++k) {
        p(k) = gd(rng);
        q(k) = gd(rng);
      }
      p.normalize();
      q.normalize();
      const double lhs = std::pow((p - q).norm(), 2 * s - n);
      REQUIRE(std::abs(lhs - std::pow(2.0, (2 * s - n) / 2) * greens_value(p, q, P)) < 1e-12 * std::max(1.0, lhs));
    }
  }
  Vec e1(3);
  e1 << 1, 0, 0;
  CHECK(greens_value(north_pole(2), e1, ProblemParams::make(2, 0.5)) == doctest::Approx(1.0));
}
