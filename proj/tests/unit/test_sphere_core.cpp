#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "fqc/grid.hpp"
#include "fqc/interpolate.hpp"
#include "fqc/quadrature.hpp"
#include "fqc/spectral.hpp"

using namespace fqc;

namespace {

SpherePoint random_point(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  Vec x(n + 1);
  for (int i = 0; i <= n; ++i) x(i) = g(rng);
  return x.normalized();
}

}  // namespace

TEST_CASE("problem constants match their Gamma definitions") {
  for (auto [n, s] : {std::pair{2, 0.5}, {2, 0.75}, {3, 1.0}, {3, 0.4}}) {
    const ProblemParams P = ProblemParams::make(n, s);
    CHECK(P.c_intertwine == doctest::Approx(std::tgamma(n / 2.0 + s) / std::tgamma(n / 2.0 - s)).epsilon(1e-13));
    const double cr = std::tgamma((n - 2 * s) / 2) /
                      (std::pow(2.0, 2 * s) * std::pow(kPi, n / 2.0) * std::tgamma(s));
    CHECK(P.c_riesz == doctest::Approx(cr).epsilon(1e-13));
    CHECK(P.omega_n == doctest::Approx(2 * std::pow(kPi, (n + 1) / 2.0) / std::tgamma((n + 1) / 2.0)));
    CHECK(P.c_intertwine == doctest::Approx(eigenvalue(0, P)).epsilon(1e-13));
  }
  CHECK(ProblemParams::make(2, 0.5).omega_n == doctest::Approx(4 * kPi));
  CHECK_THROWS_AS(ProblemParams::make(2, 1.0), ConfigError);
  CHECK_THROWS_AS(ProblemParams::make(2, 0.0), ConfigError);
  CHECK_THROWS_AS(ProblemParams::make(1, 0.25), ConfigError);
}

TEST_CASE("one-dimensional rules integrate their weights exactly") {
  const Rule1D gl = gauss_legendre(10);
  double s = 0;
  for (std::size_t i = 0; i < gl.size(); ++i) s += gl.w[i] * std::pow(gl.x[i], 18);
  CHECK(s == doctest::Approx(2.0 / 19.0).epsilon(1e-14));

  // ∫(1−x)^α(1+x)^β x² against the Beta-function moments.
  const double a = 0.3, b = -0.4;
  const Rule1D gj = gauss_jacobi(12, a, b);
  double m0 = 0, m1 = 0;
  for (std::size_t i = 0; i < gj.size(); ++i) {
    m0 += gj.w[i];
    m1 += gj.w[i] * gj.x[i];
  }
  const double B = std::exp(std::lgamma(a + 1) + std::lgamma(b + 1) - std::lgamma(a + b + 2));
  CHECK(m0 == doctest::Approx(std::pow(2.0, a + b + 1) * B).epsilon(1e-13));
  // E[x] for the Jacobi weight is (b−a)/(a+b+2).
  CHECK(m1 / m0 == doctest::Approx((b - a) / (a + b + 2)).epsilon(1e-13));

  const Rule1D cu = gauss_chebyshev_u(8);
  double c0 = 0;
  for (std::size_t i = 0; i < cu.size(); ++i) c0 += cu.w[i];
  CHECK(c0 == doctest::Approx(kPi / 2).epsilon(1e-14));
}

TEST_CASE("grids: total weight, odd moments and second moments") {
  for (int n : {2, 3}) {
    const ProblemParams P = ProblemParams::make(n, n == 2 ? 0.5 : 1.0);
    const GridPtr g = build_grid(n, 16);
    CHECK(g->total_weight() == doctest::Approx(P.omega_n).epsilon(1e-12));
    CHECK(g->weights.minCoeff() > 0.0);
    for (int i = 0; i < g->size(); ++i) REQUIRE(is_unit(g->node(i)));
    for (int k = 0; k <= n; ++k) {
      const GridField xk = sample(g, [k](const SpherePoint& x) { return x(k); });
      const GridField xk2 = sample(g, [k](const SpherePoint& x) { return x(k) * x(k); });
      CHECK(std::abs(integrate(xk)) < 1e-12);
      CHECK(integrate(xk2) == doctest::Approx(P.omega_n / (n + 1)).epsilon(1e-10));
    }
  }
  CHECK_THROWS_AS(build_grid(4, 16), ConfigError);
  CHECK_THROWS_AS(build_grid(2, 3), ConfigError);
}

TEST_CASE("grid integrates harmonics up to its exactness degree") {
  const GridPtr g = build_grid(2, 12);
  for (int l = 1; l <= g->exactness_degree; ++l)
    for (int m = -l; m <= l; ++m) {
      const GridField y = sample(g, [l, m](const SpherePoint& x) { return real_harmonic(2, l, m, x); });
      REQUIRE(std::abs(integrate(y)) < 1e-10);
    }
  const GridPtr g3 = build_grid(3, 12);
  for (int l = 1; l <= g3->exactness_degree; ++l) {
    const GridField y = sample(g3, [l](const SpherePoint& x) { return real_harmonic(3, l, 0, x); });
    REQUIRE(std::abs(integrate(y)) < 1e-10);
  }
}

TEST_CASE("geodesic distance and the chord identity") {
  std::mt19937_64 rng(3);
  CHECK(geodesic_distance(north_pole(2), north_pole(2)) == 0.0);
  CHECK(geodesic_distance(north_pole(2), south_pole(2)) == doctest::Approx(kPi));
  for (int i = 0; i < 200; ++i) {
    const SpherePoint p = random_point(rng, 2 + i % 2), q = random_point(rng, 2 + i % 2);
    const double d = geodesic_distance(p, q);
    REQUIRE(d >= 0.0);
    REQUIRE(d <= kPi);
    REQUIRE(std::abs((p - q).squaredNorm() - 2 * (1 - std::cos(d))) < 1e-12);
  }
}

TEST_CASE("tangent frames are orthonormal and positively oriented") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const int n = 2 + i % 2;
    const SpherePoint p = random_point(rng, n);
    const Mat E = tangent_frame(p);
    REQUIRE((E.transpose() * E - Mat::Identity(n, n)).norm() < 1e-12);
    REQUIRE((E.transpose() * p).norm() < 1e-12);
    Mat full(n + 1, n + 1);
    full << E, p;
    REQUIRE(full.determinant() > 0.0);
  }
}

TEST_CASE("stereographic chart") {
  const SpherePoint N = north_pole(2);
  const StereoChart c(N);
  CHECK((c.forward(Vec::Zero(2)) - south_pole(2)).norm() < 1e-15);
  Vec far(2);
  far << 1e8, 0;
  CHECK((c.forward(far) - N).norm() < 1e-7);
  CHECK(c.jacobian(Vec::Zero(2)) == doctest::Approx(4.0));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 50; ++i) {
    const int n = 2 + i % 2;
    const StereoChart ch(random_point(rng, n));
    Vec x(n);
    for (int k = 0; k < n; ++k) x(k) = u(rng);
    REQUIRE((ch.inverse(ch.forward(x)) - x).norm() < 1e-10);
    // Conformal factor 2/(1+|x|²) seen through finite differences.
    const double h = 1e-6, lam = 2 / (1 + x.squaredNorm());
    for (int k = 0; k < n; ++k) {
      const Vec e = Vec::Unit(n, k) * h;
      const Vec d = (ch.forward(x + e) - ch.forward(x - e)) / (2 * h);
      REQUIRE(std::abs(d.norm() - lam) < 1e-7);
      REQUIRE((ch.push_vector(x, Vec::Unit(n, k)) - d).norm() < 1e-7);
    }
    REQUIRE(ch.jacobian(x) == doctest::Approx(std::pow(lam, n)).epsilon(1e-14));
  }
}

TEST_CASE("Moebius maps: identity, fixed points, group law") {
  std::mt19937_64 rng(17);
  const GridPtr g = build_grid(2, 12);
  for (int trial = 0; trial < 5; ++trial) {
    const SpherePoint P = random_point(rng, 2);
    const auto m1 = MoebiusParams::make(P, 1.0);
    const auto m2 = MoebiusParams::make(P, 2.0), m3 = MoebiusParams::make(P, 3.0),
               m6 = MoebiusParams::make(P, 6.0);
    // The inverse of φ_{P,t} is the dilation by t about the antipode.
    const auto mi = MoebiusParams::make(-P, 2.0);
    CHECK((moebius_apply(m3, P) - P).norm() < 1e-12);
    CHECK((moebius_apply(m3, -P) + P).norm() < 1e-12);
    CHECK(m2.ball_point.norm() == doctest::Approx(0.5));
    double comp = 0, inv = 0, id = 0;
    for (int i = 0; i < g->size(); ++i) {
      const SpherePoint x = g->node(i);
      comp = std::max(comp, (moebius_apply(m2, moebius_apply(m3, x)) - moebius_apply(m6, x)).norm());
      inv = std::max(inv, (moebius_apply(m2, moebius_apply(mi, x)) - x).norm());
      id = std::max(id, (moebius_apply(m1, x) - x).norm());
    }
    CHECK(comp < 1e-10);
    CHECK(inv < 1e-10);
    CHECK(id < 1e-14);
  }
  // Points flow toward P.
  const auto m = MoebiusParams::make(north_pole(2), 4.0);
  Vec x(3);
  x << 1, 0, 0;
  CHECK(moebius_apply(m, x)(2) > 0.5);
}

TEST_CASE("bubbles: peak value and conformal invariance of the critical norm") {
  for (auto [n, s] : {std::pair{2, 0.5}, {2, 0.75}, {3, 1.0}}) {
    const ProblemParams P = ProblemParams::make(n, s);
    const GridPtr g = build_grid(n, 48);
    const double q = P.sobolev_exponent();
    for (double t : {1.0, 2.0, 3.0}) {
      const auto m = MoebiusParams::make(north_pole(n), t);
      CHECK(bubble_value(m, south_pole(n), P) == doctest::Approx(std::pow(t, P.conformal_weight())));
      const GridField b = bubble_field(g, m, P);
      double Iq = 0;
      for (int i = 0; i < g->size(); ++i) Iq += g->weights(i) * std::pow(b.values(i), q);
      CHECK(Iq == doctest::Approx(P.omega_n).epsilon(1e-8));
    }
  }
}

TEST_CASE("conformal pushforward preserves the critical norm of band-limited fields") {
  const ProblemParams P = ProblemParams::make(2, 0.5);
  const GridPtr g = build_grid(2, 64);
  const auto T = std::make_shared<const HarmonicTransform>(g, 8);
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  SpectralField c;
  c.n = 2;
  c.max_degree = 8;
  c.coeffs = Vec::Zero(SpectralField::count(2, 8));
  for (int i = 1; i < SpectralField::count(2, 4); ++i) c.coeffs(i) = u(rng);
  c.coeffs(0) = std::sqrt(4 * kPi);
  const GridField v = T->synthesize(c);
  const double q = P.sobolev_exponent();
  auto norm_q = [&](const GridField& f) {
    double s = 0;
    for (int i = 0; i < f.size(); ++i) s += f.grid->weights(i) * std::pow(std::abs(f.values(i)), q);
    return s;
  };
  const GridField id = conformal_pushforward(v, MoebiusParams::identity(2), P, *T);
  CHECK(sup_norm(id.values - v.values) < 1e-12);
  const GridField w = conformal_pushforward(v, MoebiusParams::make(north_pole(2), 3.0), P, *T);
  CHECK(norm_q(w) == doctest::Approx(norm_q(v)).epsilon(1e-6));
}

TEST_CASE("columnar round trip and grid mismatch") {
  const GridPtr g = build_grid(2, 8);
  const GridField f = sample(g, [](const SpherePoint& x) { return std::exp(x(0)) + x(2); });
  std::stringstream ss;
  write_columnar(ss, f);
  const GridField back = read_columnar(ss, g);
  CHECK(sup_norm(back.values - f.values) == 0.0);

  std::stringstream ss2;
  write_columnar(ss2, f);
  CHECK_THROWS_AS(read_columnar(ss2, build_grid(2, 10)), ConfigError);
  std::stringstream bad("# x1 x2 x3 weight value\n1 2\n");
  CHECK_THROWS_AS(read_columnar(bad, g), ConfigError);
}
