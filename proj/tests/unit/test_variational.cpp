#include <doctest.h>

#include <cmath>

#include "fqc/interpolate.hpp"
#include "fqc/variational.hpp"

using namespace fqc;

TEST_CASE("energy of the constant and its invariances") {
  for (auto [n, s] : {std::pair{2, 0.5}, {2, 0.75}, {3, 1.0}}) {
    const ProblemParams P = ProblemParams::make(n, s);
    const GridPtr g = build_grid(n, 32);
    const HarmonicTransform T(g);
    const GridField one = constant_field(g, 1.0);
    CHECK(energy_EK(one, one, P, T) == doctest::Approx(P.c_intertwine).epsilon(1e-12));
    const GridField b = bubble_field(g, MoebiusParams::make(north_pole(n), 2.0), P);
    const GridField b2(g, 2.0 * b.values);
    CHECK(energy_EK(b2, one, P, T) == doctest::Approx(energy_EK(b, one, P, T)).epsilon(1e-10));
    CHECK(energy_EK(b, one, P, T) == doctest::Approx(P.c_intertwine).epsilon(1e-7));
  }
  CHECK(energy_EK(constant_field(build_grid(2, 8), 1.0), constant_field(build_grid(2, 8), 1.0),
                  ProblemParams::make(2, 0.5), HarmonicTransform(build_grid(2, 8))) ==
        doctest::Approx(0.5));
}

TEST_CASE("conformal reparametrization of the energy") {
  // E_K(T_φ^{-1} w) = E_{K∘φ}(w) with T_φ^{-1} = T_{φ^{-1}}, φ^{-1} = φ_{−P,t}.
  const ProblemParams P = ProblemParams::make(2, 0.5);
  const GridPtr g = build_grid(2, 64);
  const HarmonicTransform T(g);
  const SphereFunction K = linear_function(2, 0.1, 0);
  const GridField w = sample(g, [](const SpherePoint& x) { return 1 + 0.1 * x(2) * x(2); });
  const Vec pole = north_pole(2);
  const auto phi = MoebiusParams::make(pole, 1.5), phi_inv = MoebiusParams::make(-pole, 1.5);
  const Evaluable we([&](const SpherePoint& x) { return 1 + 0.1 * x(2) * x(2); },
                     [](const SpherePoint& x) { return Vec::Zero(x.size()).eval(); });
  const GridField pulled = conformal_pushforward(we, phi_inv, P, g);
  const GridField Kphi = sample(g, [&](const SpherePoint& x) { return K(moebius_apply(phi, x)); });
  CHECK(energy_EK(pulled, sample(g, K), P, T) == doctest::Approx(energy_EK(w, Kphi, P, T)).epsilon(1e-7));
}

TEST_CASE("Beckner inequality: equality on the orbit of constants, gap off it") {
  const ProblemParams P = ProblemParams::make(2, 0.5);
  const GridPtr g = build_grid(2, 96);
  const HarmonicTransform T(g);
  const BecknerSides c = beckner_check(constant_field(g, 1.0), P, T);
  CHECK(c.lhs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.rhs == doctest::Approx(1.0).epsilon(1e-12));
  for (double t : {2.0, 3.0, 4.0, 8.0}) {
    CAPTURE(t);
    const BecknerSides b = beckner_check(bubble_field(g, MoebiusParams::make(north_pole(2), t), P), P, T);
    CHECK(std::abs(b.lhs - b.rhs) <= 1e-6 * b.rhs);
  }
  for (double a : {0.1, 0.5}) {
    const GridField v = sample(g, [a](const SpherePoint& x) { return 1 + a * real_harmonic(2, 2, 0, x); });
    const BecknerSides b = beckner_check(v, P, T);
    CHECK(b.rhs - b.lhs > 1e-3);
  }
}

TEST_CASE("first variation matches central differences with second-order error") {
  const ProblemParams P = ProblemParams::make(2, 0.5);
  const GridPtr g = build_grid(2, 24);
  const HarmonicTransform T(g);
  const GridField K = sample(g, [](const SpherePoint& x) { return 1 + 0.1 * x(2); });
  const GridField w = sample(g, [](const SpherePoint& x) { return 1 + 0.2 * x(0) * x(1); });
  const GridField h = sample(g, [](const SpherePoint& x) { return x(2) * x(2) - 0.3 * x(0); });
  const double exact = energy_variation(w, K, h, P, T);
  auto fd = [&](double d) {
    const GridField wp(g, w.values + d * h.values), wm(g, w.values - d * h.values);
    return (energy_EK(wp, K, P, T) - energy_EK(wm, K, P, T)) / (2 * d);
  };
  const double e1 = std::abs(fd(1e-2) - exact), e2 = std::abs(fd(5e-3) - exact);
  CHECK(e2 < e1);
  CHECK(std::log2(e1 / e2) > 1.8);
}

TEST_CASE("Kazdan-Warner defect") {
  for (auto [n, s] : {std::pair{2, 0.5}, {3, 1.0}}) {
    const ProblemParams P = ProblemParams::make(n, s);
    const GridPtr g = build_grid(n, 16);
    const double eps = 0.1;
    const Vec d = kazdan_warner_defect(constant_field(g, 1.0), linear_function(n, eps), P);
    Vec expect = Vec::Zero(n + 1);
    expect(n) = eps * n * P.omega_n / (n + 1);
    CHECK((d - expect).cwiseAbs().maxCoeff() < 1e-8);
    const GridField b = bubble_field(g, MoebiusParams::make(north_pole(n), 2.0), P);
    CHECK(kazdan_warner_defect(b, constant_function(1.3), P).norm() == 0.0);
  }
  const ProblemParams P = ProblemParams::make(2, 0.5);
  const Vec d = kazdan_warner_defect(constant_field(build_grid(2, 16), 1.0), linear_function(2, 0.1), P);
  CHECK(d(2) == doctest::Approx(8 * kPi * 0.1 / 3));
}

TEST_CASE("projection to the constraint manifold") {
  const ProblemParams P = ProblemParams::make(2, 0.5);
  const GridPtr g = build_grid(2, 24);
  const ConstraintState z = project_to_S0(constant_field(g, 0.0), P);
  CHECK(std::abs(z.mu) < 1e-14);
  CHECK(z.eta.norm() < 1e-14);

  const GridField y2 = sample(g, [](const SpherePoint& x) { return 0.1 * real_harmonic(2, 2, 0, x); });
  const ConstraintState s = project_to_S0(y2, P);
  CHECK(s.norm_defect < 1e-9);
  CHECK(s.moment_defect.cwiseAbs().maxCoeff() < 1e-9);

  // μ ≈ −½ p_c ⨍ w̃² to second order.
  double prev = INFINITY;
  for (double a : {0.04, 0.02, 0.01}) {
    const GridField wt = sample(g, [a](const SpherePoint& x) { return a * real_harmonic(2, 2, 1, x); });
    const ConstraintState st = project_to_S0(wt, P);
    const double pred = -0.5 * P.critical_exponent() * inner(wt, wt) / P.omega_n;
    const double dev = std::abs(st.mu / pred - 1.0);
    CHECK(dev < prev);
    prev = dev;
  }
  CHECK(prev < 0.05);
}

TEST_CASE("Lagrange multipliers at the constant") {
  const ProblemParams P = ProblemParams::make(2, 0.5);
  const GridPtr g = build_grid(2, 24);
  const HarmonicTransform T(g);
  const GridField one = constant_field(g, 1.0);
  const MultiplierReport r = lagrange_multipliers(one, constant_function(1.0), P, T);
  CHECK(r.lambda_p == doctest::Approx(P.c_intertwine));
  CHECK(r.Lambda_p.norm() < 1e-12);
  CHECK(r.euler_lagrange_residual < 1e-9);

  const MultiplierReport q = lagrange_multipliers(one, linear_function(2, 0.1), P, T);
  CHECK(std::abs(q.Lambda_p(0)) < 1e-12);
  CHECK(std::abs(q.Lambda_p(1)) < 1e-12);
  // Gram matrix ∫⟨∇x_j,∇x_i⟩ = δ_ij n ω_n/(n+1), right side λ ε n ω_n/(n+1): Λ₃ = λε.
  CHECK(q.Lambda_p(2) == doctest::Approx(q.lambda_p * 0.1).epsilon(1e-10));
}

TEST_CASE("local minimizer near one") {
  const ProblemParams P = ProblemParams::make(2, 0.5);
  const GridPtr g = build_grid(2, 24);
  const HarmonicTransform T(g);
  const MinimizeResult c = minimize_EK_near_1(constant_function(1.0), P, T);
  CHECK(c.distance_sup < 1e-10);
  CHECK(c.energy == doctest::Approx(P.c_intertwine).epsilon(1e-10));

  const MinimizeResult a = minimize_EK_near_1(quadratic_function(2, 0.05), P, T);
  const MinimizeResult b = minimize_EK_near_1(quadratic_function(2, 0.025), P, T);
  CHECK(a.w.values.minCoeff() > 0.0);
  CHECK(b.w.values.minCoeff() > 0.0);
  CHECK(a.distance_sup / b.distance_sup == doctest::Approx(2.0).epsilon(0.1));
  // Coercivity constant 2(1 − λ₁/λ₂) up to O(ε).
  const double bound = 2 * (1 - eigenvalue(1, P) / eigenvalue(2, P));
  CHECK(a.coercivity > bound - 0.1);
  CHECK(b.coercivity > bound - 0.05);
  // Symmetric K: the minimizer solves the equation, so Λ vanishes.
  CHECK(a.report.Lambda_p.norm() < 1e-8);
  CHECK_THROWS_AS(minimize_EK_near_1(linear_function(2, 0.5), P, T), ConfigError);
}
