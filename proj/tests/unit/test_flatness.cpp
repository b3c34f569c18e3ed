#include <doctest.h>

#include <cmath>
#include <random>

#include "fqc/flatness.hpp"

using namespace fqc;

namespace {

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

LocalModel model(int n, double beta, const Vec& a) {
  return LocalModel::canonical(north_pole(n), beta, a);
}

SpherePoint south(int n) {
  SpherePoint s = north_pole(n);
  s = -s;
  return s;
}

FlatnessOptions tight() {
  FlatnessOptions o;
  o.tol = 1e-9;
  o.max_refinements = 3;
  return o;
}

}  // namespace

TEST_CASE("radial integral at the origin") {
  // At ξ = 0, y·∇Q = βQ and ∫|y_j|(1+|y|²)^{−n} dy has a closed form:
  // n = 2: ∫r²(1+r²)^{−2}dr · ∫|cos θ| dθ = (π/4)·4 = π.
  const ProblemParams P2 = ProblemParams::make(2, 0.5);
  const auto r2 = q_radial_integral(model(2, 1.0, vec({1, -2})), Vec::Zero(2), P2, tight());
  CHECK(r2.value == doctest::Approx(-kPi).epsilon(1e-8));
  CHECK(r2.error <= 1e-7);
  // n = 3: ∫r³(1+r²)^{−3}dr · ∫_{S²}|ω₁| = (1/4)·2π.
  const ProblemParams P3 = ProblemParams::make(3, 1.0);
  const auto r3 = q_radial_integral(model(3, 1.0, vec({1, -1, -0.5})), Vec::Zero(3), P3, tight());
  CHECK(r3.value == doctest::Approx(-kPi / 4.0).epsilon(1e-7));
}

TEST_CASE("gradient integral") {
  const ProblemParams P = ProblemParams::make(2, 0.5);
  const LocalModel m = model(2, 1.0, vec({1, -2}));
  // Odd integrand at ξ = 0.
  CHECK(q_gradient_integral(m, Vec::Zero(2), P, tight()).value.norm() < 1e-10);

  // Q = |y₁|: integrating out y₂ leaves (π/2)∫sign(u+ξ₁)(1+u²)^{−3/2}du = π·ξ₁/√(1+ξ₁²).
  const LocalModel m1 = model(2, 1.0, vec({1, 0}));
  const Vec xi = vec({0.3, 0.0});
  const Vec g = q_gradient_integral(m1, xi, P, tight()).value;
  CHECK(g(0) == doctest::Approx(kPi * 0.3 / std::sqrt(1.09)).epsilon(1e-8));
  CHECK(std::abs(g(1)) < 1e-10);

  // Linear in the coefficients.
  const Vec x2 = vec({0.2, -0.4});
  const Vec ga = q_gradient_integral(model(2, 1.0, vec({1, 0})), x2, P, tight()).value;
  const Vec gb = q_gradient_integral(model(2, 1.0, vec({0, 1})), x2, P, tight()).value;
  const Vec gab = q_gradient_integral(model(2, 1.0, vec({2, -3})), x2, P, tight()).value;
  CHECK((gab - (2 * ga - 3 * gb)).norm() < 1e-8);
}

TEST_CASE("gradient integral is the ξ-derivative of the value integral") {
  const ProblemParams P = ProblemParams::make(2, 0.5);
  const LocalModel m = model(2, 1.5, vec({1, -0.7}));
  const Vec xi = vec({0.25, -0.15});
  const Vec g = q_gradient_integral(m, xi, P, tight()).value;
  std::vector<double> errs;
  for (double h : {0.08, 0.04, 0.02}) {
    const Vec d = h * Vec::Unit(2, 0);
    const double fd = (q_value_integral(m, xi + d, P, false, tight()).value -
                       q_value_integral(m, xi - d, P, false, tight()).value) /
                      (2 * h);
    errs.push_back(std::abs(fd - g(0)));
  }
  for (std::size_t i = 1; i < errs.size(); ++i) {
    const double order = std::log2(errs[i - 1] / errs[i]);
    CAPTURE(order);
    CHECK(order >= 1.9);
  }
}

TEST_CASE("model checks and argument validation") {
  const ProblemParams P = ProblemParams::make(2, 0.5);
  const LocalModel m = model(2, 1.0, vec({1, -2}));
  const ModelCheck c = check_model(m);
  CHECK(c.homogeneity_error < 1e-12);
  CHECK(c.grad_lower > 0.0);
  CHECK(c.grad_upper >= c.grad_lower);
  CHECK_THROWS_AS(q_radial_integral(model(2, 2.0, vec({1, 1})), Vec::Zero(2), P), ConfigError);
  CHECK_THROWS_AS(q_radial_integral(m, Vec::Zero(3), P), ConfigError);
  const HypothesisReport h = check_q_hypotheses(m, P);
  CHECK(std::isfinite(h.q2_min));
  CHECK(std::isfinite(h.q3_min));
}

TEST_CASE("membership flips with the sign of the coefficient sum") {
  const ProblemParams P = ProblemParams::make(2, 0.5);
  for (double a2 : {-0.9, -1.1}) {
    CurvatureSpec spec = flatness_demo(2, {north_pole(2)}, 1.0, {vec({1.0, a2})});
    const auto cls = classify_Kminus(spec, P);
    REQUIRE(cls.size() == 1);
    CHECK(cls[0].converged);
    CHECK(cls[0].eta.norm() < 1e-8);
    CHECK(cls[0].member == (1.0 + a2 < 0.0));
  }
  // Exactly at Σa = 0 the sign is undecided and the point is not a member.
  const auto tie = classify_Kminus(flatness_demo(2, {north_pole(2)}, 1.0, {vec({1.0, -1.0})}), P);
  REQUIRE(tie.size() == 1);
  CHECK_FALSE(tie[0].member);
  CHECK_FALSE(tie[0].note.empty());
  // Models of another order are skipped.
  CurvatureSpec other = flatness_demo(2, {north_pole(2)}, 1.5, {vec({1.0, -2.0})});
  CHECK(classify_Kminus(other, P).empty());
}

TEST_CASE("matrix M for two antipodal members") {
  const ProblemParams P = ProblemParams::make(2, 0.5);
  const double amp = 0.1;
  CurvatureSpec spec = flatness_demo(2, {north_pole(2), south(2)}, 1.0,
                                     {vec({1, -2}), vec({-1, -0.5})}, amp);
  const auto cls = classify_Kminus(spec, P);
  REQUIRE(cls.size() == 2);
  CHECK(cls[0].member);
  CHECK(cls[1].member);
  const MatrixM M = build_matrix_M(spec, cls, P);
  // Diagonal: −K^{−(1+σ)/σ}·(radial integral) with K(q) = 1 and radial = π·amp·Σa.
  CHECK(M.entries(0, 0) == doctest::Approx(kPi * amp).epsilon(1e-6));
  CHECK(M.entries(1, 1) == doctest::Approx(1.5 * kPi * amp).epsilon(1e-6));
  // Off-diagonal: −2^{1/2}/8 · 2√π · G with G = 2^{−1/2} at antipodes.
  CHECK(M.entries(0, 1) == doctest::Approx(-std::sqrt(kPi) / 4.0).epsilon(1e-12));
  CHECK(M.entries(0, 1) == M.entries(1, 0));

  // Off-diagonal scales like (K_i K_j)^{−1/2}.
  const double base = matrix_M_offdiag(north_pole(2), south(2), 1.0, 1.0, P);
  CHECK(matrix_M_offdiag(north_pole(2), south(2), 4.0, 1.0, P) == doctest::Approx(base / 2.0));
  CHECK(green_function(north_pole(2), south(2), P) == doctest::Approx(std::sqrt(0.5)));
  CHECK_THROWS_AS(green_function(north_pole(2), north_pole(2), P), NumericalError);
}

TEST_CASE("pair criterion and positive kernel vectors") {
  Mat A(2, 2);
  A << 1, -2, -2, 1;
  CHECK(pair_criterion(A)[0].holds);
  Mat B(2, 2);
  B << 2, -1, -1, 2;
  CHECK_FALSE(pair_criterion(B)[0].holds);
  CHECK_FALSE(kernel_positive_vector(B).has_value());
  Mat C(2, 2);
  C << 1, -1, -1, 1;
  const auto k = kernel_positive_vector(C);
  REQUIRE(k.has_value());
  CHECK((*k)(0) == doctest::Approx(std::sqrt(0.5)));
  CHECK((*k)(1) == doctest::Approx(std::sqrt(0.5)));
  // Kernel vector of mixed sign is not positive.
  Mat D(2, 2);
  D << 1, 1, 1, 1;
  CHECK_FALSE(kernel_positive_vector(D).has_value());
  Mat E(2, 3);
  CHECK_THROWS_AS(kernel_positive_vector(E), ConfigError);
}

TEST_CASE("2x2 sign consistency over random matrices") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    for (int signs = 0; signs < 8; ++signs) {
      const double a = (signs & 1 ? -1 : 1) * u(rng);
      const double d = (signs & 2 ? -1 : 1) * u(rng);
      const double b = (signs & 4 ? -1 : 1) * u(rng);
      Mat M(2, 2);
      M << a, b, b, d;
      CHECK(pair_criterion(M)[0].holds == (a * d < b * b));
      // Make the block singular; a positive kernel vector exists iff the entries
      // of each row have opposite signs.
      Mat S = M;
      S(1, 1) = b * b / a;
      const auto k = kernel_positive_vector(S, 1e-9);
      CHECK(k.has_value() == (a * b < 0.0));
    }
  }
}
