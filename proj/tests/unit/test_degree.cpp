#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fqc/degree.hpp"

using namespace fqc;

namespace {

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

SpherePoint unit(const Vec& v) { return v.normalized(); }

SpherePoint south(int n) {
  SpherePoint s = north_pole(n);
  s = -s;
  return s;
}

}  // namespace

TEST_CASE("obstruction vector closed forms") {
  // K ≡ 1: ∫x dvol = 0 for every conformal map.
  for (double t : {1.0, 3.0, 20.0})
    CHECK(eval_obstruction(constant_function(1.0), unit(vec({0.2, -0.5, 0.7})), t).norm() < 1e-10);
  // K = 1 + εx₃ at t = 1: ∫εx₃·x = ε(4π/3)e₃.
  const Vec V = eval_obstruction(linear_function(2, 0.1), north_pole(2), 1.0);
  CHECK(V(0) == doctest::Approx(0.0));
  CHECK(V(1) == doctest::Approx(0.0));
  CHECK(V(2) == doctest::Approx(0.4 * kPi / 3.0).epsilon(1e-8));
}

TEST_CASE("obstruction vector is rotation equivariant and linear in K − 1") {
  const SphereFunction K = quadratic_function(2, 0.3);
  const SphereFunction L = linear_function(2, 0.2, 0);
  auto both = [&](const SpherePoint& x) { return K(x) + L(x) - 1.0; };
  SphereFunction KL{"sum", both, [&](const SpherePoint& x) { return (K.gradient(x) + L.gradient(x)).eval(); }};
  const double a = 0.7;
  Mat R(3, 3);
  R << std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a), 0, 0, 0, 1;
  Mat Ry(3, 3);
  Ry << std::cos(0.4), 0, std::sin(0.4), 0, 1, 0, -std::sin(0.4), 0, std::cos(0.4);
  const Mat Q = R * Ry;
  const SpherePoint P = unit(vec({0.3, 0.1, 0.9}));
  for (double t : {1.5, 6.0}) {
    const Vec V = eval_obstruction(KL, P, t);
    const Vec VR = eval_obstruction(rotated(KL, Q), Q * P, t);
    CHECK((VR - Q * V).norm() < 1e-9);
    // Homotopy: V_{μK+(1−μ)} = μV_K.
    const Vec Vh = eval_obstruction(homotopy(KL, 0.25), P, t);
    CHECK((Vh - 0.25 * V).norm() < 1e-10);
  }
}

TEST_CASE("degree of synthetic fields") {
  for (int n : {2, 3}) {
    CAPTURE(n);
    const auto id = ObstructionField::synthetic(n, 0.9, [](const Vec& p) { return p; });
    const DegreeReport r = brouwer_degree(id);
    REQUIRE(r.degree.has_value());
    CHECK(*r.degree == 1);
    CHECK(r.zeros.size() == 1);
    if (n == 2) {
      REQUIRE(r.kronecker_degree.has_value());
      CHECK(*r.kronecker_degree == 1);
    }
    // A reflection flips the sign.
    const auto refl = ObstructionField::synthetic(n, 0.9, [](const Vec& p) {
      Vec q = p;
      q(0) = -q(0);
      return q;
    });
    CHECK(brouwer_degree(refl).degree == -1);
    // Non-vanishing field: degree 0, no zeros.
    const auto shifted = ObstructionField::synthetic(n, 0.9, [](const Vec& p) {
      Vec q = p;
      q(0) += 2.0;
      return q;
    });
    const DegreeReport s = brouwer_degree(shifted);
    CHECK(s.degree == 0);
    CHECK(s.zeros.empty());
  }
  // Two zeros of opposite index.
  const auto pair = ObstructionField::synthetic(2, 0.9, [](const Vec& p) {
    Vec q = p;
    q(0) = p(0) * p(0) - 0.25;
    return q;
  });
  const DegreeReport pr = brouwer_degree(pair);
  CHECK(pr.zeros.size() == 2);
  CHECK(pr.degree == 0);
  CHECK(pr.kronecker_degree == 0);

  const auto vanishing = ObstructionField::synthetic(2, 0.9, [](const Vec& p) {
    Vec q = p;
    q(0) = p.squaredNorm() - 0.81;
    q(1) = 0.0;
    q(2) = 0.0;
    return q;
  });
  CHECK_THROWS_AS(brouwer_degree(vanishing), NumericalError);
}

TEST_CASE("degree of curvature obstructions") {
  DegreeOptions o;
  o.seeds_per_axis = 4;
  o.boundary_lat = 16;
  o.boundary_lon = 32;
  // The linear K has a nowhere-vanishing obstruction on the ball.
  const auto lin = ObstructionField::from_curvature(linear_function(2, 0.1), 2, 20.0);
  const DegreeReport r = brouwer_degree(lin, o);
  CHECK(r.degree == 0);
  CHECK(r.kronecker_degree == 0);
  CHECK(r.boundary_min_norm > 0.0);
  // V(((t−1)/t)P) = V(P, t).
  const SpherePoint P = unit(vec({0.0, 0.6, 0.8}));
  CHECK((lin(0.5 * P) - eval_obstruction(linear_function(2, 0.1), P, 2.0)).norm() < 1e-12);
}

TEST_CASE("index formula") {
  auto one = [](const Vec& a) {
    CurvatureSpec s = flatness_demo(2, {north_pole(2)}, 2.0, {a});
    return index_formula(s);
  };
  // −1 + Σ over Σa < 0 of (−1)^{#negative}
  CHECK(one(vec({-1, -1})) == 0);
  CHECK(one(vec({1, -2})) == -2);
  CHECK(one(vec({1, 1})) == -1);
  CHECK(one(vec({-1, 2})) == -1);
  CHECK_THROWS_AS(one(vec({1, -1})), ConfigError);
  CHECK_THROWS_AS(one(vec({0, -1})), ConfigError);

  // Independent of the order of the critical points.
  const std::vector<SpherePoint> pts = {north_pole(2), south(2), unit(vec({1, 0, 0}))};
  const std::vector<Vec> as = {vec({1, -2}), vec({-1, -1}), vec({-0.5, -1})};
  const int base = index_formula(flatness_demo(2, pts, 2.0, as, 0.1, 0.15));
  CHECK(base == -1 - 1 + 1 + 1);
  std::vector<int> perm = {0, 1, 2};
  while (std::next_permutation(perm.begin(), perm.end())) {
    std::vector<SpherePoint> p2;
    std::vector<Vec> a2;
    for (int i : perm) {
      p2.push_back(pts[i]);
      a2.push_back(as[i]);
    }
    CHECK(index_formula(flatness_demo(2, p2, 2.0, a2, 0.1, 0.15)) == base);
  }
}

TEST_CASE("index formula on a declared four-point spec") {
  // max (−1,−1), min (1,1), two saddles (−2,1): −1 + (1 − 1 − 1) = −2. Declared
  // only; no function on S² realizes exactly this set of critical points.
  const std::vector<SpherePoint> pts = {north_pole(2), south(2), unit(vec({1, 0, 0})), unit(vec({-1, 0, 0}))};
  std::vector<Vec> as = {vec({-1, -1}), vec({1, 1}), vec({-2, 1}), vec({-2, 1})};
  CHECK(index_formula(flatness_demo(2, pts, 2.0, as, 0.1, 0.15)) == -2);
  // Swapping chart axes inside each model leaves it unchanged.
  for (Vec& a : as) a = vec({a(1), a(0)});
  CHECK(index_formula(flatness_demo(2, pts, 2.0, as, 0.1, 0.15)) == -2);
}

TEST_CASE("degree matches the index formula on the Morse demo") {
  const CurvatureSpec spec = morse_demo();
  REQUIRE(spec.critical_points.size() == 8);
  const int idx = index_formula(spec);
  CHECK(idx == -2);
  DegreeOptions o;
  const DegreeReport r = brouwer_degree(ObstructionField::from_curvature(spec.global, 2, 20.0), o);
  REQUIRE(r.degree.has_value());
  CHECK(*r.degree == idx);
  CHECK(r.kronecker_degree == idx);
}

TEST_CASE("compactness certificate branches") {
  const ProblemParams P = ProblemParams::make(2, 0.5);
  const CurvatureSpec single = flatness_demo(2, {north_pole(2)}, 1.0, {vec({1, -2})});
  CHECK(compactness_certificate(single, P).branch == CompactnessBranch::AtMostOneMember);

  const std::vector<SpherePoint> pts = {north_pole(2), south(2)};
  const std::vector<Vec> as = {vec({1, -2}), vec({-1, -0.5})};
  const CompactnessReport pc = compactness_certificate(flatness_demo(2, pts, 1.0, as, 0.1), P);
  CHECK(pc.branch == CompactnessBranch::PairCriterion);
  REQUIRE(pc.M.has_value());
  CHECK(pc.pairs.size() == 1);
  CHECK(pc.kernel_pairs.empty());

  // Larger amplitude makes the diagonal dominate.
  const CompactnessReport nn = compactness_certificate(flatness_demo(2, pts, 1.0, as, 0.5), P);
  CHECK(nn.branch == CompactnessBranch::Neither);
  CHECK_FALSE(nn.kernel_vector.has_value());
  CHECK(to_string(nn.branch) == "neither");
}
