#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fqc/flatness.hpp"

namespace fqc {

/// Quadrature for V(P, t) = ∫ K∘φ_{P,t}(x)·x dvol. Points are written
/// x = tanh(s)P + sech(s)ω with ω ⊥ P, so dvol = sech^n(s) ds dω and φ_{P,t}
/// shifts s by log t. Trapezoid in s, uniform (n = 2) or product (n = 3) in ω.
struct ObstructionQuadrature {
  double s_max = 18.0;
  double s_step = 0.25;
  int angles = 32;
};

Vec eval_obstruction(const SphereFunction& K, const SpherePoint& P, double t,
                     const ObstructionQuadrature& quad = {});

/// Field on the closed ball of radius (t*−1)/t* in R^{n+1}; a curvature field
/// evaluates V(((t−1)/t)P) = V(P, t).
struct ObstructionField {
  int n = 2;
  double radius = 0.95;
  std::function<Vec(const Vec&)> eval;

  static ObstructionField from_curvature(const SphereFunction& K, int n, double t_star,
                                         const ObstructionQuadrature& quad = {});
  static ObstructionField synthetic(int n, double radius, std::function<Vec(const Vec&)> f);
  Vec operator()(const Vec& p) const { return eval(p); }
};

struct DegreeOptions {
  int seeds_per_axis = 6;     ///< Newton seed lattice in the ball
  int boundary_lat = 24;      ///< boundary sphere sampling / Kronecker triangulation
  int boundary_lon = 48;
  double merge_tol = 1e-6;
  double newton_tol = 1e-11;  ///< relative to the boundary max of |V|
  int newton_iters = 60;
  bool kronecker = true;      ///< n = 2 only
};

struct DegreeZero {
  Vec p;
  int sign = 0;
  double residual = 0.0;
};

struct DegreeReport {
  std::vector<DegreeZero> zeros;
  double boundary_min_norm = 0.0;
  double boundary_max_norm = 0.0;
  std::optional<int> degree;            ///< signed zeros; withheld when degenerate
  std::optional<int> kronecker_degree;  ///< boundary solid-angle integral (n = 2)
  bool degenerate = false;
  std::string method = "signed-zeros";
  std::string note;
};

/// Throws NumericalError when V vanishes on the sampled boundary.
DegreeReport brouwer_degree(const ObstructionField& field, const DegreeOptions& opts = {});

/// Degree of V/|V| on the boundary sphere by summing signed solid angles of the
/// image of a latitude–longitude triangulation.
int kronecker_degree(const ObstructionField& field, int lat, int lon);

/// −1 + (−1)^n Σ_{q: Σa_j(q) < 0} (−1)^{i(q)}, i(q) = #{a_j(q) < 0}.
int index_formula(const CurvatureSpec& spec);

struct SweepRow {
  double t = 0.0;
  double boundary_min_norm = 0.0;
  std::optional<int> degree;
  std::optional<int> kronecker_degree;
  int zeros = 0;
};
std::vector<SweepRow> degree_sweep(const SphereFunction& K, int n, const std::vector<double>& ts,
                                   const DegreeOptions& opts = {},
                                   const ObstructionQuadrature& quad = {});

enum class CompactnessBranch { AtMostOneMember, PairCriterion, Neither };

struct CompactnessReport {
  CompactnessBranch branch = CompactnessBranch::AtMostOneMember;
  std::vector<KminusEntry> classification;
  std::optional<MatrixM> M;
  std::vector<PairResult> pairs;
  /// Pairs failing the criterion whose 2×2 block has a positive kernel vector.
  std::vector<PairResult> kernel_pairs;
  std::optional<Vec> kernel_vector;  ///< positive kernel vector of the full M, if any
};
CompactnessReport compactness_certificate(const CurvatureSpec& spec, const ProblemParams& params,
                                          const FlatnessOptions& opts = {});
std::string to_string(CompactnessBranch b);

}  // namespace fqc
