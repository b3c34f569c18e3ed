#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fqc/curvature.hpp"

namespace fqc {

/// Quadrature sizes for the R^n integrals. Each integral is evaluated at (radial,
/// angular) and at twice both; the finer value is returned and the difference is
/// the error estimate. While the estimate exceeds tol both sizes are doubled again,
/// at most max_refinements times.
struct FlatnessOptions {
  int radial = 48;    ///< Gauss–Jacobi nodes in s, r = tan s
  int angular = 24;   ///< nodes per orthant edge (per angle for n = 3)
  double tol = 1e-7;  ///< NumericalError when the estimate still exceeds this
  int max_refinements = 2;
};

struct VectorIntegral {
  Vec value;
  double error = 0.0;
};
struct ScalarIntegral {
  double value = 0.0;
  double error = 0.0;
};

/// ∫ ∇Q(y+ξ)(1+|y|²)^{−n} dy.
VectorIntegral q_gradient_integral(const LocalModel& model, const Vec& xi,
                                   const ProblemParams& params, const FlatnessOptions& opts = {});
/// ∫ y·∇Q(y+ξ)(1+|y|²)^{−n} dy.
ScalarIntegral q_radial_integral(const LocalModel& model, const Vec& xi,
                                 const ProblemParams& params, const FlatnessOptions& opts = {});
/// ∫ Q(y+ξ)(1+|y|²)^{−n} dy; with `conformal` the integrand carries the extra
/// factor (1−|y|²)/(1+|y|²).
ScalarIntegral q_value_integral(const LocalModel& model, const Vec& xi,
                                const ProblemParams& params, bool conformal = false,
                                const FlatnessOptions& opts = {});

/// Sampled sanity checks of a model: homogeneity of Q and the gradient bounds
/// c₁|y|^{β−1} ≤ |∇Q(y)| ≤ c₂|y|^{β−1}.
struct ModelCheck {
  double homogeneity_error = 0.0;  ///< max |Q(λy) − λ^β Q(y)|, λ ∈ {0.5, 2}, |y| = 1
  double grad_lower = 0.0;         ///< c₁
  double grad_upper = 0.0;         ///< c₂
};
ModelCheck check_model(const LocalModel& model, int samples = 64);

/// Minimum over a ξ-grid of max(|∇-integral|, |value integral|) for the two
/// non-vanishing hypotheses; values below 1e−6 are flagged, not certified.
struct HypothesisReport {
  double q2_min = 0.0;  ///< value integral with the (1−|y|²)/(1+|y|²) factor
  double q3_min = 0.0;  ///< plain value integral
  bool q2_flagged = false;
  bool q3_flagged = false;
};
HypothesisReport check_q_hypotheses(const LocalModel& model, const ProblemParams& params,
                                    double extent = 2.0, int per_axis = 5,
                                    const FlatnessOptions& opts = {});

struct KminusEntry {
  int model = 0;            ///< index into spec.critical_points
  SpherePoint q0;
  Vec eta;
  double radial_value = 0.0;
  bool converged = false;
  bool member = false;
  std::string note;         ///< non-convergence warning, empty otherwise
};
/// Newton search (seed 0, trust region |η| ≤ 5) for η₀ with vanishing gradient
/// integral at every model with β = n−2σ; membership when the radial integral at η₀
/// is negative beyond its error estimate. Other models are skipped.
std::vector<KminusEntry> classify_Kminus(const CurvatureSpec& spec, const ProblemParams& params,
                                         const FlatnessOptions& opts = {});

struct MatrixM {
  std::vector<SpherePoint> points;
  std::vector<Vec> etas;
  Mat entries;
};
/// G_q(x) = (1/(1 − cos d(q, x)))^{(n−2σ)/2}.
double green_function(const SpherePoint& q, const SpherePoint& x, const ProblemParams& params);
/// The interaction matrix over the members of a classification (entries with member = true).
MatrixM build_matrix_M(const CurvatureSpec& spec, const std::vector<KminusEntry>& members,
                       const ProblemParams& params, const FlatnessOptions& opts = {});
/// Off-diagonal entry from the closed form, for given K values at the two points.
double matrix_M_offdiag(const SpherePoint& qi, const SpherePoint& qj, double Ki, double Kj,
                        const ProblemParams& params);

struct PairResult {
  int i = 0, j = 0;
  bool holds = false;  ///< M_ii M_jj < M_ij² (strict)
};
std::vector<PairResult> pair_criterion(const Mat& M);

/// A strictly positive unit vector in ker M, if one exists. The kernel is the span
/// of singular vectors with singular value ≤ tol·max(1, σ_max).
std::optional<Vec> kernel_positive_vector(const Mat& M, double tol = 1e-10);

}  // namespace fqc
