#pragma once

#include "fqc/curvature.hpp"
#include "fqc/spectral.hpp"

namespace fqc {

/// Point of 𝒮₀ written as w = 1 + μ + η·x + w̃.
struct ConstraintState {
  GridField w;
  double mu = 0.0;
  Vec eta;
  double norm_defect = 0.0;  ///< |⨍|w|^q − 1|
  Vec moment_defect;         ///< ⨍ x |w|^q
  int iterations = 0;
};

struct MultiplierReport {
  double lambda_p = 0.0;
  Vec Lambda_p;
  /// Averaged L² norm of P_σ w − (λK − Λ·x) w^{(n+2σ)/(n−2σ)}.
  double euler_lagrange_residual = 0.0;
};

/// ⨍ v P_σ v / (⨍ K|v|^q)^{(n−2σ)/n}, q = 2n/(n−2σ).
double energy_EK(const GridField& v, const GridField& K, const ProblemParams& params,
                 const HarmonicTransform& T);

/// First variation dE_K(v)[h] = ⨍ g h with
/// g = (2/B^r) P_σ v − (r q A/B^{r+1}) K v^{q−1}, A = ⨍vP_σv, B = ⨍K v^q, r = 2/q.
double energy_variation(const GridField& v, const GridField& K, const GridField& h,
                        const ProblemParams& params, const HarmonicTransform& T);

struct BecknerSides {
  double lhs = 0.0;  ///< (⨍|v|^q)^{(n−2σ)/n}
  double rhs = 0.0;  ///< (1/λ₀) ⨍ v P_σ v
};
BecknerSides beckner_check(const GridField& v, const ProblemParams& params,
                           const HarmonicTransform& T);

/// Newton solve for (μ, η) placing 1 + μ + η·x + w̃ on 𝒮₀.
ConstraintState project_to_S0(const GridField& w_tilde, const ProblemParams& params,
                              double mu0 = 0.0, const Vec& eta0 = Vec());

/// ∫ ⟨∇K, ∇x_i⟩ v^q dvol, i = 1..n+1.
Vec kazdan_warner_defect(const GridField& v, const SphereFunction& K, const ProblemParams& params);

/// λ_p from testing the Euler–Lagrange equation with w, Λ_p from the
/// (n+1)×(n+1) Gram system ∫⟨∇x_j,∇x_i⟩w^q · Λ = λ ∫⟨∇K,∇x_i⟩w^q.
MultiplierReport lagrange_multipliers(const GridField& w, const SphereFunction& K,
                                      const ProblemParams& params, const HarmonicTransform& T);

struct MinimizeOptions {
  int opt_degree = 6;          ///< highest harmonic degree in w̃
  int max_iters = 400;
  double grad_tol = 1e-11;
  double trust_K = 0.1;        ///< required ‖K − 1‖_∞
  double trust_w = 0.3;        ///< abort if ‖w − 1‖_∞ exceeds this
  int newton_steps = 2;
};

struct MinimizeResult {
  GridField w;
  MultiplierReport report;
  double energy = 0.0;
  double distance_sup = 0.0;   ///< ‖w_K − 1‖_∞
  double K_distance = 0.0;     ///< inf_c ‖K − c‖_{L^{2n/(n+2σ)}}
  double ratio = 0.0;          ///< distance_sup / K_distance (0 when K is constant)
  double coercivity = 0.0;     ///< smallest eigenvalue of the reduced Hessian w.r.t. diag(λ_ℓ/ω_n)
  double gradient_norm = 0.0;
  int iterations = 0;
  Vec coeffs;                  ///< w̃ coefficients (degrees 2..opt_degree)
};

/// Local minimizer of E_K on 𝒮₀ near 1: preconditioned projected gradient with
/// Armijo backtracking, then Newton polish with a finite-difference Hessian.
MinimizeResult minimize_EK_near_1(const SphereFunction& K, const ProblemParams& params,
                                  const HarmonicTransform& T, const MinimizeOptions& opts = {});

/// inf_c ‖K − c‖_{L^s} on the grid (golden-section search in c).
double distance_to_constants(const GridField& K, double s);

}  // namespace fqc
