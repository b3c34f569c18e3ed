#pragma once

#include "fqc/curvature.hpp"
#include "fqc/interpolate.hpp"

namespace fqc {

struct PohozaevOptions {
  int radial = 48;           ///< interior radial nodes
  int angular = 64;          ///< interior angular nodes per S¹ factor
  int exterior_angular = 64; ///< directions for the exterior integral (per S¹ factor)
  int exterior_panels = 24;  ///< log-radius panels out to `far`
  int exterior_per_panel = 8;
  double far = 1e6;          ///< outer chart radius of the exterior integral
  bool allow_axisymmetric = true;
};

/// Terms of the Pohozaev identity on the chart ball B_R, with u split as
/// (Riesz integral of K̂u^p over B_R) + h_R:
///   T1 + T2 = T3 + T4 + T5 with
///   T1 = ((n−2σ)/2 − n/(p+1)) ∫ K̂u^{p+1},   T2 = −1/(p+1) ∫ (x·∇K̂) u^{p+1},
///   T3 = (n−2σ)/2 ∫ K̂u^p h,   T4 = ∫ (x·∇h) K̂u^p,   T5 = −R/(p+1) ∫_{∂B_R} K̂u^{p+1},
/// where u = H·(v∘F), K̂ = c(n,σ)c_{n,σ}·(K∘F)·H^τ and h_R is the Riesz integral
/// of K̂u^p over the exterior of B_R. For a field that does not solve the equation,
/// u differs from the sum of the two integrals and the identity fails.
struct PohozaevReport {
  double residual = 0.0;   ///< |T1 + T2 − T3 − T4 − T5|
  double T1 = 0.0, T2 = 0.0, T3 = 0.0, T4 = 0.0, T5 = 0.0;
  double scale = 0.0;      ///< |T1|+…+|T5|
  bool axisymmetric = false;
};

/// `v` must be evaluable anywhere on S^n (closure or spectral interpolant).
PohozaevReport pohozaev_residual(const Evaluable& v, const SphereFunction& K,
                                 const SpherePoint& center, double R_ball,
                                 const ProblemParams& params, double tau = 0.0,
                                 const PohozaevOptions& opts = {});

/// Grid form: v enters through its spectral interpolant.
PohozaevReport pohozaev_residual(const GridField& v, const SphereFunction& K,
                                 std::shared_ptr<const HarmonicTransform> T,
                                 const SpherePoint& center, double R_ball,
                                 const ProblemParams& params, double tau = 0.0,
                                 const PohozaevOptions& opts = {});

}  // namespace fqc
