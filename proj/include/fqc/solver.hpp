#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fqc/curvature.hpp"
#include "fqc/diagnostics.hpp"
#include "fqc/riesz.hpp"

namespace fqc {

enum class Normalization { MaxOne, Energy };

struct SolveOptions {
  double tau = 0.0;        ///< p = (n+2σ)/(n−2σ) − τ
  int max_iters = 5000;
  double tol = 1e-10;      ///< sup-norm residual target
  Normalization normalization = Normalization::MaxOne;
  double damping = 0.5;    ///< d in v ← (1−d)v + d·normalize(·)
};

struct SolveReport {
  GridField v;
  double exponent = 0.0;
  double residual_sup = 0.0;   ///< ‖v − P_σ^{-1}(c(n,σ) K v^p)‖_∞ of the returned v
  int iterations = 0;
  double energy = 0.0;         ///< λ₀⨍Kv^{p+1} / (⨍K v^q)^{2/q}
  double kw_defect_norm = -1;  ///< −1 when no evaluable K was supplied
  double multiplier_absorbed = 1.0;  ///< the factor α in v ← α·v
  /// residual_sup ≤ tol and, at τ = 0 with `Kf`, Kazdan–Warner defect ≤ 10·tol
  bool solution = false;
  bool kw_rejected = false;    ///< converged but failed the defect test
};

/// ‖v − P_σ^{-1}(c(n,σ) K v^p)‖_∞ with the Riesz operator as P_σ^{-1}.
double fixed_point_residual(const RieszOperator& R, const Vec& K, const Vec& v, double p);

/// Damped normalized fixed-point iteration for v = P_σ^{-1}(c(n,σ) K v^p).
/// `Kf` (optional) enables the Kazdan–Warner defect in the report.
SolveReport solve(const RieszOperator& R, const GridField& K, const SolveOptions& opts,
                  const GridField& init, const SphereFunction* Kf = nullptr);

struct BlowupRecord {
  double tau = 0.0;
  double m = 0.0;               ///< max of v on S^n
  SpherePoint argmax;
  double profile_error = 0.0;
  double k_fit = 0.0;
  double k_predicted = 0.0;
  double harnack_ratio = 0.0;
  double pohozaev_residual = 0.0;
  double pair_a_fit = 0.0;
  double pair_b_fit = 0.0;
  double pair_a_expected = 0.0;
  double unit_radius_value = 0.0;  ///< m_u·ū(1): chart average at |y| = 1
  int critical_radii = 0;           ///< critical points of r^{2σ/(p−1)}ū(r) (reported only)
  double residual = 0.0;
  int iterations = 0;
  bool degenerate = false;
  std::vector<MomentRow> moments;
  GridField v;
};

struct BlowupTrace {
  std::vector<BlowupRecord> records;
  bool truncated = false;
  std::string failure;
};

struct ContinuationOptions {
  SolveOptions solve;
  DiagnosticOptions diag;
  bool run_pohozaev = true;
};

/// Warm-started solves along a strictly decreasing τ schedule with per-step diagnostics.
/// A failed solve truncates the trace and records the failure.
BlowupTrace continuation_blowup(const RieszOperator& R, const HarmonicTransform& T,
                                const SphereFunction& K, const std::vector<double>& schedule,
                                const ContinuationOptions& opts, const GridField* init = nullptr);

}  // namespace fqc
