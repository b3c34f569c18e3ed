#pragma once

#include <vector>

#include "fqc/interpolate.hpp"

namespace fqc {

/// Thresholds for the blow-up diagnostics. The analysis only asserts that such
/// constants exist; these are working choices.
struct DiagnosticOptions {
  double R_fit = 5.0;            ///< profile window |z| ≤ R_fit after rescaling
  double harnack_r = 0.5;        ///< annulus B_{2r} \ B_{r/2} (geodesic radians)
  double pohozaev_R = 1.0;       ///< chart ball radius
  std::vector<double> pair_radii = {1.0, 1.5, 2.0, 2.5, 3.0};
  double pair_min_m = 1.5;       ///< concentration m_u required for a pair fit
  int plateau_limit = 3;         ///< more tied argmax nodes than this is a plateau
  std::vector<double> moment_orders;  ///< empty: {−1, 0, 1, n}
};

/// Argmax of a grid field, refined off-grid by Newton ascent on an interpolant.
struct ArgmaxInfo {
  int node = 0;            ///< lowest-index grid argmax
  int ties = 1;            ///< nodes within 1e−12 (relative) of the grid max
  SpherePoint point;       ///< refined location
  double value = 0.0;      ///< interpolant value at `point` (grid value if not refined)
  bool refined = false;
  bool degenerate = false; ///< plateau wider than the limit, or nearly constant field
};
ArgmaxInfo locate_max(const GridField& v, const Evaluable* interp, int plateau_limit = 3);

/// Pullback to the chart centred at `center`: u(y) = H(y)·v(F(y)),
/// H(y) = (2/(1+|y|²))^{(n−2σ)/2}.
double chart_weight(const Vec& y, const ProblemParams& params);

struct ProfileResult {
  double m = 0.0;          ///< v at the refined argmax
  double m_chart = 0.0;    ///< u(0) = H(0)·m
  double err = 0.0;        ///< sup over grid nodes with |z| ≤ R_fit
  double k_fit = 0.0;
  double k_predicted = 0.0;  ///< (K(x̄)·H(0)^τ)^{1/σ}/4
  int samples = 0;
  bool degenerate = false;
  SpherePoint center;
};

/// Compares m_u^{-1}u(m_u^{−(p−1)/2σ}z) with (1+k|z|²)^{(2σ−n)/2} at the grid
/// nodes inside the window, k fitted by least squares.
ProfileResult profile_error(const GridField& v, const ProblemParams& params,
                            const Evaluable* interp, double tau, double K_at_center,
                            const DiagnosticOptions& opts = {});

/// sup/inf of v over nodes at geodesic distance in [r/2, 2r] from center.
double harnack_ratio(const GridField& v, const SpherePoint& center, double r);

struct PairFit {
  double a = 0.0;
  double b = 0.0;
  int samples = 0;
};
/// Least squares of values ≈ a·r^{2σ−n} + b.
PairFit fit_pair_limit(const std::vector<double>& radii, const std::vector<double>& values,
                       const ProblemParams& params);
/// Samples m_u·u(y) on chart circles |y| = r for each probe radius and fits.
PairFit pair_limit_fit(const Evaluable& v, const SpherePoint& center, double m_chart,
                       const std::vector<double>& probe_radii, const ProblemParams& params);
/// 2^{n−2σ} K(q)^{(2σ−n)/(2σ)}.
double pair_limit_expected(const ProblemParams& params, double K_at_q);

/// Chart spherical average ū(r) of u = H·(v∘F).
double chart_average(const Evaluable& v, const StereoChart& chart, double r,
                     const ProblemParams& params, int directions = 32);

/// Number of interior critical points of r ↦ r^{2σ/(p−1)} ū(r) over a log grid in
/// [r_min, r_max].
int count_critical_radii(const Evaluable& v, const SpherePoint& center, double r_min,
                         double r_max, const ProblemParams& params, double p);

struct MomentRow {
  double s = 0.0;
  double inner = 0.0;  ///< ∫_{|y|≤ρ} |y|^s u^{p+1} dy
  double outer = 0.0;  ///< ∫_{ρ<|y|≤1} |y|^s u^{p+1} dy
};
/// Moment table in the chart centred at `center`, ρ = R_fit·m_u^{−(p−1)/(2σ)}.
std::vector<MomentRow> moment_table(const GridField& v, const SpherePoint& center,
                                    const ProblemParams& params, double p, double m_chart,
                                    const DiagnosticOptions& opts = {});

}  // namespace fqc
