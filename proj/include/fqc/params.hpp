#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace fqc {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// Invalid input or configuration (maps to CLI exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A numerical procedure failed (maps to CLI exit code 3).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Volume of the unit sphere S^n in R^{n+1}.
double sphere_volume(int n);

/// Dimension, fractional order and the constants derived from them.
struct ProblemParams {
  int n = 2;
  double sigma = 0.5;
  double c_intertwine = 0.0;  ///< Γ(n/2+σ)/Γ(n/2−σ)
  double c_riesz = 0.0;       ///< Γ((n−2σ)/2)/(2^{2σ} π^{n/2} Γ(σ))
  double omega_n = 0.0;       ///< |S^n|

  /// Validates 0 < σ < n/2 and n ≥ 2.
  static ProblemParams make(int n, double sigma);

  /// (n+2σ)/(n−2σ)
  double critical_exponent() const { return (n + 2.0 * sigma) / (n - 2.0 * sigma); }
  /// 2n/(n−2σ)
  double sobolev_exponent() const { return 2.0 * n / (n - 2.0 * sigma); }
  /// (n−2σ)/2
  double conformal_weight() const { return 0.5 * (n - 2.0 * sigma); }
  /// Exponent p = (n+2σ)/(n−2σ) − τ.
  double exponent(double tau) const { return critical_exponent() - tau; }
};

}  // namespace fqc
