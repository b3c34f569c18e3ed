#include "fqc/params.hpp"

#include <cmath>

namespace fqc {

double sphere_volume(int n) {
  const double h = 0.5 * (n + 1);
  return 2.0 * std::pow(kPi, h) / std::tgamma(h);
}

ProblemParams ProblemParams::make(int n, double sigma) {
  if (n < 2) throw ConfigError("dimension n must be at least 2");
  if (!(sigma > 0.0) || !(sigma < 0.5 * n))
    throw ConfigError("sigma must lie in (0, n/2)");
  ProblemParams p;
  p.n = n;
  p.sigma = sigma;
  const double h = 0.5 * n;
  p.c_intertwine = std::exp(std::lgamma(h + sigma) - std::lgamma(h - sigma));
  p.c_riesz = std::exp(std::lgamma(h - sigma) - std::lgamma(sigma)) /
              (std::pow(2.0, 2.0 * sigma) * std::pow(kPi, h));
  p.omega_n = sphere_volume(n);
  return p;
}

}  // namespace fqc
