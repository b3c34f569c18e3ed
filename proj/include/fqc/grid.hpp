#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

#include "fqc/sphere.hpp"

namespace fqc {

/// Product quadrature grid on S^n, n ∈ {2, 3}.
///
/// Nodes are grouped in rings: every ring is a uniform circle of `ring_size`
/// nodes in the (x₁, x₂) angle φ_k = 2πk/M, and node index = ring·M + k.
/// n = 2: Gauss–Legendre(N) in cos θ × M = 2N.
/// n = 3: Gauss–Chebyshev-U(N) in x₄ = cos χ × Gauss–Legendre(N) in cos θ × M = 2N.
/// Both integrate polynomials of degree ≤ 2N−1 exactly.
struct QuadratureGrid {
  int n = 2;
  int resolution = 0;
  int exactness_degree = 0;
  int rings = 0;
  int ring_size = 0;
  Mat nodes;    ///< one row per node, n+1 columns
  Vec weights;  ///< positive, sum ω_n
  /// Coordinate along the zonal axis x_{n+1} per ring.
  std::vector<double> ring_axis;
  /// n = 3 only: index of the cos χ level of each ring (rings sharing x₄).
  std::vector<int> ring_level;

  int size() const { return static_cast<int>(weights.size()); }
  SpherePoint node(int i) const { return nodes.row(i).transpose(); }
  double total_weight() const { return weights.sum(); }
};

using GridPtr = std::shared_ptr<const QuadratureGrid>;

/// Throws ConfigError for n ∉ {2,3} or resolution < 4.
GridPtr build_grid(int n, int resolution);

/// Function values at the nodes of a shared grid.
struct GridField {
  GridPtr grid;
  Vec values;

  GridField() = default;
  GridField(GridPtr g, Vec v);
  int size() const { return static_cast<int>(values.size()); }
};

using PointFunction = std::function<double(const SpherePoint&)>;

GridField sample(const GridPtr& grid, const PointFunction& f);
GridField constant_field(const GridPtr& grid, double c);

double integrate(const GridField& f);
/// ⨍ f = (1/ω_n) ∫ f.
double average(const GridField& f, const ProblemParams& params);
/// Quadrature inner product ∫ f g.
double inner(const GridField& f, const GridField& g);
double sup_norm(const Vec& v);

/// Columnar text: header line, then one row per node "x1 … x_{n+1} weight value".
void write_columnar(std::ostream& os, const GridField& f);
/// Reads a columnar file written for `grid`; rows must match the grid's nodes to 1e−9.
GridField read_columnar(std::istream& is, const GridPtr& grid);

}  // namespace fqc
