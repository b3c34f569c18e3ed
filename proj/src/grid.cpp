#include "fqc/grid.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "fqc/quadrature.hpp"

namespace fqc {

GridPtr build_grid(int n, int resolution) {
  if (n != 2 && n != 3) throw ConfigError("only n = 2 and n = 3 are supported");
  if (resolution < 4) throw ConfigError("grid resolution must be at least 4");
  auto g = std::make_shared<QuadratureGrid>();
  const int N = resolution;
  const int M = 2 * N;
  g->n = n;
  g->resolution = N;
  g->exactness_degree = 2 * N - 1;
  g->ring_size = M;
  const Rule1D theta = gauss_legendre(N);
  const double dphi = 2.0 * kPi / M;

  // Ring list: (axis coordinate, ring weight, S² slice polar cos, slice radius).
  struct Ring {
    double axis, weight, ct, radius;
    int level;
  };
  std::vector<Ring> rings;
  if (n == 2) {
    for (int i = 0; i < N; ++i)
      rings.push_back({theta.x[i], theta.w[i] * dphi, theta.x[i], 1.0, 0});
  } else {
    const Rule1D chi = gauss_chebyshev_u(N);
    for (int a = 0; a < N; ++a) {
      const double sc = std::sqrt(std::max(0.0, 1.0 - chi.x[a] * chi.x[a]));
      for (int i = 0; i < N; ++i)
        rings.push_back({chi.x[a], chi.w[a] * theta.w[i] * dphi, theta.x[i], sc, a});
    }
  }

  g->rings = static_cast<int>(rings.size());
  g->nodes.resize(g->rings * M, n + 1);
  g->weights.resize(g->rings * M);
  for (int r = 0; r < g->rings; ++r) {
    const Ring& R = rings[r];
    const double st = std::sqrt(std::max(0.0, 1.0 - R.ct * R.ct));
    g->ring_axis.push_back(R.axis);
    g->ring_level.push_back(R.level);
    for (int k = 0; k < M; ++k) {
      const int idx = r * M + k;
      const double phi = k * dphi;
      if (n == 2) {
        g->nodes.row(idx) << st * std::cos(phi), st * std::sin(phi), R.ct;
      } else {
        g->nodes.row(idx) << R.radius * st * std::cos(phi), R.radius * st * std::sin(phi),
            R.radius * R.ct, R.axis;
      }
      g->weights(idx) = R.weight;
    }
  }
  return g;
}

GridField::GridField(GridPtr g, Vec v) : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid->size()) throw ConfigError("field size does not match grid");
  if (!values.allFinite()) throw NumericalError("non-finite value in grid field");
}

GridField sample(const GridPtr& grid, const PointFunction& f) {
  Vec v(grid->size());
  for (int i = 0; i < grid->size(); ++i) v(i) = f(grid->node(i));
  return GridField(grid, std::move(v));
}

GridField constant_field(const GridPtr& grid, double c) {
  return GridField(grid, Vec::Constant(grid->size(), c));
}

double integrate(const GridField& f) { return f.grid->weights.dot(f.values); }

double average(const GridField& f, const ProblemParams& params) {
  return integrate(f) / params.omega_n;
}

double inner(const GridField& f, const GridField& g) {
  return f.grid->weights.dot(f.values.cwiseProduct(g.values));
}

double sup_norm(const Vec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

void write_columnar(std::ostream& os, const GridField& f) {
  const auto& g = *f.grid;
  os << "#";
  for (int j = 0; j <= g.n; ++j) os << " x" << (j + 1);
  os << " weight value\n";
  os << std::setprecision(17);
  for (int i = 0; i < g.size(); ++i) {
    for (int j = 0; j <= g.n; ++j) os << g.nodes(i, j) << ' ';
    os << g.weights(i) << ' ' << f.values(i) << '\n';
  }
}

GridField read_columnar(std::istream& is, const GridPtr& grid) {
  Vec values(grid->size());
  std::string line;
  int row = 0;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (row >= grid->size()) throw ConfigError("columnar file has more rows than the grid");
    std::istringstream ls(line);
    Vec x(grid->n + 1);
    double w = 0.0, v = 0.0;
    for (int j = 0; j <= grid->n; ++j) ls >> x(j);
    ls >> w >> v;
    if (!ls) throw ConfigError("malformed columnar row " + std::to_string(row + 1));
    if ((x - grid->node(row)).norm() > 1e-9 || std::abs(w - grid->weights(row)) > 1e-9)
      throw ConfigError("columnar file does not match the configured grid");
    values(row++) = v;
  }
  if (row != grid->size()) throw ConfigError("columnar file has fewer rows than the grid");
  return GridField(grid, std::move(values));
}

}  // namespace fqc
