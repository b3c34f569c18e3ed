#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fqc/params.hpp"

namespace fqc::app {

enum class Task { Spectrum, Solve, Continue, Diagnose, Flatness, Degree, Verify, Certify };

std::string to_string(Task t);
/// Throws ConfigError on an unknown name.
Task task_from_string(const std::string& name);

struct CurvaturePoint {
  std::vector<double> pole;
  double beta = -1.0;  ///< −1 inherits [curvature] beta
  std::vector<double> a;
};

struct CurvatureConfig {
  /// constant | linear-x | quadratic-poly | flatness-demo | morse-demo | grid
  std::string builtin = "constant";
  double value = 1.0;      ///< constant
  double epsilon = 0.1;    ///< linear-x, quadratic-poly
  int axis = -1;           ///< linear-x; −1 is x_{n+1}
  double amplitude = 0.1;  ///< flatness-demo, morse-demo
  double beta = 1.0;       ///< flatness-demo default exponent
  double r0 = 0.25;        ///< flatness-demo cutoff radius
  std::vector<CurvaturePoint> points;
  std::filesystem::path file;  ///< grid: columnar file, resolved against the config's directory
};

struct SolveConfig {
  double tau = 0.0;
  double tol = 1e-10;
  int max_iters = 5000;
  double damping = 0.5;
  std::string normalization = "max-one";  ///< max-one | energy
  std::string init = "constant";          ///< constant | bubble | file
  std::vector<double> init_pole;          ///< bubble; default north pole
  double init_t = 2.0;
  std::filesystem::path init_file;
};

struct ContinueConfig {
  std::vector<double> schedule = {0.4, 0.2, 0.1, 0.05};
  bool pohozaev = true;
};

struct DiagnosticsConfig {
  double R_fit = 5.0;
  double harnack_r = 0.5;
  double pohozaev_R = 1.0;
  std::vector<double> pair_radii = {1.0, 1.5, 2.0, 2.5, 3.0};
  double pair_min_m = 1.5;
  std::filesystem::path field;  ///< diagnose: existing solution; empty solves first
};

struct DegreeConfig {
  double t_star = 20.0;
  std::vector<double> t_sweep = {5.0, 10.0, 20.0, 40.0};
  int seeds = 6;
  int boundary_lat = 24;
  int boundary_lon = 48;
  int sample_resolution = 6;  ///< grid resolution of the poles P in the obstruction sample CSV
};

struct FlatnessConfig {
  int radial = 48;
  int angular = 24;
  double tol = 1e-7;
  int max_refinements = 2;
  double extent = 2.0;
  int per_axis = 5;
};

struct RunConfig {
  Task task = Task::Verify;
  int n = 2;
  double sigma = 0.5;
  int resolution = 32;
  int degree = -1;         ///< harmonic transform degree; −1 is resolution − 1
  int kernel_degree = -1;  ///< Riesz kernel truncation; −1 is resolution − 1
  CurvatureConfig curvature;
  SolveConfig solve;
  ContinueConfig cont;
  DiagnosticsConfig diag;
  DegreeConfig degree_opts;
  FlatnessConfig flatness;
  int k_max = 32;
  std::filesystem::path out_dir = "out";
  std::uint64_t seed = 0;
  int threads = 1;

  ProblemParams params() const { return ProblemParams::make(n, sigma); }
};

/// Parses TOML text. Unknown tables or keys and ill-typed values raise ConfigError.
/// Relative file paths resolve against `base_dir`.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// Semantic checks: admissible (n, σ), sizes, referenced files exist.
void validate(const RunConfig& cfg);

/// Canonical text of the settings that affect results (not out_dir or threads).
std::string canonical_text(const RunConfig& cfg);
/// FNV-1a 64 of canonical_text, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

}  // namespace fqc::app
