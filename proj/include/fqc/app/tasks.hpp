#pragma once

#include <iosfwd>
#include <memory>

#include "fqc/app/config.hpp"
#include "fqc/app/output.hpp"
#include "fqc/curvature.hpp"
#include "fqc/spectral.hpp"

namespace fqc::app {

/// Shared objects built once per run from a validated config.
struct Context {
  RunConfig cfg;
  ProblemParams params;
  GridPtr grid;
  std::shared_ptr<const HarmonicTransform> T;
  CurvatureSpec K;
};

Context make_context(const RunConfig& cfg);

/// Builds the configured curvature. `grid` reads a columnar file on the configured
/// grid and evaluates it through its spectral interpolant.
CurvatureSpec make_curvature(const RunConfig& cfg, const GridPtr& grid,
                             std::shared_ptr<const HarmonicTransform> T);

/// Runs the configured task, writing artifacts through `out` and one-line progress
/// notes to `log`. Returns 0, or 3 when the task completed but its result failed
/// (unconverged solve, failing verify check, truncated continuation).
int run_task(const Context& ctx, ArtifactWriter& out, std::ostream& log);

}  // namespace fqc::app
