#include "fqc/app/tasks.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <random>

#include <fmt/format.h>

#include "fqc/degree.hpp"
#include "fqc/diagnostics.hpp"
#include "fqc/pohozaev.hpp"
#include "fqc/riesz.hpp"
#include "fqc/solver.hpp"
#include "fqc/variational.hpp"

namespace fqc::app {

using nlohmann::json;

namespace {

json vec_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vec to_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), v.size()); }

/// Optional ints and NaNs both become null.
json opt_json(const std::optional<int>& x) { return x ? json(*x) : json(nullptr); }
json num_json(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

GridField read_field(const std::filesystem::path& p, const GridPtr& grid) {
  std::ifstream in(p);
  if (!in) throw ConfigError("cannot open " + p.string());
  return read_columnar(in, grid);
}

DiagnosticOptions diag_options(const RunConfig& cfg) {
  DiagnosticOptions d;
  d.R_fit = cfg.diag.R_fit;
  d.harnack_r = cfg.diag.harnack_r;
  d.pohozaev_R = cfg.diag.pohozaev_R;
  d.pair_radii = cfg.diag.pair_radii;
  d.pair_min_m = cfg.diag.pair_min_m;
  return d;
}

SolveOptions solve_options(const RunConfig& cfg) {
  SolveOptions s;
  s.tau = cfg.solve.tau;
  s.tol = cfg.solve.tol;
  s.max_iters = cfg.solve.max_iters;
  s.damping = cfg.solve.damping;
  s.normalization =
      cfg.solve.normalization == "energy" ? Normalization::Energy : Normalization::MaxOne;
  return s;
}

FlatnessOptions flatness_options(const RunConfig& cfg) {
  return {cfg.flatness.radial, cfg.flatness.angular, cfg.flatness.tol,
          cfg.flatness.max_refinements};
}

GridField initial_field(const Context& ctx) {
  const SolveConfig& s = ctx.cfg.solve;
  if (s.init == "file") return read_field(s.init_file, ctx.grid);
  if (s.init == "bubble") {
    SpherePoint pole = s.init_pole.empty() ? north_pole(ctx.params.n) : to_vec(s.init_pole);
    if (pole.norm() == 0.0) throw ConfigError("[solve] init_pole must be nonzero");
    pole.normalize();
    return bubble_field(ctx.grid, MoebiusParams::make(pole, s.init_t), ctx.params);
  }
  return constant_field(ctx.grid, 1.0);
}

RieszOperator make_riesz(const Context& ctx) {
  return RieszOperator(ctx.grid, ctx.params, ctx.cfg.kernel_degree);
}

json solve_json(const SolveReport& r) {
  return {{"exponent", r.exponent},
          {"residual_sup", r.residual_sup},
          {"iterations", r.iterations},
          {"energy", r.energy},
          {"kw_defect_norm", r.kw_defect_norm},
          {"multiplier_absorbed", r.multiplier_absorbed},
          {"solution", r.solution},
          {"kw_rejected", r.kw_rejected},
          {"max", r.v.values.maxCoeff()},
          {"min", r.v.values.minCoeff()}};
}

json problem_json(const Context& ctx) {
  return {{"n", ctx.params.n},
          {"sigma", ctx.params.sigma},
          {"resolution", ctx.grid->resolution},
          {"nodes", ctx.grid->size()},
          {"curvature", ctx.K.name}};
}

// ---------------------------------------------------------------------------

int task_spectrum(const Context& ctx, ArtifactWriter& out, std::ostream& log) {
  const ProblemParams& P = ctx.params;
  const int kmax = ctx.cfg.k_max;
  const OperatorSpectrum spec = OperatorSpectrum::make(P, kmax);
  const Vec mu = riesz_kernel_coefficients(P, kmax);
  std::vector<CsvRow> rows;
  double kernel_dev = 0.0;
  for (int k = 0; k <= kmax; ++k) {
    const double dev = mu(k) * P.c_riesz * spec.eigenvalues(k) - 1.0;
    kernel_dev = std::max(kernel_dev, std::abs(dev));
    rows.push_back({std::to_string(k), num(spec.eigenvalues(k)), num(mu(k))});
  }
  out.csv("spectrum.csv", {"k", "lambda", "kernel_coefficient"}, rows);
  json j = problem_json(ctx);
  j["lambda0"] = spec.eigenvalues(0);
  j["c_intertwine"] = P.c_intertwine;
  j["c_riesz"] = P.c_riesz;
  j["critical_exponent"] = P.critical_exponent();
  j["sobolev_exponent"] = P.sobolev_exponent();
  if (kmax >= 1) j["lambda1_over_lambda0"] = spec.eigenvalues(1) / spec.eigenvalues(0);
  j["kernel_inverse_max_deviation"] = kernel_dev;
  out.json("spectrum.json", j);
  log << fmt::format("spectrum: lambda_0 = {:.12g}, {} eigenvalues\n", spec.eigenvalues(0),
                     kmax + 1);
  return 0;
}

int task_solve(const Context& ctx, ArtifactWriter& out, std::ostream& log) {
  const RieszOperator R = make_riesz(ctx);
  const GridField Kg = sample(ctx.grid, ctx.K.global);
  const SolveReport rep = solve(R, Kg, solve_options(ctx.cfg), initial_field(ctx), &ctx.K.global);
  out.field("solution.grid", rep.v);
  json j = problem_json(ctx);
  j["tau"] = ctx.cfg.solve.tau;
  j["solve"] = solve_json(rep);
  out.json("solve.json", j);
  log << fmt::format("solve: residual {:.3e} after {} iterations{}\n", rep.residual_sup,
                     rep.iterations,
                     rep.kw_rejected ? " (rejected: Kazdan-Warner defect "
                                       + fmt::format("{:.3e}", rep.kw_defect_norm) + ")"
                     : rep.solution  ? ""
                                     : " (NOT converged)");
  return rep.solution ? 0 : 3;
}

int task_continue(const Context& ctx, ArtifactWriter& out, std::ostream& log) {
  const RieszOperator R = make_riesz(ctx);
  ContinuationOptions co;
  co.solve = solve_options(ctx.cfg);
  co.diag = diag_options(ctx.cfg);
  co.run_pohozaev = ctx.cfg.cont.pohozaev;
  const GridField init = initial_field(ctx);
  const BlowupTrace trace = continuation_blowup(R, *ctx.T, ctx.K.global, ctx.cfg.cont.schedule,
                                                co, &init);
  out.csv("trace.csv", trace_header(), trace_rows(trace));
  out.csv("moments.csv", {"tau", "s", "region", "value"}, moment_rows(trace));
  if (!trace.records.empty()) out.field("continue_final.grid", trace.records.back().v);
  json recs = json::array();
  for (const BlowupRecord& r : trace.records) {
    recs.push_back({{"tau", r.tau},
                    {"m", r.m},
                    {"argmax", vec_json(r.argmax)},
                    {"profile_error", r.profile_error},
                    {"k_fit", r.k_fit},
                    {"harnack_ratio", r.harnack_ratio},
                    {"pohozaev_residual", r.pohozaev_residual},
                    {"pair_a_fit", num_json(r.pair_a_fit)},
                    {"pair_a_expected", r.pair_a_expected}});
  }
  json j = problem_json(ctx);
  j["schedule"] = ctx.cfg.cont.schedule;
  j["records"] = recs;
  j["truncated"] = trace.truncated;
  j["failure"] = trace.failure;
  out.json("trace.json", j);
  for (const BlowupRecord& r : trace.records)
    log << fmt::format("continue: tau {:<6g} m {:.6f} profile_error {:.3e}\n", r.tau, r.m,
                       r.profile_error);
  if (trace.truncated) log << "continue: trace truncated: " << trace.failure << '\n';
  return trace.truncated ? 3 : 0;
}

int task_diagnose(const Context& ctx, ArtifactWriter& out, std::ostream& log) {
  const ProblemParams& P = ctx.params;
  const double tau = ctx.cfg.solve.tau;
  const double p = P.exponent(tau);
  const DiagnosticOptions dopt = diag_options(ctx.cfg);
  json j = problem_json(ctx);
  j["tau"] = tau;

  GridField v;
  if (!ctx.cfg.diag.field.empty()) {
    v = read_field(ctx.cfg.diag.field, ctx.grid);
    const RieszOperator R = make_riesz(ctx);
    j["residual_sup"] =
        fixed_point_residual(R, sample(ctx.grid, ctx.K.global).values, v.values, p);
  } else {
    const RieszOperator R = make_riesz(ctx);
    const SolveReport rep =
        solve(R, sample(ctx.grid, ctx.K.global), solve_options(ctx.cfg), initial_field(ctx),
              &ctx.K.global);
    if (!rep.solution)
      throw NumericalError(fmt::format(
          "diagnose: no solution (residual {:.3e}, Kazdan-Warner defect {:.3e})",
          rep.residual_sup, rep.kw_defect_norm));
    v = rep.v;
    j["residual_sup"] = rep.residual_sup;
  }
  if (v.values.minCoeff() <= 0.0) throw NumericalError("diagnose: field is not positive");

  const Evaluable interp = Evaluable::interpolant(ctx.T, v);
  const ArgmaxInfo am = locate_max(v, &interp, dopt.plateau_limit);
  const ProfileResult prof = profile_error(v, P, &interp, tau, ctx.K.global(am.point), dopt);
  j["argmax"] = {{"point", vec_json(am.point)},
                 {"value", am.value},
                 {"node", am.node},
                 {"ties", am.ties},
                 {"degenerate", am.degenerate}};
  j["profile"] = {{"m_chart", prof.m_chart},
                  {"error", prof.err},
                  {"k_fit", prof.k_fit},
                  {"k_predicted", prof.k_predicted},
                  {"samples", prof.samples},
                  {"degenerate", prof.degenerate}};
  j["harnack_ratio"] = harnack_ratio(v, am.point, dopt.harnack_r);
  const PohozaevReport poh =
      pohozaev_residual(v, ctx.K.global, ctx.T, am.point, dopt.pohozaev_R, P, tau);
  j["pohozaev"] = {{"residual", poh.residual}, {"T1", poh.T1}, {"T2", poh.T2},
                   {"T3", poh.T3},             {"T4", poh.T4}, {"T5", poh.T5},
                   {"scale", poh.scale},       {"axisymmetric", poh.axisymmetric}};
  j["pair_a_expected"] = pair_limit_expected(P, ctx.K.global(am.point));
  if (prof.m_chart >= dopt.pair_min_m) {
    const PairFit pf = pair_limit_fit(interp, am.point, prof.m_chart, dopt.pair_radii, P);
    j["pair_fit"] = {{"a", pf.a}, {"b", pf.b}, {"samples", pf.samples}};
  } else {
    j["pair_fit"] = nullptr;
  }
  j["kazdan_warner_defect"] = vec_json(kazdan_warner_defect(v, ctx.K.global, P));
  json moments = json::array();
  for (const MomentRow& m : moment_table(v, am.point, P, p, prof.m_chart, dopt))
    moments.push_back({{"s", m.s}, {"inner", m.inner}, {"outer", m.outer}});
  j["moments"] = moments;
  out.json("diagnose.json", j);

  // Rescaled chart profile against the fitted model.
  const StereoChart chart = StereoChart::centered_at(am.point);
  const double scale = std::pow(prof.m_chart, (p - 1.0) / (2.0 * P.sigma));
  std::vector<CsvRow> rows;
  const int steps = 50;
  for (int i = 0; i <= steps; ++i) {
    const double z = dopt.R_fit * i / steps;
    const double observed = chart_average(interp, chart, z / scale, P) / prof.m_chart;
    const double model = std::pow(1.0 + prof.k_fit * z * z, -P.conformal_weight());
    rows.push_back({num(z), num(observed), num(model)});
  }
  out.csv("profile.csv", {"z", "observed", "model"}, rows);
  log << fmt::format("diagnose: m {:.6f}, profile_error {:.3e}, pohozaev {:.3e}\n", am.value,
                     prof.err, poh.residual);
  return 0;
}

json classification_json(const std::vector<KminusEntry>& cls) {
  json a = json::array();
  for (const KminusEntry& e : cls)
    a.push_back({{"model", e.model},
                 {"q0", vec_json(e.q0)},
                 {"eta", vec_json(e.eta)},
                 {"radial_value", e.radial_value},
                 {"converged", e.converged},
                 {"member", e.member},
                 {"note", e.note}});
  return a;
}

std::vector<CsvRow> matrix_rows(const Mat& M) {
  std::vector<CsvRow> rows;
  for (int i = 0; i < M.rows(); ++i)
    for (int k = 0; k < M.cols(); ++k)
      rows.push_back({std::to_string(i), std::to_string(k), num(M(i, k))});
  return rows;
}

int task_flatness(const Context& ctx, ArtifactWriter& out, std::ostream& log) {
  const ProblemParams& P = ctx.params;
  const FlatnessOptions fo = flatness_options(ctx.cfg);
  const auto& models = ctx.K.critical_points;
  if (models.empty()) throw ConfigError("flatness: the curvature declares no critical points");

  json jm = json::array();
  std::vector<CsvRow> rows;
  const Vec zero = Vec::Zero(P.n);
  for (std::size_t i = 0; i < models.size(); ++i) {
    const LocalModel& m = models[i];
    const ModelCheck mc = check_model(m);
    const ScalarIntegral rad = q_radial_integral(m, zero, P, fo);
    const VectorIntegral grad = q_gradient_integral(m, zero, P, fo);
    const HypothesisReport hyp =
        check_q_hypotheses(m, P, ctx.cfg.flatness.extent, ctx.cfg.flatness.per_axis, fo);
    jm.push_back({{"model", i},
                  {"q0", vec_json(m.q0)},
                  {"beta", m.beta},
                  {"a", vec_json(m.a)},
                  {"homogeneity_error", mc.homogeneity_error},
                  {"grad_lower", mc.grad_lower},
                  {"grad_upper", mc.grad_upper},
                  {"radial_integral_0", rad.value},
                  {"radial_integral_0_error", rad.error},
                  {"gradient_integral_0", vec_json(grad.value)},
                  {"q2_min", hyp.q2_min},
                  {"q3_min", hyp.q3_min},
                  {"q2_flagged", hyp.q2_flagged},
                  {"q3_flagged", hyp.q3_flagged}});
    rows.push_back({std::to_string(i), num(m.beta), num(m.a.size() ? m.a.sum() : NAN),
                    num(rad.value), num(grad.value.norm()), num(hyp.q2_min), num(hyp.q3_min)});
  }
  out.csv("flatness.csv",
          {"model", "beta", "sum_a", "radial_integral_0", "gradient_norm_0", "q2_min", "q3_min"},
          rows);

  const std::vector<KminusEntry> cls = classify_Kminus(ctx.K, P, fo);
  std::vector<CsvRow> mem;
  int members = 0;
  for (const KminusEntry& e : cls) {
    members += e.member ? 1 : 0;
    mem.push_back({std::to_string(e.model), num(e.radial_value), e.converged ? "1" : "0",
                   e.member ? "1" : "0"});
    if (!e.note.empty()) log << "flatness: model " << e.model << ": " << e.note << '\n';
  }
  out.csv("membership.csv", {"model", "radial_value", "converged", "member"}, mem);

  json j = problem_json(ctx);
  j["models"] = jm;
  j["classification"] = classification_json(cls);
  j["consistency"] = json::array();
  for (const ConsistencyRow& r : consistency_report(ctx.K))
    j["consistency"].push_back(
        {{"model", r.model}, {"radius", r.radius}, {"max_remainder_ratio", r.max_remainder_ratio}});
  if (members >= 2) {
    const MatrixM M = build_matrix_M(ctx.K, cls, P, fo);
    j["M"] = json::array();
    for (int i = 0; i < M.entries.rows(); ++i)
      j["M"].push_back(vec_json(M.entries.row(i).transpose()));
    out.csv("M.csv", {"i", "j", "value"}, matrix_rows(M.entries));
  } else {
    j["M"] = nullptr;
  }
  out.json("flatness.json", j);
  log << fmt::format("flatness: {} models, {} members of K-minus\n", models.size(), members);
  return 0;
}

int task_certify(const Context& ctx, ArtifactWriter& out, std::ostream& log) {
  const CompactnessReport rep = compactness_certificate(ctx.K, ctx.params, flatness_options(ctx.cfg));
  json j = problem_json(ctx);
  j["branch"] = to_string(rep.branch);
  j["classification"] = classification_json(rep.classification);
  auto pairs_json = [](const std::vector<PairResult>& ps) {
    json a = json::array();
    for (const PairResult& p : ps) a.push_back({{"i", p.i}, {"j", p.j}, {"holds", p.holds}});
    return a;
  };
  j["pairs"] = pairs_json(rep.pairs);
  j["kernel_pairs"] = pairs_json(rep.kernel_pairs);
  j["kernel_vector"] = rep.kernel_vector ? vec_json(*rep.kernel_vector) : json(nullptr);
  if (rep.M) {
    j["M"] = json::array();
    for (int i = 0; i < rep.M->entries.rows(); ++i)
      j["M"].push_back(vec_json(rep.M->entries.row(i).transpose()));
    out.csv("M.csv", {"i", "j", "value"}, matrix_rows(rep.M->entries));
  } else {
    j["M"] = nullptr;
  }
  out.json("certify.json", j);
  log << "certify: branch " << to_string(rep.branch) << '\n';
  return 0;
}

int task_degree(const Context& ctx, ArtifactWriter& out, std::ostream& log) {
  const DegreeConfig& dc = ctx.cfg.degree_opts;
  const int n = ctx.params.n;
  DegreeOptions dopt;
  dopt.seeds_per_axis = dc.seeds;
  dopt.boundary_lat = dc.boundary_lat;
  dopt.boundary_lon = dc.boundary_lon;
  dopt.kronecker = n == 2;

  const ObstructionField field = ObstructionField::from_curvature(ctx.K.global, n, dc.t_star);
  const DegreeReport rep = brouwer_degree(field, dopt);
  json zeros = json::array();
  for (const DegreeZero& z : rep.zeros)
    zeros.push_back({{"p", vec_json(z.p)}, {"sign", z.sign}, {"residual", z.residual}});
  json j = problem_json(ctx);
  j["t_star"] = dc.t_star;
  j["degree"] = opt_json(rep.degree);
  j["kronecker_degree"] = opt_json(rep.kronecker_degree);
  j["degenerate"] = rep.degenerate;
  j["method"] = rep.method;
  j["note"] = rep.note;
  j["boundary_min_norm"] = rep.boundary_min_norm;
  j["boundary_max_norm"] = rep.boundary_max_norm;
  j["zeros"] = zeros;
  if (!ctx.K.critical_points.empty()) j["index_formula"] = index_formula(ctx.K);

  const std::vector<SweepRow> sweep = degree_sweep(ctx.K.global, n, dc.t_sweep, dopt);
  json js = json::array();
  std::vector<CsvRow> srows;
  for (const SweepRow& r : sweep) {
    js.push_back({{"t", r.t},
                  {"boundary_min_norm", r.boundary_min_norm},
                  {"degree", opt_json(r.degree)},
                  {"kronecker_degree", opt_json(r.kronecker_degree)},
                  {"zeros", r.zeros}});
    srows.push_back({num(r.t), num(r.boundary_min_norm),
                     r.degree ? std::to_string(*r.degree) : "",
                     r.kronecker_degree ? std::to_string(*r.kronecker_degree) : "",
                     std::to_string(r.zeros)});
  }
  j["sweep"] = js;
  out.json("degree.json", j);
  out.csv("degree_sweep.csv", {"t", "boundary_min_norm", "degree", "kronecker_degree", "zeros"},
          srows);

  // V(P, t) over the poles of a coarse quadrature grid, for each sweep value.
  const GridPtr poles = build_grid(n, dc.sample_resolution);
  CsvRow header;
  for (int k = 0; k <= n; ++k) header.push_back(fmt::format("P{}", k + 1));
  header.push_back("t");
  for (int k = 0; k <= n; ++k) header.push_back(fmt::format("V{}", k + 1));
  header.push_back("norm");
  std::vector<CsvRow> rows;
  for (double t : dc.t_sweep) {
    for (int i = 0; i < poles->size(); ++i) {
      const SpherePoint P = poles->node(i);
      const Vec V = eval_obstruction(ctx.K.global, P, t);
      CsvRow row;
      for (int k = 0; k <= n; ++k) row.push_back(num(P(k)));
      row.push_back(num(t));
      for (int k = 0; k <= n; ++k) row.push_back(num(V(k)));
      row.push_back(num(V.norm()));
      rows.push_back(std::move(row));
    }
  }
  out.csv("obstruction.csv", header, rows);
  log << fmt::format("degree: t* = {} degree {} (boundary min |V| {:.3e})\n", dc.t_star,
                     rep.degree ? std::to_string(*rep.degree) : "undetermined",
                     rep.boundary_min_norm);
  return 0;
}

// ---------------------------------------------------------------------------

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

Check upper(std::string name, double value, double tol) {
  return {std::move(name), value, tol, std::isfinite(value) && value <= tol};
}

/// Positive band-limited field 2 + Σ c_ℓm Y_ℓm, degrees ≤ 4, |c| ≤ 0.02.
GridField random_positive_field(const Context& ctx, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-0.02, 0.02);
  SpectralField c;
  c.n = ctx.params.n;
  c.max_degree = ctx.T->max_degree();
  c.coeffs = Vec::Zero(SpectralField::count(c.n, c.max_degree));
  const int L = std::min(4, c.max_degree);
  for (int i = 0; i < SpectralField::count(c.n, L); ++i) c.coeffs(i) = coef(rng);
  GridField f = ctx.T->synthesize(c);
  f.values.array() += 2.0;
  return f;
}

int task_verify(const Context& ctx, ArtifactWriter& out, std::ostream& log) {
  const ProblemParams& P = ctx.params;
  const GridPtr& g = ctx.grid;
  const HarmonicTransform& T = *ctx.T;
  const RieszOperator R = make_riesz(ctx);
  const GridField one = constant_field(g, 1.0);
  std::vector<Check> checks;

  {
    SolveOptions so;
    so.tol = 1e-10;
    const SolveReport rep = solve(R, one, so, one);
    checks.push_back(upper("constant_solution_residual", rep.residual_sup, 1e-8));
    checks.push_back(upper("constant_solution_deviation", sup_norm(rep.v.values.array() - 1.0), 1e-8));
  }
  checks.push_back(upper("riesz_normalization",
                         sup_norm(P.c_intertwine * R.apply(one.values).array() - 1.0), 1e-5));
  checks.push_back(upper("eigenvalue_ratio",
                         std::abs(eigenvalue(1, P) / eigenvalue(0, P) - P.critical_exponent()),
                         1e-12));
  {
    const BecknerSides b = beckner_check(one, P, T);
    checks.push_back(upper("beckner_constant", std::abs(b.lhs - b.rhs), 1e-10));
  }
  const GridField bubble = bubble_field(g, MoebiusParams::make(north_pole(P.n), 2.0), P);
  {
    const BecknerSides b = beckner_check(bubble, P, T);
    checks.push_back(upper("beckner_bubble_t2", std::abs(b.lhs - b.rhs) / b.rhs, 1e-6));
    const double e1 = energy_EK(one, one, P, T), eb = energy_EK(bubble, one, P, T);
    checks.push_back(upper("energy_orbit_invariance", std::abs(eb - e1) / e1, 1e-6));
  }
  {
    SolveOptions so;
    so.tol = 1e-9;
    const SolveReport rep = solve(R, one, so, bubble);
    checks.push_back(upper("bubble_solve_residual", rep.residual_sup, 1e-7));
  }
  {
    const double eps = 0.1;
    const Vec kw = kazdan_warner_defect(one, linear_function(P.n, eps), P);
    Vec expect = Vec::Zero(P.n + 1);
    expect(P.n) = eps * P.n * P.omega_n / (P.n + 1.0);
    checks.push_back(upper("kazdan_warner_constant", (kw - expect).cwiseAbs().maxCoeff(), 1e-8));
  }
  {
    const GridField f = random_positive_field(ctx, ctx.cfg.seed);
    const double ratio = harnack_ratio(f, north_pole(P.n), 0.5);
    checks.push_back({"harnack_random_at_least_one", ratio, 1.0, ratio >= 1.0});
  }

  std::vector<CsvRow> rows;
  json jc = json::array();
  bool all = true;
  for (const Check& c : checks) {
    all = all && c.pass;
    rows.push_back({c.name, num(c.value), num(c.tolerance), c.pass ? "pass" : "FAIL"});
    jc.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"pass", c.pass}});
    log << fmt::format("verify: {:<30} {:<4} {:.3e} (tol {:.1e})\n", c.name,
                       c.pass ? "ok" : "FAIL", c.value, c.tolerance);
  }
  out.csv("verify.csv", {"check", "value", "tolerance", "status"}, rows);
  json j = problem_json(ctx);
  j["seed"] = ctx.cfg.seed;
  j["checks"] = jc;
  j["all_pass"] = all;
  out.json("verify.json", j);
  return all ? 0 : 3;
}

}  // namespace

CurvatureSpec make_curvature(const RunConfig& cfg, const GridPtr& grid,
                             std::shared_ptr<const HarmonicTransform> T) {
  const CurvatureConfig& c = cfg.curvature;
  const int n = cfg.n;
  if (c.builtin == "constant") return plain_spec(constant_function(c.value));
  if (c.builtin == "linear-x") return plain_spec(linear_function(n, c.epsilon, c.axis));
  if (c.builtin == "quadratic-poly") return plain_spec(quadratic_function(n, c.epsilon));
  if (c.builtin == "morse-demo") return morse_demo(c.amplitude);
  if (c.builtin == "flatness-demo") {
    std::vector<SpherePoint> pts;
    std::vector<double> betas;
    std::vector<Vec> coeffs;
    for (const CurvaturePoint& p : c.points) {
      Vec q = to_vec(p.pole);
      if (q.norm() == 0.0) throw ConfigError("curvature point pole must be nonzero");
      pts.push_back(q.normalized());
      betas.push_back(p.beta < 0.0 ? c.beta : p.beta);
      coeffs.push_back(to_vec(p.a));
    }
    return flatness_demo(n, pts, betas, coeffs, c.amplitude, c.r0);
  }
  if (c.builtin == "grid") {
    const GridField Kg = read_field(c.file, grid);
    if (Kg.values.minCoeff() <= 0.0) throw ConfigError("tabulated curvature must be positive");
    const Evaluable e = Evaluable::interpolant(std::move(T), Kg);
    SphereFunction f{"grid:" + c.file.filename().string(),
                     [e](const SpherePoint& x) { return e(x); },
                     [e](const SpherePoint& x) { return e.gradient(x); }};
    return plain_spec(f);
  }
  throw ConfigError("unknown curvature builtin '" + c.builtin + "'");
}

Context make_context(const RunConfig& cfg) {
  validate(cfg);
  Context ctx{cfg, cfg.params(), build_grid(cfg.n, cfg.resolution), nullptr, {}};
  ctx.T = cfg.degree < 0 ? std::make_shared<const HarmonicTransform>(ctx.grid)
                         : std::make_shared<const HarmonicTransform>(ctx.grid, cfg.degree);
  ctx.K = make_curvature(cfg, ctx.grid, ctx.T);
  return ctx;
}

int run_task(const Context& ctx, ArtifactWriter& out, std::ostream& log) {
  switch (ctx.cfg.task) {
    case Task::Spectrum: return task_spectrum(ctx, out, log);
    case Task::Solve: return task_solve(ctx, out, log);
    case Task::Continue: return task_continue(ctx, out, log);
    case Task::Diagnose: return task_diagnose(ctx, out, log);
    case Task::Flatness: return task_flatness(ctx, out, log);
    case Task::Degree: return task_degree(ctx, out, log);
    case Task::Verify: return task_verify(ctx, out, log);
    case Task::Certify: return task_certify(ctx, out, log);
  }
  throw ConfigError("unhandled task");
}

}  // namespace fqc::app
