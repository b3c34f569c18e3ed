#include "fqc/solver.hpp"

#include <cmath>

#include "fqc/pohozaev.hpp"
#include "fqc/variational.hpp"

namespace fqc {
namespace {

Vec nonlinear(const Vec& K, const Vec& v, double p, double c) {
  Vec out(v.size());
  for (int i = 0; i < v.size(); ++i) out(i) = c * K(i) * std::pow(v(i), p);
  return out;
}

void require_positive(const Vec& v, const char* what) {
  for (int i = 0; i < v.size(); ++i)
    if (!(v(i) > 0.0))
      throw NumericalError(std::string(what) + ": iterate lost positivity (quadrature defect)");
}

double lq_norm(const QuadratureGrid& g, const Vec& v, double q, double omega) {
  double s = 0.0;
  for (int i = 0; i < v.size(); ++i) s += g.weights(i) * std::pow(std::abs(v(i)), q);
  return std::pow(s / omega, 1.0 / q);
}

}  // namespace

double fixed_point_residual(const RieszOperator& R, const Vec& K, const Vec& v, double p) {
  require_positive(v, "residual");
  const Vec g = R.apply(nonlinear(K, v, p, R.params().c_intertwine));
  return sup_norm(v - g);
}

SolveReport solve(const RieszOperator& R, const GridField& K, const SolveOptions& opts,
                  const GridField& init, const SphereFunction* Kf) {
  const ProblemParams& params = R.params();
  const auto& g = *R.grid();
  const double p = params.exponent(opts.tau);
  if (!(p > 1.0)) throw ConfigError("subcritical defect tau too large: exponent must exceed 1");
  if (!(opts.damping > 0.0 && opts.damping <= 1.0)) throw ConfigError("damping must lie in (0, 1]");
  if (K.values.minCoeff() <= 0.0) throw ConfigError("K must be positive");
  require_positive(init.values, "solve");
  const double c = params.c_intertwine;
  const double q = params.sobolev_exponent();

  auto normalizer = [&](const Vec& w) {
    return opts.normalization == Normalization::MaxOne ? w.maxCoeff()
                                                       : lq_norm(g, w, q, params.omega_n);
  };
  Vec v = init.values / normalizer(init.values);
  double s = 1.0;
  SolveReport rep;
  int it = 0;
  for (; it < opts.max_iters; ++it) {
    const Vec gv = R.apply(nonlinear(K.values, v, p, c));
    require_positive(gv, "solve");
    s = normalizer(gv);
    const Vec target = gv / s;
    // The returned field is α·v with α = s^{−1/(p−1)}; measure the change at that scale.
    const double alpha = std::pow(s, -1.0 / (p - 1.0));
    const double change = alpha * sup_norm(target - v);
    v = (1.0 - opts.damping) * v + opts.damping * target;
    if (!v.allFinite()) throw NumericalError("solve diverged");
    if (change <= 0.25 * opts.tol) {
      ++it;
      break;
    }
  }
  // Absorb the normalization multiplier with one more map evaluation at the final v.
  const Vec gv = R.apply(nonlinear(K.values, v, p, c));
  s = normalizer(gv);
  rep.multiplier_absorbed = std::pow(s, -1.0 / (p - 1.0));
  const Vec u = rep.multiplier_absorbed * v;
  rep.v = GridField(R.grid(), u);
  rep.exponent = p;
  rep.iterations = it;
  rep.residual_sup = fixed_point_residual(R, K.values, u, p);
  rep.solution = rep.residual_sup <= opts.tol;

  Vec up1(u.size()), uq(u.size());
  for (int i = 0; i < u.size(); ++i) {
    up1(i) = std::pow(u(i), p + 1.0);
    uq(i) = std::pow(u(i), q);
  }
  const double num = c * g.weights.dot(K.values.cwiseProduct(up1)) / params.omega_n;
  const double den = g.weights.dot(K.values.cwiseProduct(uq)) / params.omega_n;
  rep.energy = num / std::pow(den, 2.0 / q);
  if (Kf) {
    rep.kw_defect_norm = kazdan_warner_defect(rep.v, *Kf, params).norm();
    // At the critical exponent every true solution has zero defect; a converged grid
    // field that violates this is a discretization artifact.
    if (opts.tau == 0.0 && rep.solution && rep.kw_defect_norm > 10.0 * opts.tol) {
      rep.solution = false;
      rep.kw_rejected = true;
    }
  }
  return rep;
}

BlowupTrace continuation_blowup(const RieszOperator& R, const HarmonicTransform& T,
                                const SphereFunction& K, const std::vector<double>& schedule,
                                const ContinuationOptions& opts, const GridField* init) {
  const ProblemParams& params = R.params();
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!(schedule[i] > 0.0)) throw ConfigError("tau schedule must be positive");
    if (i > 0 && !(schedule[i] < schedule[i - 1]))
      throw ConfigError("tau schedule must be strictly decreasing");
  }
  const GridField Kg = sample(R.grid(), K);
  GridField cur = init ? *init : constant_field(R.grid(), 1.0);
  auto Tptr = std::make_shared<const HarmonicTransform>(T);
  BlowupTrace trace;
  for (double tau : schedule) {
    BlowupRecord rec;
    rec.tau = tau;
    SolveOptions so = opts.solve;
    so.tau = tau;
    SolveReport rep;
    try {
      rep = solve(R, Kg, so, cur, &K);
      if (!rep.solution)
        throw NumericalError("solve did not reach tolerance at tau = " + std::to_string(tau));
    } catch (const std::exception& e) {
      trace.truncated = true;
      trace.failure = e.what();
      break;
    }
    cur = rep.v;
    rec.v = rep.v;
    rec.residual = rep.residual_sup;
    rec.iterations = rep.iterations;
    const double p = rep.exponent;

    const Evaluable interp = Evaluable::interpolant(Tptr, rep.v);
    const ArgmaxInfo am = locate_max(rep.v, &interp, opts.diag.plateau_limit);
    rec.m = am.value;
    rec.argmax = am.point;
    rec.degenerate = am.degenerate;
    const ProfileResult prof = profile_error(rep.v, params, &interp, tau, K(am.point), opts.diag);
    rec.profile_error = prof.err;
    rec.k_fit = prof.k_fit;
    rec.k_predicted = prof.k_predicted;
    rec.harnack_ratio = harnack_ratio(rep.v, am.point, opts.diag.harnack_r);
    const StereoChart chart = StereoChart::centered_at(am.point);
    rec.unit_radius_value = prof.m_chart * chart_average(interp, chart, 1.0, params);
    rec.critical_radii = count_critical_radii(interp, am.point, 1e-3, 1.0, params, p);
    rec.moments = moment_table(rep.v, am.point, params, p, prof.m_chart, opts.diag);
    rec.pair_a_expected = pair_limit_expected(params, K(am.point));
    if (prof.m_chart >= opts.diag.pair_min_m) {
      const PairFit pf = pair_limit_fit(interp, am.point, prof.m_chart, opts.diag.pair_radii, params);
      rec.pair_a_fit = pf.a;
      rec.pair_b_fit = pf.b;
    } else {
      rec.pair_a_fit = rec.pair_b_fit = std::nan("");
    }
    if (opts.run_pohozaev) {
      rec.pohozaev_residual =
          pohozaev_residual(rep.v, K, Tptr, am.point, opts.diag.pohozaev_R, R.params(), tau).residual;
    }
    trace.records.push_back(std::move(rec));
  }
  return trace;
}

}  // namespace fqc
