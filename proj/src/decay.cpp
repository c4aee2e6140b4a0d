#include "zkstrip/decay.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <sstream>

#include "zkstrip/error.hpp"

namespace zk {

std::string scenario_name(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::C1_absorption: return "C1";
    case ScenarioKind::C2_both_infinities: return "C2";
    case ScenarioKind::C3_exp_weight_no_damping: return "C3";
    case ScenarioKind::C4_minus_infinity: return "C4";
    case ScenarioKind::C5_plus_infinity: return "C5";
  }
  return "?";
}

ScenarioKind parse_scenario_kind(const std::string& s) {
  if (s == "C1" || s == "C1_absorption") return ScenarioKind::C1_absorption;
  if (s == "C2" || s == "C2_both_infinities") return ScenarioKind::C2_both_infinities;
  if (s == "C3" || s == "C3_exp_weight_no_damping") return ScenarioKind::C3_exp_weight_no_damping;
  if (s == "C4" || s == "C4_minus_infinity") return ScenarioKind::C4_minus_infinity;
  if (s == "C5" || s == "C5_plus_infinity") return ScenarioKind::C5_plus_infinity;
  throw ValidationError("unknown scenario kind '" + s + "'");
}

BuiltScenario build_scenario(const Scenario& s, const StripGrid& grid) {
  grid.validate();
  if (!(s.amplitude >= 0.0)) throw ValidationError("scenario.amplitude must be non-negative");
  if (!(s.sponge >= 0.0)) throw ValidationError("scenario.sponge must be non-negative");
  BuiltScenario out;
  out.coeffs = Coefficients::zero(grid, s.b, s.delta);
  Coefficients& c = out.coeffs;
  out.u0 = initial_gaussian(grid, s.amplitude, s.x0, s.width, s.y_mode);
  const Field sponge = s.sponge > 0.0 && s.sponge_width > 0.0
                           ? damping_sponge(grid, s.sponge, s.sponge_width)
                           : Field(grid);

  switch (s.kind) {
    case ScenarioKind::C1_absorption: {
      if (!(s.beta > 0.0)) throw ValidationError("scenario.beta must be positive");
      const double b0 = s.beta0.value_or(s.beta);
      const double b2 = s.beta2.value_or(0.0);
      if (b0 < 0.0 || b2 < 0.0) throw ValidationError("scenario.beta0 and scenario.beta2 must be >= 0");
      c.a0 = damping_constant(grid, b0);
      c.a2 = damping_constant(grid, b2);
      double margin = 1e300;
      const double pl = std::numbers::pi * std::numbers::pi / (grid.width * grid.width);
      for (std::size_t n = 0; n < grid.size(); ++n)
        margin = std::min(margin, pl * c.a2.values[n] + c.a0.values[n] - s.beta);
      out.feasibility_margin = margin;
      if (margin < -1e-12) {
        std::ostringstream os;
        os << "scenario C1 infeasible: pi^2 beta2/L^2 + beta0 >= beta fails with margin " << margin;
        throw ValidationError(os.str());
      }
      out.weight = WeightSpec{};
      out.prefactor = 1.0;
      break;
    }
    case ScenarioKind::C2_both_infinities:
      if (!(s.a > 0.0) || !(s.R > 1.0)) throw ValidationError("scenario C2 needs a > 0 and R > 1");
      if (s.R >= 0.5 * std::min(-grid.x_min, grid.x_max))
        throw ValidationError("scenario.R leaves no damped region inside the box");
      c.a1 = damping_plateau_both(grid, s.a, s.R);
      c.a2 = c.a1;
      c.a0 = sponge;
      c.flag = StructureFlag::both_infinities;
      c.a = s.a;
      c.R = s.R;
      out.weight = WeightSpec{};
      out.prefactor = std::sqrt(2.0);
      break;
    case ScenarioKind::C3_exp_weight_no_damping:
      if (!(s.alpha > 0.0)) throw ValidationError("scenario.alpha must be positive");
      c.a0 = sponge;
      out.weight = WeightSpec{WeightKind::exp_pure, s.alpha, 1.0};
      break;
    case ScenarioKind::C4_minus_infinity:
    case ScenarioKind::C5_plus_infinity: {
      if (!(s.alpha > 0.0)) throw ValidationError("scenario.alpha must be positive");
      if (!(s.a > 0.0) || !(s.R > 1.0)) throw ValidationError("scenario plateau needs a > 0 and R > 1");
      const bool minus = s.kind == ScenarioKind::C4_minus_infinity;
      const double room = minus ? -grid.x_min : grid.x_max;
      if (s.R + s.seam_taper >= room) throw ValidationError("scenario.R leaves no plateau inside the box");
      c.a1 = minus ? damping_plateau_minus(grid, s.a, s.R, s.seam_taper)
                   : damping_plateau_plus(grid, s.a, s.R, s.seam_taper);
      c.a2 = c.a1;
      c.a0 = sponge;
      c.flag = minus ? StructureFlag::minus_infinity : StructureFlag::plus_infinity;
      c.a = s.a;
      c.R = s.R;
      c.seam_taper = s.seam_taper;
      out.weight = minus ? WeightSpec{WeightKind::exp_plus, s.alpha, 1.0}
                         : WeightSpec{WeightKind::kappa_alpha, 0.0, s.alpha};
      break;
    }
  }
  c.validate(grid);
  for (double v : c.a0.values)
    if (v < 0.0) throw ValidationError("a0 must be non-negative in decay scenarios");
  return out;
}

RateFit fit_decay_rate(const std::vector<double>& times, const std::vector<double>& norms) {
  if (times.size() != norms.size()) throw ValidationError("times and norms differ in length");
  if (times.size() < 5) throw ValidationError("decay fit needs at least 5 samples");
  std::vector<double> y(norms.size());
  for (std::size_t n = 0; n < norms.size(); ++n) {
    if (!(norms[n] > 0.0)) throw ValidationError("decay fit needs positive norms");
    y[n] = std::log(norms[n]);
  }
  const LinearTrend t = linear_trend(times, y);
  return RateFit{-t.slope, t.r2, t.intercept};
}

LinearTrend linear_trend(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw ValidationError("trend needs matching series of length >= 2");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw ValidationError("trend needs distinct abscissae");
  LinearTrend t;
  t.slope = sxy / sxx;
  t.intercept = my - t.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (t.intercept + t.slope * x[i]);
    ss_res += r * r;
  }
  t.r2 = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  if (syy > 0.0 && ss_res <= 1e-30 * syy) t.r2 = 1.0;
  return t;
}

std::vector<double> weighted_series(const Trajectory& traj, const WeightSpec& w) {
  for (std::size_t k = 0; k < traj.weights.size(); ++k) {
    const WeightSpec& v = traj.weights[k];
    if (v.kind == w.kind && v.alpha == w.alpha && v.scale == w.scale) {
      std::vector<double> out;
      for (const DiagnosticRecord& r : traj.records) out.push_back(r.weighted_l2.at(k));
      return out;
    }
  }
  if (w.kind == WeightKind::constant_one) {
    std::vector<double> out;
    for (const DiagnosticRecord& r : traj.records) out.push_back(r.l2);
    return out;
  }
  throw ValidationError("trajectory has no records for weight " + w.name());
}

DecayReport verify_bound(const Trajectory& traj, const WeightSpec& w, double beta, double prefactor,
                         double tol_rel, double discard_fraction) {
  const std::vector<double> nrm = weighted_series(traj, w);
  if (nrm.empty()) throw ValidationError("trajectory has no records");
  DecayReport r;
  r.beta = beta;
  r.prefactor_used = prefactor;
  r.discard_fraction = discard_fraction;
  const double n0 = nrm.front();
  r.tolerance = tol_rel * n0;

  double margin = 1e300;
  double cert = 1e300;
  r.observed_prefactor = 0.0;
  for (std::size_t k = 0; k < nrm.size(); ++k) {
    const double t = traj.times[k];
    const double env = std::exp(-beta * t) * n0;
    margin = std::min(margin, prefactor * env - nrm[k]);
    if (env > 0.0) r.observed_prefactor = std::max(r.observed_prefactor, nrm[k] / env);
    if (t > 0.0 && nrm[k] > 0.0) cert = std::min(cert, std::log(prefactor * n0 / nrm[k]) / t);
  }
  r.bound_margin = margin;
  r.bound_holds = margin >= -r.tolerance && !traj.failed;
  r.certified_rate = cert < 1e300 ? cert : 0.0;

  const double t_end = traj.times.back();
  std::vector<double> ft, fn;
  bool positive = true;
  for (std::size_t k = 0; k < nrm.size(); ++k)
    if (traj.times[k] >= discard_fraction * t_end) {
      ft.push_back(traj.times[k]);
      fn.push_back(nrm[k]);
      positive = positive && nrm[k] > 0.0;
    }
  if (ft.size() >= 5 && positive) {
    const RateFit f = fit_decay_rate(ft, fn);
    r.fitted_rate = f.rate;
    r.fit_r2 = f.r2;
  } else {
    r.fit_valid = false;
    r.fitted_rate = 0.0;
    r.fit_r2 = 0.0;
  }
  return r;
}

ScenarioRun run_scenario(const Scenario& s, const StripGrid& grid, const SolverConfig& cfg,
                         double beta, bool keep_snapshots) {
  ScenarioRun out;
  out.built = build_scenario(s, grid);
  Probes probes;
  probes.weights = {out.built.weight};
  probes.keep_snapshots = keep_snapshots;
  probes.h1 = false;
  out.traj = run(out.built.u0, std::nullopt, out.built.coeffs, cfg, probes);
  if (beta <= 0.0) {
    const DecayReport fit = verify_bound(out.traj, out.built.weight, 0.0, out.built.prefactor);
    beta = fit.fit_valid ? std::clamp(fit.certified_rate, 0.0, std::max(fit.fitted_rate, 0.0)) : 0.0;
  }
  out.report = verify_bound(out.traj, out.built.weight, beta, out.built.prefactor);
  return out;
}

ThresholdResult amplitude_threshold(Scenario s, const StripGrid& grid, const SolverConfig& cfg,
                                    double beta, double lo, double hi, int iterations) {
  if (!(lo > 0.0) || !(hi > lo)) throw ValidationError("amplitude bracket must satisfy 0 < lo < hi");
  ThresholdResult res;
  auto passes = [&](double amp, DecayReport* rep) {
    s.amplitude = amp;
    const ScenarioRun r = run_scenario(s, grid, cfg, beta);
    ++res.runs;
    if (rep) *rep = r.report;
    return !r.traj.failed && r.report.bound_holds && r.report.fit_valid && r.report.fitted_rate > 0.0 &&
           r.report.fit_r2 >= kThresholdMinR2;
  };
  DecayReport rep;
  if (!passes(lo, &rep)) {
    res.passing_amplitude = 0.0;
    res.failing_amplitude = lo;
    res.located = true;
    return res;
  }
  res.passing_amplitude = lo;
  res.passing_report = rep;
  if (passes(hi, nullptr)) {
    res.passing_amplitude = hi;
    res.located = false;
    return res;
  }
  res.located = true;
  double a = lo, b = hi;
  for (int it = 0; it < iterations; ++it) {
    const double m = std::sqrt(a * b);
    DecayReport mr;
    if (passes(m, &mr)) {
      a = m;
      res.passing_report = mr;
    } else {
      b = m;
    }
  }
  res.passing_amplitude = a;
  res.failing_amplitude = b;
  return res;
}

ScalingTable rate_scaling_study(const Scenario& base, const StripGrid& grid, const SolverConfig& cfg,
                                const std::vector<double>& alphas,
                                const std::vector<double>& widths) {
  auto one = [&](double alpha, double width) {
    Scenario s = base;
    s.alpha = alpha;
    StripGrid g = grid;
    g.width = width;
    const ScenarioRun r = run_scenario(s, g, cfg);
    if (r.traj.failed) throw BlowupError("scaling run blew up: " + r.traj.failure, r.traj.failure_time);
    return ScalingRow{alpha, width, r.report.fitted_rate, r.report.fit_r2};
  };
  std::vector<std::future<ScalingRow>> fa, fw;
  for (double a : alphas) fa.push_back(std::async(std::launch::async, one, a, grid.width));
  for (double w : widths) fw.push_back(std::async(std::launch::async, one, base.alpha, w));

  ScalingTable t;
  for (auto& f : fa) t.alpha_rows.push_back(f.get());
  for (auto& f : fw) t.width_rows.push_back(f.get());
  if (t.alpha_rows.size() >= 2) {
    std::vector<double> x, y;
    for (const ScalingRow& r : t.alpha_rows) {
      x.push_back(r.alpha);
      y.push_back(r.fitted_rate);
    }
    t.alpha_trend = linear_trend(x, y);
  }
  if (t.width_rows.size() >= 2) {
    std::vector<double> x, y;
    for (const ScalingRow& r : t.width_rows) {
      x.push_back(1.0 / (r.width * r.width));
      y.push_back(r.fitted_rate);
    }
    t.width_trend = linear_trend(x, y);
  }
  return t;
}

}  // namespace zk
