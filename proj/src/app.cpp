#include "zkstrip/app.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>

#include "zkstrip/decay.hpp"
#include "zkstrip/diagnostics.hpp"
#include "zkstrip/error.hpp"
#include "zkstrip/evolution.hpp"
#include "zkstrip/output.hpp"
#include "zkstrip/propagator.hpp"
#include "zkstrip/smoothstep.hpp"
#include "zkstrip/spectral.hpp"
#include "zkstrip/weights.hpp"

namespace zk {

namespace fs = std::filesystem;

namespace {

std::string out_path(const RunSpec& spec, const std::string& suffix) {
  fs::create_directories(spec.output.dir);
  return (fs::path(spec.output.dir) / (spec.output.prefix + suffix)).string();
}

void write_trajectory(const RunSpec& spec, const Trajectory& traj) {
  std::ofstream csv(out_path(spec, ".csv"));
  if (!csv) throw ValidationError("cannot write diagnostics CSV under '" + spec.output.dir + "'");
  write_csv(csv, traj);
  if (!spec.output.snapshots) return;
  for (std::size_t n = 0; n < traj.snapshots.size(); ++n) {
    char tag[32];
    std::snprintf(tag, sizeof tag, "_snap_%05zu", n);
    if (spec.output.snapshot_format == SnapshotFormat::binary)
      write_snapshot_binary(out_path(spec, std::string(tag) + ".zksn"), traj.snapshots[n], traj.times[n]);
    else
      write_snapshot_csv(out_path(spec, std::string(tag) + ".csv"), traj.snapshots[n], traj.times[n]);
  }
}

Report failure_entries(const Trajectory& traj) {
  return {{"failed", traj.failed ? "true" : "false"},
          {"failure", traj.failed ? traj.failure : ""},
          {"failure_time", format_double(traj.failure_time)},
          {"last_time", format_double(traj.times.empty() ? 0.0 : traj.times.back())}};
}

}  // namespace

void apply_options(RunSpec& spec, const CommandOptions& opts) {
  if (opts.output_dir) spec.output.dir = *opts.output_dir;
  if (opts.snapshot_format) {
    spec.output.snapshot_format = *opts.snapshot_format;
    spec.output.snapshots = true;
  }
  if (opts.seed) spec.initial.seed = *opts.seed;
}

int run_command(const RunSpec& spec, std::ostream& log) {
  const Coefficients coeffs = build_coefficients(spec);
  const Field u0 = build_initial(spec);
  Probes probes;
  probes.weights = spec.weights;
  probes.keep_snapshots = spec.output.snapshots || spec.output.residuals;
  Trajectory traj = run(u0, std::nullopt, coeffs, spec.solver, probes);
  if (spec.output.residuals && !traj.failed) attach_residuals(traj, coeffs, spec.solver.h_cutoff, std::nullopt);
  write_trajectory(spec, traj);
  if (traj.failed) {
    write_report(out_path(spec, "_failure.txt"), failure_entries(traj));
    log << "blow-up at t=" << format_double(traj.failure_time) << ": " << traj.failure << '\n';
    return kExitBlowup;
  }
  log << "run: " << traj.records.size() << " records, final l2=" << format_double(traj.records.back().l2)
      << '\n';
  return kExitOk;
}

int scenario_command(const RunSpec& spec, std::ostream& log) {
  if (!spec.scenario) throw ValidationError("scenario command needs a [scenario] block");
  const ScenarioSpec& sc = *spec.scenario;
  const double beta = sc.check_beta.value_or(0.0);
  Report report{{"scenario", scenario_name(sc.scenario.kind)}};

  Scenario s = sc.scenario;
  if (sc.threshold_search) {
    const ThresholdResult th = amplitude_threshold(s, spec.grid, spec.solver, beta, sc.threshold_lo,
                                                   sc.threshold_hi, sc.threshold_iterations);
    report.push_back({"threshold_located", th.located ? "true" : "false"});
    report.push_back({"passing_amplitude", format_double(th.passing_amplitude)});
    report.push_back({"failing_amplitude", format_double(th.failing_amplitude)});
    report.push_back({"threshold_runs", std::to_string(th.runs)});
    if (!(th.passing_amplitude > 0.0)) {
      report.push_back({"bound_holds", "false"});
      write_report(out_path(spec, "_report.txt"), report);
      log << "no passing amplitude in the bracket\n";
      return kExitBound;
    }
    s.amplitude = th.passing_amplitude;
  }

  const bool keep = spec.output.snapshots || spec.output.residuals;
  ScenarioRun r = run_scenario(s, spec.grid, spec.solver, beta, keep);
  if (spec.output.residuals && !r.traj.failed)
    attach_residuals(r.traj, r.built.coeffs, spec.solver.h_cutoff, std::nullopt);
  write_trajectory(spec, r.traj);

  report.push_back({"weight", r.built.weight.name()});
  report.push_back({"amplitude", format_double(s.amplitude)});
  report.push_back({"feasibility_margin", format_double(r.built.feasibility_margin)});
  for (auto& e : failure_entries(r.traj)) report.push_back(e);
  for (auto& e : decay_report_entries(r.report)) report.push_back(e);
  write_report(out_path(spec, "_report.txt"), report);

  if (r.traj.failed) {
    log << "blow-up at t=" << format_double(r.traj.failure_time) << ": " << r.traj.failure << '\n';
    return kExitBlowup;
  }
  log << scenario_name(s.kind) << ": rate=" << format_double(r.report.fitted_rate)
      << " r2=" << format_double(r.report.fit_r2)
      << " bound_holds=" << (r.report.bound_holds ? "true" : "false") << '\n';
  return r.report.bound_holds ? kExitOk : kExitBound;
}

int sweep_command(const RunSpec& spec, std::ostream& log) {
  if (!spec.scenario) throw ValidationError("sweep command needs a [scenario] block");
  ScalingTable t;
  try {
    t = rate_scaling_study(spec.scenario->scenario, spec.grid, spec.solver, spec.sweep.alphas,
                           spec.sweep.widths);
  } catch (const BlowupError& e) {
    log << e.what() << '\n';
    return kExitBlowup;
  }
  std::ofstream csv(out_path(spec, "_sweep.csv"));
  if (!csv) throw ValidationError("cannot write sweep CSV under '" + spec.output.dir + "'");
  csv << "sweep,alpha,width,fitted_rate,fit_r2\n";
  auto rows = [&](const char* tag, const std::vector<ScalingRow>& v) {
    for (const ScalingRow& r : v)
      csv << tag << ',' << format_double(r.alpha) << ',' << format_double(r.width) << ','
          << format_double(r.fitted_rate) << ',' << format_double(r.fit_r2) << '\n';
  };
  rows("alpha", t.alpha_rows);
  rows("width", t.width_rows);
  write_report(out_path(spec, "_sweep_report.txt"),
               {{"scenario", scenario_name(spec.scenario->scenario.kind)},
                {"alpha_slope", format_double(t.alpha_trend.slope)},
                {"alpha_intercept", format_double(t.alpha_trend.intercept)},
                {"alpha_r2", format_double(t.alpha_trend.r2)},
                {"width_slope", format_double(t.width_trend.slope)},
                {"width_intercept", format_double(t.width_trend.intercept)},
                {"width_r2", format_double(t.width_trend.r2)}});
  log << "sweep: alpha r2=" << format_double(t.alpha_trend.r2)
      << " width r2=" << format_double(t.width_trend.r2) << '\n';
  return kExitOk;
}

int check_command(std::ostream& log, bool quiet) {
  StripGrid g;
  g.x_min = -10.0;
  g.x_max = 10.0;
  g.nx = 64;
  g.width = std::numbers::pi;
  g.ny = 8;
  const Field u = initial_random_modes(g, 0.5, 7, 10, 5);
  const SpectralField uh = forward_transform(u);

  struct Check {
    const char* name;
    std::function<bool()> ok;
  };
  const std::vector<Check> checks = {
      {"transform round trip",
       [&] {
         const Field back = inverse_transform(uh);
         double e = 0.0;
         for (std::size_t n = 0; n < u.values.size(); ++n) e = std::max(e, std::abs(back.values[n] - u.values[n]));
         return e < 1e-12;
       }},
      {"parseval",
       [&] {
         Field sq(g);
         for (std::size_t n = 0; n < u.values.size(); ++n) sq.values[n] = u.values[n] * u.values[n];
         return std::abs(integrate(sq) - uh.energy()) < 1e-12 * uh.energy();
       }},
      {"g_h equals u^2/2 below 1/h",
       [] {
         for (double v = -10.0; v <= 10.0; v += 0.01)
           if (g_h(v, 0.1) != 0.5 * v * v) return false;
         for (double v = -100.0; v <= 100.0; v += 0.05)
           if (std::abs(g_h_prime(v, 0.1)) > 20.0 + 1e-12) return false;
         return true;
       }},
      {"propagator semigroup",
       [&] {
         const LinearSymbol sym = build_symbol(g, 1.0, 0.1);
         const SpectralField a = apply_propagator(apply_propagator(uh, sym, 0.3), sym, 0.2);
         const SpectralField b = apply_propagator(uh, sym, 0.5);
         double e = 0.0;
         for (std::size_t n = 0; n < a.coeffs.size(); ++n) e = std::max(e, std::abs(a.coeffs[n] - b.coeffs[n]));
         return e < 1e-13 * std::max(1.0, uh.max_abs());
       }},
      {"steklov sharpness",
       [] {
         const double L = 2.0;
         std::vector<double> p(31);
         for (std::size_t j = 0; j < p.size(); ++j) p[j] = std::sin(std::numbers::pi * (j + 1.0) / 32.0);
         return std::abs(steklov_ratio(p, L) - L * L / (std::numbers::pi * std::numbers::pi)) < 1e-12;
       }},
      {"smoothstep endpoints",
       [] {
         if (smoothstep(0.0) != 0.0 || smoothstep(1.0) != 1.0) return false;
         for (int n = 1; n <= 4; ++n)
           if (std::abs(smoothstep_deriv(0.0, n)) > 1e-12 || std::abs(smoothstep_deriv(1.0, n)) > 1e-9) return false;
         return true;
       }},
      {"flux skew symmetry",
       [&] {
         Coefficients c = Coefficients::zero(g);
         SolverConfig cfg;
         cfg.use_dealiasing = false;
         const NonlinearOperator op(c, cfg, std::nullopt);
         const Field flux = inverse_transform(op.flux_term(uh));
         Field sq(g);
         for (std::size_t n = 0; n < u.values.size(); ++n) sq.values[n] = u.values[n] * u.values[n];
         return std::abs(integrate_product(u, flux)) < 1e-10 * std::max(1.0, integrate(sq));
       }},
      {"damped l2 decreases",
       [&] {
         Coefficients c = Coefficients::zero(g, 0.0, 1e-3);
         c.a0 = damping_constant(g, 0.2);
         SolverConfig cfg;
         cfg.dt = 1e-2;
         cfg.t_end = 0.2;
         Probes p;
         p.keep_snapshots = false;
         const Trajectory t = run(u, std::nullopt, c, cfg, p);
         for (std::size_t n = 1; n < t.records.size(); ++n)
           if (t.records[n].l2 > t.records[n - 1].l2) return false;
         return !t.failed;
       }},
  };

  int failed = 0;
  for (const Check& c : checks) {
    bool ok = false;
    try {
      ok = c.ok();
    } catch (const std::exception&) {
      ok = false;
    }
    if (!ok) ++failed;
    if (!quiet || !ok) log << (ok ? "PASS " : "FAIL ") << c.name << '\n';
  }
  if (!quiet) log << (checks.size() - failed) << "/" << checks.size() << " checks passed\n";
  return failed == 0 ? kExitOk : kExitCheckFailed;
}

}  // namespace zk
