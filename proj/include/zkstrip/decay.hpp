#pragma once

#include <optional>
#include <string>
#include <vector>

#include "zkstrip/evolution.hpp"
#include "zkstrip/grid.hpp"
#include "zkstrip/trajectory.hpp"
#include "zkstrip/weights.hpp"

namespace zk {

enum class ScenarioKind {
  C1_absorption,
  C2_both_infinities,
  C3_exp_weight_no_damping,
  C4_minus_infinity,
  C5_plus_infinity
};

std::string scenario_name(ScenarioKind k);
ScenarioKind parse_scenario_kind(const std::string& s);

struct Scenario {
  ScenarioKind kind = ScenarioKind::C1_absorption;
  double beta = 0.5;              // C1 target rate
  std::optional<double> beta0;    // C1 absorption level, defaults to beta
  std::optional<double> beta2;    // C1 transverse damping level, defaults to 0
  double a = 1.0;                 // plateau level
  double R = 5.0;                 // plateau onset |x| >= R
  double alpha = 0.1;             // weight rate
  double amplitude = 0.1;         // peak of the initial bump
  double x0 = 0.0;                // bump centre
  double width = 2.0;             // bump width sigma
  int y_mode = 1;
  double b = 0.0;
  double delta = 0.0;
  double sponge = 0.0;            // a0 level at the periodic seam
  double sponge_width = 0.0;
  double seam_taper = 4.0;        // one-sided plateaus fall to 0 over this width at the seam
};

struct BuiltScenario {
  Coefficients coeffs;
  Field u0;
  WeightSpec weight;
  double prefactor = 1.0;
  /// C1: min over the grid of pi^2 beta2 / L^2 + beta0 - beta.
  double feasibility_margin = 0.0;
};

/// Throws ValidationError for infeasible parameters, naming the constraint.
BuiltScenario build_scenario(const Scenario& s, const StripGrid& grid);

struct RateFit {
  double rate = 0.0;
  double r2 = 1.0;
  double intercept = 0.0;
};

/// Least squares of log(norm) against t; rate is minus the slope. At least 5
/// samples, all positive.
RateFit fit_decay_rate(const std::vector<double>& times, const std::vector<double>& norms);

struct DecayReport {
  double fitted_rate = 0.0;
  double fit_r2 = 1.0;
  bool fit_valid = true;
  bool bound_holds = true;
  double bound_margin = 0.0;    // min_t prefactor e^(-beta t) |u0| - |u(t)|
  double prefactor_used = 1.0;
  double beta = 0.0;
  double tolerance = 0.0;       // absolute, tol_rel * |u0|
  double observed_prefactor = 0.0;  // max_t |u(t)| / (e^(-beta t) |u0|)
  double certified_rate = 0.0;  // min_t log(prefactor |u0| / |u(t)|) / t
  double discard_fraction = 0.1;
};

/// Norm series of weight w recorded in the trajectory (l2 for constant_one).
std::vector<double> weighted_series(const Trajectory& traj, const WeightSpec& w);

DecayReport verify_bound(const Trajectory& traj, const WeightSpec& w, double beta, double prefactor,
                         double tol_rel = 1e-6, double discard_fraction = 0.1);

struct ScenarioRun {
  BuiltScenario built;
  Trajectory traj;
  DecayReport report;
};

/// Builds and runs a scenario, fits the rate of its paired weighted norm and
/// checks the bound with the given beta. With beta <= 0 the check uses the
/// fitted rate capped at the certified rate of the scenario prefactor.
ScenarioRun run_scenario(const Scenario& s, const StripGrid& grid, const SolverConfig& cfg,
                         double beta = 0.0, bool keep_snapshots = false);

struct ThresholdResult {
  bool located = false;       // a failing amplitude was found
  double passing_amplitude = 0.0;
  double failing_amplitude = 0.0;
  DecayReport passing_report;
  int runs = 0;
};

inline constexpr double kThresholdMinR2 = 0.99;

/// Bisection on amplitude between lo (expected to pass) and hi. An amplitude
/// passes when the run does not blow up, the fitted rate is positive with
/// r2 >= kThresholdMinR2 and the bound with the scenario prefactor and beta
/// holds.
ThresholdResult amplitude_threshold(Scenario s, const StripGrid& grid, const SolverConfig& cfg,
                                    double beta, double lo, double hi, int iterations);

struct ScalingRow {
  double alpha = 0.0;
  double width = 0.0;
  double fitted_rate = 0.0;
  double fit_r2 = 0.0;
};

struct LinearTrend {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Ordinary least squares with intercept; r2 = 1 for an exact fit.
LinearTrend linear_trend(const std::vector<double>& x, const std::vector<double>& y);

struct ScalingTable {
  std::vector<ScalingRow> alpha_rows;  // alpha sweep at fixed width
  std::vector<ScalingRow> width_rows;  // width sweep at fixed alpha
  LinearTrend alpha_trend;             // rate against alpha
  LinearTrend width_trend;             // rate against L^-2
};

/// Runs base with each alpha at grid.width and each L at base.alpha, in
/// parallel. Only the grid width changes between rows of the L sweep.
ScalingTable rate_scaling_study(const Scenario& base, const StripGrid& grid, const SolverConfig& cfg,
                                const std::vector<double>& alphas,
                                const std::vector<double>& widths);

}  // namespace zk
