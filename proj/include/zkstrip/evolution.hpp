#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zkstrip/grid.hpp"
#include "zkstrip/propagator.hpp"
#include "zkstrip/trajectory.hpp"
#include "zkstrip/weights.hpp"

namespace zk {

/// Cut-off nonlinearity g_h(u) = int_0^u [t eta(2 - h|t|) + (2 sgn t / h) eta(h|t| - 1)] dt.
/// Equals u^2/2 for |u| <= 1/h.
double g_h(double u, double h);
double g_h_prime(double u, double h);
/// (g_h' u)*(u) = int_0^u g_h'(t) t dt; equals u^3/3 for |u| <= 1/h.
double g_h_star(double u, double h);

enum class StructureFlag { none, both_infinities, minus_infinity, plus_infinity };

/// Travel/regularisation constants and damping samples on the grid. a2 is
/// taken to depend on x only unless a2_y (its y-derivative) is supplied.
struct Coefficients {
  double b = 0.0;
  double delta = 0.0;
  Field a0, a1, a2;
  std::optional<Field> a2_y;
  StructureFlag flag = StructureFlag::none;
  double a = 0.0;
  double R = 0.0;
  /// Width of the seam taper excluded from the one-sided plateau checks.
  double seam_taper = 0.0;

  static Coefficients zero(const StripGrid& g, double b = 0.0, double delta = 0.0);
  void validate(const StripGrid& g) const;
  bool has_a0() const;
  bool has_a1() const;
  bool has_a2() const;
};

/// Damping profiles, functions of x only. Plateaus rise over a unit
/// transition with the cut-off eta; one-sided plateaus fall back to 0 over
/// seam_taper at the periodic seam.
Field damping_constant(const StripGrid& g, double value);
Field damping_plateau_both(const StripGrid& g, double a, double R);
Field damping_plateau_minus(const StripGrid& g, double a, double R, double seam_taper);
Field damping_plateau_plus(const StripGrid& g, double a, double R, double seam_taper);
/// value at the seam, 0 at distance >= width from it.
Field damping_sponge(const StripGrid& g, double value, double width);

struct SolverConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  double h_cutoff = 0.01;
  bool use_dealiasing = true;
  std::size_t snapshot_every = 1;
  bool nonlinear = true;  // false drops g_h entirely
  double blowup_factor = 1e6;

  void validate() const;
  std::size_t steps() const;
  double step_size() const;  // t_end / steps()
};

/// Right-hand side of the nonlinear stage in coefficient space:
/// -d_x g_h(u) + d_x(a1 u_x) + d_y(a2 u_y) - a0 u + f.
class NonlinearOperator {
 public:
  NonlinearOperator(const Coefficients& coeffs, const SolverConfig& cfg,
                    const std::optional<Field>& forcing);
  SpectralField operator()(const SpectralField& u_hat, double t) const;
  /// Pieces of the right-hand side evaluated separately (for diagnostics).
  SpectralField flux_term(const SpectralField& u_hat) const;     // -d_x g_h(u)
  SpectralField damping_term(const SpectralField& u_hat) const;  // parabolic + absorption

 private:
  Coefficients coeffs_;
  SolverConfig cfg_;
  std::optional<SpectralField> f_hat_;
  bool a0_, a1_, a2_;
};

Field nonlinear_rhs(const Field& u, const Coefficients& coeffs, double h, const Field& f,
                    bool dealiased = true);

/// Strang step: exact half step, RK4 nonlinear stage, exact half step.
SpectralField step_spectral(const SpectralField& u_hat, const LinearSymbol& sym,
                            const NonlinearOperator& op, double dt, double t);
Field step(const Field& u, const LinearSymbol& sym, const Coefficients& coeffs,
           const SolverConfig& cfg);

struct Probes {
  std::vector<WeightSpec> weights;
  bool keep_snapshots = true;
  bool h1 = true;
};

/// Integrates from u0. On blow-up the partial trajectory is returned with
/// failed = true.
Trajectory run(const Field& u0, const std::optional<Field>& f, const Coefficients& coeffs,
               const SolverConfig& cfg, const Probes& probes);

/// Initial data presets; every one vanishes on the walls.
Field initial_gaussian(const StripGrid& g, double amplitude, double x0, double sigma, int y_mode);
Field initial_sech2(const StripGrid& g, double amplitude, double x0, double width, int y_mode);
Field initial_random_modes(const StripGrid& g, double amplitude, std::uint64_t seed, int kmax,
                           int lmax);

}  // namespace zk
