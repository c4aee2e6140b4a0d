#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "zkstrip/evolution.hpp"
#include "zkstrip/grid.hpp"
#include "zkstrip/trajectory.hpp"
#include "zkstrip/weights.hpp"

namespace zk {

struct Conserved {
  double l2_squared = 0.0;
  /// int (u_x^2 + u_y^2 + u^3/3), the functional as printed.
  double energy = 0.0;
  /// int (u_x^2 + u_y^2 - u^3/3), the invariant of the flow
  /// u_t + u_xxx + u_xyy + u u_x = 0.
  double hamiltonian = 0.0;
  double gradient = 0.0;  // int (u_x^2 + u_y^2)
  double cubic = 0.0;     // int u^3
};

Conserved conserved_quantities(const Field& u);

DiagnosticRecord probe_record(const Field& u, double t, const std::vector<WeightSpec>& weights,
                              bool with_h1);

struct IdentitySeries {
  std::vector<double> times;     // interior snapshot times
  std::vector<double> residual;  // d/dt - rhs at each interior snapshot
  double max_abs = 0.0;
};

/// Residual of d/dt int u^2 + 2 delta int (u_xx^2 + u_yy^2) + 2 int g'(u) u u_x
/// + 2 int (a1 u_x^2 + a2 u_y^2 + a0 u^2) = 2 int f u, with a centered
/// difference in time. Needs at least 3 stored snapshots.
IdentitySeries l2_identity_residual(const Trajectory& traj, const Coefficients& coeffs, double h,
                                    const std::optional<Field>& f);

/// The ten integral groups of the weighted identity
/// d/dt int u^2 psi = sum of terms, in this order.
inline constexpr std::array<const char*, 10> kWeightedTermNames{
    "b u^2 psi'",          "-(3u_x^2+u_y^2) psi'", "u^2 psi'''",        "-2d (u_xx^2+u_yy^2) psi",
    "4d u_x^2 psi''",      "-d u^2 psi''''",       "2 (g'u)* psi'",     "-2 (a1u_x^2+a2u_y^2+a0u^2) psi",
    "-2 a1 u u_x psi'",    "2 f u psi"};

using WeightedTerms = std::array<double, 10>;

WeightedTerms weighted_identity_terms(const Field& u, const Coefficients& coeffs, double h,
                                      const WeightSpec& w, const std::optional<Field>& f);

/// d/dt int u^2 psi of the semi-discrete scheme, 2 <u psi, L u + N(u)>,
/// computed without integrating by parts.
double weighted_rate_direct(const Field& u, const Coefficients& coeffs, const SolverConfig& cfg,
                            const WeightSpec& w, const std::optional<Field>& f);

struct WeightedIdentitySeries {
  std::vector<double> times;
  std::vector<double> ddt;
  std::vector<WeightedTerms> terms;
  std::vector<double> residual;  // ddt - sum(terms)
  double max_abs = 0.0;
};

WeightedIdentitySeries weighted_identity_residual(const Trajectory& traj, const Coefficients& coeffs,
                                                  const WeightSpec& w, double h,
                                                  const std::optional<Field>& f);

/// Fills residual_l2 and residual_weighted for every record (NaN at the ends).
void attach_residuals(Trajectory& traj, const Coefficients& coeffs, double h,
                      const std::optional<Field>& f);

/// Centered difference of a series, O(h^2) for non-uniform spacing too.
double centered_derivative(double t0, double v0, double t1, double v1, double t2, double v2);

}  // namespace zk
