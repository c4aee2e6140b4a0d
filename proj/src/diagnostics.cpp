#include "zkstrip/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "zkstrip/error.hpp"
#include "zkstrip/spectral.hpp"

namespace zk {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Field times_field(const Field& a, const Field& b) {
  Field out(a.grid);
  for (std::size_t n = 0; n < a.values.size(); ++n) out.values[n] = a.values[n] * b.values[n];
  return out;
}

Field squared(const Field& a) { return times_field(a, a); }

// Derivative fields shared by the identity terms.
struct Parts {
  Field u, ux, uxx, uyy;
  ClosedField uy_sq;
};

Parts parts_of(const Field& u) {
  const SpectralField s = forward_transform(u);
  Parts p;
  p.u = u;
  p.ux = inverse_transform(derivative(s, 1, 0));
  p.uxx = inverse_transform(derivative(s, 2, 0));
  p.uyy = inverse_transform(derivative(s, 0, 2));
  p.uy_sq = evaluate_closed(s, 0, 1);
  for (double& v : p.uy_sq.values) v *= v;
  return p;
}

// int a2 u_y^2 psi, written as -int u psi (a2 u_y)_y so that it uses the
// same operator as the solver.
double a2_term(const Field& u, const Coefficients& c, const std::vector<double>* psi) {
  const SpectralField s = forward_transform(u);
  const Field uyy = inverse_transform(derivative(s, 0, 2));
  Field flux = times_field(c.a2, uyy);
  if (c.a2_y) {
    const Field uy = interior(evaluate_closed(s, 0, 1));
    for (std::size_t n = 0; n < flux.values.size(); ++n) flux.values[n] += c.a2_y->values[n] * uy.values[n];
  }
  const Field prod = times_field(u, flux);
  return -(psi ? integrate_weighted(prod, *psi) : integrate(prod));
}

void require_snapshots(const Trajectory& traj) {
  if (traj.snapshots.size() < 3 || traj.snapshots.size() != traj.times.size())
    throw ValidationError("identity residuals need at least 3 stored snapshots");
}

}  // namespace

double centered_derivative(double t0, double v0, double t1, double v1, double t2, double v2) {
  const double h1 = t1 - t0;
  const double h2 = t2 - t1;
  return -h2 / (h1 * (h1 + h2)) * v0 + (h2 - h1) / (h1 * h2) * v1 + h1 / (h2 * (h1 + h2)) * v2;
}

Conserved conserved_quantities(const Field& u) {
  Conserved c;
  c.l2_squared = integrate(squared(u));
  const SpectralField s = forward_transform(u);
  const Field ux = inverse_transform(derivative(s, 1, 0));
  ClosedField uy = evaluate_closed(s, 0, 1);
  for (double& v : uy.values) v *= v;
  c.gradient = integrate(squared(ux)) + integrate(uy);
  Field cube(u.grid);
  for (std::size_t n = 0; n < u.values.size(); ++n) cube.values[n] = u.values[n] * u.values[n] * u.values[n];
  c.cubic = integrate(cube);
  c.energy = c.gradient + c.cubic / 3.0;
  c.hamiltonian = c.gradient - c.cubic / 3.0;
  return c;
}

DiagnosticRecord probe_record(const Field& u, double t, const std::vector<WeightSpec>& weights,
                              bool with_h1) {
  DiagnosticRecord r;
  r.t = t;
  const Conserved c = conserved_quantities(u);
  r.l2 = std::sqrt(c.l2_squared);
  r.h1 = with_h1 ? std::sqrt(c.l2_squared + c.gradient) : kNaN;
  r.energy = c.energy;
  for (const WeightSpec& w : weights) r.weighted_l2.push_back(weighted_l2_norm(u, w));
  r.residual_l2 = kNaN;
  r.residual_weighted.assign(weights.size(), kNaN);
  return r;
}

IdentitySeries l2_identity_residual(const Trajectory& traj, const Coefficients& coeffs, double h,
                                    const std::optional<Field>& f) {
  require_snapshots(traj);
  const std::size_t n = traj.snapshots.size();
  std::vector<double> e(n);
  for (std::size_t k = 0; k < n; ++k) e[k] = integrate(squared(traj.snapshots[k]));

  IdentitySeries out;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const Field& u = traj.snapshots[k];
    const Parts p = parts_of(u);
    const double ddt = centered_derivative(traj.times[k - 1], e[k - 1], traj.times[k], e[k],
                                           traj.times[k + 1], e[k + 1]);
    double rhs = -2.0 * coeffs.delta * (integrate(squared(p.uxx)) + integrate(squared(p.uyy)));
    Field gu(u.grid);
    for (std::size_t m = 0; m < u.values.size(); ++m)
      gu.values[m] = g_h_prime(u.values[m], h) * u.values[m] * p.ux.values[m];
    rhs -= 2.0 * integrate(gu);
    rhs -= 2.0 * (integrate(times_field(coeffs.a1, squared(p.ux))) + a2_term(u, coeffs, nullptr) +
                  integrate(times_field(coeffs.a0, squared(u))));
    if (f) rhs += 2.0 * integrate(times_field(*f, u));
    out.times.push_back(traj.times[k]);
    out.residual.push_back(ddt - rhs);
    out.max_abs = std::max(out.max_abs, std::abs(ddt - rhs));
  }
  return out;
}

WeightedTerms weighted_identity_terms(const Field& u, const Coefficients& coeffs, double h,
                                      const WeightSpec& w, const std::optional<Field>& f) {
  const StripGrid& g = u.grid;
  std::vector<std::vector<double>> psi;
  for (int k = 0; k <= 4; ++k) psi.push_back(weight_on_grid(w, g, k));
  const Parts p = parts_of(u);
  const Field u2 = squared(u);
  const Field ux2 = squared(p.ux);
  const double d = coeffs.delta;

  WeightedTerms t{};
  t[0] = coeffs.b * integrate_weighted(u2, psi[1]);
  t[1] = -(3.0 * integrate_weighted(ux2, psi[1]) + integrate_weighted(p.uy_sq, psi[1]));
  t[2] = integrate_weighted(u2, psi[3]);
  t[3] = -2.0 * d * (integrate_weighted(squared(p.uxx), psi[0]) + integrate_weighted(squared(p.uyy), psi[0]));
  t[4] = 4.0 * d * integrate_weighted(ux2, psi[2]);
  t[5] = -d * integrate_weighted(u2, psi[4]);
  Field gs(g);
  for (std::size_t m = 0; m < u.values.size(); ++m) gs.values[m] = g_h_star(u.values[m], h);
  t[6] = 2.0 * integrate_weighted(gs, psi[1]);
  t[7] = -2.0 * (integrate_weighted(times_field(coeffs.a1, ux2), psi[0]) +
                 a2_term(u, coeffs, &psi[0]) + integrate_weighted(times_field(coeffs.a0, u2), psi[0]));
  t[8] = -2.0 * integrate_weighted(times_field(coeffs.a1, times_field(u, p.ux)), psi[1]);
  t[9] = f ? 2.0 * integrate_weighted(times_field(*f, u), psi[0]) : 0.0;
  return t;
}

double weighted_rate_direct(const Field& u, const Coefficients& coeffs, const SolverConfig& cfg,
                            const WeightSpec& w, const std::optional<Field>& f) {
  const StripGrid& g = u.grid;
  const SpectralField s = forward_transform(u);
  const LinearSymbol sym = build_symbol(g, coeffs.b, coeffs.delta);
  const NonlinearOperator op(coeffs, cfg, f);
  SpectralField rate = op(s, 0.0);
  for (std::size_t n = 0; n < rate.coeffs.size(); ++n) rate.coeffs[n] += sym.table()[n] * s.coeffs[n];
  const Field ut = inverse_transform(rate);
  return 2.0 * integrate_weighted(times_field(u, ut), weight_on_grid(w, g, 0));
}

WeightedIdentitySeries weighted_identity_residual(const Trajectory& traj, const Coefficients& coeffs,
                                                  const WeightSpec& w, double h,
                                                  const std::optional<Field>& f) {
  require_snapshots(traj);
  const std::size_t n = traj.snapshots.size();
  std::vector<double> e(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double v = weighted_l2_norm(traj.snapshots[k], w);
    e[k] = v * v;
  }
  WeightedIdentitySeries out;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double ddt = centered_derivative(traj.times[k - 1], e[k - 1], traj.times[k], e[k],
                                           traj.times[k + 1], e[k + 1]);
    const WeightedTerms t = weighted_identity_terms(traj.snapshots[k], coeffs, h, w, f);
    const double sum = std::accumulate(t.begin(), t.end(), 0.0);
    out.times.push_back(traj.times[k]);
    out.ddt.push_back(ddt);
    out.terms.push_back(t);
    out.residual.push_back(ddt - sum);
    out.max_abs = std::max(out.max_abs, std::abs(ddt - sum));
  }
  return out;
}

void attach_residuals(Trajectory& traj, const Coefficients& coeffs, double h,
                      const std::optional<Field>& f) {
  if (traj.snapshots.size() < 3 || traj.snapshots.size() != traj.records.size()) return;
  const IdentitySeries l2 = l2_identity_residual(traj, coeffs, h, f);
  for (std::size_t k = 0; k < l2.residual.size(); ++k) traj.records[k + 1].residual_l2 = l2.residual[k];
  for (std::size_t w = 0; w < traj.weights.size(); ++w) {
    const WeightedIdentitySeries ws = weighted_identity_residual(traj, coeffs, traj.weights[w], h, f);
    for (std::size_t k = 0; k < ws.residual.size(); ++k)
      traj.records[k + 1].residual_weighted[w] = ws.residual[k];
  }
}

}  // namespace zk
