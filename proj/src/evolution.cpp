#include "zkstrip/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "zkstrip/diagnostics.hpp"
#include "zkstrip/error.hpp"
#include "zkstrip/smoothstep.hpp"
#include "zkstrip/spectral.hpp"

namespace zk {

// ---------------------------------------------------------------- g_h

double g_h(double u, double h) {
  const double s = h * std::abs(u);
  if (s <= 1.0) return 0.5 * u * u;
  const double h2 = h * h;
  if (s < 2.0) {
    const double t = s - 1.0;
    return (0.5 * s * s + smoothstep_moment(t, 0) - smoothstep_moment(t, 1)) / h2;
  }
  return (2.0 + smoothstep_moment(1.0, 0) - smoothstep_moment(1.0, 1) + 2.0 * (s - 2.0)) / h2;
}

double g_h_prime(double u, double h) {
  const double s = h * std::abs(u);
  if (s <= 1.0) return u;
  const double sg = u > 0.0 ? 1.0 : -1.0;
  if (s < 2.0) return sg / h * (s + (2.0 - s) * smoothstep(s - 1.0));
  return 2.0 * sg / h;
}

double g_h_star(double u, double h) {
  const double s = h * std::abs(u);
  if (s <= 1.0) return u * u * u / 3.0;
  const double sg = u > 0.0 ? 1.0 : -1.0;
  const double h3 = h * h * h;
  if (s < 2.0) {
    const double t = s - 1.0;
    return sg / h3 * (s * s * s / 3.0 + smoothstep_moment(t, 0) - smoothstep_moment(t, 2));
  }
  return sg / h3 *
         (8.0 / 3.0 + smoothstep_moment(1.0, 0) - smoothstep_moment(1.0, 2) + s * s - 4.0);
}

// ---------------------------------------------------------------- coefficients

Coefficients Coefficients::zero(const StripGrid& g, double b, double delta) {
  Coefficients c;
  c.b = b;
  c.delta = delta;
  c.a0 = Field(g);
  c.a1 = Field(g);
  c.a2 = Field(g);
  return c;
}

namespace {

bool nonzero(const Field& f) {
  return std::any_of(f.values.begin(), f.values.end(), [](double v) { return v != 0.0; });
}

void check_field(const Field& f, const StripGrid& g, const char* name) {
  if (f.grid != g || f.values.size() != g.size())
    throw ValidationError(std::string(name) + " does not match the grid");
  if (!f.all_finite()) throw ValidationError(std::string(name) + " must be finite");
}

}  // namespace

bool Coefficients::has_a0() const { return nonzero(a0); }
bool Coefficients::has_a1() const { return nonzero(a1); }
bool Coefficients::has_a2() const { return nonzero(a2) || (a2_y && nonzero(*a2_y)); }

void Coefficients::validate(const StripGrid& g) const {
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw ValidationError("delta must be non-negative");
  if (!std::isfinite(b)) throw ValidationError("b must be finite");
  check_field(a0, g, "a0");
  check_field(a1, g, "a1");
  check_field(a2, g, "a2");
  if (a2_y) check_field(*a2_y, g, "a2_y");
  for (double v : a1.values)
    if (v < 0.0) throw ValidationError("a1 must be non-negative");
  for (double v : a2.values)
    if (v < 0.0) throw ValidationError("a2 must be non-negative");
  if (flag == StructureFlag::none) return;
  if (!(a > 0.0) || !(R > 0.0)) throw ValidationError("plateau needs a > 0 and R > 0");
  for (std::size_t i = 0; i < g.nx; ++i) {
    const double x = g.x(i);
    bool inside = false;
    switch (flag) {
      case StructureFlag::both_infinities: inside = std::abs(x) >= R; break;
      case StructureFlag::minus_infinity: inside = x <= -R && x >= g.x_min + seam_taper; break;
      case StructureFlag::plus_infinity: inside = x >= R && x <= g.x_max - seam_taper; break;
      case StructureFlag::none: break;
    }
    if (!inside) continue;
    for (std::size_t j = 0; j < g.ny; ++j)
      if (a1(i, j) < a * (1.0 - 1e-12) || a2(i, j) < a * (1.0 - 1e-12))
        throw ValidationError("damping plateau below a at x = " + std::to_string(x));
  }
}

namespace {

Field from_profile(const StripGrid& g, auto&& profile) {
  Field f(g);
  for (std::size_t i = 0; i < g.nx; ++i) {
    const double v = profile(g.x(i));
    for (std::size_t j = 0; j < g.ny; ++j) f(i, j) = v;
  }
  return f;
}

// 0 at distance >= taper inside the box from the seam, 1 at the seam.
double seam_bump(const StripGrid& g, double x, double taper) {
  if (!(taper > 0.0)) return 0.0;
  const double d = std::min(x - g.x_min, g.x_max - x);
  return 1.0 - smoothstep(d / taper);
}

}  // namespace

Field damping_constant(const StripGrid& g, double value) {
  return from_profile(g, [&](double) { return value; });
}

Field damping_plateau_both(const StripGrid& g, double a, double R) {
  return from_profile(g, [&](double x) { return a * smoothstep(std::abs(x) - (R - 1.0)); });
}

Field damping_plateau_minus(const StripGrid& g, double a, double R, double seam_taper) {
  return from_profile(g, [&](double x) {
    const double rise = seam_taper > 0.0 ? smoothstep((x - g.x_min) / seam_taper) : 1.0;
    return a * smoothstep(-x - (R - 1.0)) * rise;
  });
}

Field damping_plateau_plus(const StripGrid& g, double a, double R, double seam_taper) {
  return from_profile(g, [&](double x) {
    const double fall = seam_taper > 0.0 ? smoothstep((g.x_max - x) / seam_taper) : 1.0;
    return a * smoothstep(x - (R - 1.0)) * fall;
  });
}

Field damping_sponge(const StripGrid& g, double value, double width) {
  return from_profile(g, [&](double x) { return value * seam_bump(g, x, width); });
}

// ---------------------------------------------------------------- solver config

void SolverConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("time.dt must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ValidationError("time.t_end must be positive");
  if (dt > t_end * (1.0 + 1e-12)) throw ValidationError("time.dt must not exceed time.t_end");
  if (!(h_cutoff > 0.0)) throw ValidationError("physics.h_cutoff must be positive");
  if (snapshot_every < 1) throw ValidationError("time.snapshot_every must be at least 1");
  if (!(blowup_factor > 1.0)) throw ValidationError("blow-up factor must exceed 1");
}

std::size_t SolverConfig::steps() const {
  return static_cast<std::size_t>(std::max(1.0, std::ceil(t_end / dt - 1e-9)));
}

double SolverConfig::step_size() const { return t_end / static_cast<double>(steps()); }

// ---------------------------------------------------------------- nonlinear stage

NonlinearOperator::NonlinearOperator(const Coefficients& coeffs, const SolverConfig& cfg,
                                     const std::optional<Field>& forcing)
    : coeffs_(coeffs), cfg_(cfg) {
  a0_ = coeffs_.has_a0();
  a1_ = coeffs_.has_a1();
  a2_ = coeffs_.has_a2();
  if (forcing) f_hat_ = forward_transform(*forcing);
}

SpectralField NonlinearOperator::flux_term(const SpectralField& u_hat) const {
  SpectralField out(u_hat.grid);
  if (!cfg_.nonlinear) return out;
  Field u = inverse_transform(u_hat);
  if (!u.all_finite()) throw BlowupError("non-finite solution values", 0.0);
  for (double& v : u.values) v = g_h(v, cfg_.h_cutoff);
  SpectralField g = forward_transform(u);
  if (cfg_.use_dealiasing) g = dealias(g);
  out = derivative(g, 1, 0);
  for (cplx& c : out.coeffs) c = -c;
  return out;
}

SpectralField NonlinearOperator::damping_term(const SpectralField& u_hat) const {
  const StripGrid& g = u_hat.grid;
  SpectralField out(g);
  if (a1_) {
    Field ux = inverse_transform(derivative(u_hat, 1, 0));
    for (std::size_t n = 0; n < ux.values.size(); ++n) ux.values[n] *= coeffs_.a1.values[n];
    out = derivative(forward_transform(ux), 1, 0);
  }
  if (a0_ || a2_) {
    Field s(g);
    if (a2_) {
      const Field uyy = inverse_transform(derivative(u_hat, 0, 2));
      for (std::size_t n = 0; n < s.values.size(); ++n)
        s.values[n] += coeffs_.a2.values[n] * uyy.values[n];
      if (coeffs_.a2_y) {
        const Field uy = interior(evaluate_closed(u_hat, 0, 1));
        for (std::size_t n = 0; n < s.values.size(); ++n)
          s.values[n] += coeffs_.a2_y->values[n] * uy.values[n];
      }
    }
    if (a0_) {
      const Field u = inverse_transform(u_hat);
      for (std::size_t n = 0; n < s.values.size(); ++n)
        s.values[n] -= coeffs_.a0.values[n] * u.values[n];
    }
    if (!s.all_finite()) throw BlowupError("non-finite damping term", 0.0);
    const SpectralField sh = forward_transform(s);
    for (std::size_t n = 0; n < out.coeffs.size(); ++n) out.coeffs[n] += sh.coeffs[n];
  }
  return out;
}

SpectralField NonlinearOperator::operator()(const SpectralField& u_hat, double t) const {
  SpectralField out = flux_term(u_hat);
  if (a0_ || a1_ || a2_) {
    const SpectralField d = damping_term(u_hat);
    for (std::size_t n = 0; n < out.coeffs.size(); ++n) out.coeffs[n] += d.coeffs[n];
  }
  if (f_hat_)
    for (std::size_t n = 0; n < out.coeffs.size(); ++n) out.coeffs[n] += f_hat_->coeffs[n];
  for (const cplx& c : out.coeffs)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw BlowupError("non-finite right-hand side", t);
  return out;
}

Field nonlinear_rhs(const Field& u, const Coefficients& coeffs, double h, const Field& f,
                    bool dealiased) {
  coeffs.validate(u.grid);
  require_same_grid(u.grid, f.grid, "nonlinear_rhs");
  SolverConfig cfg;
  cfg.h_cutoff = h;
  cfg.use_dealiasing = dealiased;
  const NonlinearOperator op(coeffs, cfg, f);
  return inverse_transform(op(forward_transform(u), 0.0));
}

// ---------------------------------------------------------------- stepping

namespace {

void axpy(SpectralField& y, const SpectralField& x, double a) {
  for (std::size_t n = 0; n < y.coeffs.size(); ++n) y.coeffs[n] += a * x.coeffs[n];
}

SpectralField shifted(const SpectralField& u, const SpectralField& k, double a) {
  SpectralField out = u;
  axpy(out, k, a);
  return out;
}

}  // namespace

SpectralField step_spectral(const SpectralField& u_hat, const LinearSymbol& sym,
                            const NonlinearOperator& op, double dt, double t) {
  const SpectralField half = apply_propagator(u_hat, sym, 0.5 * dt);
  try {
    const SpectralField k1 = op(half, t);
    const SpectralField k2 = op(shifted(half, k1, 0.5 * dt), t + 0.5 * dt);
    const SpectralField k3 = op(shifted(half, k2, 0.5 * dt), t + 0.5 * dt);
    const SpectralField k4 = op(shifted(half, k3, dt), t + dt);
    SpectralField mid = half;
    for (std::size_t n = 0; n < mid.coeffs.size(); ++n)
      mid.coeffs[n] += dt / 6.0 *
                       (k1.coeffs[n] + 2.0 * k2.coeffs[n] + 2.0 * k3.coeffs[n] + k4.coeffs[n]);
    return apply_propagator(mid, sym, 0.5 * dt);
  } catch (const BlowupError& e) {
    throw BlowupError(e.what(), t);
  }
}

Field step(const Field& u, const LinearSymbol& sym, const Coefficients& coeffs,
           const SolverConfig& cfg) {
  cfg.validate();
  coeffs.validate(u.grid);
  const NonlinearOperator op(coeffs, cfg, std::nullopt);
  return inverse_transform(step_spectral(forward_transform(u), sym, op, cfg.dt, 0.0));
}

namespace {

double max_of(const Field& f) {
  double m = 0.0;
  for (double v : f.values) m = std::max(m, std::abs(v));
  return m;
}

void check_damping_limit(const Coefficients& c, const StripGrid& g, double dt) {
  const double xi = std::numbers::pi * static_cast<double>(g.nx) / g.period();
  const double lam = g.lambda(g.ny);
  double rate = max_of(c.a0) + max_of(c.a1) * xi * xi + max_of(c.a2) * lam;
  if (c.a2_y) rate += max_of(*c.a2_y) * std::sqrt(lam);
  // Real-axis stability bound of classical RK4.
  if (dt * rate > 2.78)
    throw ValidationError("time.dt too large for the explicit damping stage (dt * rate = " +
                          std::to_string(dt * rate) + " > 2.78)");
}

}  // namespace

Trajectory run(const Field& u0, const std::optional<Field>& f, const Coefficients& coeffs,
               const SolverConfig& cfg, const Probes& probes) {
  const StripGrid& g = u0.grid;
  g.validate();
  cfg.validate();
  coeffs.validate(g);
  if (f) require_same_grid(g, f->grid, "forcing");
  if (!u0.all_finite()) throw ValidationError("initial data must be finite");
  for (const WeightSpec& w : probes.weights) w.validate();
  const double dt = cfg.step_size();
  check_damping_limit(coeffs, g, dt);

  const LinearSymbol sym = build_symbol(g, coeffs.b, coeffs.delta);
  const NonlinearOperator op(coeffs, cfg, f);

  Trajectory traj;
  traj.weights = probes.weights;
  auto record = [&](const Field& u, double t) {
    traj.times.push_back(t);
    traj.records.push_back(probe_record(u, t, probes.weights, probes.h1));
    if (probes.keep_snapshots) traj.snapshots.push_back(u);
  };

  SpectralField uh = forward_transform(u0);
  const double e0 = uh.energy();
  const double limit = e0 * cfg.blowup_factor * cfg.blowup_factor;
  record(u0, 0.0);

  const std::size_t n_steps = cfg.steps();
  for (std::size_t n = 1; n <= n_steps; ++n) {
    const double t0 = static_cast<double>(n - 1) * dt;
    const double t1 = static_cast<double>(n) * dt;
    try {
      uh = step_spectral(uh, sym, op, dt, t0);
      const double e = uh.energy();
      if (!std::isfinite(e)) throw BlowupError("non-finite solution norm", t1);
      if (e0 > 0.0 && e > limit) throw BlowupError("solution norm grew beyond the blow-up limit", t1);
    } catch (const BlowupError& err) {
      traj.failed = true;
      traj.failure = err.what();
      traj.failure_time = err.time();
      return traj;
    }
    if (n % cfg.snapshot_every == 0 || n == n_steps) record(inverse_transform(uh), t1);
  }
  return traj;
}

// ---------------------------------------------------------------- presets

Field initial_gaussian(const StripGrid& g, double amplitude, double x0, double sigma, int y_mode) {
  if (!(sigma > 0.0)) throw ValidationError("initial.width must be positive");
  if (y_mode < 1) throw ValidationError("initial.y_mode must be at least 1");
  Field u(g);
  for (std::size_t i = 0; i < g.nx; ++i) {
    const double d = (g.x(i) - x0) / sigma;
    const double gx = amplitude * std::exp(-d * d);
    for (std::size_t j = 0; j < g.ny; ++j)
      u(i, j) = gx * std::sin(std::numbers::pi * y_mode * g.y(j) / g.width);
  }
  return u;
}

Field initial_sech2(const StripGrid& g, double amplitude, double x0, double width, int y_mode) {
  if (!(width > 0.0)) throw ValidationError("initial.width must be positive");
  if (y_mode < 1) throw ValidationError("initial.y_mode must be at least 1");
  Field u(g);
  for (std::size_t i = 0; i < g.nx; ++i) {
    const double c = 1.0 / std::cosh((g.x(i) - x0) / width);
    for (std::size_t j = 0; j < g.ny; ++j)
      u(i, j) = amplitude * c * c * std::sin(std::numbers::pi * y_mode * g.y(j) / g.width);
  }
  return u;
}

Field initial_random_modes(const StripGrid& g, double amplitude, std::uint64_t seed, int kmax,
                           int lmax) {
  if (kmax < 0 || lmax < 1) throw ValidationError("random modes need kmax >= 0 and lmax >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  SpectralField s(g);
  const long kk = std::min<long>(kmax, static_cast<long>(g.nx / 2) - 1);
  const std::size_t ll = std::min<std::size_t>(static_cast<std::size_t>(lmax), g.ny);
  for (std::size_t l = 1; l <= ll; ++l) {
    s.at(0, l) = nd(rng);
    for (long k = 1; k <= kk; ++k) {
      const cplx c(nd(rng), nd(rng));
      s.at(k, l) = c;
      s.at(-k, l) = std::conj(c);
    }
  }
  Field u = inverse_transform(s);
  const double m = u.max_abs();
  if (m > 0.0)
    for (double& v : u.values) v *= amplitude / m;
  return u;
}

}  // namespace zk
