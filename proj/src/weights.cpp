#include "zkstrip/weights.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "zkstrip/error.hpp"
#include "zkstrip/smoothstep.hpp"
#include "zkstrip/spectral.hpp"

namespace zk {

namespace {

using boost::math::quadrature::gauss;

double falling(double p, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= p - static_cast<double>(i);
  return r;
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

// Right tail shared by rho_alpha (z >= 1) and kappa_alpha (z >= 0):
// (1+z)^(2 alpha), or 2 - (1+z)^(-1/2) when alpha = 0.
double right_tail(double alpha, double z, int n) {
  const double t = 1.0 + z;
  if (alpha > 0.0) return falling(2.0 * alpha, n) * std::pow(t, 2.0 * alpha - n);
  if (n == 0) return 2.0 - std::pow(t, -0.5);
  return -falling(-0.5, n) * std::pow(t, -0.5 - n);
}

// rho_alpha: 1 + eps e^z for z <= 0, right tail for z >= 1, and on [0,1]
// rho' = (1 - S) eps e^z + S R'. eps makes the two pieces meet at z = 1.
struct Rho {
  double alpha;
  double eps;

  explicit Rho(double a) : alpha(a) {
    const double i_sr = gauss<double, 30>::integrate(
        [&](double z) { return smoothstep(z) * right_tail(alpha, z, 1); }, 0.0, 1.0);
    const double i_e = gauss<double, 30>::integrate(
        [](double z) { return (1.0 - smoothstep(z)) * std::exp(z); }, 0.0, 1.0);
    eps = (right_tail(alpha, 1.0, 0) - 1.0 - i_sr) / (1.0 + i_e);
  }

  double slope(double z) const {
    const double s = smoothstep(z);
    return (1.0 - s) * eps * std::exp(z) + s * right_tail(alpha, z, 1);
  }

  double operator()(double z, int n) const {
    if (z <= 0.0) return n == 0 ? 1.0 + eps * std::exp(z) : eps * std::exp(z);
    if (z >= 1.0) return right_tail(alpha, z, n);
    if (n == 0)
      return 1.0 + eps + gauss<double, 30>::integrate([&](double t) { return slope(t); }, 0.0, z);
    const int m = n - 1;
    double acc = 0.0;
    for (int j = 0; j <= m; ++j) {
      const double sj = smoothstep_deriv(z, j);
      const double one_minus = (j == 0 ? 1.0 : 0.0) - sj;
      acc += binom(m, j) * (one_minus * eps * std::exp(z) + sj * right_tail(alpha, z, m - j + 1));
    }
    return acc;
  }
};

// kappa_alpha, alpha > 0: on [-1,0] with t = 1+z,
// kappa = exp(2 alpha phi), phi = z + S(t) (log t - t + 1).
double kappa_pos(double alpha, double z, int n) {
  if (z <= -1.0) return std::pow(2.0 * alpha, n) * std::exp(2.0 * alpha * z);
  if (z >= 0.0) return right_tail(alpha, z, n);
  const double t = 1.0 + z;
  if (t < 1e-12) return std::pow(2.0 * alpha, n) * std::exp(2.0 * alpha * z);
  // G = log t - t + 1 and its derivatives.
  const double g[5] = {std::log(t) - t + 1.0, 1.0 / t - 1.0, -1.0 / (t * t), 2.0 / (t * t * t),
                       -6.0 / (t * t * t * t)};
  double f[5];  // derivatives of F = 2 alpha phi
  for (int k = 0; k <= 4; ++k) {
    double phi = (k == 0 ? z : (k == 1 ? 1.0 : 0.0));
    for (int j = 0; j <= k; ++j) phi += binom(k, j) * smoothstep_deriv(t, j) * g[k - j];
    f[k] = 2.0 * alpha * phi;
  }
  const double kap = std::exp(f[0]);
  switch (n) {
    case 0: return kap;
    case 1: return kap * f[1];
    case 2: return kap * (f[2] + f[1] * f[1]);
    case 3: return kap * (f[3] + 3.0 * f[1] * f[2] + f[1] * f[1] * f[1]);
    default:
      return kap * (f[4] + 4.0 * f[1] * f[3] + 3.0 * f[2] * f[2] + 6.0 * f[1] * f[1] * f[2] +
                    f[1] * f[1] * f[1] * f[1]);
  }
}

// kappa_0: kappa_0' = S(t) R'(z) on [-1,0], integrated in closed form.
double kappa_zero(double z, int n) {
  if (z >= 0.0) return right_tail(0.0, z, n);
  if (z <= -1.0) return n == 0 ? kappa0_plateau() : 0.0;
  const double t = 1.0 + z;
  if (n == 0) {
    double acc = 1.0;
    for (std::size_t c = 0; c < kSmoothstepCoef.size(); ++c) {
      const double k = static_cast<double>(kSmoothstepFirstPower + static_cast<int>(c));
      acc -= kSmoothstepCoef[c] / (2.0 * k - 1.0) * (1.0 - std::pow(t, k - 0.5));
    }
    return acc;
  }
  const int m = n - 1;
  double acc = 0.0;
  for (int j = 0; j <= m; ++j)
    acc += binom(m, j) * smoothstep_deriv(t, j) * right_tail(0.0, z, m - j + 1);
  return acc;
}

double base(const WeightSpec& w, double z, int n) {
  switch (w.kind) {
    case WeightKind::constant_one: return n == 0 ? 1.0 : 0.0;
    case WeightKind::exp_pure: return std::pow(2.0 * w.alpha, n) * std::exp(2.0 * w.alpha * z);
    case WeightKind::exp_plus:
      return (n == 0 ? 1.0 : 0.0) + std::pow(2.0 * w.alpha, n) * std::exp(2.0 * w.alpha * z);
    case WeightKind::rho_alpha: return Rho(w.alpha)(z, n);
    case WeightKind::kappa_alpha: return w.alpha > 0.0 ? kappa_pos(w.alpha, z, n) : kappa_zero(z, n);
  }
  return 0.0;
}

}  // namespace

void WeightSpec::validate() const {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ValidationError("weight alpha must be >= 0");
  if ((kind == WeightKind::exp_plus || kind == WeightKind::exp_pure) && !(alpha > 0.0))
    throw ValidationError("exponential weights need alpha > 0");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ValidationError("weight scale must be positive");
}

std::string WeightSpec::name() const {
  std::ostringstream os;
  switch (kind) {
    case WeightKind::constant_one: return "one";
    case WeightKind::rho_alpha: os << "rho(" << alpha << ")"; break;
    case WeightKind::kappa_alpha: os << "kappa(" << alpha << ")"; break;
    case WeightKind::exp_plus: os << "exp_plus(" << alpha << ")"; break;
    case WeightKind::exp_pure: os << "exp(" << alpha << ")"; break;
  }
  std::string s = os.str();
  if (scale != 1.0) {
    std::ostringstream t;
    t << "@" << scale;
    s += t.str();
  }
  return s;
}

WeightSpec parse_weight(const std::string& text) {
  // kind[:alpha[:scale]]
  WeightSpec w;
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.empty() || parts.size() > 3) throw ValidationError("bad weight spec '" + text + "'");
  const std::string& k = parts[0];
  if (k == "one" || k == "constant_one") w.kind = WeightKind::constant_one;
  else if (k == "rho" || k == "rho_alpha") w.kind = WeightKind::rho_alpha;
  else if (k == "kappa" || k == "kappa_alpha") w.kind = WeightKind::kappa_alpha;
  else if (k == "exp_plus") w.kind = WeightKind::exp_plus;
  else if (k == "exp" || k == "exp_pure") w.kind = WeightKind::exp_pure;
  else throw ValidationError("unknown weight kind '" + k + "'");
  try {
    if (parts.size() > 1) w.alpha = std::stod(parts[1]);
    if (parts.size() > 2) w.scale = std::stod(parts[2]);
  } catch (const std::exception&) {
    throw ValidationError("bad weight spec '" + text + "'");
  }
  w.validate();
  return w;
}

double kappa0_plateau() {
  double acc = 1.0;
  for (std::size_t c = 0; c < kSmoothstepCoef.size(); ++c) {
    const double k = static_cast<double>(kSmoothstepFirstPower + static_cast<int>(c));
    acc -= kSmoothstepCoef[c] / (2.0 * k - 1.0);
  }
  return acc;
}

double eval_weight(const WeightSpec& w, double x, int order) {
  if (order < 0) throw ValidationError("weight derivative order must be non-negative");
  if (order > 4) throw UnsupportedError("weight derivatives above order 4 are not implemented");
  return std::pow(w.scale, order) * base(w, w.scale * x, order);
}

std::vector<double> weight_on_grid(const WeightSpec& w, const StripGrid& g, int order) {
  std::vector<double> out(g.nx);
  if (w.kind == WeightKind::rho_alpha) {
    const Rho rho(w.alpha);
    const double f = std::pow(w.scale, order);
    for (std::size_t i = 0; i < g.nx; ++i) out[i] = f * rho(w.scale * g.x(i), order);
    return out;
  }
  for (std::size_t i = 0; i < g.nx; ++i) out[i] = eval_weight(w, g.x(i), order);
  return out;
}

double admissibility_constant(const WeightSpec& w) {
  w.validate();
  auto ratio = [&](double z) { return std::abs(base(w, z, 1)) / base(w, z, 0); };
  double c = 0.0;
  switch (w.kind) {
    case WeightKind::constant_one: return 0.0;
    case WeightKind::exp_pure:
    case WeightKind::exp_plus: c = 2.0 * w.alpha; break;
    case WeightKind::rho_alpha: {
      const Rho rho(w.alpha);
      c = std::max(rho.eps / (1.0 + rho.eps), ratio(1.0));
      for (int n = 0; n <= 20000; ++n) c = std::max(c, ratio(n / 20000.0));
      break;
    }
    case WeightKind::kappa_alpha:
      c = std::max(2.0 * w.alpha, ratio(0.0));
      for (int n = 0; n <= 20000; ++n) c = std::max(c, ratio(-1.0 + n / 20000.0));
      break;
  }
  return w.scale * c;
}

double weighted_l2_norm(const Field& f, const WeightSpec& w) {
  Field sq(f.grid);
  for (std::size_t n = 0; n < f.values.size(); ++n) sq.values[n] = f.values[n] * f.values[n];
  if (w.kind == WeightKind::constant_one) return std::sqrt(integrate(sq));
  return std::sqrt(integrate_weighted(sq, weight_on_grid(w, f.grid, 0)));
}

double weighted_hk_norm(const Field& f, int k, const WeightSpec& w) {
  if (k < 0) throw ValidationError("norm order must be non-negative");
  if (k > 2) throw UnsupportedError("weighted H^k norms are implemented for k <= 2");
  double acc = weighted_l2_norm(f, w);
  acc *= acc;
  if (k == 0) return std::sqrt(acc);
  const SpectralField s = forward_transform(f);
  const std::vector<double> psi = weight_on_grid(w, f.grid, 0);
  for (int j = 1; j <= k; ++j) acc += integrate_weighted(derivative_density(s, j), psi);
  return std::sqrt(acc);
}

LambdaResult lambda_functional(const std::vector<Field>& series, const std::vector<double>& times,
                               int k_plus_1) {
  if (k_plus_1 != 1 && k_plus_1 != 2)
    throw UnsupportedError("lambda functional is implemented for |Du| and |D^2 u|");
  if (series.empty() || series.size() != times.size())
    throw ValidationError("lambda functional needs one time per snapshot");
  const StripGrid& g = series.front().grid;
  if (!(g.period() > 1.0)) throw ValidationError("unit window is wider than the x-box");
  for (std::size_t n = 1; n < times.size(); ++n) {
    const double h = times[n] - times[n - 1];
    const double h0 = times[1] - times[0];
    if (!(h > 0.0) || std::abs(h - h0) > 1e-9 * std::max(1.0, std::abs(h0)))
      throw ValidationError("snapshot times must be uniformly spaced");
  }

  // Column integrals e_i(t) = int_0^L |D^(k+1) u|^2 dy, trapezoid in time.
  std::vector<double> col(g.nx, 0.0);
  for (std::size_t n = 0; n < series.size(); ++n) {
    require_same_grid(g, series[n].grid, "lambda_functional");
    double wt = 0.0;
    if (series.size() > 1) {
      const double h = times[1] - times[0];
      wt = (n == 0 || n + 1 == series.size()) ? 0.5 * h : h;
    }
    if (wt == 0.0) continue;
    const ClosedField d = derivative_density(forward_transform(series[n]), k_plus_1);
    const std::size_t nc = d.ny_closed();
    for (std::size_t i = 0; i < g.nx; ++i) {
      const double* r = &d.values[i * nc];
      double row = 0.5 * (r[0] + r[nc - 1]);
      for (std::size_t j = 1; j + 1 < nc; ++j) row += r[j];
      col[i] += wt * row * g.dy();
    }
  }

  const double cells = 1.0 / g.dx();
  const std::size_t full = static_cast<std::size_t>(std::floor(cells));
  const double frac = cells - static_cast<double>(full);
  LambdaResult best;
  best.value = -1.0;
  for (std::size_t i = 0; i < g.nx; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < full; ++c) acc += col[(i + c) % g.nx];
    acc += frac * col[(i + full) % g.nx];
    acc *= g.dx();
    if (acc > best.value) {
      best.value = acc;
      best.x0 = g.x(i);
    }
  }
  return best;
}

double steklov_ratio(const std::vector<double>& profile, double width) {
  const std::size_t n = profile.size();
  if (n == 0) throw ValidationError("empty profile");
  if (!(width > 0.0)) throw ValidationError("width must be positive");
  // Sine coefficients of the interpolant, orthonormal on the interior nodes.
  double num = 0.0;
  double den = 0.0;
  for (std::size_t l = 1; l <= n; ++l) {
    double c = 0.0;
    for (std::size_t j = 1; j <= n; ++j)
      c += profile[j - 1] * std::sin(std::numbers::pi * static_cast<double>(l * j) /
                                     static_cast<double>(n + 1));
    const double lam = std::pow(std::numbers::pi * static_cast<double>(l) / width, 2);
    num += c * c;
    den += lam * c * c;
  }
  if (!(den > 0.0)) throw ValidationError("Steklov ratio undefined for a zero profile");
  return num / den;
}

InterpolationSides interpolation_check(const Field& f, InterpolationCase c, const WeightSpec& w1,
                                       const WeightSpec& w2, double q) {
  int k = 1;
  int m = 0;
  switch (c) {
    case InterpolationCase::k1m0q: k = 1; m = 0; break;
    case InterpolationCase::k2m0q: k = 2; m = 0; break;
    case InterpolationCase::k2m1q2:
      k = 2; m = 1;
      if (q != 2.0) throw UnsupportedError("case k=2, m=1 is proved only for q = 2");
      break;
  }
  if (!(q >= 2.0) || !std::isfinite(q)) throw UnsupportedError("interpolation needs 2 <= q < inf");

  InterpolationSides out;
  out.s = (m + 1.0) / (2.0 * k) - 1.0 / (k * q);
  const StripGrid& g = f.grid;
  const SpectralField s = forward_transform(f);
  const std::vector<double> psi1 = weight_on_grid(w1, g, 0);
  const std::vector<double> psi2 = weight_on_grid(w2, g, 0);

  // lhs on the closed grid so that |D f| keeps its wall values.
  const ClosedField dm = derivative_density(s, m);
  std::vector<double> lw(g.nx);
  for (std::size_t i = 0; i < g.nx; ++i)
    lw[i] = std::pow(psi1[i], out.s * q) * std::pow(psi2[i], (0.5 - out.s) * q);
  ClosedField pw = dm;
  for (double& v : pw.values) v = std::pow(v, q / 2.0);
  out.lhs = std::pow(integrate_weighted(pw, lw), 1.0 / q);

  const double dk = std::sqrt(integrate_weighted(derivative_density(s, k), psi1));
  const double f2 = weighted_l2_norm(f, w2);
  out.rhs = std::pow(dk, 2.0 * out.s) * std::pow(f2, 1.0 - 2.0 * out.s) + f2;
  return out;
}

}  // namespace zk
