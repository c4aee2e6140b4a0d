#include "zkstrip/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "zkstrip/error.hpp"

namespace zk {

namespace {

// Plans for one (nx, ny) shape. Executed through the new-array interface on
// per-call buffers, so a cached plan is shared freely across threads.
struct Plans {
  fftw_plan dst = nullptr;  // RODFT00 along y, nx rows
  fftw_plan r2c = nullptr;  // along x, ny strided columns
  fftw_plan c2r = nullptr;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, p] : plans_) {
      fftw_destroy_plan(p.dst);
      fftw_destroy_plan(p.r2c);
      fftw_destroy_plan(p.c2r);
    }
  }

  const Plans& get(std::size_t nx, std::size_t ny) {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_pair(nx, ny);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    const int n_x = static_cast<int>(nx);
    const int n_y = static_cast<int>(ny);
    const int nh = n_x / 2 + 1;
    std::vector<double> real(nx * ny);
    std::vector<double> real2(nx * ny);
    std::vector<fftw_complex> half(static_cast<std::size_t>(nh) * ny);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;

    Plans p;
    fftw_r2r_kind kind = FFTW_RODFT00;
    p.dst = fftw_plan_many_r2r(1, &n_y, n_x, real.data(), nullptr, 1, n_y, real2.data(), nullptr, 1,
                               n_y, &kind, flags);
    p.r2c = fftw_plan_many_dft_r2c(1, &n_x, n_y, real.data(), nullptr, n_y, 1, half.data(), nullptr,
                                   n_y, 1, flags);
    p.c2r = fftw_plan_many_dft_c2r(1, &n_x, n_y, half.data(), nullptr, n_y, 1, real.data(), nullptr,
                                   n_y, 1, flags);
    return plans_.emplace(key, p).first->second;
  }

 private:
  std::mutex mu_;
  std::map<std::pair<std::size_t, std::size_t>, Plans> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

cplx ipow_i(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

// Multiplier (i xi)^n with the Nyquist slot zeroed for odd n.
std::vector<cplx> x_multipliers(const StripGrid& g, int n) {
  std::vector<cplx> m(g.nx);
  const long nyq = -static_cast<long>(g.nx / 2);
  for (std::size_t q = 0; q < g.nx; ++q) {
    const long k = g.k_of(q);
    if (n % 2 == 1 && k == nyq) {
      m[q] = 0.0;
      continue;
    }
    m[q] = ipow_i(n) * std::pow(g.xi(k), n);
  }
  return m;
}

void check_symmetry(const SpectralField& s) {
  const StripGrid& g = s.grid;
  const double tol = 1e-9 * s.max_abs();
  const std::size_t ny = g.ny;
  for (std::size_t l = 0; l < ny; ++l) {
    if (std::abs(s.coeffs[l].imag()) > tol ||
        std::abs(s.coeffs[(g.nx / 2) * ny + l].imag()) > tol)
      throw ValidationError("spectral field violates conjugate symmetry");
    for (std::size_t q = 1; q < g.nx / 2; ++q) {
      const cplx a = s.coeffs[q * ny + l];
      const cplx b = s.coeffs[(g.nx - q) * ny + l];
      if (std::abs(a - std::conj(b)) > tol)
        throw ValidationError("spectral field violates conjugate symmetry");
    }
  }
}

// Complex coefficients -> real sine coefficients a_l(x_i), index i*ny + l-1.
std::vector<double> x_inverse(const SpectralField& s) {
  const StripGrid& g = s.grid;
  const std::size_t nh = g.nx / 2 + 1;
  std::vector<fftw_complex> half(nh * g.ny);
  for (std::size_t q = 0; q < nh; ++q)
    for (std::size_t l = 0; l < g.ny; ++l) {
      const cplx c = s.coeffs[q * g.ny + l];
      half[q * g.ny + l][0] = c.real();
      half[q * g.ny + l][1] = c.imag();
    }
  std::vector<double> a(g.size());
  fftw_execute_dft_c2r(cache().get(g.nx, g.ny).c2r, half.data(), a.data());
  return a;
}

}  // namespace

SpectralField forward_transform(const Field& f) {
  const StripGrid& g = f.grid;
  g.validate();
  if (f.values.size() != g.size()) throw ValidationError("field size does not match grid");
  if (!f.all_finite()) throw ValidationError("field contains non-finite values");

  const Plans& p = cache().get(g.nx, g.ny);
  std::vector<double> in(f.values);
  std::vector<double> a(g.size());
  fftw_execute_r2r(p.dst, in.data(), a.data());

  const std::size_t nh = g.nx / 2 + 1;
  std::vector<fftw_complex> half(nh * g.ny);
  fftw_execute_dft_r2c(p.r2c, a.data(), half.data());

  const double scale = std::sqrt(2.0 / g.width) * g.dy() / 2.0 / static_cast<double>(g.nx);
  SpectralField s(g);
  for (std::size_t q = 0; q < nh; ++q)
    for (std::size_t l = 0; l < g.ny; ++l)
      s.coeffs[q * g.ny + l] = scale * cplx(half[q * g.ny + l][0], half[q * g.ny + l][1]);
  for (std::size_t q = nh; q < g.nx; ++q)
    for (std::size_t l = 0; l < g.ny; ++l)
      s.coeffs[q * g.ny + l] = std::conj(s.coeffs[(g.nx - q) * g.ny + l]);
  return s;
}

Field inverse_transform(const SpectralField& s) {
  const StripGrid& g = s.grid;
  g.validate();
  if (s.coeffs.size() != g.size()) throw ValidationError("spectral field size does not match grid");
  check_symmetry(s);

  std::vector<double> a = x_inverse(s);
  Field f(g);
  fftw_execute_r2r(cache().get(g.nx, g.ny).dst, a.data(), f.values.data());
  const double scale = std::sqrt(2.0 / g.width) / 2.0;
  for (double& v : f.values) v *= scale;
  return f;
}

SpectralField derivative(const SpectralField& s, int order_x, int order_y) {
  if (order_x < 0 || order_y < 0) throw ValidationError("derivative orders must be non-negative");
  if (order_y % 2 != 0)
    throw UnsupportedError("odd y derivative leaves the sine basis; use evaluate_closed");
  const StripGrid& g = s.grid;
  const std::vector<cplx> mx = x_multipliers(g, order_x);
  std::vector<double> my(g.ny);
  for (std::size_t l = 1; l <= g.ny; ++l)
    my[l - 1] = std::pow(-g.lambda(l), order_y / 2);
  SpectralField out(g);
  for (std::size_t q = 0; q < g.nx; ++q)
    for (std::size_t l = 0; l < g.ny; ++l)
      out.coeffs[q * g.ny + l] = s.coeffs[q * g.ny + l] * mx[q] * my[l];
  return out;
}

bool dealias_keeps(const StripGrid& g, long k, std::size_t l) {
  return 3 * std::abs(k) <= static_cast<long>(g.nx) && 3 * l <= 2 * g.ny;
}

SpectralField dealias(const SpectralField& s) {
  const StripGrid& g = s.grid;
  SpectralField out = s;
  for (std::size_t q = 0; q < g.nx; ++q)
    for (std::size_t l = 1; l <= g.ny; ++l)
      if (!dealias_keeps(g, g.k_of(q), l)) out.coeffs[q * g.ny + (l - 1)] = 0.0;
  return out;
}

ClosedField evaluate_closed(const SpectralField& s, int order_x, int order_y) {
  if (order_x < 0 || order_y < 0) throw ValidationError("derivative orders must be non-negative");
  const StripGrid& g = s.grid;
  const std::vector<cplx> mx = x_multipliers(g, order_x);
  SpectralField sx(g);
  for (std::size_t q = 0; q < g.nx; ++q)
    for (std::size_t l = 0; l < g.ny; ++l) sx.coeffs[q * g.ny + l] = s.coeffs[q * g.ny + l] * mx[q];
  check_symmetry(sx);
  const std::vector<double> a = x_inverse(sx);

  // basis[j][l] = d^order_y psi_l(y_j) on the closed grid.
  const std::size_t nc = g.ny + 2;
  std::vector<double> basis(nc * g.ny);
  const double norm = std::sqrt(2.0 / g.width);
  for (std::size_t j = 0; j < nc; ++j)
    for (std::size_t l = 1; l <= g.ny; ++l) {
      const double w = std::numbers::pi * static_cast<double>(l) / g.width;
      const double arg = std::numbers::pi * static_cast<double>(l * j) / static_cast<double>(g.ny + 1);
      double trig = 0.0;
      switch (order_y % 4) {
        case 0: trig = std::sin(arg); break;
        case 1: trig = std::cos(arg); break;
        case 2: trig = -std::sin(arg); break;
        default: trig = -std::cos(arg); break;
      }
      // Sine values at the walls are exact zeros.
      if (order_y % 2 == 0 && (j == 0 || j == nc - 1)) trig = 0.0;
      basis[j * g.ny + (l - 1)] = norm * std::pow(w, order_y) * trig;
    }

  ClosedField c{g, std::vector<double>(g.nx * nc, 0.0)};
  for (std::size_t i = 0; i < g.nx; ++i)
    for (std::size_t j = 0; j < nc; ++j) {
      double acc = 0.0;
      for (std::size_t l = 0; l < g.ny; ++l) acc += a[i * g.ny + l] * basis[j * g.ny + l];
      c.values[i * nc + j] = acc;
    }
  return c;
}

Field interior(const ClosedField& c) {
  Field f(c.grid);
  const std::size_t nc = c.ny_closed();
  for (std::size_t i = 0; i < c.grid.nx; ++i)
    for (std::size_t j = 0; j < c.grid.ny; ++j) f(i, j) = c.values[i * nc + j + 1];
  return f;
}

double integrate(const Field& f) {
  double acc = 0.0;
  for (double v : f.values) acc += v;
  return acc * f.grid.dx() * f.grid.dy();
}

double integrate(const ClosedField& f) {
  const std::size_t nc = f.ny_closed();
  double acc = 0.0;
  for (std::size_t i = 0; i < f.grid.nx; ++i) {
    const double* row = &f.values[i * nc];
    acc += 0.5 * (row[0] + row[nc - 1]);
    for (std::size_t j = 1; j + 1 < nc; ++j) acc += row[j];
  }
  return acc * f.grid.dx() * f.grid.dy();
}

double integrate_product(const Field& a, const Field& b) {
  require_same_grid(a.grid, b.grid, "integrate_product");
  double acc = 0.0;
  for (std::size_t n = 0; n < a.values.size(); ++n) acc += a.values[n] * b.values[n];
  return acc * a.grid.dx() * a.grid.dy();
}

double integrate_weighted(const Field& f, const std::vector<double>& psi) {
  const StripGrid& g = f.grid;
  if (psi.size() != g.nx) throw ValidationError("weight samples do not match grid");
  double acc = 0.0;
  for (std::size_t i = 0; i < g.nx; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < g.ny; ++j) row += f(i, j);
    acc += row * psi[i];
  }
  return acc * g.dx() * g.dy();
}

double integrate_weighted(const ClosedField& f, const std::vector<double>& psi) {
  const StripGrid& g = f.grid;
  if (psi.size() != g.nx) throw ValidationError("weight samples do not match grid");
  const std::size_t nc = f.ny_closed();
  double acc = 0.0;
  for (std::size_t i = 0; i < g.nx; ++i) {
    const double* r = &f.values[i * nc];
    double row = 0.5 * (r[0] + r[nc - 1]);
    for (std::size_t j = 1; j + 1 < nc; ++j) row += r[j];
    acc += row * psi[i];
  }
  return acc * g.dx() * g.dy();
}

ClosedField derivative_density(const SpectralField& s, int order) {
  if (order < 0) throw ValidationError("derivative order must be non-negative");
  ClosedField out{s.grid, std::vector<double>(s.grid.nx * (s.grid.ny + 2), 0.0)};
  for (int ky = 0; ky <= order; ++ky) {
    const ClosedField part = evaluate_closed(s, order - ky, ky);
    for (std::size_t n = 0; n < out.values.size(); ++n) out.values[n] += part.values[n] * part.values[n];
  }
  return out;
}

}  // namespace zk
