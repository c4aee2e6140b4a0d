#include "zkstrip/propagator.hpp"

#include <cmath>

#include "zkstrip/error.hpp"

namespace zk {

LinearSymbol::LinearSymbol(const StripGrid& grid, double b, double delta)
    : grid_(grid), b_(b), delta_(delta), table_(grid.size()) {
  grid.validate();
  if (!(delta >= 0.0) || !std::isfinite(delta))
    throw ValidationError("delta must be non-negative");
  if (!std::isfinite(b)) throw ValidationError("b must be finite");
  const long nyq = -static_cast<long>(grid.nx / 2);
  for (std::size_t q = 0; q < grid.nx; ++q) {
    const long k = grid.k_of(q);
    const double xi = grid.xi(k);
    for (std::size_t l = 1; l <= grid.ny; ++l) {
      const double lam = grid.lambda(l);
      const double odd = k == nyq ? 0.0 : xi * xi * xi + xi * lam - b * xi;
      const double even = -delta * (xi * xi * xi * xi + lam * lam);
      table_[q * grid.ny + (l - 1)] = cplx(even, odd);
    }
  }
}

std::shared_ptr<const std::vector<cplx>> LinearSymbol::exponentials(double dt) const {
  std::lock_guard<std::mutex> lock(cache_->mu);
  if (cache_->values && cache_->dt == dt) return cache_->values;
  auto e = std::make_shared<std::vector<cplx>>(table_.size());
  for (std::size_t n = 0; n < table_.size(); ++n) (*e)[n] = std::exp(table_[n] * dt);
  cache_->values = e;
  cache_->dt = dt;
  return cache_->values;
}

LinearSymbol build_symbol(const StripGrid& grid, double b, double delta) {
  return LinearSymbol(grid, b, delta);
}

cplx phi1(cplx z) {
  if (std::abs(z) < 1e-4) {
    // Taylor to fifth order; the truncation error is below 1e-24.
    return 1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0 + z * z * z * z / 120.0 +
           z * z * z * z * z / 720.0;
  }
  // expm1 for complex argument: e^x cos y - 1 = expm1(x) cos y - 2 sin^2(y/2).
  const double x = z.real();
  const double y = z.imag();
  const double s = std::sin(0.5 * y);
  const cplx em1(std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y));
  return em1 / z;
}

SpectralField apply_propagator(const SpectralField& s, const LinearSymbol& sym, double dt) {
  if (!(dt >= 0.0)) throw ValidationError("dt must be non-negative");
  require_same_grid(s.grid, sym.grid(), "apply_propagator");
  const auto e = sym.exponentials(dt);
  SpectralField out(s.grid);
  for (std::size_t n = 0; n < s.coeffs.size(); ++n) out.coeffs[n] = s.coeffs[n] * (*e)[n];
  return out;
}

SpectralField duhamel_forced_step(const SpectralField& s, const LinearSymbol& sym,
                                  const SpectralField& f_hat, double dt) {
  SpectralField out = apply_propagator(s, sym, dt);
  require_same_grid(f_hat.grid, sym.grid(), "duhamel_forced_step");
  const auto& tab = sym.table();
  for (std::size_t n = 0; n < out.coeffs.size(); ++n)
    out.coeffs[n] += phi1(tab[n] * dt) * dt * f_hat.coeffs[n];
  return out;
}

}  // namespace zk
