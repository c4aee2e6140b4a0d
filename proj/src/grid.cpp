#include "zkstrip/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "zkstrip/error.hpp"

namespace zk {

void StripGrid::validate() const {
  if (nx < 4) throw ValidationError("grid.nx must be at least 4");
  if (nx % 2 != 0) throw ValidationError("grid.nx must be even");
  if (ny < 1) throw ValidationError("grid.ny must be at least 1");
  if (!(width > 0.0) || !std::isfinite(width)) throw ValidationError("grid.width must be positive");
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min))
    throw ValidationError("grid.x_max must exceed grid.x_min");
}

double StripGrid::xi(long k) const {
  return 2.0 * std::numbers::pi * static_cast<double>(k) / period();
}

double StripGrid::lambda(std::size_t l) const {
  const double w = std::numbers::pi * static_cast<double>(l) / width;
  return w * w;
}

bool Field::all_finite() const {
  for (double v : values)
    if (!std::isfinite(v)) return false;
  return true;
}

double Field::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double SpectralField::max_abs() const {
  double m = 0.0;
  for (const cplx& c : coeffs) m = std::max(m, std::abs(c));
  return m;
}

double SpectralField::energy() const {
  double acc = 0.0;
  for (const cplx& c : coeffs) acc += std::norm(c);
  return acc * grid.period();
}

void require_same_grid(const StripGrid& a, const StripGrid& b, const char* what) {
  if (a != b) throw ValidationError(std::string(what) + ": grids differ");
}

}  // namespace zk
