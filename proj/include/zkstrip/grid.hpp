#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace zk {

using cplx = std::complex<double>;

/// Periodic x-box [x_min, x_max) times the strip (0, L) resolved by ny sine
/// modes. Interior y nodes sit at y_j = j L / (ny + 1), j = 1..ny.
struct StripGrid {
  double x_min = -1.0;
  double x_max = 1.0;
  std::size_t nx = 4;
  double width = 1.0;
  std::size_t ny = 1;

  /// Throws ValidationError naming the first violated invariant.
  void validate() const;

  double period() const { return x_max - x_min; }
  double dx() const { return period() / static_cast<double>(nx); }
  double dy() const { return width / static_cast<double>(ny + 1); }
  double x(std::size_t i) const { return x_min + static_cast<double>(i) * dx(); }
  /// Interior node j in 0..ny-1 (y index j+1 of the closed grid).
  double y(std::size_t j) const { return static_cast<double>(j + 1) * dy(); }
  std::size_t size() const { return nx * ny; }

  /// Signed wavenumber index for FFT-ordered slot q: 0..nx/2-1, -nx/2..-1.
  long k_of(std::size_t q) const {
    const long n = static_cast<long>(nx);
    const long s = static_cast<long>(q);
    return s < n / 2 ? s : s - n;
  }
  std::size_t slot_of(long k) const {
    const long n = static_cast<long>(nx);
    return static_cast<std::size_t>(k >= 0 ? k : k + n);
  }
  double xi(long k) const;
  /// lambda_l = (pi l / L)^2 for mode l in 1..ny.
  double lambda(std::size_t l) const;

  bool operator==(const StripGrid& o) const {
    return x_min == o.x_min && x_max == o.x_max && nx == o.nx && width == o.width && ny == o.ny;
  }
  bool operator!=(const StripGrid& o) const { return !(*this == o); }
};

/// Samples u(x_i, y_j) on interior nodes, row-major with index i*ny + j.
/// Wall values are zero by construction and never stored.
struct Field {
  StripGrid grid;
  std::vector<double> values;

  Field() = default;
  explicit Field(const StripGrid& g) : grid(g), values(g.size(), 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return values[i * grid.ny + j]; }
  double operator()(std::size_t i, std::size_t j) const { return values[i * grid.ny + j]; }
  bool all_finite() const;
  double max_abs() const;
};

/// Fourier(x) x sine(y) coefficients. Slot (q, l-1) with q in FFT order,
/// index q*ny + (l-1). The x phase is measured from x_min.
struct SpectralField {
  StripGrid grid;
  std::vector<cplx> coeffs;

  SpectralField() = default;
  explicit SpectralField(const StripGrid& g) : grid(g), coeffs(g.size(), cplx(0.0, 0.0)) {}

  cplx& at(long k, std::size_t l) { return coeffs[grid.slot_of(k) * grid.ny + (l - 1)]; }
  cplx at(long k, std::size_t l) const { return coeffs[grid.slot_of(k) * grid.ny + (l - 1)]; }
  double max_abs() const;
  /// Sum of |c|^2 times the period: equals the quadrature of u^2 (Parseval).
  double energy() const;
};

void require_same_grid(const StripGrid& a, const StripGrid& b, const char* what);

}  // namespace zk
