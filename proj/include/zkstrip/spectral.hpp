#pragma once

#include <cstddef>
#include <vector>

#include "zkstrip/grid.hpp"

namespace zk {

/// c(k,l) = (1/nx) sum_i sum_j u_ij exp(-i xi_k (x_i - x_min)) psi_l(y_j) dy
/// with psi_l(y) = sqrt(2/L) sin(pi l y / L). The y basis is orthonormal on
/// the interior nodes, so quadrature of u^2 equals period * sum |c|^2.
SpectralField forward_transform(const Field& f);

/// Exact inverse of forward_transform. Throws ValidationError when the
/// coefficients are not conjugate symmetric in k (relative tolerance 1e-9).
Field inverse_transform(const SpectralField& s);

/// Multiplies by (i xi)^order_x and (-lambda_l)^(order_y/2). The Nyquist
/// column is zeroed for odd order_x. Odd order_y leaves the sine basis and
/// throws UnsupportedError; use evaluate_closed for those.
SpectralField derivative(const SpectralField& s, int order_x, int order_y);

/// True when (k, l) survives the 2/3 rule: 3|k| <= nx and 3l <= 2ny.
bool dealias_keeps(const StripGrid& g, long k, std::size_t l);
SpectralField dealias(const SpectralField& s);

/// Samples on the closed y grid y_j = j L/(ny+1), j = 0..ny+1 (walls included),
/// row-major with index i*(ny+2) + j. Holds odd y derivatives (cosine series).
struct ClosedField {
  StripGrid grid;
  std::vector<double> values;

  std::size_t ny_closed() const { return grid.ny + 2; }
  double operator()(std::size_t i, std::size_t j) const { return values[i * (grid.ny + 2) + j]; }
};

/// d^order_x/dx d^order_y/dy of the series, evaluated by direct summation of
/// the y basis on the closed grid. Any order_y >= 0 is allowed.
ClosedField evaluate_closed(const SpectralField& s, int order_x, int order_y);

/// Restriction of a closed-grid sample to interior nodes.
Field interior(const ClosedField& c);

/// Rectangle rule in x, interior nodes in y (zero wall values).
double integrate(const Field& f);
/// Rectangle rule in x, trapezoid in y with half-weight walls.
double integrate(const ClosedField& f);

double integrate_product(const Field& a, const Field& b);

/// Quadratures with an x-only weight psi(x_i).
double integrate_weighted(const Field& f, const std::vector<double>& psi);
double integrate_weighted(const ClosedField& f, const std::vector<double>& psi);

/// |D^order u|^2 = sum over k1 + k2 = order of (d_x^k1 d_y^k2 u)^2, closed grid.
ClosedField derivative_density(const SpectralField& s, int order);

}  // namespace zk
