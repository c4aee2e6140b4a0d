#pragma once

#include <string>
#include <vector>

#include "zkstrip/grid.hpp"

namespace zk {

enum class WeightKind { constant_one, rho_alpha, kappa_alpha, exp_plus, exp_pure };

/// psi(x) = base(scale * x) for one of the weight families. scale = alpha with
/// kind kappa_alpha and alpha = 0 gives the rescaled kappa_0(alpha x).
struct WeightSpec {
  WeightKind kind = WeightKind::constant_one;
  double alpha = 0.0;
  double scale = 1.0;

  void validate() const;
  std::string name() const;
};

WeightSpec parse_weight(const std::string& text);

/// psi^(order)(x) for order 0..4; higher orders throw UnsupportedError.
/// Transition joints are C4.
double eval_weight(const WeightSpec& w, double x, int order);

/// psi^(order) at every x node of the grid.
std::vector<double> weight_on_grid(const WeightSpec& w, const StripGrid& g, int order);

/// sup_x |psi'(x)| / psi(x): closed form on the analytic tails, fine scan on
/// the transition interval.
double admissibility_constant(const WeightSpec& w);

/// Left plateau value of kappa_0 (x <= -1).
double kappa0_plateau();

double weighted_l2_norm(const Field& f, const WeightSpec& w);

/// sqrt(sum_{j<=k} || |D^j f| psi^(1/2) ||^2) with |D^j f|^2 the sum of
/// squared mixed partials of total order j. k in 0..2.
double weighted_hk_norm(const Field& f, int k, const WeightSpec& w);

struct LambdaResult {
  double value = 0.0;
  double x0 = 0.0;  // start of the maximising window
};

/// sup over unit x-windows starting at x nodes of int_0^T int_window int_0^L
/// |D^(k+1) u|^2. Snapshots must be uniformly spaced in time; the window may
/// end inside a cell (fractional weight on the last cell).
LambdaResult lambda_functional(const std::vector<Field>& series, const std::vector<double>& times,
                               int k_plus_1);

/// int psi^2 / int (psi')^2 of the sine interpolant through interior samples
/// on y_j = j L/(n+1). Bounded by L^2/pi^2.
double steklov_ratio(const std::vector<double>& profile, double width);

enum class InterpolationCase { k1m0q, k2m1q2, k2m0q };

struct InterpolationSides {
  double lhs = 0.0;
  double rhs = 0.0;  // constant omitted
  double s = 0.0;
};

/// Both sides of the weighted interpolation inequality
/// || |D^m f| psi1^s psi2^(1/2-s) ||_q  vs
/// || |D^k f| psi1^(1/2) ||^(2s) || f psi2^(1/2) ||^(1-2s) + || f psi2^(1/2) ||.
InterpolationSides interpolation_check(const Field& f, InterpolationCase c, const WeightSpec& w1,
                                       const WeightSpec& w2, double q);

}  // namespace zk
