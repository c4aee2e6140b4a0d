#pragma once

#include <array>

namespace zk {

/// Coefficients of t^5..t^9 in the smoothstep polynomial.
inline constexpr std::array<double, 5> kSmoothstepCoef{126.0, -420.0, 540.0, -315.0, 70.0};
inline constexpr int kSmoothstepFirstPower = 5;

/// Cut-off eta: 0 for t <= 0, 1 for t >= 1, eta(t) + eta(1 - t) = 1 and
/// non-decreasing. Realised as the C4 nonic smoothstep
/// 126t^5 - 420t^6 + 540t^7 - 315t^8 + 70t^9.
double smoothstep(double t);

/// n-th derivative of smoothstep, n in 0..9.
double smoothstep_deriv(double t, int n);

/// Moment integral of the cut-off over [0, t] for t in [0, 1]:
/// M_m(t) = int_0^t tau^m eta(tau) dtau, m in 0..3.
double smoothstep_moment(double t, int m);

}  // namespace zk
