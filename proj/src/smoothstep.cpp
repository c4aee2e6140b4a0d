#include "zkstrip/smoothstep.hpp"

#include <array>
#include <stdexcept>

namespace zk {

namespace {

constexpr const auto& kCoef = kSmoothstepCoef;
constexpr int kFirstPower = kSmoothstepFirstPower;

double falling(int p, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= static_cast<double>(p - i);
  return r;
}

double ipow(double t, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= t;
  return r;
}

}  // namespace

double smoothstep(double t) { return smoothstep_deriv(t, 0); }

double smoothstep_deriv(double t, int n) {
  if (n < 0 || n > 9) throw std::out_of_range("smoothstep derivative order");
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return n == 0 ? 1.0 : 0.0;
  double acc = 0.0;
  for (std::size_t c = 0; c < kCoef.size(); ++c) {
    const int p = kFirstPower + static_cast<int>(c);
    if (n > p) continue;
    acc += kCoef[c] * falling(p, n) * ipow(t, p - n);
  }
  return acc;
}

double smoothstep_moment(double t, int m) {
  if (m < 0 || m > 3) throw std::out_of_range("smoothstep moment order");
  if (t <= 0.0) return 0.0;
  const double tt = t > 1.0 ? 1.0 : t;
  double acc = 0.0;
  for (std::size_t c = 0; c < kCoef.size(); ++c) {
    const int p = kFirstPower + static_cast<int>(c) + m + 1;
    acc += kCoef[c] * ipow(tt, p) / static_cast<double>(p);
  }
  if (t > 1.0) acc += (ipow(t, m + 1) - 1.0) / static_cast<double>(m + 1);
  return acc;
}

}  // namespace zk
