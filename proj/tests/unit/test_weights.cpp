#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "zkstrip/error.hpp"
#include "zkstrip/smoothstep.hpp"
#include "zkstrip/spectral.hpp"
#include "zkstrip/weights.hpp"

using namespace zk;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<WeightSpec> all_weights() {
  return {
      {WeightKind::constant_one, 0.0, 1.0}, {WeightKind::rho_alpha, 0.0, 1.0},
      {WeightKind::rho_alpha, 0.5, 1.0},    {WeightKind::rho_alpha, 1.0, 1.0},
      {WeightKind::kappa_alpha, 0.0, 1.0},  {WeightKind::kappa_alpha, 0.3, 1.0},
      {WeightKind::kappa_alpha, 1.0, 1.0},  {WeightKind::kappa_alpha, 0.0, 0.2},
      {WeightKind::exp_plus, 0.1, 1.0},     {WeightKind::exp_pure, 0.25, 1.0},
  };
}

StripGrid grid(double x_min, double x_max, std::size_t nx, double L, std::size_t ny) {
  StripGrid g;
  g.x_min = x_min;
  g.x_max = x_max;
  g.nx = nx;
  g.width = L;
  g.ny = ny;
  return g;
}

// Composite Simpson's rule, independent of the library's Gauss rule.
double simpson(auto&& f, double a, double b, int n = 2000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("cut-off eta") {
  CHECK(smoothstep(-0.5) == 0.0);
  CHECK(smoothstep(0.0) == 0.0);
  CHECK(smoothstep(1.0) == 1.0);
  CHECK(smoothstep(2.0) == 1.0);
  for (double t = 0.0; t <= 1.0; t += 1.0 / 64) {
    CHECK_THAT(smoothstep(t) + smoothstep(1.0 - t), WithinAbs(1.0, 1e-13));
    CHECK(smoothstep_deriv(t, 1) >= 0.0);
  }
  for (int n = 1; n <= 4; ++n) {
    CHECK_THAT(smoothstep_deriv(0.0, n), WithinAbs(0.0, 1e-12));
    CHECK_THAT(smoothstep_deriv(1.0, n), WithinAbs(0.0, 1e-9));
  }
  for (int m = 0; m <= 3; ++m)
    for (double t : {0.25, 0.6, 1.0})
      CHECK_THAT(smoothstep_moment(t, m),
                 WithinRel(simpson([&](double s) { return std::pow(s, m) * smoothstep(s); }, 0.0, t), 1e-10));
}

TEST_CASE("documented weight values") {
  CHECK_THAT(eval_weight({WeightKind::rho_alpha, 1.0, 1.0}, 3.0, 0), WithinRel(16.0, 1e-14));
  CHECK_THAT(eval_weight({WeightKind::exp_plus, 0.5, 1.0}, 0.0, 0), WithinRel(2.0, 1e-15));
  CHECK_THAT(eval_weight({WeightKind::kappa_alpha, 0.0, 1.0}, 0.0, 0), WithinRel(1.0, 1e-15));
  CHECK(eval_weight({}, 17.0, 0) == 1.0);
  CHECK(eval_weight({}, 17.0, 2) == 0.0);
}

TEST_CASE("weight tails follow the closed forms") {
  for (double a : {0.2, 0.7}) {
    const WeightSpec rho{WeightKind::rho_alpha, a, 1.0};
    const WeightSpec kap{WeightKind::kappa_alpha, a, 1.0};
    for (double x : {1.0, 1.5, 4.0, 30.0}) CHECK_THAT(eval_weight(rho, x, 0), WithinRel(std::pow(1.0 + x, 2 * a), 1e-13));
    for (double x : {0.0, 0.5, 9.0}) CHECK_THAT(eval_weight(kap, x, 0), WithinRel(std::pow(1.0 + x, 2 * a), 1e-13));
    for (double x : {-1.0, -3.0, -20.0}) CHECK_THAT(eval_weight(kap, x, 0), WithinRel(std::exp(2 * a * x), 1e-13));
  }
  const WeightSpec k0{WeightKind::kappa_alpha, 0.0, 1.0};
  for (double x : {0.0, 0.3, 10.0}) CHECK_THAT(eval_weight(k0, x, 0), WithinRel(2.0 - 1.0 / std::sqrt(1.0 + x), 1e-13));
  const WeightSpec r0{WeightKind::rho_alpha, 0.0, 1.0};
  for (double x : {1.0, 2.0, 100.0}) CHECK_THAT(eval_weight(r0, x, 0), WithinRel(2.0 - 1.0 / std::sqrt(1.0 + x), 1e-13));
}

TEST_CASE("kappa_0 plateau is the value reached by integrating its slope") {
  // kappa_0(-1) = kappa_0(0) - int_{-1}^0 S(1+z) (1/2)(1+z)^(-3/2) dz.
  const double slope = simpson([](double t) { return t <= 0.0 ? 0.0 : smoothstep(t) * 0.5 * std::pow(t, -1.5); }, 0.0, 1.0, 20000);
  CHECK_THAT(kappa0_plateau(), WithinRel(1.0 - slope, 1e-9));
  CHECK_THAT(eval_weight({WeightKind::kappa_alpha, 0.0, 1.0}, -5.0, 0), WithinRel(kappa0_plateau(), 1e-15));
}

TEST_CASE("rho_alpha transition integrates its slope") {
  for (double a : {0.0, 0.5}) {
    const WeightSpec w{WeightKind::rho_alpha, a, 1.0};
    const double r0 = eval_weight(w, 0.0, 0);
    for (double z : {0.25, 0.5, 0.9}) {
      const double integral = simpson([&](double s) { return eval_weight(w, s, 1); }, 0.0, z);
      CHECK_THAT(eval_weight(w, z, 0), WithinRel(r0 + integral, 1e-11));
    }
  }
}

TEST_CASE("derivatives agree with finite differences of the lower order") {
  const double h = 1e-5;
  for (const WeightSpec& w : all_weights())
    for (int n = 1; n <= 4; ++n)
      for (double x : {-3.0, -1.5, -0.8, -0.5, -0.1, 0.2, 0.5, 0.8, 1.3, 3.0}) {
        const double fd = (eval_weight(w, x + h, n - 1) - eval_weight(w, x - h, n - 1)) / (2 * h);
        const double ex = eval_weight(w, x, n);
        INFO(w.name() << " order " << n << " at " << x);
        CHECK_THAT(ex, WithinAbs(fd, 1e-5 * std::max(1.0, std::abs(ex))));
      }
}

TEST_CASE("joints are C4") {
  for (const WeightSpec& w : all_weights())
    for (double joint : {-1.0, 0.0, 1.0}) {
      for (int n = 0; n <= 3; ++n) {
        const double l = eval_weight(w, joint - 1e-9, n);
        const double r = eval_weight(w, joint + 1e-9, n);
        INFO(w.name() << " order " << n << " at " << joint);
        CHECK_THAT(l, WithinAbs(r, 1e-6 * std::max(1.0, std::abs(l))));
      }
      // kappa's fourth derivative meets its left value like sqrt(1+z) at z = -1.
      const double l4 = eval_weight(w, joint - 1e-12, 4);
      for (double eps : {1e-4, 1e-6, 1e-8, 1e-10, 1e-12}) {
        const double d = std::abs(eval_weight(w, joint + eps, 4) - l4);
        INFO(w.name() << " order 4 at " << joint << " eps " << eps);
        CHECK(d <= 1e3 * std::sqrt(eps) * std::max(1.0, std::abs(l4)));
      }
    }
}

TEST_CASE("weights are positive and non-decreasing") {
  for (const WeightSpec& w : all_weights())
    for (double x = -12.0; x <= 12.0; x += 0.01) {
      CHECK(eval_weight(w, x, 0) > 0.0);
      CHECK(eval_weight(w, x, 1) >= -1e-15);
    }
  const WeightSpec r0{WeightKind::rho_alpha, 0.0, 1.0};
  for (const WeightSpec& w : {r0, WeightSpec{WeightKind::rho_alpha, 0.6, 1.0}})
    for (double x = -12.0; x <= 12.0; x += 0.01) CHECK(eval_weight(w, x, 0) > 1.0);
  for (double x = -12.0; x <= 200.0; x += 0.05) CHECK(eval_weight(r0, x, 0) < 2.0);
  for (double a : {0.0, 0.4})
    for (double x = -0.99; x < 0.0; x += 0.01) CHECK(eval_weight({WeightKind::kappa_alpha, a, 1.0}, x, 1) > 0.0);
  for (double a : {0.0, 0.5})
    for (double x = -12.0; x <= -1.0; x += 0.05) CHECK(eval_weight({WeightKind::rho_alpha, a, 1.0}, x, 2) > 0.0);
}

TEST_CASE("admissibility constant matches dense sampling") {
  for (const WeightSpec& w : all_weights()) {
    double sampled = 0.0;
    for (double x = -40.0; x <= 40.0; x += 1e-3)
      sampled = std::max(sampled, std::abs(eval_weight(w, x, 1)) / eval_weight(w, x, 0));
    const double c = admissibility_constant(w);
    INFO(w.name());
    CHECK(std::isfinite(c));
    if (sampled == 0.0) CHECK(c == 0.0);
    else CHECK_THAT(c, WithinRel(sampled, 0.05));
  }
}

TEST_CASE("order above 4 is unsupported and specs validate") {
  REQUIRE_THROWS_AS(eval_weight({WeightKind::rho_alpha, 0.5, 1.0}, 0.0, 5), UnsupportedError);
  REQUIRE_THROWS_AS(WeightSpec({WeightKind::exp_plus, 0.0, 1.0}).validate(), ValidationError);
  REQUIRE_THROWS_AS(WeightSpec({WeightKind::rho_alpha, -0.1, 1.0}).validate(), ValidationError);
  CHECK(parse_weight("exp_plus:0.1").kind == WeightKind::exp_plus);
  CHECK(parse_weight("kappa:0:0.2").scale == 0.2);
  REQUIRE_THROWS_AS(parse_weight("nope"), ValidationError);
}

TEST_CASE("weighted L2 norm") {
  const StripGrid g = grid(-2.0, 2.0, 64, 1.7, 15);
  CHECK(weighted_l2_norm(Field(g), {WeightKind::exp_plus, 0.3, 1.0}) == 0.0);

  // sin(pi y/L) on x in [0, 1): 16 cells of width 1/16, trapezoid exact for sin^2.
  Field f(g);
  for (std::size_t i = 0; i < g.nx; ++i)
    if (g.x(i) >= 0.0 && g.x(i) < 1.0)
      for (std::size_t j = 0; j < g.ny; ++j) f(i, j) = std::sin(kPi * g.y(j) / g.width);
  CHECK_THAT(weighted_l2_norm(f, {}), WithinRel(std::sqrt(g.width / 2.0), 1e-13));

  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  for (double& v : f.values) v = nd(rng);
  double sum = 0.0;
  for (double v : f.values) sum += v * v;
  CHECK_THAT(weighted_l2_norm(f, {}), WithinRel(std::sqrt(sum * g.dx() * g.dy()), 1e-12));
}

TEST_CASE("weighted L2 norm converges on a smooth weighted integrand") {
  // int exp(-x^2) (1 + e^{x/2}) dx over R = sqrt(pi) (1 + e^{1/16}), times L/2 in y.
  const WeightSpec w{WeightKind::exp_plus, 0.25, 1.0};
  const double L = 1.0;
  const double exact = std::sqrt(std::sqrt(kPi) * (1.0 + std::exp(1.0 / 16.0)) * L / 2.0);
  double prev = 1.0;
  for (std::size_t nx : {16, 32, 64}) {
    const StripGrid g = grid(-12.0, 12.0, nx, L, 7);
    Field f(g);
    for (std::size_t i = 0; i < g.nx; ++i)
      for (std::size_t j = 0; j < g.ny; ++j)
        f(i, j) = std::exp(-g.x(i) * g.x(i) / 2.0) * std::sin(kPi * g.y(j) / L);
    const double err = std::abs(weighted_l2_norm(f, w) - exact);
    CHECK(err <= prev);
    prev = err;
  }
  CHECK(prev < 1e-12);
}

TEST_CASE("weighted H^k norms") {
  const double L = 2.0;
  const StripGrid g = grid(-10.0, 10.0, 128, L, 31);
  Field f(g);
  for (std::size_t i = 0; i < g.nx; ++i)
    for (std::size_t j = 0; j < g.ny; ++j) f(i, j) = std::exp(-g.x(i) * g.x(i)) * std::sin(kPi * g.y(j) / L);
  CHECK(weighted_hk_norm(Field(g), 1, {}) == 0.0);
  CHECK_THAT(weighted_hk_norm(f, 0, {WeightKind::exp_plus, 0.1, 1.0}),
             WithinRel(weighted_l2_norm(f, {WeightKind::exp_plus, 0.1, 1.0}), 1e-14));
  // (L/2) sqrt(pi/2) (1 + 1 + pi^2/L^2) from int e^{-2x^2} and int 4x^2 e^{-2x^2}.
  const double h1sq = L / 2.0 * std::sqrt(kPi / 2.0) * (2.0 + kPi * kPi / (L * L));
  CHECK_THAT(weighted_hk_norm(f, 1, {}), WithinRel(std::sqrt(h1sq), 1e-10));
  REQUIRE_THROWS_AS(weighted_hk_norm(f, 3, {}), UnsupportedError);
}

TEST_CASE("lambda functional") {
  const double L = 1.5;
  const StripGrid g = grid(-4.0, 4.0, 32, L, 15);
  const std::vector<double> times{0.0, 0.5, 1.0};
  CHECK(lambda_functional(std::vector<Field>(3, Field(g)), times, 1).value == 0.0);

  Field u(g);
  for (std::size_t i = 0; i < g.nx; ++i)
    for (std::size_t j = 0; j < g.ny; ++j) u(i, j) = std::sin(kPi * g.y(j) / L);
  const LambdaResult r = lambda_functional(std::vector<Field>(3, u), times, 1);
  CHECK_THAT(r.value, WithinRel(std::pow(kPi / L, 2) * L / 2.0, 1e-12));

  // Translation by whole cells moves the maximising window, not the value.
  Field bump(g), shifted(g);
  for (std::size_t i = 0; i < g.nx; ++i)
    for (std::size_t j = 0; j < g.ny; ++j) {
      bump(i, j) = std::exp(-std::pow(g.x(i) + 1.0, 2) * 2.0) * std::sin(kPi * g.y(j) / L);
      shifted((i + 8) % g.nx, j) = bump(i, j);
    }
  const LambdaResult a = lambda_functional({bump, bump}, {0.0, 1.0}, 1);
  const LambdaResult b = lambda_functional({shifted, shifted}, {0.0, 1.0}, 1);
  CHECK_THAT(b.value, WithinRel(a.value, 1e-12));
  CHECK_THAT(b.x0 - a.x0, WithinAbs(8 * g.dx(), 1e-12));

  const StripGrid narrow = grid(0.0, 1.0, 8, L, 3);
  REQUIRE_THROWS(lambda_functional({Field(narrow), Field(narrow)}, {0.0, 1.0}, 1));
  REQUIRE_THROWS(lambda_functional({u, u, u}, {0.0, 0.2, 1.0}, 1));
}

TEST_CASE("Steklov ratio") {
  const double L = 2.5;
  const std::size_t n = 40;
  auto profile = [&](auto&& f) {
    std::vector<double> p(n);
    for (std::size_t j = 0; j < n; ++j) p[j] = f(L * (j + 1.0) / (n + 1.0));
    return p;
  };
  CHECK_THAT(steklov_ratio(profile([&](double y) { return std::sin(kPi * y / L); }), L), WithinRel(L * L / (kPi * kPi), 1e-12));
  CHECK_THAT(steklov_ratio(profile([&](double y) { return std::sin(2 * kPi * y / L); }), L), WithinRel(L * L / (4 * kPi * kPi), 1e-12));
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 200; ++trial) {
    double c[4];
    for (double& v : c) v = nd(rng);
    const auto p = profile([&](double y) {
      double s = 0.0;
      for (int l = 0; l < 4; ++l) s += c[l] * std::sin((l + 1) * kPi * y / L);
      return s;
    });
    CHECK(steklov_ratio(p, L) <= L * L / (kPi * kPi) * (1.0 + 1e-12));
  }
  REQUIRE_THROWS_AS(steklov_ratio(std::vector<double>(n, 0.0), L), ValidationError);
}

TEST_CASE("interpolation sides") {
  const StripGrid g = grid(-8.0, 8.0, 64, kPi, 15);
  const WeightSpec one{};
  const InterpolationSides z = interpolation_check(Field(g), InterpolationCase::k1m0q, one, one, 4.0);
  CHECK(z.lhs == 0.0);
  CHECK(z.rhs == 0.0);
  CHECK(z.s == 0.25);

  Field f(g);
  for (std::size_t i = 0; i < g.nx; ++i)
    for (std::size_t j = 0; j < g.ny; ++j) f(i, j) = std::exp(-g.x(i) * g.x(i)) * std::sin(g.y(j));
  const InterpolationSides q2 = interpolation_check(f, InterpolationCase::k1m0q, one, one, 2.0);
  CHECK(q2.s == 0.0);
  CHECK_THAT(q2.lhs, WithinRel(weighted_l2_norm(f, one), 1e-12));
  CHECK_THAT(q2.rhs, WithinRel(2.0 * weighted_l2_norm(f, one), 1e-12));

  double worst = 0.0;
  for (double width : {0.3, 0.7, 1.5, 3.0}) {
    for (std::size_t i = 0; i < g.nx; ++i)
      for (std::size_t j = 0; j < g.ny; ++j) f(i, j) = std::exp(-std::pow(g.x(i) / width, 2)) * std::sin(g.y(j));
    const InterpolationSides s = interpolation_check(f, InterpolationCase::k1m0q, one, one, 4.0);
    worst = std::max(worst, s.lhs / s.rhs);
  }
  CHECK(worst < 1.0);
  REQUIRE_THROWS_AS(interpolation_check(f, InterpolationCase::k2m1q2, one, one, 4.0), UnsupportedError);
  CHECK(interpolation_check(f, InterpolationCase::k2m1q2, one, one, 2.0).s == 0.25);
}
