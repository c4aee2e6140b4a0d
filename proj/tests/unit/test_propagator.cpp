#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "zkstrip/error.hpp"
#include "zkstrip/grid.hpp"
#include "zkstrip/propagator.hpp"
#include "zkstrip/spectral.hpp"

using namespace zk;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kPi = std::numbers::pi;

// Period 2 pi so that xi(k) = k.
StripGrid grid(std::size_t nx = 16, std::size_t ny = 6, double L = kPi) {
  StripGrid g;
  g.x_min = -kPi;
  g.x_max = kPi;
  g.nx = nx;
  g.width = L;
  g.ny = ny;
  return g;
}

SpectralField random_spectrum(const StripGrid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Field f(g);
  for (double& v : f.values) v = nd(rng);
  return forward_transform(f);
}

double max_diff(const SpectralField& a, const SpectralField& b) {
  double e = 0.0;
  for (std::size_t n = 0; n < a.coeffs.size(); ++n) e = std::max(e, std::abs(a.coeffs[n] - b.coeffs[n]));
  return e;
}

}  // namespace

TEST_CASE("symbol matches hand-computed values") {
  const StripGrid g = grid();
  REQUIRE_THAT(g.xi(1), WithinRel(1.0, 1e-14));

  const LinearSymbol dispersive(g, 0.0, 0.0);
  for (std::size_t l = 1; l <= g.ny; ++l) CHECK(dispersive(0, l) == cplx(0.0, 0.0));
  // xi = 1, lambda_1 = 1: 1 + 1.
  CHECK_THAT(dispersive(1, 1).imag(), WithinAbs(2.0, 1e-13));
  CHECK(dispersive(1, 1).real() == 0.0);

  const LinearSymbol damped(g, 0.0, 1.0);
  // xi = 0, lambda_1 = 1: -delta lambda^2.
  CHECK_THAT(damped(0, 1).real(), WithinAbs(-1.0, 1e-13));
  CHECK_THAT(damped(0, 2).real(), WithinAbs(-16.0, 1e-12));

  const LinearSymbol travel(g, 3.0, 0.0);
  // 1 + 1 - 3.
  CHECK_THAT(travel(1, 1).imag(), WithinAbs(-1.0, 1e-13));
}

TEST_CASE("symbol is dissipative and conjugate symmetric") {
  const StripGrid g = grid(32, 8, 1.3);
  for (double delta : {0.0, 0.01, 0.7}) {
    const LinearSymbol s(g, 0.4, delta);
    for (long k = -15; k <= 15; ++k)
      for (std::size_t l = 1; l <= g.ny; ++l) {
        CHECK(s(k, l).real() <= 0.0);
        CHECK(std::abs(s(-k, l) - std::conj(s(k, l))) < 1e-12 * (1.0 + std::abs(s(k, l))));
        if (delta == 0.0) CHECK(s(k, l).real() == 0.0);
      }
    // Nyquist column carries no dispersion.
    for (std::size_t l = 1; l <= g.ny; ++l) CHECK(s(-16, l).imag() == 0.0);
  }
  REQUIRE_THROWS_AS(LinearSymbol(g, 0.0, -1e-3), ValidationError);
  REQUIRE_THROWS_AS(LinearSymbol(g, std::nan(""), 0.0), ValidationError);
}

TEST_CASE("propagator applies exp(sigma dt)") {
  const StripGrid g = grid();
  const SpectralField u = random_spectrum(g, 3);

  const LinearSymbol s(g, 0.5, 0.1);
  CHECK(max_diff(apply_propagator(u, s, 0.0), u) == 0.0);
  REQUIRE_THROWS_AS(apply_propagator(u, s, -0.1), ValidationError);

  const LinearSymbol pure(g, 0.5, 0.0);
  const SpectralField v = apply_propagator(u, pure, 0.37);
  CHECK_THAT(v.energy(), WithinRel(u.energy(), 1e-13));

  // (k, l) = (0, 1) with delta = 1: sigma = -1.
  SpectralField one(g);
  one.at(0, 1) = 1.0;
  const LinearSymbol heat(g, 0.0, 1.0);
  CHECK_THAT(apply_propagator(one, heat, 1.0).at(0, 1).real(), WithinAbs(std::exp(-1.0), 1e-15));

  // (k, l) = (1, 1), delta = 0: phase 2 dt.
  SpectralField wave(g);
  wave.at(1, 1) = 1.0;
  wave.at(-1, 1) = 1.0;
  const cplx got = apply_propagator(wave, LinearSymbol(g, 0.0, 0.0), 0.25).at(1, 1);
  CHECK(std::abs(got - std::exp(cplx(0.0, 0.5))) < 1e-15);
}

TEST_CASE("semigroup property") {
  const StripGrid g = grid(24, 7, 2.1);
  const SpectralField u = random_spectrum(g, 11);
  const LinearSymbol s(g, 1.0, 0.05);
  const SpectralField a = apply_propagator(apply_propagator(u, s, 0.13), s, 0.29);
  const SpectralField b = apply_propagator(u, s, 0.42);
  CHECK(max_diff(a, b) < 1e-13 * u.max_abs());
}

TEST_CASE("exponential cache follows the requested dt") {
  const StripGrid g = grid();
  const LinearSymbol s(g, 0.0, 0.3);
  const auto e1 = s.exponentials(0.1);
  const auto e1b = s.exponentials(0.1);
  CHECK(e1.get() == e1b.get());
  const auto e2 = s.exponentials(0.2);
  CHECK(e2.get() != e1.get());
  for (std::size_t n = 0; n < e2->size(); ++n)
    CHECK(std::abs((*e2)[n] - (*e1)[n] * (*e1)[n]) < 1e-14);
  // The earlier table stays valid after the cache moves on.
  CHECK(std::abs((*e1)[0] - std::exp(s.table()[0] * 0.1)) < 1e-15);
}

TEST_CASE("concurrent propagation with alternating dt") {
  const StripGrid g = grid(32, 8);
  const SpectralField u = random_spectrum(g, 5);
  const LinearSymbol s(g, 0.2, 0.1);
  const SpectralField ref1 = apply_propagator(u, LinearSymbol(g, 0.2, 0.1), 0.1);
  const SpectralField ref2 = apply_propagator(u, LinearSymbol(g, 0.2, 0.1), 0.2);
  std::vector<std::thread> pool;
  std::vector<double> errs(8, 0.0);
  for (int t = 0; t < 8; ++t)
    pool.emplace_back([&, t] {
      for (int r = 0; r < 50; ++r) {
        const bool first = (t + r) % 2 == 0;
        const SpectralField v = apply_propagator(u, s, first ? 0.1 : 0.2);
        errs[t] = std::max(errs[t], max_diff(v, first ? ref1 : ref2));
      }
    });
  for (auto& th : pool) th.join();
  for (double e : errs) CHECK(e == 0.0);
}

TEST_CASE("phi1 is accurate across the switch to Taylor") {
  CHECK(phi1(cplx(0.0, 0.0)) == cplx(1.0, 0.0));
  for (double r : {1e-12, 1e-8, 5e-5, 9.9e-5, 1.01e-4, 1e-3, 0.1, 1.0, 10.0}) {
    for (double ang : {0.0, 0.7, 1.5707963, 3.0}) {
      const cplx z = std::polar(r, ang);
      // Long Taylor series as the reference for small |z|; closed form otherwise.
      cplx ref;
      if (r < 0.5) {
        ref = 0.0;
        cplx term = 1.0;
        for (int n = 1; n < 30; ++n) {
          ref += term;
          term *= z / static_cast<double>(n + 1);
        }
      } else {
        ref = (std::exp(z) - 1.0) / z;
      }
      INFO("z = " << z);
      CHECK(std::abs(phi1(z) - ref) < 1e-14 * std::abs(ref));
    }
  }
  // Strongly damped: phi1(-x) = (1 - e^-x)/x.
  CHECK_THAT(phi1(cplx(-50.0, 0.0)).real(), WithinRel((1.0 - std::exp(-50.0)) / 50.0, 1e-14));
}

TEST_CASE("forced step is the exact Duhamel solution for constant forcing") {
  const StripGrid g = grid();
  const SpectralField u = random_spectrum(g, 8);
  const LinearSymbol s(g, 0.3, 0.2);

  const SpectralField zero(g);
  CHECK(max_diff(duhamel_forced_step(u, s, zero, 0.3), apply_propagator(u, s, 0.3)) == 0.0);

  // sigma(0,1) = -delta = -1 with f_hat = 1 from rest: 1 - e^-1.
  const LinearSymbol heat(g, 0.0, 1.0);
  SpectralField f(g);
  f.at(0, 1) = 1.0;
  const SpectralField w = duhamel_forced_step(SpectralField(g), heat, f, 1.0);
  CHECK_THAT(w.at(0, 1).real(), WithinAbs(1.0 - std::exp(-1.0), 1e-15));

  // sigma = 0 reduces to u + dt f.
  const LinearSymbol flat(g, 0.0, 0.0);
  const SpectralField fr = random_spectrum(g, 9);
  const SpectralField y = duhamel_forced_step(SpectralField(g), flat, fr, 0.5);
  CHECK(std::abs(y.at(0, 1) - 0.5 * fr.at(0, 1)) < 1e-15);

  // Two half steps agree with one full step when the forcing is frozen.
  const SpectralField half = duhamel_forced_step(duhamel_forced_step(u, s, fr, 0.2), s, fr, 0.2);
  const SpectralField full = duhamel_forced_step(u, s, fr, 0.4);
  CHECK(max_diff(half, full) < 1e-12 * std::max(u.max_abs(), fr.max_abs()));
}

TEST_CASE("grid mismatch is rejected") {
  const LinearSymbol s(grid(16, 6), 0.0, 0.0);
  const SpectralField u(grid(16, 5));
  REQUIRE_THROWS_AS(apply_propagator(u, s, 0.1), ValidationError);
}
