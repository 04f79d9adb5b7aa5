#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "superint/systems.hpp"

using namespace superint;
using Catch::Approx;

TEST_CASE("potential: special values") {
  // V(0) = w^2 k^2 b / 9
  CHECK(potential_1d(0.0, 2.0, {1, 1.5, 1}) == Approx(4.0 * 1.5 / 9.0));
  // b = 0, eps = 1, x > 0: harmonic w^2 k^2 x^2 / 2
  const AxisParams flat{1, 0.0, 1};
  for (double x : {0.2, 0.9, 1.7})
    CHECK(potential_1d(x, 2.0, flat) == Approx(2.0 * x * x));
  // omega=3, k=1, b=3, eps=1 at x=1
  CHECK(potential_1d(1.0, 3.0, {1, 3.0, 1}) == Approx(9.5));
}

TEST_CASE("potential: k enters only through omega*k") {
  const AxisParams ax{3, 2.0, -1};
  for (double x : {-1.7, -0.4, 0.0, 0.6, 1.9}) {
    CHECK(potential_1d(x, 2.0, ax) ==
          Approx(potential_1d(x, 6.0, {1, 2.0, -1})).epsilon(1e-15));
  }
}

TEST_CASE("potential: parity exchanges the epsilon branches") {
  Sampler sampler(5);
  for (int i = 0; i < 40; ++i) {
    const double x = sampler.uniform(-2.0, 2.0);
    CHECK(potential_1d(x, 1.7, {2, 0.8, 1}) ==
          Approx(potential_1d(-x, 1.7, {2, 0.8, -1})).epsilon(1e-14));
  }
}

TEST_CASE("potential: continuity near x = 0 when b = 0") {
  const AxisParams flat{1, 0.0, 1};
  const double left = potential_1d(-1e-9, 1.0, flat);
  const double right = potential_1d(1e-9, 1.0, flat);
  CHECK(std::abs(left - right) < 1e-15);
}

TEST_CASE("axis Hamiltonians: separability by construction") {
  const SystemSpec spec{3.0, {AxisParams{1, 3.0, 1}, AxisParams{3, 5.0, 1}}};
  const auto H = hamiltonian(spec);
  const auto H1 = axis_hamiltonian(spec, 0);
  const auto H2 = axis_hamiltonian(spec, 1);
  Sampler sampler(17);
  for (int i = 0; i < 20; ++i) {
    const auto pt = sampler.phase_point(2);
    const Complex sum = evaluate(H1, pt) + evaluate(H2, pt);
    CHECK(std::abs(evaluate(H, pt) - sum) <=
          1e-13 * (1.0 + std::abs(sum)));
  }
  // Fig.1 parameters at (x=(1,1), p=(1,-3)): H = 5 + V1(1) + V2(1)
  const PhasePoint pt({1.0, 1.0}, {1.0, -3.0});
  const double v1 = potential_1d(1.0, 3.0, spec.axes[0]);
  const double v2 = potential_1d(1.0, 3.0, spec.axes[1]);
  CHECK(v1 == Approx(9.5));
  CHECK(evaluate(H, pt).real() == Approx(0.5 * (1.0 + 9.0) + v1 + v2));
}

TEST_CASE("harmonic limit of the b = 0 axis") {
  const SystemSpec spec{1.0, {AxisParams{1, 0.0, 1}}};
  const auto H = hamiltonian(spec);
  // x > 0 branch at (x=1, p=0): w^2/2
  CHECK(evaluate(H, PhasePoint({1.0}, {0.0})).real() == Approx(0.5));
}

TEST_CASE("quartic constraint: the double-root potential is a root") {
  for (auto [w, b] : {std::pair{1.0, 0.5}, {2.0, 1.0}, {3.0, 3.0}}) {
    for (int eps : {1, -1}) {
      double worst = 0.0;
      for (int i = 0; i <= 100; ++i) {
        const double x = -2.0 + 4.0 * i / 100.0;
        const double v = potential_1d(x, w, {1, b, eps});
        worst = std::max(worst, quartic_residual_scaled(x, v, w, b));
      }
      CAPTURE(w, b, eps);
      CHECK(worst <= 1e-9);
    }
  }
}

TEST_CASE("quartic constraint: special point and perturbed value") {
  const double w = 2.0, b = 1.0;
  const double v0 = w * w * b / 9.0;
  CHECK(quartic_residual_scaled(0.0, v0, w, b) <= 1e-12);
  const double v = potential_1d(1.0, w, {1, b, 1});
  CHECK(std::abs(quartic_residual(1.0, v + 1.0, w, b)) > 1e-3);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(validate(AxisParams{0, 1.0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(validate(AxisParams{1, -0.5, 1}), std::invalid_argument);
  CHECK_THROWS_AS(validate(AxisParams{1, 1.0, 2}), std::invalid_argument);
  CHECK_THROWS_AS(validate(SystemSpec{0.0, {AxisParams{}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(validate(SystemSpec{1.0, {}}), std::invalid_argument);
  CHECK_THROWS_AS(quartic_residual(0.0, 1.0, 1.0, -1.0),
                  std::invalid_argument);
}
