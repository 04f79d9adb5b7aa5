#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "superint/integrals.hpp"

using namespace superint;
using Catch::Approx;

namespace {

const SystemSpec kFig1{3.0, {AxisParams{1, 3.0, 1}, AxisParams{3, 5.0, 1}}};
const SystemSpec kFig3{3.0,
                       {AxisParams{7, 3.0, 1}, AxisParams{11, 5.0, 1},
                        AxisParams{4, 7.0, 1}}};

IntegralSet fig1_integrals() {
  const auto L1 =
      deformed_ladder(3.0, kFig1.axes[0], CoefficientSource::Fitted, 0, 2);
  const auto L2 =
      deformed_ladder(3.0, kFig1.axes[1], CoefficientSource::Fitted, 1, 2);
  return build_integrals(kFig1, L1, L2);
}

}  // namespace

TEST_CASE("commensurability condition") {
  const double w = 3.0;
  CHECK(commensurate(3, 1, w, 3.0 * w));
  CHECK(commensurate(1, 1, w, w));
  CHECK_FALSE(commensurate(1, 1, w, 2.0 * w));
  CHECK_THROWS_AS(commensurate(0, 1, w, w), std::invalid_argument);
}

TEST_CASE("minimal exponents from gcd") {
  CHECK(minimal_exponents(1, 3) == std::pair{3, 1});
  CHECK(minimal_exponents(3, 4) == std::pair{4, 3});
  CHECK(minimal_exponents(2, 2) == std::pair{1, 1});
  CHECK(minimal_exponents(6, 4) == std::pair{2, 3});
}

TEST_CASE("2-dof integrals Poisson-commute with H") {
  const auto s = fig1_integrals();
  REQUIRE(s.m == std::array<int, 2>{3, 1});
  const auto H = hamiltonian(kFig1);
  Sampler sampler(101);
  const auto pts = sampler.phase_points(100, 2);
  double worst_i1 = 0, worst_i2 = 0, worst_k = 0;
  for (const auto& pt : pts) {
    worst_i1 = std::max(worst_i1,
                        std::abs(poisson_bracket(H, s.I1, pt)) /
                            (1.0 + std::abs(evaluate(s.I1, pt))));
    worst_i2 = std::max(worst_i2,
                        std::abs(poisson_bracket(H, s.I2, pt)) /
                            (1.0 + std::abs(evaluate(s.I2, pt))));
    worst_k = std::max(worst_k,
                       std::abs(poisson_bracket(H, s.K, pt)) /
                           (1.0 + std::abs(evaluate(s.K, pt))));
  }
  CHECK(worst_i1 <= 1e-7);
  CHECK(worst_i2 <= 1e-7);
  CHECK(worst_k <= 1e-12);
}

TEST_CASE("reality structure of the integral set") {
  const auto s = fig1_integrals();
  Sampler sampler(103);
  for (int i = 0; i < 30; ++i) {
    const auto pt = sampler.phase_point(2);
    const Complex f1 = evaluate(s.f1, pt);
    const Complex f2 = evaluate(s.f2, pt);
    CHECK(std::abs(f2 - std::conj(f1)) <= 1e-12 * (1.0 + std::abs(f1)));
    const Complex i1 = evaluate(s.I1, pt);
    const Complex i2 = evaluate(s.I2, pt);
    const double scale = 1.0 + std::abs(f1);
    CHECK(std::abs(i1.real()) <= 1e-10 * scale);  // I1 purely imaginary
    CHECK(std::abs(i2.imag()) <= 1e-10 * scale);  // I2 purely real
    CHECK(std::abs(evaluate(s.X1, pt).imag()) <= 1e-10 * scale);
    CHECK(std::abs(evaluate(s.X2, pt).imag()) <= 1e-10 * scale);
    // X1 = Re f1, X2 = Im f1
    CHECK(evaluate(s.X1, pt).real() == Approx(f1.real()).margin(1e-10 * scale));
    CHECK(evaluate(s.X2, pt).real() == Approx(f1.imag()).margin(1e-10 * scale));
  }
}

TEST_CASE("ladder products factor through the Q polynomials") {
  const auto s = fig1_integrals();
  const auto q1 = pq_closed_form(3.0, kFig1.axes[0]).q;
  const auto q2 = pq_closed_form(3.0, kFig1.axes[1]).q;
  const auto H1 = axis_hamiltonian(kFig1, 0);
  const auto H2 = axis_hamiltonian(kFig1, 1);
  auto eval_poly = [](const std::vector<Complex>& c, double h) {
    Complex acc = 0.0;
    double t = 1.0;
    for (const auto& ci : c) {
      acc += ci * t;
      t *= h;
    }
    return acc;
  };
  Sampler sampler(105);
  for (int i = 0; i < 40; ++i) {
    const auto pt = sampler.phase_point(2);
    const Complex prod = evaluate(s.f1, pt) * evaluate(s.f2, pt);
    const Complex expect =
        ipow(eval_poly(q1, evaluate(H1, pt).real()), s.m[0]) *
        ipow(eval_poly(q2, evaluate(H2, pt).real()), s.m[1]);
    CHECK(std::abs(prod - expect) <= 1e-7 * (1.0 + std::abs(expect)));
  }
}

TEST_CASE("harmonic pair with first-order ladders: exact quadratic integrals") {
  const double w = 1.3;
  const auto H1 = harmonic_axis_hamiltonian(w, 0, 2);
  const auto H2 = harmonic_axis_hamiltonian(w, 1, 2);
  const auto H = (H1 + H2).named("H");
  const auto s = build_integrals_from(H1, H2, harmonic_ladder(w, 0, 2),
                                      harmonic_ladder(w, 1, 2), {1, 1});
  Sampler sampler(107);
  for (int i = 0; i < 40; ++i) {
    const auto pt = sampler.phase_point(2);
    CHECK(std::abs(poisson_bracket(H, s.X1, pt)) <= 1e-12);
    CHECK(std::abs(poisson_bracket(H, s.X2, pt)) <= 1e-12);
  }
}

TEST_CASE("incommensurate overrides are rejected") {
  const SystemSpec spec{3.0, {AxisParams{1, 3.0, 1}, AxisParams{2, 5.0, 1}}};
  const auto L1 =
      deformed_ladder(3.0, spec.axes[0], CoefficientSource::Fitted, 0, 2);
  const auto L2 =
      deformed_ladder(3.0, spec.axes[1], CoefficientSource::Fitted, 1, 2);
  CHECK_THROWS_AS(build_integrals(spec, L1, L2, std::pair{1, 1}),
                  std::invalid_argument);
  CHECK_NOTHROW(build_integrals(spec, L1, L2));  // minimal (2,1) works
}

TEST_CASE("N-dimensional pair integrals commute with H") {
  const auto L1 =
      deformed_ladder(3.0, kFig3.axes[0], CoefficientSource::Fitted, 0, 3);
  const auto L2 =
      deformed_ladder(3.0, kFig3.axes[1], CoefficientSource::Fitted, 1, 3);
  const auto pair12 = build_integrals_nd(kFig3, L1, L2, {0, 1});
  CHECK(pair12.m == std::array<int, 2>{11, 7});
  const auto H = hamiltonian(kFig3);
  Sampler sampler(109);
  const auto pts = sampler.phase_points(50, 3);
  for (const auto& pt : pts) {
    const double sI = 1.0 + std::abs(evaluate(pair12.I, pt));
    const double sJ = 1.0 + std::abs(evaluate(pair12.J, pt));
    CHECK(std::abs(poisson_bracket(H, pair12.I, pt)) / sI <= 1e-6);
    CHECK(std::abs(poisson_bracket(H, pair12.J, pt)) / sJ <= 1e-6);
    CHECK(std::abs(poisson_bracket(H, pair12.K, pt)) <= 1e-10);
  }
}

TEST_CASE("K_ij telescopes") {
  const auto L1 =
      deformed_ladder(3.0, kFig3.axes[0], CoefficientSource::Fitted, 0, 3);
  const auto L2 =
      deformed_ladder(3.0, kFig3.axes[1], CoefficientSource::Fitted, 1, 3);
  const auto L3 =
      deformed_ladder(3.0, kFig3.axes[2], CoefficientSource::Fitted, 2, 3);
  const auto k12 = build_integrals_nd(kFig3, L1, L2, {0, 1}).K;
  const auto k23 = build_integrals_nd(kFig3, L2, L3, {1, 2}).K;
  const auto h13 = axis_hamiltonian(kFig3, 0) - axis_hamiltonian(kFig3, 2);
  Sampler sampler(111);
  for (int i = 0; i < 20; ++i) {
    const auto pt = sampler.phase_point(3);
    const Complex lhs = evaluate(k12, pt) + evaluate(k23, pt);
    const Complex rhs = evaluate(h13, pt);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));
  }
}

TEST_CASE("invalid axis pairs are rejected") {
  const auto L1 =
      deformed_ladder(3.0, kFig3.axes[0], CoefficientSource::Fitted, 0, 3);
  CHECK_THROWS_AS(build_integrals_nd(kFig3, L1, L1, {0, 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_integrals_nd(kFig3, L1, L1, {1, 0}),
                  std::invalid_argument);
}

TEST_CASE("third-order integral B commutes with H and is odd in p") {
  const SystemSpec spec{2.0, {AxisParams{1, 1.0, 1}, AxisParams{1, 0.0, 1}}};
  const auto B = third_order_integral_B(spec);
  const auto H = hamiltonian_with_harmonic_second_axis(spec);
  Sampler sampler(113);
  const auto pts = sampler.phase_points(100, 2);
  for (const auto& pt : pts) {
    const double scale = 1.0 + std::abs(evaluate(B, pt));
    CHECK(std::abs(poisson_bracket(H, B, pt)) / scale <= 1e-7);
  }
  for (int i = 0; i < 20; ++i) {
    const auto pt = sampler.phase_point(2);
    PhasePoint flipped = pt;
    for (auto& v : flipped.p) v = -v;
    CHECK(evaluate(B, flipped).real() ==
          Approx(-evaluate(B, pt).real()).epsilon(1e-12));
  }
}

TEST_CASE("B requires the oscillator second axis") {
  CHECK_THROWS_AS(
      third_order_integral_B(
          SystemSpec{2.0, {AxisParams{1, 1.0, 1}, AxisParams{1, 2.0, 1}}}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      third_order_integral_B(
          SystemSpec{2.0, {AxisParams{2, 1.0, 1}, AxisParams{1, 0.0, 1}}}),
      std::invalid_argument);
}

TEST_CASE("momentum degree estimator") {
  const auto mono = pow(momentum(0, 2), 3) * momentum(1, 2);
  CHECK(momentum_degree(mono) == 4);

  const SystemSpec spec{2.0, {AxisParams{1, 1.0, 1}, AxisParams{1, 0.0, 1}}};
  CHECK(momentum_degree(third_order_integral_B(spec)) == 3);

  const auto s = fig1_integrals();
  CHECK(momentum_degree(s.K) == 2);
  CHECK(momentum_degree(s.f1) == 12);   // 3 (m1 + m2) with m = (3, 1)
  CHECK(momentum_degree(s.I2) == 12);
  CHECK(momentum_degree(s.I1) == 11);   // leading monomials cancel in f1 - f2

  // m = (1, 1): degree 6
  const SystemSpec eq{2.0, {AxisParams{1, 1.0, 1}, AxisParams{1, 2.0, 1}}};
  const auto L1 =
      deformed_ladder(2.0, eq.axes[0], CoefficientSource::Fitted, 0, 2);
  const auto L2 =
      deformed_ladder(2.0, eq.axes[1], CoefficientSource::Fitted, 1, 2);
  const auto s11 = build_integrals(eq, L1, L2);
  CHECK(s11.m == std::array<int, 2>{1, 1});
  CHECK(momentum_degree(s11.f1) == 6);
}

TEST_CASE("momentum degree rejects non-polynomial observables") {
  // |p|^(1/2) grows with a half-integer slope
  const auto notpoly = make_observable(
      1, "rootp", []<class S>(std::span<const S>, std::span<const S> p) -> S {
        using std::sqrt;
        return sqrt(sqrt(p[0] * p[0]));
      });
  CHECK_THROWS_AS(momentum_degree(notpoly), std::runtime_error);
}

TEST_CASE("functional independence: rank 3 in 2D") {
  const auto s = fig1_integrals();
  const auto H = hamiltonian(kFig1);
  const std::vector<Observable> set{H, s.K, s.X1};
  Sampler sampler(115);
  int good = 0;
  for (int i = 0; i < 100; ++i) {
    const auto pt = sampler.phase_point(2);
    if (independence_rank(set, pt) == 3) ++good;
  }
  CHECK(good >= 95);
}

TEST_CASE("functional independence: rank 5 = 2N-1 in 3D") {
  const auto L1 =
      deformed_ladder(3.0, kFig3.axes[0], CoefficientSource::Fitted, 0, 3);
  const auto L2 =
      deformed_ladder(3.0, kFig3.axes[1], CoefficientSource::Fitted, 1, 3);
  const auto L3 =
      deformed_ladder(3.0, kFig3.axes[2], CoefficientSource::Fitted, 2, 3);
  const auto p12 = build_integrals_nd(kFig3, L1, L2, {0, 1});
  const auto p23 = build_integrals_nd(kFig3, L2, L3, {1, 2});
  const auto H = hamiltonian(kFig3);
  const std::vector<Observable> set{H, p12.K, p23.K, p12.X, p23.X};
  Sampler sampler(117);
  int good = 0;
  for (int i = 0; i < 100; ++i) {
    const auto pt = sampler.phase_point(3);
    if (independence_rank(set, pt) == 5) ++good;
  }
  CHECK(good >= 95);
}
