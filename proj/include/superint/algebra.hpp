#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "superint/integrals.hpp"
#include "superint/ladders.hpp"
#include "superint/leastsq.hpp"
#include "superint/observable.hpp"

namespace superint {

/// One bracket relation {lhs_a, lhs_b} = rhs, verified pointwise.
struct AlgebraRelation {
  Observable lhs_a, lhs_b;
  Observable rhs;
  std::string label;
};

struct RelationResult {
  double max_residual = 0.0;
  bool pass = false;
};

/// max over pts of |{lhs_a, lhs_b}(pt) - rhs(pt)| / (1 + |rhs(pt)|).
inline RelationResult check_relation(const AlgebraRelation& rel,
                                     std::span<const PhasePoint> pts,
                                     double tol) {
  double worst = 0.0;
  for (const auto& pt : pts) {
    const Complex lhs = poisson_bracket(rel.lhs_a, rel.lhs_b, pt);
    const Complex rhs = evaluate(rel.rhs, pt);
    worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(rhs)));
  }
  return {worst, worst <= tol};
}

/// The closed 2-dof algebra of (K, I1, I2), with lam = m1 nu1 = m2 nu2:
///   {K, I1} = 2 i lam I2
///   {K, I2} = 2 i lam I1
///   {I1, I2} = 2 Q1(H1)^{m1-1} Q2(H2)^{m2-1}
///              [m2^2 Q1(H1) P2(H2) - m1^2 Q2(H2) P1(H1)]
/// where H1 = (H+K)/2 and H2 = (H-K)/2 as observables.
inline std::vector<AlgebraRelation> algebra_relations_2d(
    const Observable& H, const IntegralSet& s,
    const FactorizationPolynomials& pq1, const FactorizationPolynomials& pq2,
    double nu1) {
  const double lam = s.m[0] * nu1;
  const Complex two_i_lam(0.0, 2.0 * lam);
  const Observable H1 = (0.5 * (H + s.K)).named("H1");
  const Observable H2 = (0.5 * (H - s.K)).named("H2");
  const Observable Q1 = poly_of(pq1.q, H1);
  const Observable Q2 = poly_of(pq2.q, H2);
  const Observable P1 = poly_of(pq1.p, H1);
  const Observable P2 = poly_of(pq2.p, H2);
  const double m1 = s.m[0], m2 = s.m[1];

  std::vector<AlgebraRelation> rels;
  rels.push_back({s.K, s.I1, (two_i_lam * s.I2).named("2il*I2"),
                  "{K,I1} = 2 i lam I2"});
  rels.push_back({s.K, s.I2, (two_i_lam * s.I1).named("2il*I1"),
                  "{K,I2} = 2 i lam I1"});
  Observable rhs3 =
      2.0 * pow(Q1, s.m[0] - 1) * pow(Q2, s.m[1] - 1) *
      ((m2 * m2) * Q1 * P2 - (m1 * m1) * Q2 * P1);
  rels.push_back({s.I1, s.I2, rhs3.named("closure rhs"),
                  "{I1,I2} = 2 Q1^(m1-1) Q2^(m2-1) [m2^2 Q1 P2 - m1^2 Q2 P1]"});
  return rels;
}

/// Fits the single coefficient gamma in {K, I1} = gamma I2 over the sample
/// points; the structure constant predicts gamma = 2 i m1 nu1.
inline Complex fit_ki1_coefficient(const IntegralSet& s,
                                   std::span<const PhasePoint> pts) {
  Complex num = 0.0;
  double den = 0.0;
  for (const auto& pt : pts) {
    const Complex lhs = poisson_bracket(s.K, s.I1, pt);
    const Complex i2 = evaluate(s.I2, pt);
    num += std::conj(i2) * lhs;
    den += std::norm(i2);
  }
  return num / den;
}

/// Cubic-algebra verification for the 2-dof system with a deformed first
/// axis and a plain-oscillator second axis:
///   C = {A, B},  {A, C} = -4 w^2 B,
///   {B, C} = c3 A^3 + c2 H A^2 + c1 H^3 + cA A + c0,
/// with (c3, c2, c1) = (8, 12, -4) and the b-dependent tail fitted by least
/// squares. Exact values: cA = -4 b^2 w^4 / 27, c0 = 4 b^3 w^6 / 729.
struct CubicAlgebraResult {
  double ac_residual = 0.0;   ///< max rel residual of {A,C} + 4 w^2 B
  std::array<Complex, 5> c{};  ///< fitted (c3, c2, c1, cA, c0)
  double fit_residual = 0.0;  ///< max rel residual of the fitted {B,C}
};

inline CubicAlgebraResult cubic_algebra_check(double omega, double b, int eps,
                                              int n_points = 200,
                                              std::uint64_t seed =
                                                  kDefaultSeed + 3) {
  const SystemSpec spec{omega, {AxisParams{1, b, eps}, AxisParams{1, 0.0, 1}}};
  const Observable H = hamiltonian_with_harmonic_second_axis(spec);
  const Observable A =
      (deformed_axis_hamiltonian(omega, 1, b, eps, 0, 2) -
       harmonic_axis_hamiltonian(omega, 1, 2))
          .named("A");
  const Observable B = third_order_integral_B(spec);
  const Observable C = bracket_observable(A, B);

  Sampler sampler(seed);
  const auto doms = sampling_domains(spec);
  const auto pts =
      sampler.phase_points(n_points, std::span<const AxisDomain>(doms));

  CubicAlgebraResult out;
  const AlgebraRelation ac{A, C, (-4.0 * omega * omega * B).named("-4w^2 B"),
                           "{A,C} = -4 w^2 B"};
  out.ac_residual = check_relation(ac, pts, 0.0).max_residual;

  const int m = static_cast<int>(pts.size());
  Eigen::MatrixXd M(m, 5);
  Eigen::VectorXcd rhs(m);
  for (int i = 0; i < m; ++i) {
    const double a = evaluate(A, pts[i]).real();
    const double h = evaluate(H, pts[i]).real();
    M(i, 0) = a * a * a;
    M(i, 1) = h * a * a;
    M(i, 2) = h * h * h;
    M(i, 3) = a;
    M(i, 4) = 1.0;
    rhs[i] = poisson_bracket(B, C, pts[i]);
  }
  const Eigen::VectorXcd sol = lsq::solve(M, rhs);
  for (int j = 0; j < 5; ++j) out.c[j] = sol[j];
  double worst = 0.0;
  for (int i = 0; i < m; ++i) {
    Complex fit = 0.0;
    for (int j = 0; j < 5; ++j) fit += sol[j] * M(i, j);
    worst = std::max(worst,
                     std::abs(fit - rhs[i]) / (1.0 + std::abs(rhs[i])));
  }
  out.fit_residual = worst;
  return out;
}

}  // namespace superint
