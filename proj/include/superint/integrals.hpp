#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "superint/ladders.hpp"
#include "superint/leastsq.hpp"
#include "superint/observable.hpp"
#include "superint/systems.hpp"

namespace superint {

/// m1 nu1 = m2 nu2 within 1e-12 relative.
inline bool commensurate(int m1, int m2, double nu1, double nu2) {
  if (m1 < 1 || m2 < 1)
    throw std::invalid_argument("commensurate: exponents must be >= 1");
  return std::abs(m1 * nu1 - m2 * nu2) <= 1e-12 * std::max(nu1, nu2);
}

/// Smallest positive (m1, m2) with m1 k1 = m2 k2: (k2/g, k1/g).
inline std::pair<int, int> minimal_exponents(int k1, int k2) {
  if (k1 < 1 || k2 < 1)
    throw std::invalid_argument("minimal_exponents: k must be >= 1");
  const int g = std::gcd(k1, k2);
  return {k2 / g, k1 / g};
}

/// The 2-dof integral family built from ladder products:
/// f1 = (A1+)^m1 (A2-)^m2, f2 = conj(f1), I1 = f1 - f2, I2 = f1 + f2,
/// X1 = Re f1, X2 = Im f1, K = H1 - H2.
struct IntegralSet {
  Observable K, f1, f2, I1, I2, X1, X2;
  std::array<int, 2> m{};
};

inline IntegralSet build_integrals_from(const Observable& H1,
                                        const Observable& H2,
                                        const LadderOperator& L1,
                                        const LadderOperator& L2,
                                        std::pair<int, int> m) {
  const auto [m1, m2] = m;
  if (!commensurate(m1, m2, L1.nu, L2.nu))
    throw std::invalid_argument("build_integrals: incommensurate exponents");
  IntegralSet s;
  s.m = {m1, m2};
  s.K = (H1 - H2).named("K");
  s.f1 = (pow(L1.raising, m1) * pow(lowering(L2), m2)).named("f1");
  s.f2 = conj(s.f1).named("f2");
  s.I1 = (s.f1 - s.f2).named("I1");
  s.I2 = (s.f1 + s.f2).named("I2");
  s.X1 = re(s.f1).named("X1");
  s.X2 = im(s.f1).named("X2");
  return s;
}

inline IntegralSet build_integrals(
    const SystemSpec& spec, const LadderOperator& L1, const LadderOperator& L2,
    std::optional<std::pair<int, int>> m_override = {}) {
  validate(spec);
  if (spec.dim() != 2)
    throw std::invalid_argument("build_integrals: expected a 2-dof system");
  const auto m = m_override.value_or(
      minimal_exponents(spec.axes[0].k, spec.axes[1].k));
  return build_integrals_from(axis_hamiltonian(spec, 0),
                              axis_hamiltonian(spec, 1), L1, L2, m);
}

/// One pair (i < j) of the N-dimensional family:
/// I_ij = Ai+^mi Aj-^mj - Ai-^mi Aj+^mj, J_ij the sum, K_ij = H_i - H_j.
struct PairIntegrals {
  Observable I, J, K, X;  ///< X = Re of the ladder product (real integral)
  int i = 0, j = 1;
  std::array<int, 2> m{};
};

inline PairIntegrals build_integrals_nd(
    const SystemSpec& spec, const LadderOperator& Li, const LadderOperator& Lj,
    std::pair<int, int> axes,
    std::optional<std::pair<int, int>> m_override = {}) {
  validate(spec);
  const auto [i, j] = axes;
  if (!(0 <= i && i < j && j < spec.dim()))
    throw std::invalid_argument("build_integrals_nd: need 0 <= i < j < N");
  const auto [mi, mj] =
      m_override.value_or(minimal_exponents(spec.axes[i].k, spec.axes[j].k));
  if (!commensurate(mi, mj, Li.nu, Lj.nu))
    throw std::invalid_argument("build_integrals_nd: incommensurate pair");

  PairIntegrals out;
  out.i = i;
  out.j = j;
  out.m = {mi, mj};
  const auto tag = std::to_string(i + 1) + std::to_string(j + 1);
  Observable prod = (pow(Li.raising, mi) * pow(lowering(Lj), mj))
                        .named("f" + tag);
  out.I = (prod - conj(prod)).named("I" + tag);
  out.J = (prod + conj(prod)).named("J" + tag);
  out.K = (axis_hamiltonian(spec, i) - axis_hamiltonian(spec, j))
              .named("K" + tag);
  out.X = re(prod).named("X" + tag);
  return out;
}

/// Third-order integral of the 2-dof system with a deformed first axis and a
/// plain oscillator second axis (b2 = 0 is interpreted as the full parabola
/// omega^2 x2^2 / 2 here, not the piecewise b = 0 member of the family):
/// B = -x2 P1^3 + x1 P1^2 P2 + (w^2 x1^2/2 - 3V) x2 P1
///     - (1/w^2)(w^2 x1^2/2 - 3V) V' P2.
inline Observable third_order_integral_B(const SystemSpec& spec) {
  validate(spec);
  if (spec.dim() != 2 || spec.axes[0].k != 1 || spec.axes[1].k != 1)
    throw std::invalid_argument(
        "third_order_integral_B: expected a 2-dof system with k = (1, 1)");
  if (spec.axes[1].b != 0.0)
    throw std::invalid_argument(
        "third_order_integral_B: second axis must be the plain oscillator");
  const double w = spec.omega;
  const double b = spec.axes[0].b;
  const double eps = spec.axes[0].epsilon;
  return make_observable(
      2, "B", [=]<class S>(std::span<const S> x, std::span<const S> p) -> S {
        using std::sqrt;
        const S x1 = x[0], x2 = x[1], p1 = p[0], p2 = p[1];
        const S s = sqrt(b + x1 * x1);
        const double c = w * w / 18.0;
        const S V = c * (2.0 * b + 5.0 * x1 * x1 + 4.0 * eps * x1 * s);
        const S dV = c * (10.0 * x1 + 4.0 * eps * (b + 2.0 * x1 * x1) / s);
        const S g = 0.5 * (w * w) * x1 * x1 - 3.0 * V;
        return -x2 * p1 * p1 * p1 + x1 * p1 * p1 * p2 + g * x2 * p1 -
               (1.0 / (w * w)) * g * dV * p2;
      });
}

/// Matching Hamiltonian for the system above (second axis is the plain
/// oscillator).
inline Observable hamiltonian_with_harmonic_second_axis(
    const SystemSpec& spec) {
  return (deformed_axis_hamiltonian(spec.omega, 1, spec.axes[0].b,
                                    spec.axes[0].epsilon, 0, 2) +
          harmonic_axis_hamiltonian(spec.omega, 1, 2))
      .named("H");
}

/// Numerical rank of the Jacobian of the given (real-valued) observables
/// with respect to the 2N phase-space coordinates at pt. Rows are gradient
/// real parts, row-normalized; singular values are counted against
/// threshold * sigma_max.
inline int independence_rank(std::span<const Observable> obs,
                             const PhasePoint& pt, double threshold = 1e-8) {
  const int n = pt.dim();
  Eigen::MatrixXd J(static_cast<int>(obs.size()), 2 * n);
  for (std::size_t r = 0; r < obs.size(); ++r) {
    const Gradient g = gradient(obs[r], pt);
    for (int i = 0; i < n; ++i) {
      J(r, i) = g.dx[i].real();
      J(r, n + i) = g.dp[i].real();
    }
  }
  return lsq::jacobian_rank(J, threshold);
}

/// Empirical momentum degree: evaluates at (x, s p) on a geometric ladder of
/// scale factors and reads the slope of log|f| against log s. The rounded
/// slope must sit within 0.01 of an integer; otherwise another base point is
/// tried, and after max_retries the estimator gives up.
inline int momentum_degree(const Observable& obs,
                           std::uint64_t seed = kDefaultSeed + 2,
                           int max_retries = 8) {
  Sampler sampler(seed);
  const int n = obs.dim();
  std::string last_err = "momentum_degree: no attempts";
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    std::vector<double> xs(n), ps(n);
    for (auto& v : xs) v = sampler.uniform(-2.0, 2.0);
    for (auto& v : ps) {
      v = sampler.uniform(0.5, 2.0);
      if (sampler.unit() < 0.5) v = -v;
    }
    // Base magnification 2^7 keeps the leading momentum monomial dominant;
    // the four-point ladder then spans s = 2^7 .. 2^10.
    constexpr std::array<double, 4> scales{128.0, 256.0, 512.0, 1024.0};
    std::array<double, 4> logv{};
    bool degenerate = false;
    for (std::size_t k = 0; k < scales.size(); ++k) {
      std::vector<double> sp(n);
      for (int i = 0; i < n; ++i) sp[i] = scales[k] * ps[i];
      const double a = std::abs(evaluate(obs, PhasePoint(xs, sp)));
      if (!(a > 0.0) || !std::isfinite(a)) {
        degenerate = true;
        break;
      }
      logv[k] = std::log(a);
    }
    if (degenerate) {
      last_err = "momentum_degree: degenerate evaluation";
      continue;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < scales.size(); ++k) {
      const double lx = std::log(scales[k]);
      sx += lx;
      sy += logv[k];
      sxx += lx * lx;
      sxy += lx * logv[k];
    }
    const double m = static_cast<double>(scales.size());
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const double rounded = std::round(slope);
    if (std::abs(slope - rounded) <= 0.01 && rounded >= 0.0)
      return static_cast<int>(rounded);
    last_err = "momentum_degree: slope " + std::to_string(slope) +
               " not within 0.01 of an integer";
  }
  throw std::runtime_error(last_err);
}

}  // namespace superint
