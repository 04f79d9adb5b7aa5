#pragma once

#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "superint/observable.hpp"
#include "superint/phase_point.hpp"

namespace superint {

/// Parameters of one axis of the deformed-oscillator family:
/// V(x) = (omega^2 k^2 / 18) (2b + 5x^2 + 4 eps x sqrt(b + x^2)).
struct AxisParams {
  int k = 1;        ///< positive integer frequency multiplier
  double b = 0.0;   ///< deformation, >= 0
  int epsilon = 1;  ///< +1 or -1

  bool operator==(const AxisParams&) const = default;
};

inline void validate(const AxisParams& ax) {
  if (ax.k < 1) throw std::invalid_argument("AxisParams: k must be >= 1");
  if (!(ax.b >= 0.0))
    throw std::invalid_argument("AxisParams: b must be >= 0");
  if (ax.epsilon != 1 && ax.epsilon != -1)
    throw std::invalid_argument("AxisParams: epsilon must be +1 or -1");
}

struct SystemSpec {
  double omega = 1.0;
  std::vector<AxisParams> axes;

  int dim() const { return static_cast<int>(axes.size()); }
  bool operator==(const SystemSpec&) const = default;
};

inline void validate(const SystemSpec& spec) {
  if (!(spec.omega > 0.0))
    throw std::invalid_argument("SystemSpec: omega must be > 0");
  if (spec.axes.empty())
    throw std::invalid_argument("SystemSpec: at least one axis");
  for (const auto& ax : spec.axes) validate(ax);
}

/// Position-sampling domains for the spec's verification rules: axes with
/// b = 0 are only piecewise smooth at x = 0 and are sampled away from it.
inline std::vector<AxisDomain> sampling_domains(const SystemSpec& spec) {
  std::vector<AxisDomain> doms;
  doms.reserve(spec.axes.size());
  for (const auto& ax : spec.axes)
    doms.push_back(ax.b > 0.0 ? AxisDomain::Full : AxisDomain::ExcludeNearZero);
  return doms;
}

// -- potential ------------------------------------------------------------

/// Scalar-generic deformed potential with the frequency multiplier folded
/// into omega_eff = omega*k (any positive real is accepted here; the public
/// SystemSpec restricts k to positive integers).
template <class S>
S deformed_potential(const S& x, double omega_eff, double b, double epsilon) {
  const double c = omega_eff * omega_eff / 18.0;
  const S r = b + x * x;
  if (detail::primal_real(r) < 0.0)
    throw std::domain_error("deformed_potential: negative radicand");
  using std::sqrt;
  const S s = sqrt(r);
  return c * (2.0 * b + 5.0 * x * x + 4.0 * epsilon * x * s);
}

/// dV/dx in closed form (used by the equations of motion; cross-checked
/// against the differentiated observable in tests).
inline double deformed_potential_derivative(double x, double omega_eff,
                                            double b, double epsilon) {
  const double c = omega_eff * omega_eff / 18.0;
  const double s = std::sqrt(b + x * x);
  if (s == 0.0) return c * 10.0 * x;  // b = 0, x = 0
  return c * (10.0 * x + 4.0 * epsilon * (b + 2.0 * x * x) / s);
}

inline double potential_1d(double x, double omega, const AxisParams& ax) {
  validate(ax);
  return deformed_potential<double>(x, omega * ax.k, ax.b, ax.epsilon);
}

// -- Hamiltonians ----------------------------------------------------------

/// H_axis = p_a^2/2 + V(x_a) embedded in an N-dimensional phase space,
/// with a real frequency multiplier (internal API).
inline Observable deformed_axis_hamiltonian(double omega, double k_real,
                                            double b, int epsilon, int axis,
                                            int dim) {
  if (axis < 0 || axis >= dim)
    throw std::invalid_argument("deformed_axis_hamiltonian: bad axis");
  const double we = omega * k_real;
  const double eps = epsilon;
  return make_observable(
      dim, "H" + std::to_string(axis + 1),
      [we, b, eps, axis]<class S>(std::span<const S> x,
                                  std::span<const S> p) -> S {
        return 0.5 * p[axis] * p[axis] +
               deformed_potential<S>(x[axis], we, b, eps);
      });
}

/// H_axis = p_a^2/2 + omega_eff^2 x_a^2 / 2 (plain oscillator axis).
inline Observable harmonic_axis_hamiltonian(double omega_eff, int axis,
                                            int dim) {
  if (axis < 0 || axis >= dim)
    throw std::invalid_argument("harmonic_axis_hamiltonian: bad axis");
  const double w2 = omega_eff * omega_eff;
  return make_observable(
      dim, "H" + std::to_string(axis + 1),
      [w2, axis]<class S>(std::span<const S> x, std::span<const S> p) -> S {
        return 0.5 * p[axis] * p[axis] + 0.5 * w2 * x[axis] * x[axis];
      });
}

inline Observable axis_hamiltonian(const SystemSpec& spec, int axis) {
  validate(spec);
  const auto& ax = spec.axes.at(axis);
  return deformed_axis_hamiltonian(spec.omega, ax.k, ax.b, ax.epsilon, axis,
                                   spec.dim());
}

/// H = sum_j p_j^2/2 + V_j(x_j), evaluated in one pass.
inline Observable hamiltonian(const SystemSpec& spec) {
  validate(spec);
  struct Axis {
    double we, b, eps;
  };
  std::vector<Axis> axes;
  for (const auto& ax : spec.axes)
    axes.push_back({spec.omega * ax.k, ax.b, double(ax.epsilon)});
  return make_observable(
      spec.dim(), "H",
      [axes]<class S>(std::span<const S> x, std::span<const S> p) -> S {
        S acc(0.0);
        for (std::size_t j = 0; j < axes.size(); ++j)
          acc = acc + 0.5 * p[j] * p[j] +
                deformed_potential<S>(x[j], axes[j].we, axes[j].b, axes[j].eps);
        return acc;
      });
}

/// Direct (double-precision) Hamiltonian value, for trajectory monitoring.
inline double hamiltonian_value(const SystemSpec& spec, const PhasePoint& pt) {
  double acc = 0.0;
  for (int j = 0; j < spec.dim(); ++j) {
    const auto& ax = spec.axes[j];
    acc += 0.5 * pt.p[j] * pt.p[j] +
           deformed_potential<double>(pt.x[j], spec.omega * ax.k, ax.b,
                                      ax.epsilon);
  }
  return acc;
}

// -- quartic constraint ----------------------------------------------------

/// Value of the quartic polynomial (in v) that the double-root potential
/// satisfies, with c = 8 omega^8 b^3 / 729 and d = omega^4 b^2 / 27.
inline double quartic_residual(double x, double v, double omega, double b) {
  if (!(b >= 0.0)) throw std::invalid_argument("quartic_residual: b < 0");
  const double w2 = omega * omega;
  const double w4 = w2 * w2;
  const double w6 = w4 * w2;
  const double w8 = w4 * w4;
  const double c = 8.0 * w8 * b * b * b / 729.0;
  const double d = w4 * b * b / 27.0;
  const double x2 = x * x;
  const double x4 = x2 * x2;
  const double x6 = x4 * x2;
  const double x8 = x4 * x4;
  return -9.0 * v * v * v * v + 14.0 * w2 * x2 * v * v * v +
         (6.0 * d - 7.5 * w4 * x4) * v * v +
         (1.5 * w6 * x6 - 2.0 * d * w2 * x2) * v +
         (c * x2 - d * d - 0.5 * d * w4 * x4 - w8 * x8 / 16.0);
}

/// |residual| scaled by 1 + |leading term| (the -9 v^4 term).
inline double quartic_residual_scaled(double x, double v, double omega,
                                      double b) {
  const double lead = 9.0 * v * v * v * v;
  return std::abs(quartic_residual(x, v, omega, b)) / (1.0 + lead);
}

}  // namespace superint
