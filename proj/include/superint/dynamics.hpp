#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "superint/observable.hpp"
#include "superint/ode.hpp"
#include "superint/phase_point.hpp"
#include "superint/systems.hpp"

namespace superint {

/// Per-axis data for the equations of motion; omega_eff may be any positive
/// real here, which the incommensurate control cases rely on. An axis with
/// harmonic = true carries the plain oscillator potential instead of the
/// deformed one.
struct AxisDynamics {
  double omega_eff;
  double b;
  double epsilon;
  bool harmonic = false;
};

inline std::vector<AxisDynamics> axes_dynamics(const SystemSpec& spec) {
  validate(spec);
  std::vector<AxisDynamics> axes;
  axes.reserve(spec.axes.size());
  for (const auto& ax : spec.axes)
    axes.push_back({spec.omega * ax.k, ax.b, double(ax.epsilon), false});
  return axes;
}

/// State layout: y = [x_1..x_N, p_1..p_N].
inline void hamilton_rhs_axes(std::span<const AxisDynamics> axes,
                              std::span<const double> y,
                              std::span<double> dydt) {
  const std::size_t n = axes.size();
  for (std::size_t i = 0; i < n; ++i) {
    dydt[i] = y[n + i];
    dydt[n + i] =
        axes[i].harmonic
            ? -axes[i].omega_eff * axes[i].omega_eff * y[i]
            : -deformed_potential_derivative(y[i], axes[i].omega_eff,
                                             axes[i].b, axes[i].epsilon);
  }
}

/// Canonical equations xdot = p, pdot = -dV/dx.
inline std::pair<std::vector<double>, std::vector<double>> hamilton_rhs(
    const SystemSpec& spec, const PhasePoint& pt) {
  const auto axes = axes_dynamics(spec);
  if (pt.dim() != spec.dim())
    throw std::invalid_argument("hamilton_rhs: dimension mismatch");
  std::vector<double> y(2 * pt.dim());
  std::copy(pt.x.begin(), pt.x.end(), y.begin());
  std::copy(pt.p.begin(), pt.p.end(), y.begin() + pt.dim());
  std::vector<double> dydt(y.size());
  hamilton_rhs_axes(axes, y, dydt);
  return {std::vector<double>(dydt.begin(), dydt.begin() + pt.dim()),
          std::vector<double>(dydt.begin() + pt.dim(), dydt.end())};
}

/// A named conserved quantity sampled along a trajectory.
struct Monitor {
  std::string name;
  Observable obs;
};

struct Trajectory {
  SystemSpec spec;
  std::vector<double> times;
  std::vector<PhasePoint> states;
  std::vector<double> energy;  ///< H at each sample
  std::vector<std::pair<std::string, std::vector<double>>> monitors;
};

/// max_k |v_k - v_0| / (1 + |v_0|).
inline double relative_drift(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const double v0 = values.front();
  double worst = 0.0;
  for (double v : values)
    worst = std::max(worst, std::abs(v - v0) / (1.0 + std::abs(v0)));
  return worst;
}

/// Integrates Hamilton's equations over [0, t_end] with dense output at
/// n_samples uniform times (a single sample when t_end = 0), recording H and
/// the real parts of the requested monitors.
inline Trajectory integrate(const SystemSpec& spec, const PhasePoint& init,
                            double t_end, double tol, int n_samples = 1001,
                            std::span<const Monitor> monitors = {},
                            OdeStats* stats = nullptr) {
  validate(spec);
  if (init.dim() != spec.dim())
    throw std::invalid_argument("integrate: dimension mismatch");
  if (t_end < 0.0) throw std::invalid_argument("integrate: t_end < 0");
  if (n_samples < 1) throw std::invalid_argument("integrate: n_samples < 1");
  for (const auto& mon : monitors)
    detail::require_dim(mon.obs, spec.dim(), "integrate monitor");

  const auto axes = axes_dynamics(spec);
  const int n = spec.dim();
  std::vector<double> y0(2 * n);
  std::copy(init.x.begin(), init.x.end(), y0.begin());
  std::copy(init.p.begin(), init.p.end(), y0.begin() + n);

  std::vector<double> sample_times;
  if (t_end == 0.0) {
    sample_times.push_back(0.0);
  } else {
    sample_times.resize(n_samples);
    for (int i = 0; i < n_samples; ++i)
      sample_times[i] = t_end * i / double(n_samples - 1);
  }

  Trajectory traj;
  traj.spec = spec;
  traj.monitors.reserve(monitors.size());
  for (const auto& mon : monitors) traj.monitors.push_back({mon.name, {}});

  auto sink = [&](double t, std::span<const double> y) {
    PhasePoint pt(std::vector<double>(y.begin(), y.begin() + n),
                  std::vector<double>(y.begin() + n, y.end()));
    traj.times.push_back(t);
    traj.energy.push_back(hamiltonian_value(spec, pt));
    for (std::size_t m = 0; m < monitors.size(); ++m)
      traj.monitors[m].second.push_back(
          evaluate(monitors[m].obs, pt).real());
    traj.states.push_back(std::move(pt));
  };

  integrate_dopri5(
      [&](double, std::span<const double> y, std::span<double> dydt) {
        hamilton_rhs_axes(axes, y, dydt);
      },
      y0, 0.0, t_end, tol, sample_times, sink, stats);
  return traj;
}

/// Common trajectory period of the commensurate system. Each axis is
/// isochronous: the raising operator rotates at nu_j = k_j omega but is
/// two-to-one on the orbit, so the axis closes after 4 pi / (k_j omega);
/// the common period is the least common multiple. closure_test validates
/// this value rather than assuming it.
inline double predict_period(const SystemSpec& spec) {
  validate(spec);
  int g = 0;
  for (const auto& ax : spec.axes) g = std::gcd(g, ax.k);
  return 4.0 * std::acos(-1.0) / (spec.omega * g);
}

struct ClosureResult {
  double period = 0.0;            ///< T* used (predict_period)
  double return_distance = 0.0;   ///< ||z(T*) - z(0)||_2
  bool closed = false;            ///< return_distance <= eps
  double refined_distance = 0.0;  ///< min over the scan window
  double t_refined = 0.0;         ///< scan minimizer
  double half_period_distance = 0.0;  ///< distance at T*/2 (diagnostic)
};

/// Integrates over [0, T*], measures the phase-space return distance, and
/// scans T in [0.999, 1.001] T* for the minimizing distance. Bounded motion
/// is guaranteed for b >= 0 (the potential is confining); states are checked
/// finite by the integrator.
inline ClosureResult closure_test_axes(std::span<const AxisDynamics> axes,
                                       const PhasePoint& init, double t_star,
                                       double tol_int, double eps) {
  const int n = static_cast<int>(axes.size());
  if (init.dim() != n)
    throw std::invalid_argument("closure_test: dimension mismatch");
  std::vector<double> y0(2 * n);
  std::copy(init.x.begin(), init.x.end(), y0.begin());
  std::copy(init.p.begin(), init.p.end(), y0.begin() + n);

  // Sample times: T*/2 diagnostic, then a fine scan of the window around T*.
  const int scan_points = 2001;
  std::vector<double> samples;
  samples.push_back(0.5 * t_star);
  const double w_lo = 0.999 * t_star, w_hi = 1.001 * t_star;
  for (int i = 0; i < scan_points; ++i)
    samples.push_back(w_lo + (w_hi - w_lo) * i / double(scan_points - 1));
  samples.push_back(t_star);
  std::sort(samples.begin(), samples.end());

  ClosureResult res;
  res.period = t_star;
  res.refined_distance = std::numeric_limits<double>::infinity();
  auto dist_to_start = [&](std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i)
      s += (y[i] - y0[i]) * (y[i] - y0[i]);
    return std::sqrt(s);
  };
  auto sink = [&](double t, std::span<const double> y) {
    const double d = dist_to_start(y);
    if (std::abs(t - 0.5 * t_star) <= 1e-9 * t_star)
      res.half_period_distance = d;
    if (std::abs(t - t_star) <= 1e-12 * t_star) res.return_distance = d;
    if (t >= w_lo - 1e-12 && d < res.refined_distance) {
      res.refined_distance = d;
      res.t_refined = t;
    }
  };
  integrate_dopri5(
      [&](double, std::span<const double> y, std::span<double> dydt) {
        hamilton_rhs_axes(axes, y, dydt);
      },
      y0, 0.0, w_hi, tol_int, samples, sink);
  res.closed = res.return_distance <= eps;
  return res;
}

inline ClosureResult closure_test(const SystemSpec& spec,
                                  const PhasePoint& init, double tol_int,
                                  double eps = 1e-4) {
  const auto axes = axes_dynamics(spec);
  return closure_test_axes(axes, init, predict_period(spec), tol_int, eps);
}

// -- export -----------------------------------------------------------------

namespace detail {
inline std::string fmt_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace detail

/// CSV columns: t, x1..xN, p1..pN, H, then one column per monitor.
inline void write_csv(const Trajectory& traj, std::ostream& os) {
  const int n = traj.spec.dim();
  os << "t";
  for (int i = 1; i <= n; ++i) os << ",x" << i;
  for (int i = 1; i <= n; ++i) os << ",p" << i;
  os << ",H";
  for (const auto& [name, _] : traj.monitors) os << "," << name;
  os << "\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    os << detail::fmt_full(traj.times[k]);
    for (int i = 0; i < n; ++i)
      os << "," << detail::fmt_full(traj.states[k].x[i]);
    for (int i = 0; i < n; ++i)
      os << "," << detail::fmt_full(traj.states[k].p[i]);
    os << "," << detail::fmt_full(traj.energy[k]);
    for (const auto& [_, vals] : traj.monitors)
      os << "," << detail::fmt_full(vals[k]);
    os << "\n";
  }
}

inline std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream os;
  write_csv(traj, os);
  return os.str();
}

/// SVG polyline of the projected curve. The projection names 2 or 3 position
/// indices (0-based); a triple is drawn through the isometric-style map
/// u = (a-b)/sqrt(2), v = (a+b-2c)/sqrt(6).
inline void write_svg(const Trajectory& traj, std::ostream& os,
                      std::span<const int> projection) {
  const int n = traj.spec.dim();
  if (projection.size() != 2 && projection.size() != 3)
    throw std::invalid_argument("write_svg: projection needs 2 or 3 indices");
  for (int idx : projection)
    if (idx < 0 || idx >= n)
      throw std::invalid_argument("write_svg: projection index out of range");
  if (traj.states.empty())
    throw std::invalid_argument("write_svg: empty trajectory");

  std::vector<double> u(traj.states.size()), v(traj.states.size());
  std::string xlabel, ylabel;
  if (projection.size() == 2) {
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
      u[k] = traj.states[k].x[projection[0]];
      v[k] = traj.states[k].x[projection[1]];
    }
    xlabel = "x" + std::to_string(projection[0] + 1);
    ylabel = "x" + std::to_string(projection[1] + 1);
  } else {
    const double s2 = std::sqrt(2.0), s6 = std::sqrt(6.0);
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
      const auto& st = traj.states[k];
      const double a = st.x[projection[0]], b = st.x[projection[1]],
                   c = st.x[projection[2]];
      u[k] = (a - b) / s2;
      v[k] = (a + b - 2.0 * c) / s6;
    }
    xlabel = "iso-u(x" + std::to_string(projection[0] + 1) + ",x" +
             std::to_string(projection[1] + 1) + ",x" +
             std::to_string(projection[2] + 1) + ")";
    ylabel = "iso-v";
  }

  auto minmax_pad = [](const std::vector<double>& w) {
    auto [lo, hi] = std::minmax_element(w.begin(), w.end());
    double a = *lo, b = *hi;
    const double pad = (b - a) > 0 ? 0.05 * (b - a) : 1.0;
    return std::pair<double, double>(a - pad, b + pad);
  };
  const auto [ulo, uhi] = minmax_pad(u);
  const auto [vlo, vhi] = minmax_pad(v);

  const double W = 640, H = 640, m = 42;
  auto px = [&](double a) { return m + (a - ulo) / (uhi - ulo) * (W - 2 * m); };
  auto py = [&](double a) { return H - m - (a - vlo) / (vhi - vlo) * (H - 2 * m); };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
     << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H
     << "\">\n";
  os << "  <rect x=\"" << m << "\" y=\"" << m << "\" width=\"" << W - 2 * m
     << "\" height=\"" << H - 2 * m
     << "\" fill=\"white\" stroke=\"#444\" stroke-width=\"1\"/>\n";
  os << "  <polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1\" "
        "points=\"";
  char buf[64];
  for (std::size_t k = 0; k < u.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%.3f,%.3f ", px(u[k]), py(v[k]));
    os << buf;
  }
  os << "\"/>\n";
  os << "  <text x=\"" << W / 2 << "\" y=\"" << H - 10
     << "\" text-anchor=\"middle\" font-size=\"14\">" << xlabel
     << "</text>\n";
  os << "  <text x=\"14\" y=\"" << H / 2
     << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 "
        "14 "
     << H / 2 << ")\">" << ylabel << "</text>\n";
  os << "</svg>\n";
}

inline std::string trajectory_svg(const Trajectory& traj,
                                  std::span<const int> projection) {
  std::ostringstream os;
  write_svg(traj, os, projection);
  return os.str();
}

}  // namespace superint
