#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace superint {

struct OdeStats {
  long steps = 0;
  long rejected = 0;
  long rhs_evals = 0;
};

namespace detail {

// Dormand-Prince 5(4) tableau.
inline constexpr double dp_c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5,
                                   8.0 / 9, 1.0, 1.0};
inline constexpr double dp_a21 = 1.0 / 5;
inline constexpr double dp_a31 = 3.0 / 40, dp_a32 = 9.0 / 40;
inline constexpr double dp_a41 = 44.0 / 45, dp_a42 = -56.0 / 15,
                        dp_a43 = 32.0 / 9;
inline constexpr double dp_a51 = 19372.0 / 6561, dp_a52 = -25360.0 / 2187,
                        dp_a53 = 64448.0 / 6561, dp_a54 = -212.0 / 729;
inline constexpr double dp_a61 = 9017.0 / 3168, dp_a62 = -355.0 / 33,
                        dp_a63 = 46732.0 / 5247, dp_a64 = 49.0 / 176,
                        dp_a65 = -5103.0 / 18656;
inline constexpr double dp_b1 = 35.0 / 384, dp_b3 = 500.0 / 1113,
                        dp_b4 = 125.0 / 192, dp_b5 = -2187.0 / 6784,
                        dp_b6 = 11.0 / 84;
// b(5th) - b(4th): error estimator weights.
inline constexpr double dp_e1 = 71.0 / 57600, dp_e3 = -71.0 / 16695,
                        dp_e4 = 71.0 / 1920, dp_e5 = -17253.0 / 339200,
                        dp_e6 = 22.0 / 525, dp_e7 = -1.0 / 40;
// Dense-output weights for the order-4 continuous extension.
inline constexpr double dp_d1 = -12715105075.0 / 11282082432.0;
inline constexpr double dp_d3 = 87487479700.0 / 32700410799.0;
inline constexpr double dp_d4 = -10690763975.0 / 1880347072.0;
inline constexpr double dp_d5 = 701980252875.0 / 199316789632.0;
inline constexpr double dp_d6 = -1453857185.0 / 822651844.0;
inline constexpr double dp_d7 = 69997945.0 / 29380423.0;

}  // namespace detail

/// Adaptive explicit Runge-Kutta 5(4) integration of y' = f(t, y) with a
/// continuous (order 4) extension for dense output.
///
/// rhs:   void(double t, span<const double> y, span<double> dydt)
/// sink:  void(double t, span<const double> y), called once per requested
///        sample time (strictly increasing, inside [t0, t1]).
///
/// Per-step local error is controlled against atol = rtol = tol. Throws
/// on step-size underflow and on non-finite states.
template <class F, class Sink>
std::vector<double> integrate_dopri5(F&& rhs, std::span<const double> y0,
                                     double t0, double t1, double tol,
                                     std::span<const double> sample_times,
                                     Sink&& sink, OdeStats* stats = nullptr) {
  using namespace detail;
  if (!(tol > 0.0)) throw std::invalid_argument("integrate_dopri5: tol <= 0");
  const std::size_t n = y0.size();
  const double span_t = t1 - t0;
  if (span_t < 0.0) throw std::invalid_argument("integrate_dopri5: t1 < t0");

  std::vector<double> y(y0.begin(), y0.end());
  std::size_t sample_idx = 0;
  while (sample_idx < sample_times.size() &&
         sample_times[sample_idx] <= t0 + 1e-15 * std::max(1.0, std::abs(t0))) {
    sink(sample_times[sample_idx], std::span<const double>(y));
    ++sample_idx;
  }
  if (span_t == 0.0) {
    if (sample_idx != sample_times.size())
      throw std::invalid_argument("integrate_dopri5: samples beyond t1");
    return y;
  }

  OdeStats local;
  OdeStats& st = stats ? *stats : local;

  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
  std::vector<double> ytmp(n), ynew(n), yerr(n);
  std::vector<double> r1(n), r2(n), r3(n), r4(n), r5(n);

  rhs(t0, std::span<const double>(y), std::span<double>(k1));
  ++st.rhs_evals;

  // Initial step size (Hairer-style probe).
  double h;
  {
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = tol + tol * std::abs(y[i]);
      d0 += (y[i] / sc) * (y[i] / sc);
      d1 += (k1[i] / sc) * (k1[i] / sc);
    }
    d0 = std::sqrt(d0 / n);
    d1 = std::sqrt(d1 / n);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, span_t);
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h0 * k1[i];
    rhs(t0 + h0, std::span<const double>(ytmp), std::span<double>(k2));
    ++st.rhs_evals;
    double d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = tol + tol * std::abs(y[i]);
      d2 += ((k2[i] - k1[i]) / sc) * ((k2[i] - k1[i]) / sc);
    }
    d2 = std::sqrt(d2 / n) / h0;
    const double dm = std::max(d1, d2);
    const double h1 =
        dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    h = std::min({100.0 * h0, h1, span_t});
  }

  double t = t0;
  bool last_rejected = false;
  while (t < t1) {
    if (h < 1e-14 * std::max(1.0, std::abs(t)))
      throw std::runtime_error("integrate_dopri5: step size underflow");
    if (t + h > t1) h = t1 - t;

    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * dp_a21 * k1[i];
    rhs(t + dp_c[1] * h, std::span<const double>(ytmp), std::span<double>(k2));
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (dp_a31 * k1[i] + dp_a32 * k2[i]);
    rhs(t + dp_c[2] * h, std::span<const double>(ytmp), std::span<double>(k3));
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (dp_a41 * k1[i] + dp_a42 * k2[i] + dp_a43 * k3[i]);
    rhs(t + dp_c[3] * h, std::span<const double>(ytmp), std::span<double>(k4));
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (dp_a51 * k1[i] + dp_a52 * k2[i] + dp_a53 * k3[i] +
                            dp_a54 * k4[i]);
    rhs(t + dp_c[4] * h, std::span<const double>(ytmp), std::span<double>(k5));
    for (std::size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (dp_a61 * k1[i] + dp_a62 * k2[i] + dp_a63 * k3[i] +
                            dp_a64 * k4[i] + dp_a65 * k5[i]);
    rhs(t + h, std::span<const double>(ytmp), std::span<double>(k6));
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + h * (dp_b1 * k1[i] + dp_b3 * k3[i] + dp_b4 * k4[i] +
                            dp_b5 * k5[i] + dp_b6 * k6[i]);
    rhs(t + h, std::span<const double>(ynew), std::span<double>(k7));
    st.rhs_evals += 6;

    double err = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < n; ++i) {
      yerr[i] = h * (dp_e1 * k1[i] + dp_e3 * k3[i] + dp_e4 * k4[i] +
                     dp_e5 * k5[i] + dp_e6 * k6[i] + dp_e7 * k7[i]);
      const double sc =
          tol + tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err += (yerr[i] / sc) * (yerr[i] / sc);
      finite = finite && std::isfinite(ynew[i]);
    }
    err = std::sqrt(err / n);

    if (!finite || !(err <= 1.0)) {
      ++st.rejected;
      last_rejected = true;
      const double fac =
          finite ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
      h *= std::min(fac, 0.9);
      continue;
    }

    // Accepted: build the continuous extension and emit pending samples.
    for (std::size_t i = 0; i < n; ++i) {
      const double ydiff = ynew[i] - y[i];
      const double bspl = h * k1[i] - ydiff;
      r1[i] = y[i];
      r2[i] = ydiff;
      r3[i] = bspl;
      r4[i] = ydiff - h * k7[i] - bspl;
      r5[i] = h * (dp_d1 * k1[i] + dp_d3 * k3[i] + dp_d4 * k4[i] +
                   dp_d5 * k5[i] + dp_d6 * k6[i] + dp_d7 * k7[i]);
    }
    const double t_new = t + h;
    while (sample_idx < sample_times.size() &&
           sample_times[sample_idx] <=
               t_new + 1e-12 * std::max(1.0, std::abs(t_new))) {
      const double ts = sample_times[sample_idx];
      const double th = std::clamp((ts - t) / h, 0.0, 1.0);
      const double th1 = 1.0 - th;
      for (std::size_t i = 0; i < n; ++i)
        ytmp[i] =
            r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
      sink(ts, std::span<const double>(ytmp));
      ++sample_idx;
    }

    y.swap(ynew);
    k1.swap(k7);  // FSAL
    t = t_new;
    ++st.steps;

    double fac = 0.9 * std::pow(std::max(err, 1e-16), -0.2);
    fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 5.0);
    last_rejected = false;
    h *= fac;
  }

  if (sample_idx != sample_times.size())
    throw std::invalid_argument("integrate_dopri5: samples beyond t1");
  return y;
}

/// Fixed-step velocity Verlet for separable H = p^2/2 + V(x); accel computes
/// a = -dV/dx. Second order; used as the cross-check integrator.
template <class Accel>
void leapfrog(Accel&& accel, std::span<double> x, std::span<double> p,
              double dt, long nsteps) {
  const std::size_t n = x.size();
  std::vector<double> a(n);
  accel(std::span<const double>(x), std::span<double>(a));
  for (long s = 0; s < nsteps; ++s) {
    for (std::size_t i = 0; i < n; ++i) p[i] += 0.5 * dt * a[i];
    for (std::size_t i = 0; i < n; ++i) x[i] += dt * p[i];
    accel(std::span<const double>(x), std::span<double>(a));
    for (std::size_t i = 0; i < n; ++i) p[i] += 0.5 * dt * a[i];
  }
}

}  // namespace superint
