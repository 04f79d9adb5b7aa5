#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace superint {

/// A point (x, p) of an N-degree-of-freedom phase space.
struct PhasePoint {
  std::vector<double> x;
  std::vector<double> p;

  PhasePoint() = default;
  PhasePoint(std::vector<double> xs, std::vector<double> ps)
      : x(std::move(xs)), p(std::move(ps)) {
    if (x.size() != p.size())
      throw std::invalid_argument("PhasePoint: len(x) != len(p)");
    if (x.empty()) throw std::invalid_argument("PhasePoint: empty");
    for (double v : x)
      if (!std::isfinite(v))
        throw std::invalid_argument("PhasePoint: non-finite position");
    for (double v : p)
      if (!std::isfinite(v))
        throw std::invalid_argument("PhasePoint: non-finite momentum");
  }

  int dim() const { return static_cast<int>(x.size()); }

  bool operator==(const PhasePoint&) const = default;
};

inline double distance(const PhasePoint& a, const PhasePoint& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) {
    s += (a.x[i] - b.x[i]) * (a.x[i] - b.x[i]);
    s += (a.p[i] - b.p[i]) * (a.p[i] - b.p[i]);
  }
  return std::sqrt(s);
}

/// Per-axis sampling restriction on positions.
enum class AxisDomain {
  Full,             ///< x in [-2, 2]
  ExcludeNearZero,  ///< x in [-2, -0.1] u [0.1, 2] (piecewise-smooth axes)
  PositiveOnly,     ///< x in [0.1, 2] (half-line fits)
};

/// Deterministic sampling of the standard verification domain
/// x_i, p_i in [-2, 2]. Uses raw mt19937_64 bits so streams are identical
/// across platforms and library implementations.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  /// Uniform in [0, 1).
  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  double position(AxisDomain dom) {
    switch (dom) {
      case AxisDomain::Full:
        return uniform(-2.0, 2.0);
      case AxisDomain::ExcludeNearZero: {
        const double u = unit();
        return u < 0.5 ? -(0.1 + 1.9 * (2.0 * u)) : 0.1 + 1.9 * (2.0 * u - 1.0);
      }
      case AxisDomain::PositiveOnly:
        return uniform(0.1, 2.0);
    }
    throw std::logic_error("Sampler: bad axis domain");
  }

  double momentum() { return uniform(-2.0, 2.0); }

  PhasePoint phase_point(std::span<const AxisDomain> domains) {
    const int n = static_cast<int>(domains.size());
    std::vector<double> xs(n), ps(n);
    for (int i = 0; i < n; ++i) xs[i] = position(domains[i]);
    for (int i = 0; i < n; ++i) ps[i] = momentum();
    return {std::move(xs), std::move(ps)};
  }

  PhasePoint phase_point(int n, AxisDomain dom = AxisDomain::Full) {
    std::vector<AxisDomain> doms(n, dom);
    return phase_point(std::span<const AxisDomain>(doms));
  }

  std::vector<PhasePoint> phase_points(int count,
                                       std::span<const AxisDomain> domains) {
    std::vector<PhasePoint> pts;
    pts.reserve(count);
    for (int i = 0; i < count; ++i) pts.push_back(phase_point(domains));
    return pts;
  }

  std::vector<PhasePoint> phase_points(int count, int n,
                                       AxisDomain dom = AxisDomain::Full) {
    std::vector<AxisDomain> doms(n, dom);
    return phase_points(count, std::span<const AxisDomain>(doms));
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace superint
