#pragma once

#include <cmath>
#include <complex>
#include <concepts>
#include <type_traits>
#include <utility>

namespace superint {

/// Forward-mode differentiation scalar: a value together with one directional
/// derivative. Nesting (Dual<Dual<T>>) yields second directional derivatives.
///
/// Phase-space coordinates are real, so all differentiation directions are
/// real; this is what makes conj() on a Dual well defined.
template <class T>
struct Dual;

template <class T>
inline constexpr bool is_dual_v = false;
template <class T>
inline constexpr bool is_dual_v<Dual<T>> = true;

namespace detail {

/// Scalars that may be promoted to a Dual<T> constant (zero derivative).
template <class U, class T>
concept PromotableTo =
    std::same_as<U, T> || (!is_dual_v<U> && std::constructible_from<T, U>);

}  // namespace detail

template <class T>
struct Dual {
  T v{};  ///< value
  T d{};  ///< derivative along the seeded direction

  Dual() = default;
  Dual(T value, T deriv) : v(std::move(value)), d(std::move(deriv)) {}

  /// Constants (doubles, complex, shallower duals) carry zero derivative.
  template <class U>
    requires detail::PromotableTo<U, T>
  Dual(const U& value) : v(value) {}
};

// -- arithmetic ---------------------------------------------------------

template <class T>
Dual<T> operator-(const Dual<T>& a) {
  return {-a.v, -a.d};
}

template <class T>
Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) {
  return {a.v + b.v, a.d + b.d};
}
template <class T>
Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) {
  return {a.v - b.v, a.d - b.d};
}
template <class T>
Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) {
  return {a.v * b.v, a.d * b.v + a.v * b.d};
}
template <class T>
Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
  const T q = a.v / b.v;
  return {q, (a.d - q * b.d) / b.v};
}

template <class T, class U>
  requires detail::PromotableTo<U, T>
Dual<T> operator+(const Dual<T>& a, const U& c) {
  return {a.v + T(c), a.d};
}
template <class T, class U>
  requires detail::PromotableTo<U, T>
Dual<T> operator+(const U& c, const Dual<T>& a) {
  return {T(c) + a.v, a.d};
}
template <class T, class U>
  requires detail::PromotableTo<U, T>
Dual<T> operator-(const Dual<T>& a, const U& c) {
  return {a.v - T(c), a.d};
}
template <class T, class U>
  requires detail::PromotableTo<U, T>
Dual<T> operator-(const U& c, const Dual<T>& a) {
  return {T(c) - a.v, -a.d};
}
template <class T, class U>
  requires detail::PromotableTo<U, T>
Dual<T> operator*(const Dual<T>& a, const U& c) {
  const T tc(c);
  return {a.v * tc, a.d * tc};
}
template <class T, class U>
  requires detail::PromotableTo<U, T>
Dual<T> operator*(const U& c, const Dual<T>& a) {
  const T tc(c);
  return {tc * a.v, tc * a.d};
}
template <class T, class U>
  requires detail::PromotableTo<U, T>
Dual<T> operator/(const Dual<T>& a, const U& c) {
  const T tc(c);
  return {a.v / tc, a.d / tc};
}
template <class T, class U>
  requires detail::PromotableTo<U, T>
Dual<T> operator/(const U& c, const Dual<T>& a) {
  const T q = T(c) / a.v;
  return {q, -q * a.d / a.v};
}

// -- functions ----------------------------------------------------------

namespace detail {
inline double conj_value(double x) { return x; }
inline float conj_value(float x) { return x; }
template <class T>
std::complex<T> conj_value(const std::complex<T>& z) {
  return std::conj(z);
}
template <class T>
Dual<T> conj_value(const Dual<T>& a) {
  return {conj_value(a.v), conj_value(a.d)};
}
}  // namespace detail

/// Valid because differentiation directions are real.
template <class T>
Dual<T> conj(const Dual<T>& a) {
  return detail::conj_value(a);
}

template <class T>
Dual<T> sqrt(const Dual<T>& a) {
  using std::sqrt;
  const T s = sqrt(a.v);
  return {s, a.d / (s + s)};
}

/// Integer power by squaring; works for any multiplicative scalar.
template <class S>
S ipow(S base, int n) {
  S result(1.0);
  while (n > 0) {
    if (n & 1) result = result * base;
    base = base * base;
    n >>= 1;
  }
  return result;
}

/// Innermost (underived) value of a possibly nested dual.
inline double primal(double v) { return v; }
inline std::complex<double> primal(const std::complex<double>& v) { return v; }
template <class T>
auto primal(const Dual<T>& a) {
  return primal(a.v);
}

namespace detail {
inline double primal_real(double v) { return v; }
inline double primal_real(const std::complex<double>& v) { return v.real(); }
template <class T>
double primal_real(const Dual<T>& a) {
  return primal_real(a.v);
}
}  // namespace detail

}  // namespace superint
