#pragma once

#include <complex>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "superint/dual.hpp"
#include "superint/phase_point.hpp"

namespace superint {

using Complex = std::complex<double>;
using Dual1 = Dual<Complex>;
using Dual2 = Dual<Dual1>;

/// Derivatives of a complex observable with respect to the 2N real
/// phase-space coordinates.
struct Gradient {
  std::vector<Complex> dx;
  std::vector<Complex> dp;
};

namespace detail {

/// Type-erased evaluation node. Three scalar instantiations: plain values,
/// first derivatives, second derivatives. Differentiating a bracket of
/// brackets needs exactly two nested levels; deeper nesting throws.
struct ObsNode {
  int dim;
  explicit ObsNode(int n) : dim(n) {}
  virtual ~ObsNode() = default;
  virtual Complex eval(std::span<const Complex> x,
                       std::span<const Complex> p) const = 0;
  virtual Dual1 eval(std::span<const Dual1> x,
                     std::span<const Dual1> p) const = 0;
  virtual Dual2 eval(std::span<const Dual2> x,
                     std::span<const Dual2> p) const = 0;
};

using NodePtr = std::shared_ptr<const ObsNode>;

template <class Derived>
struct NodeCrtp : ObsNode {
  using ObsNode::ObsNode;
  Complex eval(std::span<const Complex> x,
               std::span<const Complex> p) const override {
    return self().template eval_impl<Complex>(x, p);
  }
  Dual1 eval(std::span<const Dual1> x,
             std::span<const Dual1> p) const override {
    return self().template eval_impl<Dual1>(x, p);
  }
  Dual2 eval(std::span<const Dual2> x,
             std::span<const Dual2> p) const override {
    return self().template eval_impl<Dual2>(x, p);
  }
  const Derived& self() const { return static_cast<const Derived&>(*this); }
};

/// Full gradient of a node at scalar type S via one dual sweep per direction.
template <class S>
void gradient_at(const ObsNode& f, std::span<const S> x, std::span<const S> p,
                 std::vector<S>& dfdx, std::vector<S>& dfdp) {
  const int n = static_cast<int>(x.size());
  std::vector<Dual<S>> dx(n), dp(n);
  for (int i = 0; i < n; ++i) dx[i] = Dual<S>(x[i]);
  for (int i = 0; i < n; ++i) dp[i] = Dual<S>(p[i]);
  dfdx.resize(n);
  dfdp.resize(n);
  const std::span<const Dual<S>> sx(dx), sp(dp);
  for (int i = 0; i < n; ++i) {
    dx[i].d = S(1.0);
    dfdx[i] = f.eval(sx, sp).d;
    dx[i].d = S(0.0);
  }
  for (int i = 0; i < n; ++i) {
    dp[i].d = S(1.0);
    dfdp[i] = f.eval(sx, sp).d;
    dp[i].d = S(0.0);
  }
}

}  // namespace detail

/// A complex-valued function on phase space. Immutable after construction;
/// evaluation is pure, so concurrent use is safe.
class Observable {
 public:
  Observable() = default;
  Observable(detail::NodePtr node, std::string name)
      : node_(std::move(node)), name_(std::move(name)) {}

  bool valid() const { return static_cast<bool>(node_); }
  int dim() const { return node_ ? node_->dim : 0; }
  const std::string& name() const { return name_; }

  Observable named(std::string n) const {
    Observable o(*this);
    o.name_ = std::move(n);
    return o;
  }

  template <class S>
  S eval(std::span<const S> x, std::span<const S> p) const {
    return node_->eval(x, p);
  }

  const detail::ObsNode& node() const { return *node_; }
  const detail::NodePtr& node_ptr() const { return node_; }

 private:
  detail::NodePtr node_;
  std::string name_;
};

namespace detail {

inline void require_dim(const Observable& f, int n, const char* what) {
  if (f.dim() != n)
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(f.dim()) + " vs " +
                                std::to_string(n) + ")");
}

inline void require_same_dim(const Observable& f, const Observable& g,
                             const char* what) {
  if (f.dim() != g.dim())
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

template <class F>
struct FnNode final : NodeCrtp<FnNode<F>> {
  F f;
  FnNode(int n, F fn) : NodeCrtp<FnNode<F>>(n), f(std::move(fn)) {}
  template <class S>
  S eval_impl(std::span<const S> x, std::span<const S> p) const {
    return f(x, p);
  }
};

struct CoordNode final : NodeCrtp<CoordNode> {
  int index;
  bool is_momentum;
  CoordNode(int n, int i, bool mom)
      : NodeCrtp<CoordNode>(n), index(i), is_momentum(mom) {}
  template <class S>
  S eval_impl(std::span<const S> x, std::span<const S> p) const {
    return is_momentum ? p[index] : x[index];
  }
};

struct ConstNode final : NodeCrtp<ConstNode> {
  Complex value;
  ConstNode(int n, Complex c) : NodeCrtp<ConstNode>(n), value(c) {}
  template <class S>
  S eval_impl(std::span<const S>, std::span<const S>) const {
    return S(value);
  }
};

struct SumNode final : NodeCrtp<SumNode> {
  NodePtr a, b;
  SumNode(NodePtr l, NodePtr r) : NodeCrtp<SumNode>(l->dim), a(l), b(r) {}
  template <class S>
  S eval_impl(std::span<const S> x, std::span<const S> p) const {
    return a->eval(x, p) + b->eval(x, p);
  }
};

struct DiffNode final : NodeCrtp<DiffNode> {
  NodePtr a, b;
  DiffNode(NodePtr l, NodePtr r) : NodeCrtp<DiffNode>(l->dim), a(l), b(r) {}
  template <class S>
  S eval_impl(std::span<const S> x, std::span<const S> p) const {
    return a->eval(x, p) - b->eval(x, p);
  }
};

struct ProdNode final : NodeCrtp<ProdNode> {
  NodePtr a, b;
  ProdNode(NodePtr l, NodePtr r) : NodeCrtp<ProdNode>(l->dim), a(l), b(r) {}
  template <class S>
  S eval_impl(std::span<const S> x, std::span<const S> p) const {
    return a->eval(x, p) * b->eval(x, p);
  }
};

struct ScaleNode final : NodeCrtp<ScaleNode> {
  NodePtr a;
  Complex c;
  ScaleNode(NodePtr n, Complex f) : NodeCrtp<ScaleNode>(n->dim), a(n), c(f) {}
  template <class S>
  S eval_impl(std::span<const S> x, std::span<const S> p) const {
    return S(c) * a->eval(x, p);
  }
};

struct NegNode final : NodeCrtp<NegNode> {
  NodePtr a;
  explicit NegNode(NodePtr n) : NodeCrtp<NegNode>(n->dim), a(n) {}
  template <class S>
  S eval_impl(std::span<const S> x, std::span<const S> p) const {
    return -a->eval(x, p);
  }
};

struct ConjNode final : NodeCrtp<ConjNode> {
  NodePtr a;
  explicit ConjNode(NodePtr n) : NodeCrtp<ConjNode>(n->dim), a(n) {}
  template <class S>
  S eval_impl(std::span<const S> x, std::span<const S> p) const {
    return detail::conj_value(a->eval(x, p));
  }
};

struct PowNode final : NodeCrtp<PowNode> {
  NodePtr a;
  int n;
  PowNode(NodePtr base, int exponent)
      : NodeCrtp<PowNode>(base->dim), a(base), n(exponent) {}
  template <class S>
  S eval_impl(std::span<const S> x, std::span<const S> p) const {
    return ipow(a->eval(x, p), n);
  }
};

/// Evaluates the canonical bracket of two children. At scalar type S the
/// children are differentiated at Dual<S>; S = Dual2 would need a third
/// level, which is not instantiated.
struct BracketNode final : NodeCrtp<BracketNode> {
  NodePtr f, g;
  BracketNode(NodePtr a, NodePtr b)
      : NodeCrtp<BracketNode>(a->dim), f(a), g(b) {}
  template <class S>
  S eval_impl(std::span<const S> x, std::span<const S> p) const {
    if constexpr (std::same_as<S, Dual2>) {
      throw std::runtime_error(
          "bracket evaluation: differentiation depth exceeded (two nested "
          "bracket levels are supported)");
    } else {
      std::vector<S> fx, fp, gx, gp;
      gradient_at<S>(*f, x, p, fx, fp);
      gradient_at<S>(*g, x, p, gx, gp);
      S acc(0.0);
      for (std::size_t i = 0; i < x.size(); ++i)
        acc = acc + fx[i] * gp[i] - fp[i] * gx[i];
      return acc;
    }
  }
};

}  // namespace detail

// -- constructors --------------------------------------------------------

/// Wraps a scalar-generic callable f(span<const S> x, span<const S> p) -> S.
template <class F>
Observable make_observable(int dim, std::string name, F f) {
  return {std::make_shared<detail::FnNode<F>>(dim, std::move(f)),
          std::move(name)};
}

inline Observable coordinate(int i, int dim) {
  if (i < 0 || i >= dim) throw std::invalid_argument("coordinate: bad index");
  return {std::make_shared<detail::CoordNode>(dim, i, false),
          "x" + std::to_string(i + 1)};
}

inline Observable momentum(int i, int dim) {
  if (i < 0 || i >= dim) throw std::invalid_argument("momentum: bad index");
  return {std::make_shared<detail::CoordNode>(dim, i, true),
          "p" + std::to_string(i + 1)};
}

inline Observable constant(Complex c, int dim) {
  return {std::make_shared<detail::ConstNode>(dim, c), "const"};
}

// -- combination ---------------------------------------------------------

inline Observable operator+(const Observable& a, const Observable& b) {
  detail::require_same_dim(a, b, "operator+");
  return {std::make_shared<detail::SumNode>(a.node_ptr(), b.node_ptr()),
          "(" + a.name() + "+" + b.name() + ")"};
}

inline Observable operator-(const Observable& a, const Observable& b) {
  detail::require_same_dim(a, b, "operator-");
  return {std::make_shared<detail::DiffNode>(a.node_ptr(), b.node_ptr()),
          "(" + a.name() + "-" + b.name() + ")"};
}

inline Observable operator*(const Observable& a, const Observable& b) {
  detail::require_same_dim(a, b, "operator*");
  return {std::make_shared<detail::ProdNode>(a.node_ptr(), b.node_ptr()),
          a.name() + "*" + b.name()};
}

inline Observable operator-(const Observable& a) {
  return {std::make_shared<detail::NegNode>(a.node_ptr()), "-" + a.name()};
}

inline Observable operator*(Complex c, const Observable& a) {
  return {std::make_shared<detail::ScaleNode>(a.node_ptr(), c),
          "c*" + a.name()};
}
inline Observable operator*(const Observable& a, Complex c) { return c * a; }
inline Observable operator*(double c, const Observable& a) {
  return Complex(c) * a;
}
inline Observable operator*(const Observable& a, double c) {
  return Complex(c) * a;
}

inline Observable operator+(const Observable& a, Complex c) {
  return a + constant(c, a.dim());
}
inline Observable operator+(Complex c, const Observable& a) {
  return constant(c, a.dim()) + a;
}
inline Observable operator-(const Observable& a, Complex c) {
  return a - constant(c, a.dim());
}
inline Observable operator-(Complex c, const Observable& a) {
  return constant(c, a.dim()) - a;
}

/// Integer power n >= 0 of an observable (evaluated by squaring).
inline Observable pow(const Observable& a, int n) {
  if (n < 0) throw std::invalid_argument("pow: negative exponent");
  return {std::make_shared<detail::PowNode>(a.node_ptr(), n),
          a.name() + "^" + std::to_string(n)};
}

inline Observable conj(const Observable& a) {
  return {std::make_shared<detail::ConjNode>(a.node_ptr()),
          "conj(" + a.name() + ")"};
}

/// Real part at real phase points, as an observable.
inline Observable re(const Observable& a) {
  return (0.5 * (a + conj(a))).named("Re(" + a.name() + ")");
}

/// Imaginary part at real phase points, as an observable.
inline Observable im(const Observable& a) {
  return (Complex(0.0, -0.5) * (a - conj(a))).named("Im(" + a.name() + ")");
}

/// The Poisson bracket {f, g} materialized as an observable. Evaluating it
/// differentiates f and g internally; bracketing the result again is
/// supported (one more level), anything deeper throws at evaluation.
inline Observable bracket_observable(const Observable& f,
                                     const Observable& g) {
  detail::require_same_dim(f, g, "bracket_observable");
  return {std::make_shared<detail::BracketNode>(f.node_ptr(), g.node_ptr()),
          "{" + f.name() + "," + g.name() + "}"};
}

/// Polynomial in u with given ascending coefficients, as an observable.
inline Observable poly_of(std::span<const Complex> coeffs,
                          const Observable& u) {
  if (coeffs.empty()) return constant(0.0, u.dim());
  Observable acc = constant(coeffs.back(), u.dim());
  for (int i = static_cast<int>(coeffs.size()) - 2; i >= 0; --i)
    acc = acc * u + coeffs[i];
  return acc;
}

// -- evaluation ----------------------------------------------------------

namespace detail {
inline void to_complex(const PhasePoint& pt, std::vector<Complex>& x,
                       std::vector<Complex>& p) {
  x.assign(pt.x.begin(), pt.x.end());
  p.assign(pt.p.begin(), pt.p.end());
}
}  // namespace detail

inline Complex evaluate(const Observable& f, const PhasePoint& pt) {
  detail::require_dim(f, pt.dim(), "evaluate");
  std::vector<Complex> x, p;
  detail::to_complex(pt, x, p);
  return f.eval<Complex>(x, p);
}

inline Gradient gradient(const Observable& f, const PhasePoint& pt) {
  detail::require_dim(f, pt.dim(), "gradient");
  std::vector<Complex> x, p;
  detail::to_complex(pt, x, p);
  Gradient g;
  detail::gradient_at<Complex>(f.node(), x, p, g.dx, g.dp);
  return g;
}

inline Complex poisson_bracket(const Observable& f, const Observable& g,
                               const PhasePoint& pt) {
  detail::require_same_dim(f, g, "poisson_bracket");
  detail::require_dim(f, pt.dim(), "poisson_bracket");
  std::vector<Complex> x, p;
  detail::to_complex(pt, x, p);
  std::vector<Complex> fx, fp, gx, gp;
  detail::gradient_at<Complex>(f.node(), x, p, fx, fp);
  detail::gradient_at<Complex>(g.node(), x, p, gx, gp);
  Complex acc = 0.0;
  for (int i = 0; i < pt.dim(); ++i) acc += fx[i] * gp[i] - fp[i] * gx[i];
  return acc;
}

}  // namespace superint
