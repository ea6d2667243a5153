#pragma once

// Truncated multivariate Taylor expansions ("jets") with exact coefficients.
//
// A jet of order K in n variables at a base point b stores the Taylor
// coefficients c_m of f(b + h) = sum_m c_m h^m for all multi-indices |m| <= K.
// Coefficients are the *normalised* ones (derivative / m!), so products are
// plain truncated convolutions.  Multi-indices are laid out graded by total
// degree, which makes truncation to a lower order a prefix operation.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "stackel/errors.hpp"
#include "stackel/rational.hpp"

namespace stackel {

inline constexpr int kMaxJetOrder = 4;
inline constexpr int kMaxJetDim = 8;

using MultiIndex = std::array<std::uint8_t, kMaxJetDim>;

class JetLayout {
 public:
  /// Shared layout for `dim` variables up to kMaxJetOrder; thread-safe.
  static const JetLayout& get(int dim);

  int dim() const { return dim_; }
  std::size_t size(int order) const { return prefix_[order]; }
  const MultiIndex& index(std::size_t k) const { return indices_[k]; }
  int degree(std::size_t k) const { return degrees_[k]; }
  /// Position of a multi-index; npos when its degree exceeds kMaxJetOrder.
  std::size_t find(const MultiIndex& m) const;
  /// Pairs (i, j) with index(i) + index(j) == index(k).
  std::span<const std::pair<std::uint32_t, std::uint32_t>> product_terms(std::size_t k) const {
    return {products_.data() + product_offsets_[k], product_offsets_[k + 1] - product_offsets_[k]};
  }
  /// Position of index(k) + e_var; only valid when degree(k) < kMaxJetOrder.
  std::size_t raise(int var, std::size_t k) const { return raise_[var * indices_.size() + k]; }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  explicit JetLayout(int dim);

  int dim_;
  std::vector<MultiIndex> indices_;
  std::vector<int> degrees_;
  std::array<std::size_t, kMaxJetOrder + 1> prefix_{};
  std::vector<std::pair<std::uint32_t, std::uint32_t>> products_;
  std::vector<std::size_t> product_offsets_;
  std::vector<std::size_t> raise_;
};

using BasePoint = std::shared_ptr<const std::vector<Rational>>;

template <class Scalar>
class Jet {
 public:
  Jet() = default;

  static Jet constant(int dim, int order, Scalar value, BasePoint base = nullptr) {
    Jet j(dim, order, std::move(base));
    j.c_[0] = std::move(value);
    return j;
  }
  /// The coordinate function x^var expanded at a base point whose var-th entry is `at`.
  static Jet variable(int dim, int order, int var, Scalar at, BasePoint base = nullptr) {
    Jet j(dim, order, std::move(base));
    j.c_[0] = std::move(at);
    if (order >= 1) {
      MultiIndex m{};
      m[var] = 1;
      j.c_[j.layout().find(m)] = Scalar(1);
    }
    return j;
  }

  int dim() const { return dim_; }
  int order() const { return order_; }
  const BasePoint& base() const { return base_; }
  std::size_t size() const { return c_.size(); }
  const JetLayout& layout() const { return JetLayout::get(dim_); }

  const Scalar& value() const { return c_[0]; }
  const Scalar& operator[](std::size_t k) const { return c_[k]; }
  Scalar& operator[](std::size_t k) { return c_[k]; }

  /// Normalised Taylor coefficient of h^m; zero beyond the jet order.
  Scalar coefficient(const MultiIndex& m) const {
    const std::size_t k = layout().find(m);
    if (k == JetLayout::npos || k >= c_.size()) return Scalar(0);
    return c_[k];
  }
  /// Partial derivative d^m f at the base point (coefficient times m!).
  Scalar partial(const MultiIndex& m) const {
    Scalar c = coefficient(m);
    long factorial = 1;
    for (int v = 0; v < dim_; ++v)
      for (int t = 2; t <= m[v]; ++t) factorial *= t;
    return c * Scalar(factorial);
  }

  Jet truncated(int order) const {
    if (order >= order_) return *this;
    if (order < 0) throw OrderOverflowError("negative jet order");
    Jet j(*this);
    j.order_ = order;
    j.c_.resize(layout().size(order));
    return j;
  }

  /// d/dx^var; the result has order one less.
  Jet derivative(int var) const {
    if (order_ == 0) throw OrderOverflowError("derivative of an order-0 jet");
    const JetLayout& L = layout();
    Jet j(dim_, order_ - 1, base_);
    for (std::size_t k = 0; k < j.c_.size(); ++k) {
      const std::size_t src = L.raise(var, k);
      const int mult = L.index(k)[var] + 1;
      if (!stackel::is_zero(c_[src])) j.c_[k] = c_[src] * Scalar(mult);
    }
    return j;
  }

  bool is_zero() const {
    for (const auto& c : c_)
      if (!stackel::is_zero(c)) return false;
    return true;
  }

  Jet& operator+=(const Jet& o) {
    align(o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    align(o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Jet& operator*=(const Scalar& s) {
    for (auto& c : c_) c *= s;
    return *this;
  }
  Jet& operator*=(const Jet& o) { return *this = *this * o; }
  Jet& operator/=(const Jet& o) { return *this = *this * o.reciprocal(); }

  Jet operator-() const {
    Jet j(*this);
    for (auto& c : j.c_) c = -c;
    return j;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b) {
    const int order = std::min(a.order_, b.order_);
    check_dims(a, b);
    Jet r(a.dim_, order, a.base_ ? a.base_ : b.base_);
    const JetLayout& L = a.layout();
    for (std::size_t k = 0; k < r.c_.size(); ++k) {
      Scalar acc(0);
      for (const auto& [i, j] : L.product_terms(k)) {
        if (stackel::is_zero(a.c_[i]) || stackel::is_zero(b.c_[j])) continue;
        acc += a.c_[i] * b.c_[j];
      }
      r.c_[k] = std::move(acc);
    }
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) { return a * b.reciprocal(); }
  /// Coefficient-wise equality; the base point is not compared.
  friend bool operator==(const Jet& a, const Jet& b) {
    return a.dim_ == b.dim_ && a.order_ == b.order_ && a.c_ == b.c_;
  }

  friend Jet operator+(Jet a, const Scalar& s) { a.c_[0] += s; return a; }
  friend Jet operator+(const Scalar& s, Jet a) { a.c_[0] += s; return a; }
  friend Jet operator-(Jet a, const Scalar& s) { a.c_[0] -= s; return a; }
  friend Jet operator-(const Scalar& s, const Jet& a) { return -a + s; }
  friend Jet operator*(Jet a, const Scalar& s) { return a *= s; }
  friend Jet operator*(const Scalar& s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, const Scalar& s) { return a *= Scalar(1) / s; }
  friend Jet operator/(const Scalar& s, const Jet& a) { return a.reciprocal() * s; }

  /// 1/f via the geometric series in the non-constant part; throws PoleError.
  Jet reciprocal() const {
    if (stackel::is_zero(c_[0])) throw PoleError();
    const Scalar inv0 = Scalar(1) / c_[0];
    Jet h(*this);
    h.c_[0] = Scalar(0);
    h *= -inv0;  // h = -(f - f0)/f0
    Jet result = constant(dim_, order_, Scalar(1), base_);
    Jet power = result;
    for (int k = 1; k <= order_; ++k) {
      power = power * h;
      result += power;
    }
    return result * inv0;
  }

  Jet pow(int e) const {
    if (e < 0) return reciprocal().pow(-e);
    Jet result = constant(dim_, order_, Scalar(1), base_);
    for (int k = 0; k < e; ++k) result = result * *this;
    return result;
  }

  template <class Other>
  Jet<Other> cast() const {
    Jet<Other> j = Jet<Other>::constant(dim_, order_, Other(0), base_);
    for (std::size_t k = 0; k < c_.size(); ++k) j[k] = Other(c_[k]);
    return j;
  }

 private:
  template <class>
  friend class Jet;

  Jet(int dim, int order, BasePoint base) : dim_(dim), order_(order), base_(std::move(base)) {
    if (order < 0 || order > kMaxJetOrder)
      throw OrderOverflowError("jet order " + std::to_string(order) + " outside [0, " +
                               std::to_string(kMaxJetOrder) + "]");
    if (dim < 1 || dim > kMaxJetDim) throw std::invalid_argument("jet dimension out of range");
    c_.assign(JetLayout::get(dim).size(order), Scalar(0));
  }

  static void check_dims(const Jet& a, const Jet& b) {
    if (a.dim_ != b.dim_) throw std::invalid_argument("jets of different dimension");
    if (a.base_ && b.base_ && a.base_ != b.base_ && *a.base_ != *b.base_)
      throw std::invalid_argument("jets at different base points");
  }

  void align(const Jet& o) {
    check_dims(*this, o);
    if (o.order_ < order_) {
      order_ = o.order_;
      c_.resize(o.c_.size());
    }
    if (!base_) base_ = o.base_;
  }

  int dim_ = 1;
  int order_ = 0;
  BasePoint base_;
  std::vector<Scalar> c_{Scalar(0)};
};

using RJet = Jet<Rational>;
using GJet = Jet<GaussianRational>;

/// A constant of the same kind (and jet shape) as `proto`.
inline Rational constant_like(const Rational&, const Rational& c) { return c; }
inline double constant_like(double, const Rational& c) { return c.to_double(); }
template <class S>
Jet<S> constant_like(const Jet<S>& proto, const Rational& c) {
  return Jet<S>::constant(proto.dim(), proto.order(), S(c), proto.base());
}

/// Coordinate jets x^1..x^n at `base`, all sharing one base pointer.
std::vector<RJet> coordinate_jets(std::span<const Rational> base, int order);

/// A rational expression in the coordinates, evaluated in jet arithmetic.
using JetFunction = std::function<RJet(std::span<const RJet>)>;

/// Exact Taylor coefficients of `f` at `base` to `order`; PoleError when a
/// denominator vanishes at the base point.
RJet jet_lift(const JetFunction& f, std::span<const Rational> base, int order);

}  // namespace stackel
