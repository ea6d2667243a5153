#pragma once

#include <compare>
#include <concepts>
#include <cstddef>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

#include <gmpxx.h>
#include <Eigen/Core>

namespace stackel {

/// Exact rational number, always in lowest terms with a positive denominator.
class Rational {
 public:
  Rational() = default;
  template <std::integral I>
  Rational(I value) : v_(static_cast<long>(value)) {}  // NOLINT(google-explicit-constructor)
  Rational(long num, long den);
  explicit Rational(mpq_class value) : v_(std::move(value)) { v_.canonicalize(); }

  /// Parses "num", "num/den" or "-num/den" (whitespace not allowed).
  static Rational parse(std::string_view text);

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  Rational operator-() const { return Rational(mpq_class(-v_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  int sign() const { return sgn(v_); }
  bool is_zero() const { return sgn(v_) == 0; }
  Rational inverse() const;
  Rational abs() const { return Rational(mpq_class(::abs(v_))); }
  Rational pow(int e) const;

  mpz_class numerator() const { return v_.get_num(); }
  mpz_class denominator() const { return v_.get_den(); }
  const mpq_class& gmp() const { return v_; }

  double to_double() const { return v_.get_d(); }
  /// "num/den", or "num" when the denominator is 1.
  std::string str() const;
  /// Size of numerator plus denominator in bits; a proxy for coefficient growth.
  std::size_t bit_size() const;

 private:
  mpq_class v_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

/// Rational with an imaginary rational part; classical quantities keep im == 0.
struct GaussianRational {
  Rational re;
  Rational im;

  GaussianRational() = default;
  template <std::integral I>
  GaussianRational(I value) : re(value) {}  // NOLINT(google-explicit-constructor)
  GaussianRational(Rational real) : re(std::move(real)) {}  // NOLINT(google-explicit-constructor)
  GaussianRational(Rational real, Rational imag) : re(std::move(real)), im(std::move(imag)) {}

  static GaussianRational i() { return {Rational(0), Rational(1)}; }

  GaussianRational& operator+=(const GaussianRational& o) { re += o.re; im += o.im; return *this; }
  GaussianRational& operator-=(const GaussianRational& o) { re -= o.re; im -= o.im; return *this; }
  GaussianRational& operator*=(const GaussianRational& o);
  GaussianRational& operator/=(const GaussianRational& o);

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  GaussianRational operator-() const { return {-re, -im}; }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  bool is_real() const { return im.is_zero(); }
  GaussianRational conj() const { return {re, -im}; }
  GaussianRational inverse() const;
  std::string str() const;
};

std::ostream& operator<<(std::ostream& os, const GaussianRational& z);

inline bool is_zero(const Rational& r) { return r.is_zero(); }
inline bool is_zero(const GaussianRational& z) { return z.is_zero(); }
inline bool is_zero(double d) { return d == 0.0; }

}  // namespace stackel

template <>
struct std::hash<stackel::Rational> {
  std::size_t operator()(const stackel::Rational& r) const noexcept;
};

namespace Eigen {

template <>
struct NumTraits<stackel::Rational> : GenericNumTraits<stackel::Rational> {
  using Real = stackel::Rational;
  using NonInteger = stackel::Rational;
  using Nested = stackel::Rational;
  using Literal = stackel::Rational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 4,
    AddCost = 16,
    MulCost = 32
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen

namespace stackel {

using RationalMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using RationalVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

/// Exact determinant by Gaussian elimination over the rationals.
Rational determinant(RationalMatrix m);
/// Exact inverse; throws std::domain_error when singular.
RationalMatrix inverse(const RationalMatrix& m);

}  // namespace stackel
