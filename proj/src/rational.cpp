#include "stackel/rational.hpp"

#include <stdexcept>
#include <utility>

namespace stackel {

Rational::Rational(long num, long den) : v_(num, den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  v_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  const auto slash = text.find('/');
  auto valid_int = [](std::string_view s, bool allow_sign) {
    if (s.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  const std::string_view num = text.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? "1" : text.substr(slash + 1);
  if (!valid_int(num, true) || !valid_int(den, false))
    throw std::invalid_argument("malformed rational literal '" + std::string(text) + "'");
  std::string n(num);
  if (!n.empty() && n[0] == '+') n.erase(0, 1);
  mpz_class zn(n, 10), zd(std::string(den), 10);
  if (zd == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  mpq_class q(zn, zd);
  q.canonicalize();
  return Rational(std::move(q));
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("rational division by zero");
  v_ /= o.v_;
  return *this;
}

Rational Rational::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero");
  return Rational(mpq_class(1 / v_));
}

Rational Rational::pow(int e) const {
  if (e < 0) return inverse().pow(-e);
  Rational result(1), base(*this);
  while (e > 0) {
    if (e & 1) result *= base;
    base *= base;
    e >>= 1;
  }
  return result;
}

std::string Rational::str() const { return v_.get_str(10); }

std::size_t Rational::bit_size() const {
  return mpz_sizeinbase(v_.get_num_mpz_t(), 2) + mpz_sizeinbase(v_.get_den_mpz_t(), 2);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
  if (im.is_zero() && o.im.is_zero()) {
    re *= o.re;
    return *this;
  }
  Rational r = re * o.re - im * o.im;
  Rational i = re * o.im + im * o.re;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

GaussianRational GaussianRational::inverse() const {
  const Rational norm = re * re + im * im;
  if (norm.is_zero()) throw std::domain_error("inverse of zero");
  return {re / norm, -im / norm};
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  return *this *= o.inverse();
}

std::string GaussianRational::str() const {
  if (im.is_zero()) return re.str();
  if (re.is_zero()) return im.str() + "i";
  return re.str() + (im.sign() > 0 ? "+" : "") + im.str() + "i";
}

std::ostream& operator<<(std::ostream& os, const GaussianRational& z) { return os << z.str(); }

Rational determinant(RationalMatrix m) {
  const Eigen::Index n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
  Rational det(1);
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index pivot = c;
    while (pivot < n && m(pivot, c).is_zero()) ++pivot;
    if (pivot == n) return Rational(0);
    if (pivot != c) {
      m.row(pivot).swap(m.row(c));
      det = -det;
    }
    det *= m(c, c);
    const Rational inv = m(c, c).inverse();
    for (Eigen::Index r = c + 1; r < n; ++r) {
      if (m(r, c).is_zero()) continue;
      const Rational factor = m(r, c) * inv;
      for (Eigen::Index k = c; k < n; ++k) m(r, k) -= factor * m(c, k);
    }
  }
  return det;
}

RationalMatrix inverse(const RationalMatrix& m) {
  const Eigen::Index n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("inverse of non-square matrix");
  RationalMatrix a = m;
  RationalMatrix inv = RationalMatrix::Identity(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index pivot = c;
    while (pivot < n && a(pivot, c).is_zero()) ++pivot;
    if (pivot == n) throw std::domain_error("singular matrix");
    a.row(pivot).swap(a.row(c));
    inv.row(pivot).swap(inv.row(c));
    const Rational p = a(c, c).inverse();
    a.row(c) *= p;
    inv.row(c) *= p;
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == c || a(r, c).is_zero()) continue;
      const Rational factor = a(r, c);
      a.row(r) -= factor * a.row(c);
      inv.row(r) -= factor * inv.row(c);
    }
  }
  return inv;
}

}  // namespace stackel

std::size_t std::hash<stackel::Rational>::operator()(const stackel::Rational& r) const noexcept {
  return std::hash<std::string>{}(r.str());
}
