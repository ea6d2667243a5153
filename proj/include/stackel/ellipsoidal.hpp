#pragma once

// Ellipsoidal coordinates x^1..x^n on S^n and the separated (Staeckel) form
// of the three systems.  Coefficient formulas are templates over the scalar
// so that the same expression serves exact values (Rational) and exact
// Taylor expansions (RJet).

#include <optional>
#include <span>
#include <vector>

#include "stackel/ambient.hpp"
#include "stackel/jet.hpp"
#include "stackel/rational.hpp"
#include "stackel/report.hpp"
#include "stackel/sampling.hpp"

namespace stackel {

/// sigma_0..sigma_m of m values: prod_j (lambda - x_j) = sum_k (-1)^k lambda^{m-k} sigma_k.
template <class T>
std::vector<T> elementary_symmetric(std::span<const T> x, const T& one) {
  std::vector<T> s(x.size() + 1, one * Rational(0));
  s[0] = one;
  for (std::size_t j = 0; j < x.size(); ++j)
    for (std::size_t k = j + 1; k >= 1; --k) s[k] = s[k] + s[k - 1] * x[j];
  return s;
}

/// sigma^i_0..sigma^i_{m-1}: symmetric functions of x with entry i removed.
template <class T>
std::vector<T> elementary_symmetric_without(std::span<const T> x, std::size_t i, const T& one) {
  std::vector<T> rest;
  for (std::size_t j = 0; j < x.size(); ++j)
    if (j != i) rest.push_back(x[j]);
  return elementary_symmetric<T>(rest, one);
}

/// sigma_k with the convention sigma_k = 0 outside [0, m].
template <class T>
T sigma_at(const std::vector<T>& s, int k, const T& one) {
  if (k < 0 || k >= static_cast<int>(s.size())) return one * Rational(0);
  return s[k];
}

struct SymFuncs {
  std::vector<Rational> sigma;                       // sigma_0..sigma_n
  std::vector<std::vector<Rational>> sigma_without;  // [i][k] = sigma^i_k, k = 0..n-1
};
SymFuncs sym_funcs(std::span<const Rational> x);

/// Throws ChartError unless a_0 < x^1 < a_1 < ... < x^n < a_n.
void check_chart(const SemiAxes& a, std::span<const Rational> x);

/// q_a^2 = prod_i (a_a - x^i) / prod_{b != a} (a_a - a_b).
std::vector<Rational> q_squared(const SemiAxes& a, std::span<const Rational> x);
/// Positive square roots of q_squared, in double precision.
std::vector<double> q_from_x(const SemiAxes& a, std::span<const Rational> x);

/// V(lambda) = prod_a (lambda - a_a).
template <class T>
T axes_polynomial(const SemiAxes& a, const T& lambda) {
  T v = lambda - a[0];
  for (int k = 1; k < a.dof(); ++k) v = v * (lambda - a[k]);
  return v;
}

/// Round-sphere coefficient  -prod_{j != i}(x^i - x^j) / (4 V(x^i)).
template <class T>
T round_metric_coeff(const SemiAxes& a, std::span<const T> x, std::size_t i) {
  T num = constant_like(x[i], Rational(-1));
  for (std::size_t j = 0; j < x.size(); ++j)
    if (j != i) num = num * (x[i] - x[j]);
  return num / (axes_polynomial(a, x[i]) * Rational(4));
}

/// g_i of the metric carried by I_1: x^i g~_i (Jacobi-Moser), g~_i (Neumann), g~_i / x^i (dual Moser).
template <class T>
T metric_coeff(SystemKind s, const SemiAxes& a, std::span<const T> x, std::size_t i) {
  const T round = round_metric_coeff(a, x, i);
  switch (s) {
    case SystemKind::JacobiMoser: return x[i] * round;
    case SystemKind::Neumann: return round;
    case SystemKind::DualMoser: return round / x[i];
  }
  return round;
}

/// A^i_k = g^i sigma^i_{k-1}, k = 1..n.
template <class T>
T quadratic_coeff(SystemKind s, const SemiAxes& a, std::span<const T> x, std::size_t i, int k) {
  const T one = constant_like(x[0], Rational(1));
  const auto sw = elementary_symmetric_without<T>(x, i, one);
  return sigma_at(sw, k - 1, one) / metric_coeff(s, a, x, i);
}

/// Degree-zero part of I_k: -sigma_k(x) for Neumann, zero otherwise.
template <class T>
T potential_term(SystemKind s, std::span<const T> x, int k) {
  const T one = constant_like(x[0], Rational(1));
  if (s != SystemKind::Neumann) return one * Rational(0);
  return -sigma_at(elementary_symmetric<T>(x, one), k, one);
}

/// v_k = mu sigma_k + nu (sigma_1 sigma_k - sigma_{k+1}).
template <class T>
T dual_moser_potential(std::span<const T> x, int k, const Rational& mu, const Rational& nu) {
  const T one = constant_like(x[0], Rational(1));
  const auto s = elementary_symmetric<T>(x, one);
  return sigma_at(s, k, one) * mu + (s[1] * sigma_at(s, k, one) - sigma_at(s, k + 1, one)) * nu;
}

std::vector<Rational> metric_coeffs(SystemKind s, const SemiAxes& a, std::span<const Rational> x);

struct StackelData {
  SystemKind system;
  RationalMatrix A;  // A(i, k-1) = A^i_k, row = coordinate
  RationalMatrix B;  // B(k-1, i) = B^k_i(x^i), column = coordinate
  std::vector<Rational> g;
};

/// Exponent convention for the inverse matrix.
enum class InverseForm {
  Table,  // s_k (-1)^i (x^k)^{n-i} / (4 V(x^k)) with s_k = x^k, 1, 1/x^k per system
  Bare,   // (-1)^i (x^k)^{n-i-1} / (4 V(x^k)) for every system
};

StackelData stackel_matrices(SystemKind s, const SemiAxes& a, std::span<const Rational> x,
                             InverseForm form = InverseForm::Table);

/// sum_k (x^k)^{n-i}/U'(x^k) prod_{j != k}(lambda - x^j) - lambda^{n-i} as
/// coefficient vector in lambda (index = power); all zero when the identity holds.
std::vector<Rational> residue_identity_defect(std::span<const Rational> x, int i);

struct CotangentPoint {
  std::vector<Rational> x;
  std::vector<Rational> xi;
};
CotangentPoint sample_cotangent_point(Rng& rng, const SemiAxes& a);

/// I_1..I_n with potential terms included.
std::vector<Rational> integrals_Ik(SystemKind s, const SemiAxes& a, const CotangentPoint& pt);

/// Ambient momenta on the root branch: p_a = q_a r_a.  Returns the ratios r_a.
///  dual Moser / Neumann:  r_a = -1/2 sum_i g~^i xi_i / (a_a - x^i)
///  Jacobi-Moser (p = a v): r_a = -1/2 a_a sum_i g^i xi_i / (a_a - x^i)
std::vector<Rational> momentum_ratios(SystemKind s, const SemiAxes& a, const CotangentPoint& pt);

/// Ambient polynomial at the point of T*S^n over (x, xi).  Throws when the
/// value depends on the square-root branch of some q_a.
Rational pull_back(const PhasePoly& P, SystemKind s, const SemiAxes& a, const CotangentPoint& pt);

/// Dual Moser: ambient F_a equals a_a q_a^2 sum_i x^i g~^i xi_i^2/(a_a - x^i), with the sum rules.
VerificationReport pullback_check(const SemiAxes& a, const CotangentPoint& pt);

/// Hamiltonian identities of the separated integrals and the two candidate
/// normalisations of the dual Moser coefficients.
VerificationReport hamiltonian_check(SystemKind s, const SemiAxes& a, const CotangentPoint& pt);

/// {I_k, I_l} in separated coordinates at (x, xi); exact.
Rational separated_bracket(SystemKind s, const SemiAxes& a, const CotangentPoint& pt, int k, int l,
                           const Rational& mu = Rational(0), const Rational& nu = Rational(0));

/// f_i = sum_k B^k_i v_k for the dual Moser matrix B, at x.
std::vector<Rational> separated_potentials(const SemiAxes& a, std::span<const Rational> x,
                                           const Rational& mu, const Rational& nu);

/// Quoted separated form (x^i)^{n-1} (mu + nu x^i) / (4 V(x^i)).
Rational quoted_separated_potential(const SemiAxes& a, const Rational& xi, const Rational& mu,
                                    const Rational& nu);

/// v_k against sum_i A^i_k f_i for the quoted f_i and for f_i = B v, Staeckel
/// property of f (f_i unchanged when x^j, j != i, moves), and involution of I_k - v_k.
VerificationReport potentials_check(const SemiAxes& a, const CotangentPoint& pt, const Rational& mu,
                                    const Rational& nu);

/// Staeckel certificate over `samples` random chart points.
VerificationReport verify_stackel(SystemKind s, const SemiAxes& a, int samples, std::uint64_t seed);

}  // namespace stackel
