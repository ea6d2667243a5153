#pragma once

// Polynomials in the canonical coordinates (q_0..q_n, p_0..p_n) of T*R^{n+1}.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stackel/rational.hpp"

namespace stackel {

inline constexpr int kMaxDof = 8;

class PhasePoly {
 public:
  /// Exponents of q_0..q_{dof-1} followed by p_0..p_{dof-1}.
  using Exponent = std::array<std::uint8_t, 2 * kMaxDof>;
  using Terms = std::map<Exponent, Rational>;

  explicit PhasePoly(int dof = 1);

  static PhasePoly constant(int dof, const Rational& c);
  static PhasePoly q(int dof, int alpha);
  static PhasePoly p(int dof, int alpha);

  int dof() const { return dof_; }
  int num_vars() const { return 2 * dof_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;
  const Terms& terms() const { return terms_; }
  Rational coefficient(const Exponent& e) const;

  /// Adds c * monomial(e); drops the entry when it cancels.
  void add_term(const Exponent& e, const Rational& c);

  /// Partial derivative in variable `var` (q_alpha is var alpha, p_alpha is dof + alpha).
  PhasePoly derivative(int var) const;

  Rational evaluate(std::span<const Rational> q, std::span<const Rational> p) const;
  double evaluate(std::span<const double> q, std::span<const double> p) const;

  /// Evaluates on the branch q_a = sqrt(q_squared[a]), p_a = q_a * ratio[a].
  /// Returns nullopt when some monomial has odd combined degree in (q_a, p_a),
  /// i.e. when the value would depend on the chosen square-root signs.
  std::optional<Rational> evaluate_on_root_branch(std::span<const Rational> q_squared,
                                                  std::span<const Rational> ratio) const;

  PhasePoly& operator+=(const PhasePoly& o);
  PhasePoly& operator-=(const PhasePoly& o);
  PhasePoly& operator*=(const Rational& c);

  friend PhasePoly operator+(PhasePoly a, const PhasePoly& b) { return a += b; }
  friend PhasePoly operator-(PhasePoly a, const PhasePoly& b) { return a -= b; }
  friend PhasePoly operator*(const PhasePoly& a, const PhasePoly& b);
  friend PhasePoly operator*(PhasePoly a, const Rational& c) { return a *= c; }
  friend PhasePoly operator*(const Rational& c, PhasePoly a) { return a *= c; }
  PhasePoly operator-() const;
  PhasePoly pow(int e) const;

  friend bool operator==(const PhasePoly& a, const PhasePoly& b) {
    return a.dof_ == b.dof_ && a.terms_ == b.terms_;
  }

  std::string str() const;

 private:
  void check_same(const PhasePoly& o) const;

  int dof_;
  Terms terms_;
};

/// {P,Q} = sum_a (dP/dq_a dQ/dp_a - dP/dp_a dQ/dq_a).
PhasePoly poisson_bracket(const PhasePoly& P, const PhasePoly& Q);

/// Substitutes q_a -> q_scale[a] q_a and p_a -> p_scale[a] p_a.
PhasePoly scale_variables(const PhasePoly& P, std::span<const Rational> q_scale,
                          std::span<const Rational> p_scale);

}  // namespace stackel
