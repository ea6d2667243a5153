#include "stackel/phase_poly.hpp"

#include <sstream>
#include <stdexcept>

namespace stackel {

PhasePoly::PhasePoly(int dof) : dof_(dof) {
  if (dof < 1 || dof > kMaxDof) throw std::invalid_argument("phase-space dimension out of range");
}

PhasePoly PhasePoly::constant(int dof, const Rational& c) {
  PhasePoly r(dof);
  r.add_term(Exponent{}, c);
  return r;
}

PhasePoly PhasePoly::q(int dof, int alpha) {
  PhasePoly r(dof);
  Exponent e{};
  e[alpha] = 1;
  r.add_term(e, Rational(1));
  return r;
}

PhasePoly PhasePoly::p(int dof, int alpha) {
  PhasePoly r(dof);
  Exponent e{};
  e[dof + alpha] = 1;
  r.add_term(e, Rational(1));
  return r;
}

int PhasePoly::degree() const {
  int best = -1;
  for (const auto& [e, c] : terms_) {
    int d = 0;
    for (int v = 0; v < num_vars(); ++v) d += e[v];
    best = std::max(best, d);
  }
  return best;
}

Rational PhasePoly::coefficient(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

void PhasePoly::add_term(const Exponent& e, const Rational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (inserted) return;
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

PhasePoly PhasePoly::derivative(int var) const {
  PhasePoly r(dof_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponent d = e;
    --d[var];
    r.terms_.emplace(d, c * Rational(e[var]));
  }
  return r;
}

Rational PhasePoly::evaluate(std::span<const Rational> q, std::span<const Rational> p) const {
  Rational sum(0);
  for (const auto& [e, c] : terms_) {
    Rational m = c;
    for (int a = 0; a < dof_; ++a) {
      if (e[a]) m *= q[a].pow(e[a]);
      if (e[dof_ + a]) m *= p[a].pow(e[dof_ + a]);
    }
    sum += m;
  }
  return sum;
}

double PhasePoly::evaluate(std::span<const double> q, std::span<const double> p) const {
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    double m = c.to_double();
    for (int a = 0; a < dof_; ++a) {
      for (int k = 0; k < e[a]; ++k) m *= q[a];
      for (int k = 0; k < e[dof_ + a]; ++k) m *= p[a];
    }
    sum += m;
  }
  return sum;
}

std::optional<Rational> PhasePoly::evaluate_on_root_branch(std::span<const Rational> q_squared,
                                                           std::span<const Rational> ratio) const {
  Rational sum(0);
  for (const auto& [e, c] : terms_) {
    Rational m = c;
    for (int a = 0; a < dof_; ++a) {
      const int total = e[a] + e[dof_ + a];
      if (total % 2 != 0) return std::nullopt;
      if (total) m *= q_squared[a].pow(total / 2);
      if (e[dof_ + a]) m *= ratio[a].pow(e[dof_ + a]);
    }
    sum += m;
  }
  return sum;
}

void PhasePoly::check_same(const PhasePoly& o) const {
  if (dof_ != o.dof_) throw std::invalid_argument("polynomials over different variable sets");
}

PhasePoly& PhasePoly::operator+=(const PhasePoly& o) {
  check_same(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

PhasePoly& PhasePoly::operator-=(const PhasePoly& o) {
  check_same(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

PhasePoly& PhasePoly::operator*=(const Rational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

PhasePoly operator*(const PhasePoly& a, const PhasePoly& b) {
  a.check_same(b);
  PhasePoly r(a.dof_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      PhasePoly::Exponent e{};
      for (int v = 0; v < a.num_vars(); ++v) e[v] = static_cast<std::uint8_t>(ea[v] + eb[v]);
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

PhasePoly PhasePoly::operator-() const {
  PhasePoly r(*this);
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

PhasePoly PhasePoly::pow(int e) const {
  if (e < 0) throw std::invalid_argument("negative polynomial power");
  PhasePoly r = constant(dof_, Rational(1));
  for (int k = 0; k < e; ++k) r = r * *this;
  return r;
}

std::string PhasePoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << (c.sign() < 0 ? " - " : " + ");
    else if (c.sign() < 0) os << "-";
    first = false;
    const Rational mag = c.abs();
    bool has_var = false;
    std::ostringstream mono;
    for (int v = 0; v < num_vars(); ++v) {
      if (!e[v]) continue;
      if (has_var) mono << "*";
      mono << (v < dof_ ? "q" : "p") << (v < dof_ ? v : v - dof_);
      if (e[v] > 1) mono << "^" << int(e[v]);
      has_var = true;
    }
    if (!has_var) os << mag;
    else if (mag == Rational(1)) os << mono.str();
    else os << mag << "*" << mono.str();
  }
  return os.str();
}

PhasePoly poisson_bracket(const PhasePoly& P, const PhasePoly& Q) {
  if (P.dof() != Q.dof()) throw std::invalid_argument("polynomials over different variable sets");
  const int d = P.dof();
  PhasePoly r(d);
  for (int a = 0; a < d; ++a) {
    const PhasePoly Pq = P.derivative(a);
    const PhasePoly Pp = P.derivative(d + a);
    if (!Pq.is_zero()) {
      const PhasePoly Qp = Q.derivative(d + a);
      if (!Qp.is_zero()) r += Pq * Qp;
    }
    if (!Pp.is_zero()) {
      const PhasePoly Qq = Q.derivative(a);
      if (!Qq.is_zero()) r -= Pp * Qq;
    }
  }
  return r;
}

PhasePoly scale_variables(const PhasePoly& P, std::span<const Rational> q_scale,
                          std::span<const Rational> p_scale) {
  const int d = P.dof();
  PhasePoly r(d);
  for (const auto& [e, c] : P.terms()) {
    Rational m = c;
    for (int a = 0; a < d; ++a) {
      if (e[a]) m *= q_scale[a].pow(e[a]);
      if (e[d + a]) m *= p_scale[a].pow(e[d + a]);
    }
    r.add_term(e, m);
  }
  return r;
}

}  // namespace stackel
