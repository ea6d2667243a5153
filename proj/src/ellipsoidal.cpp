#include "stackel/ellipsoidal.hpp"

#include <cmath>

#include "stackel/errors.hpp"
#include "stackel/parallel.hpp"

namespace stackel {

namespace {

using Poly = std::vector<Rational>;  // coefficient of lambda^k at index k

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly r(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

Rational power(const Rational& x, int e) {
  Rational r(1);
  if (e < 0) return power(x.inverse(), -e);
  for (int k = 0; k < e; ++k) r *= x;
  return r;
}

bool is_identity(const RationalMatrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      if (m(r, c) != Rational(r == c ? 1 : 0)) return false;
  return true;
}

}  // namespace

SymFuncs sym_funcs(std::span<const Rational> x) {
  SymFuncs f;
  f.sigma = elementary_symmetric<Rational>(x, Rational(1));
  for (std::size_t i = 0; i < x.size(); ++i)
    f.sigma_without.push_back(elementary_symmetric_without<Rational>(x, i, Rational(1)));
  return f;
}

void check_chart(const SemiAxes& a, std::span<const Rational> x) {
  if (static_cast<int>(x.size()) != a.n())
    throw ChartError("expected " + std::to_string(a.n()) + " coordinates, got " +
                     std::to_string(x.size()));
  for (int i = 0; i < a.n(); ++i)
    if (!(a[i] < x[i] && x[i] < a[i + 1]))
      throw ChartError("x^" + std::to_string(i + 1) + " = " + x[i].str() + " outside (" + a[i].str() +
                       ", " + a[i + 1].str() + ")");
}

std::vector<Rational> q_squared(const SemiAxes& a, std::span<const Rational> x) {
  check_chart(a, x);
  std::vector<Rational> q2;
  for (int al = 0; al < a.dof(); ++al) {
    Rational num(1), den(1);
    for (const auto& xi : x) num *= a[al] - xi;
    for (int b = 0; b < a.dof(); ++b)
      if (b != al) den *= a[al] - a[b];
    q2.push_back(num / den);
  }
  return q2;
}

std::vector<double> q_from_x(const SemiAxes& a, std::span<const Rational> x) {
  std::vector<double> q;
  for (const auto& s : q_squared(a, x)) q.push_back(std::sqrt(s.to_double()));
  return q;
}

std::vector<Rational> metric_coeffs(SystemKind s, const SemiAxes& a, std::span<const Rational> x) {
  check_chart(a, x);
  std::vector<Rational> g;
  for (std::size_t i = 0; i < x.size(); ++i) g.push_back(metric_coeff(s, a, x, i));
  return g;
}

StackelData stackel_matrices(SystemKind s, const SemiAxes& a, std::span<const Rational> x,
                             InverseForm form) {
  check_chart(a, x);
  const int n = a.n();
  StackelData d{s, RationalMatrix(n, n), RationalMatrix(n, n), metric_coeffs(s, a, x)};
  for (int i = 0; i < n; ++i)
    for (int k = 1; k <= n; ++k) d.A(i, k - 1) = quadratic_coeff(s, a, x, i, k);
  for (int col = 0; col < n; ++col) {
    const Rational& xk = x[col];
    const Rational base = Rational(1) / (Rational(4) * axes_polynomial(a, xk));
    Rational scale(1);
    int shift = 0;  // exponent n - i + shift
    if (form == InverseForm::Bare) {
      shift = -1;
    } else if (s == SystemKind::JacobiMoser) {
      scale = xk;
    } else if (s == SystemKind::DualMoser) {
      scale = xk.inverse();
    }
    for (int i = 1; i <= n; ++i) {
      const Rational sign(i % 2 ? -1 : 1);
      d.B(i - 1, col) = sign * scale * power(xk, n - i + shift) * base;
    }
  }
  return d;
}

std::vector<Rational> residue_identity_defect(std::span<const Rational> x, int i) {
  const int n = static_cast<int>(x.size());
  if (i < 1 || i > n) throw std::invalid_argument("residue identity index out of range");
  Poly total(n, Rational(0));
  for (int k = 0; k < n; ++k) {
    Poly prod{Rational(1)};
    Rational du(1);  // U'(x^k)
    for (int j = 0; j < n; ++j) {
      if (j == k) continue;
      prod = poly_mul(prod, Poly{-x[j], Rational(1)});
      du *= x[k] - x[j];
    }
    const Rational w = power(x[k], n - i) / du;
    for (std::size_t m = 0; m < prod.size(); ++m) total[m] += w * prod[m];
  }
  total[n - i] -= Rational(1);
  return total;
}

CotangentPoint sample_cotangent_point(Rng& rng, const SemiAxes& a) {
  CotangentPoint pt;
  pt.x = sample_chart_point(rng, a.values());
  for (int i = 0; i < a.n(); ++i) pt.xi.push_back(rng.small_rational(9, 7));
  return pt;
}

std::vector<Rational> integrals_Ik(SystemKind s, const SemiAxes& a, const CotangentPoint& pt) {
  check_chart(a, pt.x);
  std::vector<Rational> I;
  const std::span<const Rational> x = pt.x;
  for (int k = 1; k <= a.n(); ++k) {
    Rational v = potential_term(s, x, k);
    for (int i = 0; i < a.n(); ++i) v += quadratic_coeff(s, a, x, i, k) * pt.xi[i] * pt.xi[i];
    I.push_back(v);
  }
  return I;
}

std::vector<Rational> momentum_ratios(SystemKind s, const SemiAxes& a, const CotangentPoint& pt) {
  check_chart(a, pt.x);
  const std::span<const Rational> x = pt.x;
  std::vector<Rational> r;
  for (int al = 0; al < a.dof(); ++al) {
    Rational acc(0);
    for (int i = 0; i < a.n(); ++i) {
      const Rational g = s == SystemKind::JacobiMoser ? metric_coeff(s, a, x, i) : round_metric_coeff(a, x, i);
      acc += pt.xi[i] / (g * (a[al] - x[i]));
    }
    acc *= Rational(-1, 2);
    if (s == SystemKind::JacobiMoser) acc *= a[al];
    r.push_back(acc);
  }
  return r;
}

Rational pull_back(const PhasePoly& P, SystemKind s, const SemiAxes& a, const CotangentPoint& pt) {
  const auto v = P.evaluate_on_root_branch(q_squared(a, pt.x), momentum_ratios(s, a, pt));
  if (!v) throw Error("pullback depends on the square-root branch of q");
  return *v;
}

VerificationReport pullback_check(const SemiAxes& a, const CotangentPoint& pt) {
  const IntegralFamily fam = build_dual_moser(a);
  const SystemKind s = SystemKind::DualMoser;
  const std::span<const Rational> x = pt.x;
  const auto q2 = q_squared(a, x);
  VerificationReport rep;
  rep.title = "pullback/dual-moser";
  const std::string at = " at x=" + format_values(pt.x) + " xi=" + format_values(pt.xi);

  std::vector<Rational> F;
  for (int al = 0; al < a.dof(); ++al) {
    // Structural: every monomial pairs the signs of q_a and p_a.
    const auto v = fam.F[al].evaluate_on_root_branch(q2, momentum_ratios(s, a, pt));
    rep.add(point_check("dual-moser.pullback.branch-even[" + std::to_string(al) + "]",
                       "sign-branch", v.has_value()));
    if (!v) return rep;
    F.push_back(*v);
    Rational separated(0);
    for (int i = 0; i < a.n(); ++i)
      separated += x[i] * pt.xi[i] * pt.xi[i] / (round_metric_coeff(a, x, i) * (a[al] - x[i]));
    separated *= a[al] * q2[al];
    rep.add(point_check("dual-moser.pullback.separated-form[" + std::to_string(al) + "]",
                       "integrals-on-sphere-bundle", F.back() == separated,
                       "ambient " + F.back().str() + " vs separated " + separated.str() + at));
  }
  Rational sum(0), sum_a(0), sum_a2(0), kinetic(0);
  for (int al = 0; al < a.dof(); ++al) {
    sum += F[al];
    sum_a += F[al] / a[al];
    sum_a2 += F[al] / (a[al] * a[al]);
  }
  for (int i = 0; i < a.n(); ++i) kinetic += x[i] * pt.xi[i] * pt.xi[i] / round_metric_coeff(a, x, i);
  const Rational H = pull_back(fam.H, s, a, pt);
  const Rational pq = pull_back(ambient_basics(a).pq, s, a, pt);
  rep.add(point_check("dual-moser.pullback.constraint", "sign-branch", pq.is_zero(),
                     "sum p q = " + pq.str() + at));
  rep.add(point_check("dual-moser.pullback.sum", "joachimsthal-invariant", sum == kinetic,
                     sum.str() + " vs " + kinetic.str() + at));
  rep.add(point_check("dual-moser.pullback.sum-over-a", "sum-relations", sum_a.is_zero(),
                     sum_a.str() + at));
  rep.add(point_check("dual-moser.pullback.sum-over-a2", "sum-relations", sum_a2 == Rational(-2) * H,
                     sum_a2.str() + " vs -2H = " + (Rational(-2) * H).str() + at));
  return rep;
}

VerificationReport hamiltonian_check(SystemKind s, const SemiAxes& a, const CotangentPoint& pt) {
  const IntegralFamily fam = build_family(s, a);
  const std::string sys(system_tag(s));
  const auto I = integrals_Ik(s, a, pt);
  const Rational H = pull_back(fam.H, s, a, pt);
  const int n = a.n();
  const SymFuncs sa = sym_funcs(a.values());
  VerificationReport rep;
  rep.title = "hamiltonian/" + sys;
  const std::string at = " at x=" + format_values(pt.x) + " xi=" + format_values(pt.xi);

  Rational sumF(0);
  for (const auto& f : fam.F) sumF += pull_back(f, s, a, pt);
  const AmbientBasics basics = ambient_basics(a);

  switch (s) {
    case SystemKind::JacobiMoser: {
      rep.add(point_check(sys + ".hamiltonian", "hamiltonians", H == I[0] / Rational(2),
                         "H = " + H.str() + ", I_1/2 = " + (I[0] / Rational(2)).str() + at));
      rep.add(point_check(sys + ".hamiltonian.sum", "hamiltonians", sumF == I[0], sumF.str() + at));
      PhasePoly pq_over_a(a.dof());
      for (int al = 0; al < a.dof(); ++al)
        pq_over_a += a[al].inverse() * (PhasePoly::p(a.dof(), al) * PhasePoly::q(a.dof(), al));
      rep.add(point_check(sys + ".pullback.constraint", "sign-branch",
                         pull_back(pq_over_a, s, a, pt).is_zero()));
      break;
    }
    case SystemKind::Neumann: {
      const Rational expect = I[0] / Rational(2) + sa.sigma[1] / Rational(2);
      rep.add(point_check(sys + ".hamiltonian", "hamiltonians", H == expect,
                         "H = " + H.str() + ", (I_1 + sigma_1(a))/2 = " + expect.str() + at));
      rep.add(point_check(sys + ".hamiltonian.sum", "hamiltonians", sumF == Rational(1), sumF.str() + at));
      rep.add(point_check(sys + ".pullback.constraint", "sign-branch",
                         pull_back(basics.pq, s, a, pt).is_zero()));
      break;
    }
    case SystemKind::DualMoser: {
      const Rational prod_a = sa.sigma[n + 1];
      Rational B(1);
      for (const auto& v : pt.x) B *= v;
      B /= prod_a;
      rep.add(point_check(sys + ".normalization.table.hamiltonian", "hamiltonians",
                         H == I[n - 1] / (Rational(2) * prod_a),
                         "H = " + H.str() + ", I_n/(2 sigma_{n+1}(a)) = " +
                             (I[n - 1] / (Rational(2) * prod_a)).str() + at));
      rep.add(point_check(sys + ".normalization.table.sum", "integrals-on-sphere-bundle", sumF == I[0],
                         "sum F = " + sumF.str() + ", I_1 = " + I[0].str() + at));
      // The variant carrying an extra 1/B in every A^i_k.
      CheckResult lh = point_check(sys + ".normalization.literal.hamiltonian", "hamiltonians",
                                  H == I[n - 1] / (Rational(2) * prod_a * B),
                                  "I_n/(2 B sigma_{n+1}(a)) = " + (I[n - 1] / (Rational(2) * prod_a * B)).str());
      lh.expected = Expect::Fail;
      rep.add(std::move(lh));
      CheckResult ls = point_check(sys + ".normalization.literal.sum", "integrals-on-sphere-bundle",
                                  sumF == I[0] / B, "I_1/B = " + (I[0] / B).str());
      ls.expected = Expect::Fail;
      rep.add(std::move(ls));
      rep.add(point_check(sys + ".conformal-factor", "ellipsoidal-coordinates",
                         B == pull_back(basics.B, s, a, pt), "B = " + B.str()));
      break;
    }
  }
  return rep;
}

Rational separated_bracket(SystemKind s, const SemiAxes& a, const CotangentPoint& pt, int k, int l,
                           const Rational& mu, const Rational& nu) {
  check_chart(a, pt.x);
  const int n = a.n();
  const auto xj = coordinate_jets(pt.x, 1);
  const std::span<const RJet> x = xj;
  const std::span<const Rational> xr = pt.x;
  auto dx = [&](int kk, int m) {  // d I_kk / d x^m
    RJet pot = potential_term(s, x, kk) - dual_moser_potential(x, kk, mu, nu);
    Rational v = pot.derivative(m).value();
    for (int i = 0; i < n; ++i)
      v += quadratic_coeff(s, a, x, i, kk).derivative(m).value() * pt.xi[i] * pt.xi[i];
    return v;
  };
  auto dxi = [&](int kk, int m) { return Rational(2) * quadratic_coeff(s, a, xr, m, kk) * pt.xi[m]; };
  Rational r(0);
  for (int m = 0; m < n; ++m) r += dx(k, m) * dxi(l, m) - dxi(k, m) * dx(l, m);
  return r;
}

std::vector<Rational> separated_potentials(const SemiAxes& a, std::span<const Rational> x,
                                           const Rational& mu, const Rational& nu) {
  const StackelData d = stackel_matrices(SystemKind::DualMoser, a, x);
  const int n = a.n();
  std::vector<Rational> f(n, Rational(0));
  for (int i = 0; i < n; ++i)
    for (int k = 1; k <= n; ++k) f[i] += d.B(k - 1, i) * dual_moser_potential(x, k, mu, nu);
  return f;
}

Rational quoted_separated_potential(const SemiAxes& a, const Rational& xi, const Rational& mu,
                                    const Rational& nu) {
  return power(xi, a.n() - 1) * (mu + nu * xi) / (Rational(4) * axes_polynomial(a, xi));
}

VerificationReport potentials_check(const SemiAxes& a, const CotangentPoint& pt, const Rational& mu,
                                    const Rational& nu) {
  const SystemKind s = SystemKind::DualMoser;
  const int n = a.n();
  const std::span<const Rational> x = pt.x;
  check_chart(a, x);
  VerificationReport rep;
  rep.title = "potentials/dual-moser";
  const std::string at = " at x=" + format_values(pt.x) + " mu=" + mu.str() + " nu=" + nu.str();

  const auto fB = separated_potentials(a, x, mu, nu);
  bool quoted_ok = true, derived_ok = true, negated_ok = true;
  std::string diff;
  for (int k = 1; k <= n; ++k) {
    const Rational v = dual_moser_potential(x, k, mu, nu);
    Rational quoted(0), derived(0);
    for (int i = 0; i < n; ++i) {
      const Rational A = quadratic_coeff(s, a, x, i, k);
      quoted += A * quoted_separated_potential(a, x[i], mu, nu);
      derived += A * fB[i];
    }
    quoted_ok = quoted_ok && quoted == v;
    negated_ok = negated_ok && quoted == -v;
    derived_ok = derived_ok && derived == v;
    if (k == 1) diff = "v_1 = " + v.str() + ", sum A f (quoted) = " + quoted.str();
  }
  CheckResult q = point_check("dual-moser.potentials.quoted-form", "separable-potentials", quoted_ok,
                             diff + at);
  q.expected = Expect::Info;
  rep.add(std::move(q));
  rep.add(point_check("dual-moser.potentials.quoted-form-negated", "separable-potentials", negated_ok,
                     "v_k = -sum_i A^i_k (x^i)^{n-1}(mu + nu x^i)/(4V(x^i))" + at));
  rep.add(point_check("dual-moser.potentials.separated-form", "separable-potentials", derived_ok,
                     "v_k = sum_i A^i_k f_i with f = B v" + at));

  // f_i = (B v)_i must not move when another coordinate does.
  bool local = true;
  for (int j = 0; j < n && local; ++j) {
    std::vector<Rational> moved(pt.x);
    moved[j] = (moved[j] + a[j + 1]) / Rational(2);
    const auto f2 = separated_potentials(a, moved, mu, nu);
    for (int i = 0; i < n; ++i)
      if (i != j && f2[i] != fB[i]) local = false;
  }
  rep.add(point_check("dual-moser.potentials.staeckel-property", "separable-potentials", local, at));

  bool inv = true;
  for (int k = 1; k <= n; ++k)
    for (int l = k + 1; l <= n; ++l)
      if (!separated_bracket(s, a, pt, k, l, mu, nu).is_zero()) inv = false;
  rep.add(point_check("dual-moser.potentials.involution", "separable-potentials", inv, at));
  return rep;
}

VerificationReport verify_stackel(SystemKind s, const SemiAxes& a, int samples, std::uint64_t seed) {
  const std::string sys(system_tag(s));
  const int n = a.n();
  const Rng root(seed);
  std::vector<VerificationReport> parts(samples);
  parallel_for(samples, [&](std::size_t idx) {
    Rng rng = root.split(idx);
    const CotangentPoint pt = sample_cotangent_point(rng, a);
    const std::span<const Rational> x = pt.x;
    const std::string at = " at x=" + format_values(pt.x);
    VerificationReport& rep = parts[idx];

    const auto q2 = q_squared(a, x);
    Rational qsum(0), qB(0);
    bool residues_vanish = true;
    for (int al = 0; al < a.dof(); ++al) {
      qsum += q2[al];
      qB += q2[al] / a[al];
    }
    for (int i = 0; i < n; ++i) {
      Rational r(0);
      for (int al = 0; al < a.dof(); ++al) r += q2[al] / (a[al] - x[i]);
      residues_vanish = residues_vanish && r.is_zero();
    }
    rep.add(point_check(sys + ".chart.sphere", "ellipsoidal-coordinates", qsum == Rational(1), at));
    rep.add(point_check(sys + ".chart.orthogonality", "ellipsoidal-coordinates", residues_vanish, at));
    Rational prod_x(1);
    for (const auto& v : x) prod_x *= v;
    rep.add(point_check(sys + ".chart.conformal-factor", "ellipsoidal-coordinates",
                       qB == prod_x / sym_funcs(a.values()).sigma[n + 1], at));

    const StackelData table = stackel_matrices(s, a, x, InverseForm::Table);
    bool positive = true;
    for (const auto& g : table.g) positive = positive && g.sign() > 0;
    rep.add(point_check(sys + ".metric.positive", "staeckel-metric", positive, at));
    rep.add(point_check(sys + ".staeckel.inverse.table", "staeckel-matrix", is_identity(table.B * table.A),
                       "B^i_k = s_k (-1)^i (x^k)^{n-i} / (4V(x^k))" + at));
    CheckResult bare = point_check(sys + ".staeckel.inverse.bare", "staeckel-matrix",
                                  is_identity(stackel_matrices(s, a, x, InverseForm::Bare).B * table.A),
                                  "B^i_k = (-1)^i (x^k)^{n-i-1} / (4V(x^k))" + at);
    bare.expected = s == SystemKind::DualMoser ? Expect::Pass : Expect::Fail;
    rep.add(std::move(bare));
    rep.add(point_check(sys + ".staeckel.independence", "staeckel-matrix",
                       !determinant(table.A).is_zero(), at));

    // Staeckel property of the exact inverse: column k moves only with x^k.
    const RationalMatrix Binv = inverse(table.A);
    bool local = true;
    for (int j = 0; j < n; ++j) {
      std::vector<Rational> moved(pt.x);
      moved[j] = (moved[j] + a[j]) / Rational(2);
      const RationalMatrix B2 = inverse(stackel_matrices(s, a, moved).A);
      for (int col = 0; col < n; ++col)
        if (col != j)
          for (int r = 0; r < n; ++r) local = local && B2(r, col) == Binv(r, col);
    }
    rep.add(point_check(sys + ".staeckel.separation", "staeckel-matrix", local, at));

    bool inv = true;
    for (int k = 1; k <= n; ++k)
      for (int l = k + 1; l <= n; ++l) inv = inv && separated_bracket(s, a, pt, k, l).is_zero();
    rep.add(point_check(sys + ".separated.involution", "staeckel-integrals", inv,
                       at + " xi=" + format_values(pt.xi)));

    rep.merge(hamiltonian_check(s, a, pt));
    if (s == SystemKind::DualMoser) rep.merge(pullback_check(a, pt));
  });
  VerificationReport out = fold_samples("staeckel/" + sys, parts);

  Rng extra = root.split(samples);
  const std::vector<Rational> x0 = sample_chart_point(extra, a.values());
  for (int i = 1; i <= n; ++i) {
    const auto defect = residue_identity_defect(x0, i);
    bool zero = true;
    for (const auto& c : defect) zero = zero && c.is_zero();
    out.add(point_check(sys + ".residue-identity[" + std::to_string(i) + "]", "residue-identity", zero,
                       "polynomial identity in lambda at x=" + format_values(x0)));
  }
  return out;
}

}  // namespace stackel
