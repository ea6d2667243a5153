#include "stackel/quantization.hpp"

#include <string>

#include "stackel/ellipsoidal.hpp"
#include "stackel/errors.hpp"
#include "stackel/parallel.hpp"

namespace stackel {

namespace {

template <class S>
Jet<S> zero_like(const Jet<S>& proto) {
  return Jet<S>::constant(proto.dim(), proto.order(), S(0), proto.base());
}

GJet complexify(const RJet& j) { return j.cast<GaussianRational>(); }

// d_i ln sqrt(G) = G^s_{si}
RJet log_volume_derivative(const CurvatureJets& c, int i) {
  RJet acc = zero_like(c.christoffel[0]);
  for (int s = 0; s < c.n; ++s) acc += c.christoffel[c.at(s, s, i)];
  return acc;
}

// (1/sqrt G) d_i (sqrt G g^{ij} d_j F)
RJet laplacian(const CurvatureJets& c, const RJet& F) {
  const int n = c.n;
  std::vector<RJet> dF;
  for (int j = 0; j < n; ++j) dF.push_back(F.derivative(j));
  RJet acc = zero_like(F.derivative(0).derivative(0));
  for (int i = 0; i < n; ++i) {
    const RJet lv = log_volume_derivative(c, i);
    for (int j = 0; j < n; ++j) {
      const RJet& gij = c.ginv[c.at(i, j)];
      if (gij.is_zero()) continue;
      acc += gij * dF[j].derivative(i) + (gij.derivative(i) + gij * lv) * dF[j];
    }
  }
  return acc;
}

RJet trace(const CurvatureJets& c, const QuadraticSymbol& P) {
  RJet acc = zero_like(P.P[0]);
  for (int i = 0; i < c.n; ++i)
    for (int j = 0; j < c.n; ++j)
      if (!P.P[i * c.n + j].is_zero()) acc += P.P[i * c.n + j] * c.g[c.at(i, j)];
  return acc;
}

std::vector<Rational> symmetric_of(std::span<const Rational> v) {
  return elementary_symmetric<Rational>(v, Rational(1));
}

// nabla_l T^{ab} at the base point, T given as jets.
Rational covariant_derivative(const CurvatureJets& c, const std::vector<RJet>& T, int l, int a, int b) {
  const int n = c.n;
  Rational v = T[a * n + b].derivative(l).value();
  for (int s = 0; s < n; ++s) {
    v += c.christoffel[c.at(a, l, s)].value() * T[s * n + b].value();
    v += c.christoffel[c.at(b, l, s)].value() * T[a * n + s].value();
  }
  return v;
}

// W^k = nabla_m Q^{km} as jets.
std::vector<RJet> divergence(const CurvatureJets& c, const std::vector<RJet>& Q) {
  const int n = c.n;
  std::vector<RJet> W;
  for (int k = 0; k < n; ++k) {
    RJet w = zero_like(Q[0].derivative(0));
    for (int m = 0; m < n; ++m) {
      w += Q[k * n + m].derivative(m);
      for (int s = 0; s < n; ++s)
        w += c.christoffel[c.at(k, m, s)] * Q[s * n + m] + c.christoffel[c.at(m, m, s)] * Q[k * n + s];
    }
    W.push_back(std::move(w));
  }
  return W;
}

// X^{[jk]} = (X^{jk} - X^{kj}) / 2
RationalMatrix antisymmetrize(const RationalMatrix& X) {
  RationalMatrix out = X;
  for (int j = 0; j < X.rows(); ++j)
    for (int k = 0; k < X.cols(); ++k) out(j, k) = (X(j, k) - X(k, j)) * Rational(1, 2);
  return out;
}

// P^{l[j} nabla_l nabla_m Q^{k]m} + P^{l[j} R^{k]}_{m,nl} Q^{mn}, before antisymmetrization.
RationalMatrix b_half(const CurvatureJets& c, const std::vector<RJet>& P, const std::vector<RJet>& Q) {
  const int n = c.n;
  const std::vector<RJet> W = divergence(c, Q);
  RationalMatrix X = RationalMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      Rational acc;
      for (int l = 0; l < n; ++l) {
        const Rational& plj = P[l * n + j].value();
        if (plj.is_zero()) continue;
        Rational nabla_w = W[k].derivative(l).value();
        for (int s = 0; s < n; ++s) nabla_w += c.christoffel[c.at(k, l, s)].value() * W[s].value();
        acc += plj * nabla_w;
        for (int m = 0; m < n; ++m)
          for (int q = 0; q < n; ++q)
            acc += plj * c.riemann[c.at(k, m, q, l)].value() * Q[m * n + q].value();
      }
      X(j, k) = acc;
    }
  return X;
}

bool is_zero_matrix(const RationalMatrix& M) {
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j)
      if (!M(i, j).is_zero()) return false;
  return true;
}

bool is_antisymmetric(const RationalMatrix& M) {
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j)
      if (M(i, j) != -M(j, i)) return false;
  return true;
}

std::vector<Rational> values(std::span<const RJet> jets) {
  std::vector<Rational> v;
  for (const auto& j : jets) v.push_back(j.value());
  return v;
}

std::string pair_tag(int k, int l) { return "[" + std::to_string(k) + "," + std::to_string(l) + "]"; }

template <class Body>
VerificationReport sweep_points(std::string title, const SemiAxes& a, int points, std::uint64_t seed, Body body) {
  const Rng root(seed);
  std::vector<VerificationReport> parts(points);
  parallel_for(points, [&](std::size_t idx) {
    Rng rng = root.split(idx);
    const std::vector<Rational> x = sample_chart_point(rng, a.values());
    body(x, rng, parts[idx]);
  });
  return fold_samples(std::move(title), parts);
}

CheckResult expecting(CheckResult c, Expect e) {
  c.expected = e;
  return c;
}

}  // namespace

QuantCoefficients coefficients(int n) {
  if (n < 3) throw NotApplicableError("conformal quantization coefficients undefined for n = " + std::to_string(n));
  QuantCoefficients q;
  q.n = n;
  const Rational n2(n * n);
  q.c1 = n2 / Rational(8 * (n + 1) * (n + 2));
  q.c2 = n2 / Rational(4 * (n + 1) * (n - 2));
  q.c3 = -n2 / Rational(2 * (n * n - 1) * (n * n - 4));
  q.c4 = Rational(-2 * (n + 1)) * q.c1 + Rational(n - 1) * q.c2 + Rational(n * (n - 1)) * q.c3;
  q.c5 = Rational(2 * (n + 2)) * q.c1 - Rational(n - 2) * q.c2;
  q.c6 = Rational(-2) * q.c1 + q.c2 + Rational(2 * (n - 1)) * q.c3;
  return q;
}

DiffOp::DiffOp(int n, const GJet& proto)
    : n_(n), a2_(static_cast<std::size_t>(n * n), zero_like(proto)), a1_(n, zero_like(proto)), a0_(zero_like(proto)) {}

int DiffOp::order() const {
  for (const auto& c : a2_)
    if (!c.is_zero()) return 2;
  for (const auto& c : a1_)
    if (!c.is_zero()) return 1;
  return a0_.is_zero() ? -1 : 0;
}

GJet DiffOp::apply(const GJet& f) const {
  const int ord = order();
  if (ord < 0) return zero_like(f);
  GJet out = zero_like(f).truncated(f.order() - ord);
  if (!a0_.is_zero()) out += a0_ * f;
  if (ord == 0) return out;
  for (int i = 0; i < n_; ++i) {
    const GJet di = f.derivative(i);
    if (!a1_[i].is_zero()) out += a1_[i] * di;
    if (ord < 2) continue;
    for (int j = 0; j < n_; ++j)
      if (!a2_[i * n_ + j].is_zero()) out += a2_[i * n_ + j] * di.derivative(j);
  }
  return out;
}

DiffOp& DiffOp::operator+=(const DiffOp& o) {
  for (std::size_t k = 0; k < a2_.size(); ++k) a2_[k] += o.a2_[k];
  for (std::size_t k = 0; k < a1_.size(); ++k) a1_[k] += o.a1_[k];
  a0_ += o.a0_;
  return *this;
}

DiffOp& DiffOp::operator-=(const DiffOp& o) {
  for (std::size_t k = 0; k < a2_.size(); ++k) a2_[k] -= o.a2_[k];
  for (std::size_t k = 0; k < a1_.size(); ++k) a1_[k] -= o.a1_[k];
  a0_ -= o.a0_;
  return *this;
}

GaussianRational commutator_apply(const DiffOp& A, const DiffOp& B, const GJet& f) {
  return A.apply(B.apply(f)).value() - B.apply(A.apply(f)).value();
}

DiffOp conjugate(const DiffOp& op, const RJet& phi) {
  const int n = op.dim();
  const GJet ph = complexify(phi);
  const GJet psi = ph.reciprocal();
  DiffOp out = op;
  GJet extra0 = zero_like(op.a0());
  for (int i = 0; i < n; ++i) {
    const GJet di = psi.derivative(i);
    extra0 += op.a1(i) * di;
    for (int j = 0; j < n; ++j) {
      // a2^{ij} d_i psi d_j f + a2^{ji} d_j f d_i psi
      out.a1(j) += ph * (op.a2(i, j) + op.a2(j, i)) * di;
      extra0 += op.a2(i, j) * di.derivative(j);
    }
  }
  out.a0() += ph * extra0;
  return out;
}

QuadraticSymbol stackel_symbol(SystemKind s, const SemiAxes& a, std::span<const RJet> x, int k) {
  const int n = static_cast<int>(x.size());
  if (k < 1 || k > n) throw std::invalid_argument("integral index outside 1..n");
  QuadraticSymbol P;
  P.n = n;
  P.P.assign(static_cast<std::size_t>(n * n), zero_like(x[0]));
  for (int i = 0; i < n; ++i) P.P[i * n + i] = quadratic_coeff(s, a, x, i, k);
  P.potential = potential_term(s, x, k);
  return P;
}

QuadraticSymbol metric_symbol(const CurvatureJets& c) {
  QuadraticSymbol P;
  P.n = c.n;
  P.P = c.ginv;
  P.potential = zero_like(c.g[0]);
  return P;
}

DiffOp carter_op(const CurvatureJets& c, const QuadraticSymbol& P) {
  const int n = c.n;
  DiffOp op(n, complexify(P.P[0]));
  std::vector<RJet> lv;
  for (int i = 0; i < n; ++i) lv.push_back(log_volume_derivative(c, i));
  for (int j = 0; j < n; ++j) {
    RJet b = zero_like(lv[0]);
    for (int i = 0; i < n; ++i) {
      const RJet& pij = P.P[i * n + j];
      op.a2(i, j) = complexify(-pij);
      if (pij.is_zero()) continue;
      b += pij.derivative(i) + pij * lv[i];
    }
    op.a1(j) = complexify(-b);
  }
  op.a0() = complexify(P.potential);
  return op;
}

RJet scalar_term(const CurvatureJets& c, const QuadraticSymbol& P, const QuantCoefficients& q) {
  const int n = c.n;
  const RJet T = trace(c, P);
  RJet ric = zero_like(c.ricci[0]);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!P.P[i * n + j].is_zero()) ric += c.ricci[c.at(i, j)] * P.P[i * n + j];
  return laplacian(c, T) * q.c1 + ric * q.c2 + c.scalar * T * q.c3;
}

DiffOp conformal_op(const CurvatureJets& c, const QuadraticSymbol& P, const QuantCoefficients& q) {
  DiffOp op = carter_op(c, P);
  op.a0() += complexify(scalar_term(c, P, q));
  return op;
}

std::vector<RJet> v_term(const CurvatureJets& c, const QuadraticSymbol& P, const QuadraticSymbol& Q,
                         const QuantCoefficients& q) {
  const int n = c.n;
  const RJet fP = scalar_term(c, P, q), fQ = scalar_term(c, Q, q);
  std::vector<RJet> V;
  for (int j = 0; j < n; ++j) {
    RJet v = zero_like(fP.derivative(0));
    for (int k = 0; k < n; ++k) v += P.P[j * n + k] * fQ.derivative(k) - Q.P[j * n + k] * fP.derivative(k);
    V.push_back(v * Rational(2));
  }
  return V;
}

DiffOp first_order_op(const CurvatureJets& c, std::span<const RJet> V) {
  const int n = c.n;
  DiffOp op(n, complexify(V[0]));
  RJet div = zero_like(V[0].derivative(0));
  for (int j = 0; j < n; ++j) {
    op.a1(j) = complexify(-V[j]);
    div += V[j].derivative(j) + V[j] * log_volume_derivative(c, j);
  }
  op.a0() = complexify(div * Rational(-1, 2));
  return op;
}

RationalMatrix b_tensor(const CurvatureJets& c, const QuadraticSymbol& P, const QuadraticSymbol& Q) {
  const int n = c.n;
  RationalMatrix X = b_half(c, P.P, Q.P) - b_half(c, Q.P, P.P);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      Rational acc;
      for (int l = 0; l < n; ++l)
        for (int m = 0; m < n; ++m) {
          acc -= covariant_derivative(c, P.P, l, m, j) * covariant_derivative(c, Q.P, m, k, l);
          acc -= P.P[l * n + j].value() * c.ricci[c.at(l, m)].value() * Q.P[k * n + m].value();
        }
      X(j, k) += acc;
    }
  return antisymmetrize(X);
}

RationalMatrix b_tensor_staeckel(std::span<const Rational> P, std::span<const Rational> Q,
                                 std::span<const Rational> ricci, int n) {
  RationalMatrix B = RationalMatrix::Zero(n, n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      Rational acc;
      for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t)
          acc += P[s * n + k] * ricci[s * n + t] * Q[l * n + t] - P[s * n + l] * ricci[s * n + t] * Q[k * n + t];
      B(k, l) = -acc;
    }
  return B;
}

GJet random_test_jet(Rng& rng, int n, int degree, const BasePoint& base) {
  GJet f = GJet::constant(n, degree, GaussianRational(0), base);
  for (std::size_t k = 0; k < f.size(); ++k)
    if (rng.uniform_int(0, 3) != 0) f[k] = GaussianRational(rng.small_rational(5, 4));
  return f;
}

QuantumSetup quantum_setup(SystemKind s, const SemiAxes& a, std::span<const Rational> x) {
  check_chart(a, x);
  QuantumSetup st{s, std::vector<Rational>(x.begin(), x.end()),
                  curvature_jets(system_metric(s, a), x, kMaxJetOrder, ChristoffelRoute::Diagonal),
                  coefficients(a.n()), {}};
  const auto xj = coordinate_jets(x, kMaxJetOrder);
  for (int k = 1; k <= a.n(); ++k) st.I.push_back(stackel_symbol(s, a, xj, k));
  return st;
}

Rational neumann_scalar_closed(const SemiAxes& a, std::span<const Rational> x, int k, const QuantCoefficients& q) {
  const int n = static_cast<int>(x.size());
  const auto sx = symmetric_of(x), sa = symmetric_of(a.values());
  return Rational(n - k + 1) * (q.c4 * sx[k - 1] + Rational(2 * (n - k + 2)) * q.c1 * sa[k - 1]);
}

Rational dual_moser_scalar_quoted(const SemiAxes& a, std::span<const Rational> x, int k,
                                  const QuantCoefficients& q) {
  const int n = static_cast<int>(x.size());
  const auto sx = symmetric_of(x), sa = symmetric_of(a.values());
  const Rational one(1);
  return Rational(2) * q.c1 *
         (Rational(n + 2) * (sx[k] * sx[1] - sigma_at(sx, k + 1, one)) - Rational(k * (n - k + 1)) * sa[k + 1]);
}

Rational dual_moser_scalar_direct(const SemiAxes& a, std::span<const Rational> x, int k,
                                  const QuantCoefficients& q) {
  const int n = static_cast<int>(x.size());
  const auto sx = symmetric_of(x), sa = symmetric_of(a.values());
  return Rational(2) * q.c1 * (Rational((n + 1) * (n + 2)) * sx[k] - Rational((n - k + 1) * (n - k + 2)) * sa[k]);
}

Rational jacobi_moser_scalar_closed(const SemiAxes& a, std::span<const Rational> x, int k,
                                    const QuantCoefficients& q) {
  const int n = static_cast<int>(x.size());
  const auto sx = symmetric_of(x), sa = symmetric_of(a.values());
  const Rational one(1);
  const Rational ratio = sa[n + 1] / (sx[n] * sx[n]);
  if (k == 1) return Rational(2) * (q.c2 + Rational(n) * q.c3) * ratio * sigma_at(sx, n - 2, one);
  if (k == 2)
    return Rational(n - 1) * q.c3 * ratio *
               (Rational(2 * (n - 1)) * sx[n - 1] - Rational(n) * sx[1] * sigma_at(sx, n - 2, one)) -
           Rational(2 * n * (n - 1)) * q.c1;
  throw NotApplicableError("closed form known for k = 1, 2 only");
}

Rational jacobi_moser_v_closed(const SemiAxes& a, std::span<const Rational> x, int i, const QuantCoefficients& q) {
  const int n = static_cast<int>(x.size());
  const auto sx = symmetric_of(x), sa = symmetric_of(a.values());
  const auto si = elementary_symmetric_without<Rational>(x, i, Rational(1));
  const Rational one(1);
  const Rational bracket = Rational(-2) * (sigma_at(si, 1, one) * sigma_at(sx, n - 2, one) +
                                          sx[1] * sigma_at(si, n - 2, one)) +
                           Rational(n * n - 3 * n + 4) * sx[n - 1] + Rational(n * (3 * n - 5)) * si[n - 1];
  return -q.c3 * sa[n + 1] / (x[i] * sx[n] * sx[n]) * bracket;
}

VerificationReport scalar_term_check(SystemKind s, const SemiAxes& a, int samples, std::uint64_t seed) {
  const std::string sys(system_tag(s));
  const int n = a.n();
  return sweep_points("scalar-term/" + sys, a, samples, seed,
                      [&](const std::vector<Rational>& x, Rng&, VerificationReport& rep) {
    const QuantumSetup st = quantum_setup(s, a, x);
    const QuantCoefficients& q = st.q;
    const std::string at = " at x=" + format_values(x);
    std::vector<RJet> f;
    for (const auto& I : st.I) f.push_back(scalar_term(st.curvature, I, q));
    std::vector<Rational> fv = values(f);
    const SymFuncs sx = sym_funcs(x);
    const auto sa = symmetric_of(a.values());

    switch (s) {
      case SystemKind::Neumann: {
        bool closed = true, surviving = true, constant = true;
        for (int k = 1; k <= n; ++k) {
          closed = closed && fv[k - 1] == neumann_scalar_closed(a, x, k, q);
          surviving = surviving && fv[k - 1] == Rational(2 * (n - k + 1) * (n - k + 2)) * q.c1 * sa[k - 1];
          for (int i = 0; i < n; ++i) constant = constant && f[k - 1].derivative(i).is_zero();
        }
        rep.add(point_check(sys + ".scalar-term.closed-form", "neumann-scalar-term", closed, format_values(fv) + at));
        rep.add(point_check(sys + ".scalar-term.surviving-term", "neumann-scalar-term", surviving,
                            format_values(fv) + at));
        rep.add(point_check(sys + ".scalar-term.constant", "neumann-scalar-term", constant, at));
        break;
      }
      case SystemKind::DualMoser: {
        bool quoted = true, direct = true, quoted_gradient = true, direct_gradient = true;
        std::vector<Rational> qv;
        for (int k = 1; k <= n; ++k) {
          qv.push_back(dual_moser_scalar_quoted(a, x, k, q));
          quoted = quoted && fv[k - 1] == qv.back();
          direct = direct && fv[k - 1] == dual_moser_scalar_direct(a, x, k, q);
          for (int i = 0; i < n; ++i) {
            const Rational d = f[k - 1].derivative(i).value();
            const Rational& sik = sx.sigma_without[i][k - 1];
            quoted_gradient = quoted_gradient && d == Rational(2 * (n + 2)) * q.c1 * (x[i] + sx.sigma[1]) * sik;
            direct_gradient = direct_gradient && d == Rational(2 * (n + 1) * (n + 2)) * q.c1 * sik;
          }
        }
        rep.add(expecting(point_check(sys + ".scalar-term.quoted-form", "dual-moser-scalar-term", quoted,
                                      "jet " + format_values(fv) + ", quoted " + format_values(qv) + at),
                          Expect::Fail));
        rep.add(point_check(sys + ".scalar-term.direct-form", "dual-moser-scalar-term", direct,
                            format_values(fv) + at));
        rep.add(expecting(point_check(sys + ".scalar-term.quoted-gradient", "dual-moser-scalar-term",
                                      quoted_gradient, at),
                          Expect::Fail));
        rep.add(point_check(sys + ".scalar-term.gradient-parallel", "dual-moser-scalar-term", direct_gradient, at));
        break;
      }
      case SystemKind::JacobiMoser: {
        const bool f1 = fv[0] == jacobi_moser_scalar_closed(a, x, 1, q);
        const bool f2 = n < 2 || fv[1] == jacobi_moser_scalar_closed(a, x, 2, q);
        rep.add(point_check(sys + ".scalar-term.closed-form", "jacobi-moser-scalar-term", f1 && f2,
                            format_values(fv) + at));
        if (n >= 2) {
          const std::vector<RJet> V = v_term(st.curvature, st.I[0], st.I[1], q);
          const std::vector<Rational> g = metric_coeffs(s, a, x);
          bool matches = true, bare = true;
          std::vector<Rational> scaled;
          for (int i = 0; i < n; ++i) {
            const Rational shown = jacobi_moser_v_closed(a, x, i, q);
            scaled.push_back(V[i].value() * g[i] / Rational(2));
            matches = matches && scaled.back() == shown;
            bare = bare && V[i].value() == shown;
          }
          rep.add(point_check(sys + ".v-term.closed-form", "jacobi-moser-v-term", matches,
                              "V^i g_i / 2 = " + format_values(scaled) + at));
          rep.add(expecting(point_check(sys + ".v-term.unscaled", "jacobi-moser-v-term", bare, at), Expect::Info));
          bool nonzero = false;
          for (const auto& v : V) nonzero = nonzero || !v.value().is_zero();
          rep.add(point_check(sys + ".v-term.nonzero", "jacobi-moser-v-term", nonzero, at));
        }
        break;
      }
    }

    if (s != SystemKind::JacobiMoser) {
      bool vanishes = true;
      for (int k = 0; k < n; ++k)
        for (int l = k + 1; l < n; ++l)
          for (const auto& v : v_term(st.curvature, st.I[k], st.I[l], q)) vanishes = vanishes && v.value().is_zero();
      rep.add(point_check(sys + ".v-term.vanishes", "v-term", vanishes, at));
    }
  });
}

VerificationReport b_tensor_check(SystemKind s, const SemiAxes& a, int samples, std::uint64_t seed) {
  const std::string sys(system_tag(s));
  const int n = a.n();
  return sweep_points("b-tensor/" + sys, a, samples, seed,
                      [&](const std::vector<Rational>& x, Rng&, VerificationReport& rep) {
    const QuantumSetup st = quantum_setup(s, a, x);
    const CurvatureJets& c = st.curvature;
    const std::vector<Rational> ricci = values(c.ricci);
    std::vector<Rational> injected = ricci;
    injected[0 * n + 1] += Rational(1);
    injected[1 * n + 0] += Rational(1);
    bool full_zero = true, staeckel_zero = true, agree = true, antisym = true;
    bool control_zero = true, control_antisym = true;
    std::string where;
    for (int k = 0; k < n; ++k)
      for (int l = k + 1; l < n; ++l) {
        const RationalMatrix full = b_tensor(c, st.I[k], st.I[l]);
        const std::vector<Rational> P = values(st.I[k].P), Q = values(st.I[l].P);
        const RationalMatrix stk = b_tensor_staeckel(P, Q, ricci, n);
        const RationalMatrix ctl = b_tensor_staeckel(P, Q, injected, n);
        if (!is_zero_matrix(full) && where.empty()) where = "pair " + pair_tag(k + 1, l + 1);
        full_zero = full_zero && is_zero_matrix(full);
        staeckel_zero = staeckel_zero && is_zero_matrix(stk);
        agree = agree && full == stk;
        antisym = antisym && is_antisymmetric(full) && is_antisymmetric(stk);
        control_zero = control_zero && is_zero_matrix(ctl);
        control_antisym = control_antisym && is_antisymmetric(ctl);
      }
    const std::string at = " at x=" + format_values(x);
    rep.add(point_check(sys + ".b-tensor.full.vanishes", "b-tensor", full_zero, where + at));
    rep.add(point_check(sys + ".b-tensor.staeckel.vanishes", "b-tensor", staeckel_zero, at));
    rep.add(point_check(sys + ".b-tensor.forms-agree", "b-tensor", agree, at));
    rep.add(point_check(sys + ".b-tensor.antisymmetric", "b-tensor", antisym, at));
    rep.add(expecting(point_check(sys + ".b-tensor.injected-ricci.vanishes", "b-tensor-control", control_zero, at),
                      Expect::Fail));
    rep.add(point_check(sys + ".b-tensor.injected-ricci.antisymmetric", "b-tensor-control", control_antisym, at));
  });
}

VerificationReport quantum_verdict(SystemKind s, const SemiAxes& a, int points, int test_functions,
                                   std::uint64_t seed) {
  const std::string sys(system_tag(s));
  const int n = a.n();
  coefficients(n);
  const bool anomalous = s == SystemKind::JacobiMoser;
  return sweep_points("quantum/" + sys, a, points, seed,
                      [&](const std::vector<Rational>& x, Rng& rng, VerificationReport& rep) {
    const QuantumSetup st = quantum_setup(s, a, x);
    const CurvatureJets& c = st.curvature;
    const BasePoint& base = c.g[0].base();
    std::vector<GJet> tests;
    for (int t = 0; t < test_functions; ++t) tests.push_back(random_test_jet(rng, n, kMaxJetOrder, base));

    std::vector<DiffOp> carter, conformal;
    std::vector<RJet> f;
    for (const auto& I : st.I) {
      carter.push_back(carter_op(c, I));
      f.push_back(scalar_term(c, I, st.q));
      DiffOp op = carter.back();
      op.a0() += complexify(f.back());
      conformal.push_back(std::move(op));
    }

    // phi = 1 + |x|^2 relates the two scalar representations.
    const auto xj = coordinate_jets(x, kMaxJetOrder);
    RJet phi = constant_like(xj[0], Rational(1));
    for (const auto& v : xj) phi += v * v;

    bool carter_ok = true, conformal_ok = true, anomaly_ok = true, anomaly_nonzero = false;
    bool conj_carter = true, conj_conformal = true, conj_anomaly = true;
    std::string carter_where, conformal_where;
    for (int k = 0; k < n; ++k)
      for (int l = k + 1; l < n; ++l) {
        const std::vector<RJet> V = v_term(c, st.I[k], st.I[l], st.q);
        const DiffOp anomaly = first_order_op(c, V);
        const bool conj_pair = k == 0 && l == 1;
        DiffOp Ck = carter[k], Cl = carter[l], Qk = conformal[k], Ql = conformal[l], An = anomaly;
        if (conj_pair) {
          Ck = conjugate(carter[k], phi);
          Cl = conjugate(carter[l], phi);
          Qk = conjugate(conformal[k], phi);
          Ql = conjugate(conformal[l], phi);
          An = conjugate(anomaly, phi);
        }
        for (const auto& tf : tests) {
          const GaussianRational cc = commutator_apply(carter[k], carter[l], tf);
          const GaussianRational qc = commutator_apply(conformal[k], conformal[l], tf);
          const GaussianRational av = anomaly.apply(tf).value();
          if (!cc.is_zero() && carter_where.empty()) carter_where = pair_tag(k + 1, l + 1) + " -> " + cc.str();
          if (!qc.is_zero() && conformal_where.empty())
            conformal_where = pair_tag(k + 1, l + 1) + " -> " + qc.str();
          carter_ok = carter_ok && cc.is_zero();
          conformal_ok = conformal_ok && qc.is_zero();
          anomaly_ok = anomaly_ok && qc == av;
          anomaly_nonzero = anomaly_nonzero || !qc.is_zero();
          if (conj_pair) {
            const GaussianRational ccc = commutator_apply(Ck, Cl, tf);
            const GaussianRational qcc = commutator_apply(Qk, Ql, tf);
            conj_carter = conj_carter && ccc.is_zero() == cc.is_zero();
            conj_conformal = conj_conformal && qcc.is_zero() == qc.is_zero();
            conj_anomaly = conj_anomaly && qcc == An.apply(tf).value();
          }
        }
      }

    bool difference = true, principal = true;
    for (int k = 0; k < n; ++k) {
      const DiffOp diff = conformal[k] - carter[k];
      for (const auto& tf : tests) difference = difference && diff.apply(tf) == (complexify(f[k]) * tf).truncated(2);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          principal = principal && conformal[k].a2(i, j) == carter[k].a2(i, j) &&
                      carter[k].a2(i, j) == complexify(-st.I[k].P[i * n + j]);
    }

    const std::string at = " at x=" + format_values(x);
    rep.add(point_check(sys + ".quantum.carter", "carter-quantum-integrability", carter_ok, carter_where + at));
    rep.add(expecting(point_check(sys + ".quantum.conformal", "conformal-quantum-integrability", conformal_ok,
                                  conformal_where + at),
                      anomalous ? Expect::Fail : Expect::Pass));
    rep.add(point_check(sys + ".quantum.conformal.commutator-equals-iQ(V)", "commutator-structure", anomaly_ok, at));
    if (anomalous)
      rep.add(point_check(sys + ".quantum.conformal.nonzero", "conformal-quantum-integrability", anomaly_nonzero, at));
    rep.add(point_check(sys + ".quantum.conformal-minus-carter", "scalar-term", difference, at));
    rep.add(point_check(sys + ".quantum.principal-symbol", "scalar-term", principal, at));
    rep.add(point_check(sys + ".quantum.conjugation.carter", "half-density", conj_carter, at));
    rep.add(point_check(sys + ".quantum.conjugation.conformal", "half-density", conj_conformal && conj_anomaly, at));
  });
}

}  // namespace stackel
