#include "stackel/curvature.hpp"

#include "stackel/ellipsoidal.hpp"
#include "stackel/errors.hpp"
#include "stackel/parallel.hpp"
#include "stackel/sampling.hpp"

namespace stackel {

namespace {

RJet zero_like(const RJet& proto) { return constant_like(proto, Rational(0)); }

std::vector<RJet> invert(std::vector<RJet> m, int n) {
  std::vector<RJet> inv(m.size(), zero_like(m[0]));
  for (int i = 0; i < n; ++i) inv[i * n + i] = constant_like(m[0], Rational(1));
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    while (pivot < n && m[pivot * n + col].value().is_zero()) ++pivot;
    if (pivot == n) throw PoleError("singular metric");
    if (pivot != col)
      for (int k = 0; k < n; ++k) {
        std::swap(m[pivot * n + k], m[col * n + k]);
        std::swap(inv[pivot * n + k], inv[col * n + k]);
      }
    const RJet r = m[col * n + col].reciprocal();
    for (int k = 0; k < n; ++k) {
      m[col * n + k] = m[col * n + k] * r;
      inv[col * n + k] = inv[col * n + k] * r;
    }
    for (int row = 0; row < n; ++row) {
      if (row == col || m[row * n + col].is_zero()) continue;
      const RJet f = m[row * n + col];
      for (int k = 0; k < n; ++k) {
        m[row * n + k] -= f * m[col * n + k];
        inv[row * n + k] -= f * inv[col * n + k];
      }
    }
  }
  return inv;
}

std::vector<RJet> diagonal_from(std::span<const RJet> x, int n,
                                const std::function<RJet(std::span<const RJet>, int)>& coeff) {
  std::vector<RJet> g(static_cast<std::size_t>(n * n), zero_like(x[0]));
  for (int i = 0; i < n; ++i) g[i * n + i] = coeff(x, i);
  return g;
}

template <class Body>
VerificationReport sweep(std::string title, const SemiAxes& a, int samples, std::uint64_t seed, Body body) {
  const Rng root(seed);
  std::vector<VerificationReport> parts(samples);
  parallel_for(samples, [&](std::size_t idx) {
    Rng rng = root.split(idx);
    const std::vector<Rational> x = sample_chart_point(rng, a.values());
    body(x, parts[idx]);
  });
  return fold_samples(std::move(title), parts);
}

}  // namespace

Metric diagonal_metric(std::string tag, int n, std::function<RJet(std::span<const RJet>, int)> coeff) {
  Metric m;
  m.tag = std::move(tag);
  m.n = n;
  m.diagonal = true;
  m.g = [n, coeff = std::move(coeff)](std::span<const RJet> x) { return diagonal_from(x, n, coeff); };
  return m;
}

Metric system_metric(SystemKind s, const SemiAxes& a) {
  return diagonal_metric(std::string(system_tag(s)), a.n(),
                         [s, a](std::span<const RJet> x, int i) { return metric_coeff(s, a, x, i); });
}

Metric conformal_metric(const SemiAxes& a) {
  return diagonal_metric("conformal", a.n(), [a](std::span<const RJet> x, int i) {
    RJet B = constant_like(x[0], Rational(1));
    for (const auto& v : x) B = B * v;
    Rational prod_a(1);
    for (const auto& v : a.values()) prod_a *= v;
    return round_metric_coeff(a, x, i) * prod_a / B;
  });
}

Metric flat_metric(int n) {
  return diagonal_metric("flat", n, [](std::span<const RJet> x, int) { return constant_like(x[0], Rational(1)); });
}

Metric perturb_first_coefficient(const Metric& m, const Rational& eps) {
  if (m.n < 2) throw std::invalid_argument("perturbation needs two coordinates");
  Metric out = m;
  out.tag = m.tag + "+perturbed";
  out.g = [inner = m.g, eps](std::span<const RJet> x) {
    auto g = inner(x);
    g[0] = g[0] + x[1] * eps;
    return g;
  };
  return out;
}

Metric inject_coupling(const Metric& m, int i, int j, const Rational& eps) {
  if (i == j || i >= m.n || j >= m.n) throw std::invalid_argument("coupling needs two distinct coordinates");
  Metric out = m;
  out.tag = m.tag + "+coupled";
  out.diagonal = false;
  const int n = m.n;
  out.g = [inner = m.g, eps, i, j, n](std::span<const RJet> x) {
    auto g = inner(x);
    const RJet c = x[i] * x[j] * eps;
    g[i * n + j] = g[i * n + j] + c;
    g[j * n + i] = g[j * n + i] + c;
    return g;
  };
  return out;
}

CurvatureJets curvature_jets(const Metric& m, std::span<const Rational> x, int order, ChristoffelRoute route) {
  if (order < 2) throw OrderOverflowError("curvature needs metric jets of order >= 2");
  if (static_cast<int>(x.size()) != m.n) throw std::invalid_argument("base point dimension mismatch");
  if (route == ChristoffelRoute::Diagonal && !m.diagonal)
    throw NotApplicableError("diagonal Christoffel route on a non-diagonal metric");
  const int n = m.n;
  CurvatureJets c;
  c.n = n;
  c.order = order;
  const auto xj = coordinate_jets(x, order);
  c.g = m.g(xj);
  if (c.g.size() != static_cast<std::size_t>(n * n)) throw std::invalid_argument("metric has wrong shape");
  if (m.diagonal) {
    c.ginv.assign(c.g.size(), zero_like(c.g[0]));
    for (int i = 0; i < n; ++i) {
      if (c.g[c.at(i, i)].value().is_zero()) throw PoleError("degenerate metric coefficient");
      c.ginv[c.at(i, i)] = c.g[c.at(i, i)].reciprocal();
    }
  } else {
    c.ginv = invert(c.g, n);
  }

  // dg[k][i][j] = d_k g_ij
  std::vector<RJet> dg(static_cast<std::size_t>(n * n * n));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) dg[c.at(k, i, j)] = c.g[c.at(i, j)].derivative(k);
  const RJet zero1 = zero_like(dg[0]);
  c.christoffel.assign(static_cast<std::size_t>(n * n * n), zero1);
  const Rational half(1, 2);
  if (route == ChristoffelRoute::General) {
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          RJet acc = zero1;
          for (int s = 0; s < n; ++s) {
            if (c.ginv[c.at(l, s)].is_zero()) continue;
            acc += c.ginv[c.at(l, s)] * (dg[c.at(i, s, j)] + dg[c.at(j, s, i)] - dg[c.at(s, i, j)]);
          }
          c.christoffel[c.at(l, i, j)] = acc * half;
          c.christoffel[c.at(l, j, i)] = c.christoffel[c.at(l, i, j)];
        }
  } else {
    // dlog[k][i] = d_k ln g_i
    std::vector<RJet> dlog(static_cast<std::size_t>(n * n));
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) dlog[c.at(k, i)] = dg[c.at(k, i, i)] * c.ginv[c.at(i, i)];
    for (int i = 0; i < n; ++i) {
      c.christoffel[c.at(i, i, i)] = dlog[c.at(i, i)] * half;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        c.christoffel[c.at(i, i, j)] = dlog[c.at(j, i)] * half;
        c.christoffel[c.at(i, j, i)] = c.christoffel[c.at(i, i, j)];
        c.christoffel[c.at(i, j, j)] = -(c.g[c.at(j, j)] * c.ginv[c.at(i, i)] * dlog[c.at(i, j)]) * half;
      }
    }
  }

  // dG[k][l][i][j] = d_k G^l_ij
  std::vector<RJet> dG(static_cast<std::size_t>(n * n * n * n));
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) dG[c.at(k, l, i, j)] = c.christoffel[c.at(l, i, j)].derivative(k);
  const RJet zero2 = zero_like(dG[0]);
  c.riemann.assign(static_cast<std::size_t>(n * n * n * n), zero2);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
          RJet r = dG[c.at(j, l, i, k)] - dG[c.at(k, l, i, j)];
          for (int s = 0; s < n; ++s) {
            r += c.christoffel[c.at(l, s, j)] * c.christoffel[c.at(s, i, k)];
            r -= c.christoffel[c.at(l, s, k)] * c.christoffel[c.at(s, i, j)];
          }
          c.riemann[c.at(l, i, j, k)] = r;
          c.riemann[c.at(l, i, k, j)] = -r;
        }
  c.ricci.assign(static_cast<std::size_t>(n * n), zero2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int s = 0; s < n; ++s) c.ricci[c.at(i, j)] += c.riemann[c.at(s, i, s, j)];
  c.scalar = zero2;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!c.ginv[c.at(i, j)].is_zero()) c.scalar += c.ginv[c.at(i, j)] * c.ricci[c.at(i, j)];
  return c;
}

CurvatureBundle values_of(const CurvatureJets& c) {
  const int n = c.n;
  CurvatureBundle b;
  b.n = n;
  auto vals = [](const std::vector<RJet>& v) {
    std::vector<Rational> out;
    out.reserve(v.size());
    for (const auto& j : v) out.push_back(j.value());
    return out;
  };
  b.g = vals(c.g);
  b.ginv = vals(c.ginv);
  b.christoffel = vals(c.christoffel);
  b.riemann = vals(c.riemann);
  b.ricci = vals(c.ricci);
  b.scalar = c.scalar.value();
  b.riemann_lowered.assign(b.riemann.size(), Rational(0));
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          Rational acc(0);
          for (int m = 0; m < n; ++m) acc += b.g[c.at(l, m)] * b.riemann[c.at(m, i, j, k)];
          b.riemann_lowered[c.at(l, i, j, k)] = acc;
        }
  return b;
}

CurvatureBundle curvature_at(const Metric& m, std::span<const Rational> x) {
  return values_of(curvature_jets(m, x, 2));
}

std::vector<Rational> weyl_tensor(const CurvatureBundle& c) {
  const int n = c.n;
  if (n < 3) throw NotApplicableError("conformal test undefined for n < 3");
  auto g = [&](int i, int j) { return c.g[i * n + j]; };
  auto ric = [&](int i, int j) { return c.ricci[i * n + j]; };
  const Rational k1 = Rational(1) / Rational(n - 2);
  const Rational k2 = c.scalar / Rational((n - 1) * (n - 2));
  std::vector<Rational> w(c.riemann_lowered.size());
  std::size_t idx = 0;
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k, ++idx)
          w[idx] = c.riemann_lowered[idx] -
                   k1 * (g(l, j) * ric(i, k) - g(l, k) * ric(i, j) - g(i, j) * ric(l, k) + g(i, k) * ric(l, j)) +
                   k2 * (g(l, j) * g(i, k) - g(l, k) * g(i, j));
  return w;
}

std::vector<Rational> cotton_tensor(const CurvatureJets& c) {
  const int n = c.n;
  if (n < 3) throw NotApplicableError("conformal test undefined for n < 3");
  if (c.order < 3) throw OrderOverflowError("Cotton tensor needs metric jets of order >= 3");
  const Rational k1 = Rational(1) / Rational(n - 2);
  const RJet trace_part = c.scalar * (Rational(1) / Rational(2 * (n - 1)));
  std::vector<RJet> P;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) P.push_back((c.ricci[c.at(i, j)] - trace_part * c.g[c.at(i, j)]) * k1);
  // nabla_k P_ij at the base point
  auto nabla = [&](int k, int i, int j) {
    Rational v = P[c.at(i, j)].derivative(k).value();
    for (int m = 0; m < n; ++m) {
      v -= c.christoffel[c.at(m, k, i)].value() * P[c.at(m, j)].value();
      v -= c.christoffel[c.at(m, k, j)].value() * P[c.at(i, m)].value();
    }
    return v;
  };
  std::vector<Rational> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) out.push_back(nabla(k, i, j) - nabla(j, i, k));
  return out;
}

VerificationReport curvature_structure_check(const Metric& m, std::span<const Rational> x) {
  const int n = m.n;
  const CurvatureJets c = curvature_jets(m, x, 3);
  const CurvatureBundle b = values_of(c);
  const std::string at = " at x=" + format_values(x);
  VerificationReport rep;
  rep.title = "curvature-structure/" + m.tag;
  const std::string t = m.tag + ".structure.";

  bool sym = true, bianchi = true, anti = true, pair = true, ric = true;
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        sym = sym && c.christoffel[c.at(l, i, j)] == c.christoffel[c.at(l, j, i)];
        for (int k = 0; k < n; ++k) {
          bianchi = bianchi && (b.riemann[c.at(l, i, j, k)] + b.riemann[c.at(l, j, k, i)] +
                                b.riemann[c.at(l, k, i, j)])
                                   .is_zero();
          anti = anti && b.riemann_lowered[c.at(l, i, j, k)] == -b.riemann_lowered[c.at(i, l, j, k)];
          pair = pair && b.riemann_lowered[c.at(l, i, j, k)] == b.riemann_lowered[c.at(j, k, l, i)];
        }
      }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) ric = ric && c.ricci[c.at(i, j)] == c.ricci[c.at(j, i)];
  rep.add(point_check(t + "christoffel-symmetric", "curvature-convention", sym, at));
  rep.add(point_check(t + "bianchi", "curvature-convention", bianchi, at));
  rep.add(point_check(t + "riemann-antisymmetric", "curvature-convention", anti, at));
  rep.add(point_check(t + "riemann-pair-symmetric", "curvature-convention", pair, at));
  rep.add(point_check(t + "ricci-symmetric", "curvature-convention", ric, at));

  // nabla_k g_ij = d_k g_ij - G^m_ki g_mj - G^m_kj g_im, as an order-(K-1) jet.
  bool compatible = true;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        RJet v = c.g[c.at(i, j)].derivative(k);
        for (int s = 0; s < n; ++s) {
          v -= c.christoffel[c.at(s, k, i)] * c.g[c.at(s, j)];
          v -= c.christoffel[c.at(s, k, j)] * c.g[c.at(i, s)];
        }
        compatible = compatible && v.is_zero();
      }
  rep.add(point_check(t + "metric-compatible", "curvature-convention", compatible, at));

  Rational trace(0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) trace += b.ginv[c.at(i, j)] * b.ricci[c.at(i, j)];
  rep.add(point_check(t + "scalar-trace", "curvature-convention", trace == b.scalar, at));

  if (m.diagonal) {
    const CurvatureJets d = curvature_jets(m, x, 3, ChristoffelRoute::Diagonal);
    rep.add(point_check(t + "diagonal-route", "curvature-convention",
                        d.christoffel == c.christoffel && d.riemann == c.riemann, at));
  }
  return rep;
}

VerificationReport verify_ricci_closed_forms(SystemKind s, const SemiAxes& a, int samples, std::uint64_t seed) {
  const int n = a.n();
  const std::string sys(system_tag(s));
  const Metric m = system_metric(s, a);
  const SymFuncs sa = sym_funcs(a.values());
  return sweep("ricci/" + sys, a, samples, seed, [&](const std::vector<Rational>& x, VerificationReport& rep) {
    const CurvatureBundle b = curvature_at(m, x);
    const SymFuncs sx = sym_funcs(x);
    std::vector<Rational> factor(n);  // R_ii / g_i
    Rational scalar;
    switch (s) {
      case SystemKind::Neumann:
        factor.assign(n, Rational(n - 1));
        scalar = Rational(n * (n - 1));
        break;
      case SystemKind::DualMoser:
        for (int i = 0; i < n; ++i)
          factor[i] = Rational(n - 2) * x[i] + Rational(n) * sx.sigma[1] - Rational(n - 1) * sa.sigma[1];
        scalar = Rational(n - 1) * (Rational(n + 2) * sx.sigma[1] - Rational(n) * sa.sigma[1]);
        break;
      case SystemKind::JacobiMoser: {
        const Rational c = sa.sigma[n + 1] / (sx.sigma[n] * sx.sigma[n]);
        for (int i = 0; i < n; ++i) factor[i] = c * sigma_at(sx.sigma_without[i], n - 2, Rational(1));
        scalar = Rational(2) * c * sigma_at(sx.sigma, n - 2, Rational(1));
        break;
      }
    }
    bool ok = true;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        ok = ok && b.ricci[i * n + j] == (i == j ? factor[i] * b.g[i * n + i] : Rational(0));
    const std::string at = " at x=" + format_values(x);
    rep.add(point_check(sys + ".ricci.closed-form", "ricci-closed-form", ok, at));
    rep.add(point_check(sys + ".scalar.closed-form", "ricci-closed-form", b.scalar == scalar,
                        "R = " + b.scalar.str() + ", closed form " + scalar.str() + at));
  });
}

VerificationReport robertson_check(const Metric& m, const SemiAxes& a, int samples, std::uint64_t seed,
                                   Expect expected) {
  VerificationReport rep =
      sweep("robertson/" + m.tag, a, samples, seed, [&](const std::vector<Rational>& x, VerificationReport& r) {
        const CurvatureBundle b = curvature_at(m, x);
        bool ok = true;
        std::string witness;
        for (int i = 0; i < m.n; ++i)
          for (int j = 0; j < m.n; ++j)
            if (i != j && !b.ricci[i * m.n + j].is_zero()) {
              if (ok) witness = "R_" + std::to_string(i + 1) + std::to_string(j + 1) + " = " + b.ricci[i * m.n + j].str();
              ok = false;
            }
        r.add(point_check(m.tag + ".robertson", "robertson-condition", ok, witness + " at x=" + format_values(x)));
      });
  for (auto& c : rep.checks) c.expected = expected;
  return rep;
}

VerificationReport conformal_flatness_check(const Metric& m, const SemiAxes& a, int samples, std::uint64_t seed,
                                            Expect expected) {
  if (m.n < 3) throw NotApplicableError("conformal test undefined for n < 3");
  const bool cotton = m.n == 3;
  const std::string name = m.tag + (cotton ? ".cotton" : ".weyl");
  VerificationReport rep =
      sweep("conformal/" + m.tag, a, samples, seed, [&](const std::vector<Rational>& x, VerificationReport& r) {
        const std::vector<Rational> t =
            cotton ? cotton_tensor(curvature_jets(m, x, 3)) : weyl_tensor(curvature_at(m, x));
        std::size_t nonzero = 0;
        for (const auto& v : t) nonzero += v.is_zero() ? 0 : 1;
        r.add(point_check(name, "conformal-flatness", nonzero == 0,
                          std::to_string(nonzero) + " nonzero components at x=" + format_values(x)));
      });
  for (auto& c : rep.checks) c.expected = expected;
  return rep;
}

VerificationReport dual_moser_shortcut_check(const SemiAxes& a, std::span<const Rational> x) {
  const int n = a.n();
  const Metric m = system_metric(SystemKind::DualMoser, a);
  const auto xj = coordinate_jets(x, 2);
  const auto g = m.g(xj);
  VerificationReport rep;
  rep.title = "dual-moser-shortcut";
  const std::string at = " at x=" + format_values(x);

  bool first = true, second = true;
  for (int k = 0; k < n; ++k) {
    const RJet gk = g[k * n + k];
    for (int i = 0; i < n; ++i) {
      if (i == k) continue;
      const RJet dlog = gk.derivative(i) / gk.truncated(1);
      first = first && dlog.value() == (x[i] - x[k]).inverse();
      for (int j = 0; j < n; ++j)
        if (j != i && j != k) second = second && dlog.derivative(j).value().is_zero();
    }
  }
  rep.add(point_check("dual-moser.shortcut.log-derivative", "dual-moser-curvature", first,
                      "d_i ln g_j = 1/(x^i - x^j), i != j" + at));
  rep.add(point_check("dual-moser.shortcut.mixed-log-derivative", "dual-moser-curvature", second,
                      "d_ij ln g_k = 0 for distinct i, j, k" + at));

  const CurvatureBundle b = curvature_at(m, x);
  Rational S(0), A(0);
  for (const auto& v : x) S += v;
  for (const auto& v : a.values()) A += v;
  bool sectional = true, mixed = true;
  auto R = [&](int l, int i, int j, int k) { return b.riemann_lowered[((l * n + i) * n + j) * n + k]; };
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      if (i == k) continue;
      sectional = sectional && R(i, k, i, k) == (x[i] + x[k] + S - A) * b.g[i * n + i] * b.g[k * n + k];
      for (int j = 0; j < n; ++j)
        if (j != i && j != k) mixed = mixed && R(i, k, k, j).is_zero();
    }
  rep.add(point_check("dual-moser.shortcut.sectional", "dual-moser-curvature", sectional,
                      "R_{ikik} = (x^i + x^k + sum x - sum a) g_i g_k" + at));
  rep.add(point_check("dual-moser.shortcut.mixed", "dual-moser-curvature", mixed, "R_{ikkj} = 0" + at));
  return rep;
}

}  // namespace stackel
