#include "stackel/ambient.hpp"

#include <algorithm>
#include <stdexcept>

#include "stackel/errors.hpp"
#include "stackel/parallel.hpp"
#include "stackel/sampling.hpp"

namespace stackel {

std::string_view system_tag(SystemKind s) {
  switch (s) {
    case SystemKind::JacobiMoser: return "jacobi-moser";
    case SystemKind::Neumann: return "neumann";
    case SystemKind::DualMoser: return "dual-moser";
  }
  return "?";
}

SystemKind parse_system(std::string_view tag) {
  for (SystemKind s : kAllSystems)
    if (system_tag(s) == tag) return s;
  throw std::invalid_argument("unknown system '" + std::string(tag) + "'");
}

SemiAxes::SemiAxes(std::vector<Rational> a) : a_(std::move(a)) {
  if (a_.size() < 2) throw std::invalid_argument("need at least two semi-axes");
  if (a_.size() > static_cast<std::size_t>(kMaxDof)) throw std::invalid_argument("too many semi-axes");
  if (a_[0].sign() <= 0) throw std::invalid_argument("semi-axes must be positive");
  for (std::size_t k = 1; k < a_.size(); ++k) {
    if (a_[k] == a_[k - 1]) throw CoincidentAxesError();
    if (a_[k] < a_[k - 1]) throw std::invalid_argument("semi-axes must be strictly increasing");
  }
}

SemiAxes SemiAxes::standard(int n) {
  static const long values[] = {1, 2, 4, 7, 11, 16, 22, 29};
  if (n < 1 || n + 1 > static_cast<int>(std::size(values)))
    throw std::invalid_argument("no standard semi-axes for this dimension");
  return SemiAxes(std::vector<Rational>(values, values + n + 1));
}

namespace {

PhasePoly qq(int d, int a, int b) { return PhasePoly::q(d, a) * PhasePoly::q(d, b); }

// Residual term count of lhs - rhs.
CheckResult identity_check(std::string name, std::string anchor, const PhasePoly& lhs,
                           const PhasePoly& rhs, std::string detail = {}) {
  const PhasePoly diff = lhs - rhs;
  CheckResult c;
  c.name = std::move(name);
  c.anchor = std::move(anchor);
  c.passed = diff.is_zero();
  c.witness_size = diff.size();
  c.detail = std::move(detail);
  return c;
}

std::string pair_name(const std::string& stem, int a, int b) {
  return stem + "[" + std::to_string(a) + "," + std::to_string(b) + "]";
}

std::vector<ConstrainedPoint> constrained_points(int n, int count, std::uint64_t seed) {
  std::vector<ConstrainedPoint> pts;
  for (int k = 0; k < count; ++k)
    pts.push_back(sample_constrained_point(seed * 1000003ULL + static_cast<std::uint64_t>(k), n));
  return pts;
}

// Checks that `poly` vanishes at every point; witness = number of nonzero values.
CheckResult vanishes_on(std::string name, std::string anchor, const PhasePoly& poly,
                        const std::vector<ConstrainedPoint>& pts, std::string detail = {}) {
  CheckResult c;
  c.name = std::move(name);
  c.anchor = std::move(anchor);
  c.samples = pts.size();
  for (const auto& pt : pts)
    if (!poly.evaluate(pt.q, pt.p).is_zero()) ++c.witness_size;
  c.passed = c.witness_size == 0;
  c.detail = std::move(detail);
  return c;
}

void require_dual_moser(const IntegralFamily& fam, const char* what) {
  if (fam.system != SystemKind::DualMoser)
    throw NotApplicableError(std::string(what) + " is stated for the dual Moser family only, got " +
                             std::string(system_tag(fam.system)));
}

}  // namespace

AmbientBasics ambient_basics(const SemiAxes& a) {
  const int d = a.dof();
  AmbientBasics b{PhasePoly(d), PhasePoly(d), PhasePoly(d), PhasePoly(d), PhasePoly(d), PhasePoly(d)};
  for (int k = 0; k < d; ++k) {
    const PhasePoly q = PhasePoly::q(d, k), p = PhasePoly::p(d, k);
    b.q_norm2 += q * q;
    b.p_norm2 += p * p;
    b.pq += p * q;
    b.B += a[k].inverse() * (q * q);
    b.J += a[k] * (p * p);
  }
  b.z1 = b.q_norm2 - PhasePoly::constant(d, 1);
  return b;
}

DualMoserParts dual_moser_parts(const SemiAxes& a) {
  const int d = a.dof();
  const AmbientBasics basics = ambient_basics(a);
  DualMoserParts parts;
  parts.M.assign(d, std::vector<PhasePoly>(d, PhasePoly(d)));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      parts.M[i][j] = a[i] * (PhasePoly::p(d, i) * PhasePoly::q(d, j)) -
                      a[j] * (PhasePoly::p(d, j) * PhasePoly::q(d, i));
  for (int i = 0; i < d; ++i) {
    parts.A.push_back(qq(d, i, i) * basics.J);
    PhasePoly b(d);
    for (int j = 0; j < d; ++j)
      if (j != i) b += (a[i] - a[j]).inverse() * (parts.M[i][j] * parts.M[i][j]);
    parts.B.push_back(std::move(b));
  }
  return parts;
}

IntegralFamily build_dual_moser(const SemiAxes& a) {
  const DualMoserParts parts = dual_moser_parts(a);
  const AmbientBasics basics = ambient_basics(a);
  IntegralFamily fam{SystemKind::DualMoser, a, {}, Rational(1, 2) * (basics.B * basics.p_norm2)};
  for (int i = 0; i < a.dof(); ++i) fam.F.push_back(parts.A[i] + parts.B[i]);
  return fam;
}

IntegralFamily build_jacobi_moser(const SemiAxes& a) {
  const int d = a.dof();
  IntegralFamily fam{SystemKind::JacobiMoser, a, {}, PhasePoly(d)};
  for (int i = 0; i < d; ++i) {
    const PhasePoly pi = PhasePoly::p(d, i);
    fam.H += (Rational(1, 2) / a[i]) * (pi * pi);
    PhasePoly f = a[i].inverse() * (pi * pi);
    for (int j = 0; j < d; ++j) {
      if (j == i) continue;
      const PhasePoly m = a[j] * (pi * PhasePoly::q(d, j)) - a[i] * (PhasePoly::p(d, j) * PhasePoly::q(d, i));
      f += (a[i] * a[j] * (a[i] - a[j])).inverse() * (m * m);
    }
    fam.F.push_back(std::move(f));
  }
  return fam;
}

IntegralFamily build_neumann(const SemiAxes& a) {
  const int d = a.dof();
  IntegralFamily fam{SystemKind::Neumann, a, {}, PhasePoly(d)};
  for (int i = 0; i < d; ++i) {
    const PhasePoly pi = PhasePoly::p(d, i), qi = PhasePoly::q(d, i);
    fam.H += Rational(1, 2) * (pi * pi + a[i] * (qi * qi));
    PhasePoly f = qi * qi;
    for (int j = 0; j < d; ++j) {
      if (j == i) continue;
      const PhasePoly m = pi * PhasePoly::q(d, j) - PhasePoly::p(d, j) * qi;
      f += (a[i] - a[j]).inverse() * (m * m);
    }
    fam.F.push_back(std::move(f));
  }
  return fam;
}

IntegralFamily build_family(SystemKind s, const SemiAxes& a) {
  switch (s) {
    case SystemKind::JacobiMoser: return build_jacobi_moser(a);
    case SystemKind::Neumann: return build_neumann(a);
    case SystemKind::DualMoser: return build_dual_moser(a);
  }
  throw std::invalid_argument("unknown system");
}

std::vector<PhasePoly> moser_canonical_integrals(const SemiAxes& a) {
  const int d = a.dof();
  std::vector<PhasePoly> out;
  for (int i = 0; i < d; ++i) {
    const PhasePoly Pi = PhasePoly::p(d, i), Qi = PhasePoly::q(d, i);
    PhasePoly f = Pi * Pi;
    for (int j = 0; j < d; ++j) {
      if (j == i) continue;
      const PhasePoly m = Pi * PhasePoly::q(d, j) - PhasePoly::p(d, j) * Qi;
      f += (a[i] - a[j]).inverse() * (m * m);
    }
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<PhasePoly> jacobi_moser_velocity_integrals(const SemiAxes& a) {
  const int d = a.dof();
  std::vector<PhasePoly> out;
  for (int i = 0; i < d; ++i) {
    const PhasePoly vi = PhasePoly::p(d, i), qi = PhasePoly::q(d, i);
    PhasePoly f = a[i] * (vi * vi);
    for (int j = 0; j < d; ++j) {
      if (j == i) continue;
      const PhasePoly m = vi * PhasePoly::q(d, j) - PhasePoly::p(d, j) * qi;
      f += (a[i] * a[j] / (a[i] - a[j])) * (m * m);
    }
    out.push_back(std::move(f));
  }
  return out;
}

VerificationReport verify_involution(const IntegralFamily& fam, bool with_structure) {
  const int d = fam.a.dof();
  const std::string sys(system_tag(fam.system));
  VerificationReport rep;
  rep.title = "involution/" + sys;

  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) pairs.emplace_back(i, j);
  std::vector<PhasePoly> brackets(pairs.size(), PhasePoly(d));
  parallel_for(pairs.size(), [&](std::size_t k) {
    brackets[k] = poisson_bracket(fam.F[pairs[k].first], fam.F[pairs[k].second]);
  });
  for (std::size_t k = 0; k < pairs.size(); ++k)
    rep.add(identity_check(pair_name(sys + ".involution", pairs[k].first, pairs[k].second),
                           "integrals-in-involution", brackets[k], PhasePoly(d)));

  if (with_structure && fam.system == SystemKind::DualMoser) {
    const DualMoserParts parts = dual_moser_parts(fam.a);
    const PhasePoly J = ambient_basics(fam.a).J;
    const std::string note = "library bracket equals the negative of the reference right-hand side";
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        if (i == j) continue;
        const PhasePoly qiqjM = qq(d, i, j) * parts.M[i][j];
        // Reference forms, opposite bracket sign: {A_i,A_j} = -4 J q_i q_j M_ij; {A_i,B_j} = 4 J a_i q_i q_j M_ij/(a_i-a_j); {B_i,B_j} = 0.
        const PhasePoly aa_reference = Rational(-4) * (J * qiqjM);
        const PhasePoly ab_reference = (Rational(4) * fam.a[i] / (fam.a[i] - fam.a[j])) * (J * qiqjM);
        rep.add(identity_check(pair_name(sys + ".structure.AA", i, j), "structural-brackets",
                               poisson_bracket(parts.A[i], parts.A[j]), -aa_reference, note));
        rep.add(identity_check(pair_name(sys + ".structure.AB", i, j), "structural-brackets",
                               poisson_bracket(parts.A[i], parts.B[j]), -ab_reference, note));
        if (i < j)
          rep.add(identity_check(pair_name(sys + ".structure.BB", i, j), "structural-brackets",
                                 poisson_bracket(parts.B[i], parts.B[j]), PhasePoly(d)));
      }
    }
  }
  return rep;
}

bool family_in_involution(const IntegralFamily& fam) {
  const int d = fam.a.dof();
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (!poisson_bracket(fam.F[i], fam.F[j]).is_zero()) return false;
  return true;
}

VerificationReport verify_h_bracket(const IntegralFamily& fam, int constrained_samples,
                                    std::uint64_t seed) {
  require_dual_moser(fam, "the Hamiltonian bracket closed form");
  const int d = fam.a.dof();
  const AmbientBasics basics = ambient_basics(fam.a);
  VerificationReport rep;
  rep.title = "hamiltonian-bracket/dual-moser";
  const auto pts = d >= 3 ? constrained_points(d - 1, constrained_samples, seed)
                          : std::vector<ConstrainedPoint>{};
  for (int i = 0; i < d; ++i) {
    const PhasePoly pi = PhasePoly::p(d, i);
    const PhasePoly reference =
        Rational(2) * ((fam.a[i] * (basics.B * pi * pi) - qq(d, i, i) * basics.p_norm2) * basics.pq);
    const PhasePoly hf = poisson_bracket(fam.H, fam.F[i]);
    rep.add(identity_check("dual-moser.h-bracket[" + std::to_string(i) + "]", "hamiltonian-bracket",
                           hf, -reference,
                           "natural reading 2(B a_i p_i^2 - q_i^2 sum p^2) sum pq; library bracket "
                           "equals its negative"));
    if (!pts.empty())
      rep.add(vanishes_on("dual-moser.h-bracket.constrained[" + std::to_string(i) + "]",
                          "conservation-on-constraint", hf, pts,
                          "vanishes because the factor sum pq is zero on the cotangent bundle"));
  }
  PhasePoly lhs(d), pq_over_a(d);
  for (int i = 0; i < d; ++i) {
    lhs += (fam.a[i] * fam.a[i]).inverse() * fam.F[i];
    pq_over_a += fam.a[i].inverse() * (PhasePoly::p(d, i) * PhasePoly::q(d, i));
  }
  rep.add(identity_check("dual-moser.relation3", "sum-relations", lhs,
                         Rational(-2) * fam.H + Rational(2) * (basics.pq * pq_over_a)));
  return rep;
}

VerificationReport verify_sum_relations(const IntegralFamily& fam, int constrained_samples,
                                        std::uint64_t seed) {
  require_dual_moser(fam, "the sum relations");
  const int d = fam.a.dof();
  const AmbientBasics basics = ambient_basics(fam.a);
  VerificationReport rep;
  rep.title = "sum-relations/dual-moser";
  PhasePoly sum(d), sum_over_a(d);
  for (int i = 0; i < d; ++i) {
    sum += fam.F[i];
    sum_over_a += fam.a[i].inverse() * fam.F[i];
  }
  rep.add(identity_check("dual-moser.relation1", "sum-relations", sum, basics.q_norm2 * basics.J,
                         "also the Joachimsthal invariant sum F - |q|^2 J = 0"));
  rep.add(identity_check("dual-moser.relation2", "sum-relations", sum_over_a, basics.pq * basics.pq));
  if (d >= 3)
    rep.add(vanishes_on("dual-moser.joachimsthal.constrained", "joachimsthal-invariant",
                        sum - basics.J, constrained_points(d - 1, constrained_samples, seed)));
  return rep;
}

VerificationReport verify_conservation(const IntegralFamily& fam, int constrained_samples,
                                       std::uint64_t seed) {
  const int d = fam.a.dof();
  const std::string sys(system_tag(fam.system));
  VerificationReport rep;
  rep.title = "conservation/" + sys;
  const auto pts = d >= 3 ? constrained_points(d - 1, constrained_samples, seed)
                          : std::vector<ConstrainedPoint>{};
  PhasePoly rotational(d);
  if (fam.system == SystemKind::Neumann)
    for (int i = 0; i < d; ++i) rotational += (fam.a[i] / Rational(2)) * fam.F[i];
  for (int i = 0; i < d; ++i) {
    const std::string idx = "[" + std::to_string(i) + "]";
    const PhasePoly hf = poisson_bracket(fam.H, fam.F[i]);
    CheckResult exact = identity_check(sys + ".conservation.unconstrained" + idx,
                                       "conserved-quantities", hf, PhasePoly(d));
    switch (fam.system) {
      case SystemKind::JacobiMoser:
        break;
      case SystemKind::DualMoser:
        exact.expected = Expect::Info;
        exact.detail = "only conserved on the constraint surface";
        break;
      case SystemKind::Neumann:
        exact.expected = Expect::Info;
        exact.detail = "quoted as conserved on T*R^{n+1}; the residual is supported off T*S^n";
        rep.add(identity_check(sys + ".conservation.rotational" + idx, "conserved-quantities",
                               poisson_bracket(rotational, fam.F[i]), PhasePoly(d),
                               "H' = 1/2 sum a F, equal to H on the cotangent bundle of the sphere"));
        break;
    }
    rep.add(std::move(exact));
    if (!pts.empty() && fam.system != SystemKind::JacobiMoser)
      rep.add(vanishes_on(sys + ".conservation.constrained" + idx, "conserved-quantities", hf, pts));
  }
  return rep;
}

VerificationReport dirac_verify(const IntegralFamily& fam, int constrained_samples,
                                std::uint64_t seed) {
  const int d = fam.a.dof();
  const std::string sys(system_tag(fam.system));
  const AmbientBasics basics = ambient_basics(fam.a);
  VerificationReport rep;
  rep.title = "dirac/" + sys;
  const bool claimed = fam.system == SystemKind::DualMoser;
  const bool reduced_by_pq = fam.system != SystemKind::JacobiMoser;

  std::vector<PhasePoly> z1f, z2f;
  for (int i = 0; i < d; ++i) {
    z1f.push_back(poisson_bracket(basics.z1, fam.F[i]));
    z2f.push_back(poisson_bracket(basics.pq, fam.F[i]));
  }
  for (int i = 0; i < d; ++i) {
    const std::string idx = "[" + std::to_string(i) + "]";
    CheckResult z2 = identity_check(sys + ".dirac.z2" + idx, "constraint-brackets", z2f[i], PhasePoly(d));
    if (!claimed) z2.expected = Expect::Info;
    rep.add(std::move(z2));
    if (claimed) {
      const PhasePoly reference = Rational(-4) * fam.a[i] *
                                (PhasePoly::p(d, i) * PhasePoly::q(d, i) * basics.q_norm2);
      rep.add(identity_check(sys + ".dirac.z1" + idx, "constraint-brackets", z1f[i], -reference,
                             "library bracket equals the negative of -4 a p q (1 + Z1)"));
    }
  }
  const std::vector<ConstrainedPoint> pts =
      d >= 3 ? constrained_points(d - 1, constrained_samples, seed) : std::vector<ConstrainedPoint>{};
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      const PhasePoly numerator = z1f[i] * z2f[j] - z1f[j] * z2f[i];
      CheckResult c = identity_check(pair_name(sys + ".dirac.correction", i, j), "dirac-bracket",
                                     numerator, PhasePoly(d),
                                     "numerator of the second-class correction term");
      if (!reduced_by_pq) {
        c.expected = Expect::Info;
        c.detail += "; this system is reduced with a different second constraint";
      }
      rep.add(std::move(c));
    }
  }
  if (!pts.empty()) {
    CheckResult c;
    c.name = sys + ".dirac.z1z2.constrained";
    c.anchor = "dirac-bracket";
    c.samples = pts.size();
    const PhasePoly z1z2 = poisson_bracket(basics.z1, basics.pq);
    for (const auto& pt : pts)
      if (z1z2.evaluate(pt.q, pt.p) != Rational(2)) ++c.witness_size;
    c.passed = c.witness_size == 0;
    c.detail = "{Z1,Z2} = 2 on the constraint surface (-2 under the opposite bracket sign)";
    rep.add(std::move(c));
  }
  return rep;
}

IntegralFamily mutate_family(const IntegralFamily& fam, int alpha, std::size_t term,
                             const Rational& delta) {
  IntegralFamily out = fam;
  PhasePoly& f = out.F.at(alpha);
  if (f.is_zero()) throw std::invalid_argument("cannot mutate a zero polynomial");
  auto it = f.terms().begin();
  std::advance(it, static_cast<std::ptrdiff_t>(term % f.size()));
  f.add_term(it->first, delta);
  return out;
}

}  // namespace stackel
