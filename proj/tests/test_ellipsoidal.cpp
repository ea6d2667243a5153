#include "doctest.h"
#include "support.hpp"

#include "stackel/ellipsoidal.hpp"
#include "stackel/errors.hpp"

using namespace stackel;

namespace {

void require_all(const VerificationReport& rep) {
  for (const auto& c : rep.checks) {
    INFO(c.name << " witness=" << c.witness_size << " " << c.detail);
    CHECK(c.as_expected());
  }
}

const SemiAxes kA2(testing::rationals({1, 2, 4}));
const SemiAxes kA3(testing::rationals({1, 2, 4, 7}));

CotangentPoint point2() {
  return {{Rational(3, 2), Rational(3)}, {Rational(2, 3), Rational(-5, 7)}};
}
CotangentPoint point3() {
  return {{Rational(3, 2), Rational(3), Rational(5)}, {Rational(1), Rational(-2), Rational(1, 3)}};
}

}  // namespace

TEST_CASE("symmetric functions") {
  const auto f = sym_funcs(testing::rationals({3, 5}));
  CHECK(f.sigma == testing::rationals({1, 8, 15}));
  CHECK(f.sigma_without[0] == testing::rationals({1, 5}));

  Rng rng(3);
  std::vector<Rational> x;
  for (int k = 0; k < 4; ++k) x.push_back(rng.small_rational(9, 5));
  const auto sf = sym_funcs(x);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (int k = 1; k <= 4; ++k) {
      const Rational lower = k - 1 < 4 ? sf.sigma_without[i][k - 1] : Rational(0);
      const Rational same = k < 4 ? sf.sigma_without[i][k] : Rational(0);
      CHECK(sf.sigma[k] == same + x[i] * lower);
    }
  // d sigma_k / d x^i = sigma^i_{k-1}, through jets.
  const auto xj = coordinate_jets(x, 1);
  const RJet one = constant_like(xj[0], Rational(1));
  const auto sj = elementary_symmetric<RJet>(xj, one);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (int k = 1; k <= 4; ++k) CHECK(sj[k].derivative(static_cast<int>(i)).value() == sf.sigma_without[i][k - 1]);
}

TEST_CASE("chart and sphere embedding") {
  CHECK_THROWS_AS(q_squared(kA2, testing::rationals({3, 3})), ChartError);
  CHECK_THROWS_AS(q_squared(kA2, testing::rationals({1, 3})), ChartError);
  CHECK_THROWS_AS(q_squared(kA2, testing::rationals({3, 2})), ChartError);
  CHECK_THROWS_AS(q_squared(kA2, testing::rationals({3, 3, 3})), ChartError);
  const auto q2 = q_squared(kA2, point2().x);
  // (a - 3/2)(a - 3) / prod(a - b)
  CHECK(q2 == std::vector<Rational>{Rational(-1, 2) * Rational(-2) / Rational(3), Rational(1, 2) * Rational(-1) / Rational(-2),
                                     Rational(5, 2) / Rational(6)});
  Rational s(0);
  for (const auto& v : q2) s += v;
  CHECK(s == Rational(1));
  const auto q = q_from_x(kA2, point2().x);
  CHECK(q[2] == doctest::Approx(std::sqrt(5.0 / 12.0)));
}

TEST_CASE("metric coefficients") {
  const auto round = metric_coeffs(SystemKind::Neumann, kA2, point2().x);
  CHECK(round[0] == Rational(3, 5));
  CHECK(round[1] == Rational(3, 16));
  const auto dm = metric_coeffs(SystemKind::DualMoser, kA2, point2().x);
  const auto jm = metric_coeffs(SystemKind::JacobiMoser, kA2, point2().x);
  for (int i = 0; i < 2; ++i) {
    CHECK(dm[i] * point2().x[i] == round[i]);
    CHECK(jm[i] == point2().x[i] * round[i]);
  }
  const auto r3 = metric_coeffs(SystemKind::Neumann, kA3, point3().x);
  CHECK(r3 == std::vector<Rational>{Rational(21, 55), Rational(3, 32), Rational(7, 96)});
}

TEST_CASE("separated integrals against a symbolic oracle") {
  // Frozen from an independent sympy evaluation of sum_i g^i sigma^i_{k-1} xi_i^2 (- sigma_k for Neumann).
  CHECK(integrals_Ik(SystemKind::JacobiMoser, kA2, point2()) ==
        std::vector<Rational>{Rational(5560, 3969), Rational(3760, 1323)});
  CHECK(integrals_Ik(SystemKind::Neumann, kA2, point2()) ==
        std::vector<Rational>{Rational(-2747, 2646), Rational(1591, 882)});
  CHECK(integrals_Ik(SystemKind::DualMoser, kA2, point2()) ==
        std::vector<Rational>{Rational(4090, 441), Rational(2290, 147)});
  CHECK(integrals_Ik(SystemKind::JacobiMoser, kA3, point3()) ==
        std::vector<Rational>{Rational(5126, 315), Rational(33952, 315), Rational(4698, 35)});
  CHECK(integrals_Ik(SystemKind::Neumann, kA3, point3()) ==
        std::vector<Rational>{Rational(1567, 42), Rational(1947, 7), Rational(4811, 14)});
  CHECK(integrals_Ik(SystemKind::DualMoser, kA3, point3()) ==
        std::vector<Rational>{Rational(5861, 42), Rational(6284, 7), Rational(14745, 14)});

  CotangentPoint rest = point3();
  rest.xi.assign(3, Rational(0));
  const auto sig = sym_funcs(rest.x).sigma;
  const auto In = integrals_Ik(SystemKind::Neumann, kA3, rest);
  for (int k = 1; k <= 3; ++k) {
    CHECK(In[k - 1] == -sig[k]);
    CHECK(integrals_Ik(SystemKind::DualMoser, kA3, rest)[k - 1].is_zero());
  }
}

TEST_CASE("dual Moser pullback at a fixed point") {
  // Ambient values frozen from a sympy evaluation with q = sqrt(q^2), p from the momentum map.
  const IntegralFamily fam = build_dual_moser(kA2);
  const std::vector<Rational> expected{Rational(-2780, 1323), Rational(-1310, 441), Rational(18980, 1323)};
  for (int al = 0; al < 3; ++al) CHECK(pull_back(fam.F[al], SystemKind::DualMoser, kA2, point2()) == expected[al]);
  CHECK(pull_back(fam.H, SystemKind::DualMoser, kA2, point2()) == Rational(1145, 1176));
  require_all(pullback_check(kA2, point2()));
  require_all(pullback_check(kA3, point3()));

  CotangentPoint rest = point2();
  rest.xi.assign(2, Rational(0));
  for (const auto& f : fam.F) CHECK(pull_back(f, SystemKind::DualMoser, kA2, rest).is_zero());
}

TEST_CASE("Hamiltonian identities and the dual Moser normalisation") {
  for (SystemKind s : kAllSystems) {
    const VerificationReport rep = hamiltonian_check(s, kA3, point3());
    require_all(rep);
  }
  const VerificationReport dm = hamiltonian_check(SystemKind::DualMoser, kA2, point2());
  CHECK(dm.find("dual-moser.normalization.table.hamiltonian")->passed);
  CHECK_FALSE(dm.find("dual-moser.normalization.literal.hamiltonian")->passed);
  CHECK_FALSE(dm.find("dual-moser.normalization.literal.sum")->passed);
}

TEST_CASE("Staeckel matrices") {
  for (SystemKind s : kAllSystems) {
    const StackelData d = stackel_matrices(s, kA2, point2().x);
    const RationalMatrix prod = d.B * d.A;
    CHECK(prod == RationalMatrix::Identity(2, 2));
    const RationalMatrix bare = stackel_matrices(s, kA2, point2().x, InverseForm::Bare).B * d.A;
    CHECK((bare == RationalMatrix::Identity(2, 2)) == (s == SystemKind::DualMoser));
  }
  // Mutated sigma index: I_1 built from sigma^i_1 is no longer 2H.
  const CotangentPoint pt = point2();
  Rational wrong(0);
  const std::span<const Rational> x = pt.x;
  for (int i = 0; i < 2; ++i) wrong += quadratic_coeff(SystemKind::JacobiMoser, kA2, x, i, 2) * pt.xi[i] * pt.xi[i];
  CHECK(wrong != Rational(2) * pull_back(build_jacobi_moser(kA2).H, SystemKind::JacobiMoser, kA2, pt));
}

TEST_CASE("residue identity") {
  for (int n : {2, 3, 4}) {
    std::vector<Rational> x;
    for (int k = 0; k < n; ++k) x.push_back(Rational(2 * k + 1, 3));
    for (int i = 1; i <= n; ++i)
      for (const auto& c : residue_identity_defect(x, i)) CHECK(c.is_zero());
  }
  CHECK_THROWS(residue_identity_defect(testing::rationals({1, 2}), 0));
}

TEST_CASE("Staeckel certificate, 20 points per system") {
  for (int n : {2, 3}) {
    for (SystemKind s : kAllSystems) {
      const VerificationReport rep = verify_stackel(s, SemiAxes::standard(n), 20, 7);
      require_all(rep);
      const CheckResult* c = rep.find(std::string(system_tag(s)) + ".staeckel.inverse.table");
      REQUIRE(c != nullptr);
      CHECK(c->samples == 20);
      CHECK(c->passed);
    }
  }
}

TEST_CASE("separated involution and its control") {
  for (SystemKind s : kAllSystems) {
    CHECK(separated_bracket(s, kA3, point3(), 1, 2).is_zero());
    CHECK(separated_bracket(s, kA3, point3(), 2, 3).is_zero());
  }
  // A potential that is not of Staeckel form: add x^1 to I_1 only.
  const CotangentPoint pt = point3();
  const auto xj = coordinate_jets(pt.x, 1);
  Rational bad(0);
  for (int m = 0; m < 3; ++m) {
    Rational dI1 = m == 0 ? Rational(1) : Rational(0);
    for (int i = 0; i < 3; ++i)
      dI1 += quadratic_coeff(SystemKind::DualMoser, kA3, std::span<const RJet>(xj), i, 1).derivative(m).value() *
             pt.xi[i] * pt.xi[i];
    Rational dI2(0);
    for (int i = 0; i < 3; ++i)
      dI2 += quadratic_coeff(SystemKind::DualMoser, kA3, std::span<const RJet>(xj), i, 2).derivative(m).value() *
             pt.xi[i] * pt.xi[i];
    const std::span<const Rational> x = pt.x;
    const Rational p1 = Rational(2) * quadratic_coeff(SystemKind::DualMoser, kA3, x, m, 1) * pt.xi[m];
    const Rational p2 = Rational(2) * quadratic_coeff(SystemKind::DualMoser, kA3, x, m, 2) * pt.xi[m];
    bad += dI1 * p2 - p1 * dI2;
  }
  CHECK_FALSE(bad.is_zero());
}

TEST_CASE("dual Moser potentials") {
  const VerificationReport zero = potentials_check(kA2, point2(), Rational(0), Rational(0));
  CHECK(zero.find("dual-moser.potentials.quoted-form")->passed);
  for (auto [a, pt, mu, nu] : {std::tuple{kA2, point2(), Rational(1), Rational(0)},
                               std::tuple{kA3, point3(), Rational(2), Rational(3)}}) {
    const VerificationReport rep = potentials_check(a, pt, mu, nu);
    require_all(rep);
    CHECK(rep.find("dual-moser.potentials.separated-form")->passed);
    CHECK(rep.find("dual-moser.potentials.quoted-form-negated")->passed);
    CHECK(rep.find("dual-moser.potentials.involution")->passed);
    // f = B v is minus the quoted closed form.
    const auto f = separated_potentials(a, pt.x, mu, nu);
    for (int i = 0; i < a.n(); ++i) CHECK(f[i] == -quoted_separated_potential(a, pt.x[i], mu, nu));
  }
  // Frozen: v_k at x = (3/2, 3, 5), mu = 2, nu = 3.
  const CotangentPoint p3 = point3();
  const std::span<const Rational> x = p3.x;
  CHECK(dual_moser_potential(x, 1, Rational(2), Rational(3)) == Rational(835, 4));
  CHECK(dual_moser_potential(x, 2, Rational(2), Rational(3)) == Rational(756));
  CHECK(dual_moser_potential(x, 3, Rational(2), Rational(3)) == Rational(2745, 4));
}
