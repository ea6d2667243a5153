#include "doctest.h"
#include "support.hpp"

#include "stackel/curvature.hpp"
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

const SemiAxes kA3(testing::rationals({1, 2, 4, 7}));
const std::vector<Rational> kX3{Rational(3, 2), Rational(3), Rational(5)};

}  // namespace

TEST_CASE("flat and polar metrics") {
  const CurvatureBundle flat = curvature_at(flat_metric(3), kX3);
  for (const auto& v : flat.riemann) CHECK(v.is_zero());
  CHECK(flat.scalar.is_zero());

  // diag(1, (x^1)^2): G^1_22 = -x^1, G^2_12 = 1/x^1, flat.
  const Metric polar = diagonal_metric("polar", 2, [](std::span<const RJet> x, int i) {
    return i == 0 ? constant_like(x[0], Rational(1)) : x[0] * x[0];
  });
  const std::vector<Rational> x{Rational(2), Rational(1, 3)};
  const CurvatureBundle b = curvature_at(polar, x);
  CHECK(b.christoffel[0 * 4 + 1 * 2 + 1] == Rational(-2));
  CHECK(b.christoffel[1 * 4 + 0 * 2 + 1] == Rational(1, 2));
  for (const auto& v : b.riemann) CHECK(v.is_zero());

  // Half-plane diag(1/y^2, 1/y^2): R = -2.
  const Metric half_plane = diagonal_metric("half-plane", 2, [](std::span<const RJet> x, int) {
    return (x[1] * x[1]).reciprocal();
  });
  CHECK(curvature_at(half_plane, x).scalar == Rational(-2));
}

TEST_CASE("curvature structure for every system") {
  for (SystemKind s : kAllSystems) {
    require_all(curvature_structure_check(system_metric(s, kA3), kX3));
  }
  require_all(curvature_structure_check(conformal_metric(kA3), kX3));
  require_all(curvature_structure_check(inject_coupling(system_metric(SystemKind::DualMoser, kA3), 0, 2, Rational(1, 5)), kX3));
  CHECK_THROWS_AS(curvature_jets(flat_metric(2), testing::rationals({1, 1}), 1), OrderOverflowError);
  CHECK_THROWS_AS(curvature_jets(inject_coupling(flat_metric(2), 0, 1, Rational(1)), testing::rationals({1, 1}), 2,
                                 ChristoffelRoute::Diagonal),
                  NotApplicableError);
}

TEST_CASE("Ricci values against a symbolic oracle") {
  // Frozen from a sympy computation of the same convention at x = (3/2, 3, 5), a = (1, 2, 4, 7).
  struct Row {
    SystemKind s;
    std::vector<Rational> ratio;
    Rational scalar;
  };
  const std::vector<Row> rows{
      {SystemKind::Neumann, {Rational(2), Rational(2), Rational(2)}, Rational(6)},
      {SystemKind::DualMoser, {Rational(2), Rational(7, 2), Rational(11, 2)}, Rational(11)},
      {SystemKind::JacobiMoser, {Rational(1792, 2025), Rational(1456, 2025), Rational(112, 225)}, Rational(4256, 2025)},
  };
  for (const auto& row : rows) {
    const CurvatureBundle b = curvature_at(system_metric(row.s, kA3), kX3);
    for (int i = 0; i < 3; ++i) {
      CHECK(b.ricci[i * 3 + i] == row.ratio[i] * b.g[i * 3 + i]);
      for (int j = 0; j < 3; ++j)
        if (j != i) CHECK(b.ricci[i * 3 + j].is_zero());
    }
    CHECK(b.scalar == row.scalar);
  }
}

TEST_CASE("closed-form Ricci tensors, n = 2, 3, 4") {
  for (int n : {2, 3, 4})
    for (SystemKind s : kAllSystems) {
      const VerificationReport rep = verify_ricci_closed_forms(s, SemiAxes::standard(n), n == 4 ? 5 : 10, 11);
      require_all(rep);
      CHECK(rep.ok());
    }
}

TEST_CASE("Robertson condition and its controls") {
  for (SystemKind s : kAllSystems) require_all(robertson_check(system_metric(s, kA3), kA3, 5, 3));
  const Metric dm = system_metric(SystemKind::DualMoser, kA3);
  const VerificationReport perturbed = robertson_check(perturb_first_coefficient(dm, Rational(1, 10)), kA3, 5, 3);
  CHECK_FALSE(perturbed.checks.at(0).passed);
  CHECK(perturbed.checks.at(0).witness_size == 5);
  const VerificationReport coupled = robertson_check(inject_coupling(dm, 0, 1, Rational(1, 10)), kA3, 3, 3);
  CHECK_FALSE(coupled.checks.at(0).passed);
}

TEST_CASE("conformal flatness") {
  require_all(conformal_flatness_check(system_metric(SystemKind::DualMoser, kA3), kA3, 5, 5));
  require_all(conformal_flatness_check(system_metric(SystemKind::Neumann, kA3), kA3, 5, 5));
  require_all(conformal_flatness_check(conformal_metric(kA3), kA3, 3, 5));
  const SemiAxes a4 = SemiAxes::standard(4);
  require_all(conformal_flatness_check(system_metric(SystemKind::DualMoser, a4), a4, 3, 5));
  require_all(conformal_flatness_check(system_metric(SystemKind::Neumann, a4), a4, 3, 5));

  const VerificationReport jm3 = conformal_flatness_check(system_metric(SystemKind::JacobiMoser, kA3), kA3, 3, 5, Expect::Info);
  CHECK_FALSE(jm3.checks.at(0).passed);
  const VerificationReport jm4 = conformal_flatness_check(system_metric(SystemKind::JacobiMoser, a4), a4, 2, 5, Expect::Info);
  CHECK_FALSE(jm4.checks.at(0).passed);
  const VerificationReport bent =
      conformal_flatness_check(perturb_first_coefficient(system_metric(SystemKind::DualMoser, kA3), Rational(1, 10)), kA3, 2, 5);
  CHECK_FALSE(bent.checks.at(0).passed);

  const SemiAxes a2 = SemiAxes::standard(2);
  CHECK_THROWS_AS(conformal_flatness_check(system_metric(SystemKind::DualMoser, a2), a2, 1, 1), NotApplicableError);
}

TEST_CASE("dual Moser curvature shortcut") {
  require_all(dual_moser_shortcut_check(kA3, kX3));
  const SemiAxes a4 = SemiAxes::standard(4);
  Rng rng(9);
  require_all(dual_moser_shortcut_check(a4, sample_chart_point(rng, a4.values())));
}
