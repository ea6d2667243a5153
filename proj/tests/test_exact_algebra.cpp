#include "doctest.h"
#include "support.hpp"

#include "stackel/jet.hpp"
#include "stackel/phase_poly.hpp"
#include "stackel/rational.hpp"
#include "stackel/sampling.hpp"

using namespace stackel;
using stackel::testing::random_poly;

namespace {

MultiIndex mi(std::initializer_list<int> e) {
  MultiIndex m{};
  int k = 0;
  for (int v : e) m[k++] = static_cast<std::uint8_t>(v);
  return m;
}

RJet random_jet(Rng& rng, int dim, int order) {
  RJet j = RJet::constant(dim, order, Rational(0));
  for (std::size_t k = 0; k < j.size(); ++k) j[k] = rng.small_rational(7, 5);
  return j;
}

}  // namespace

TEST_CASE("rational normal form and parsing") {
  CHECK(Rational(6, -4) == Rational(-3, 2));
  CHECK(Rational(6, -4).denominator() == 2);
  CHECK(Rational::parse("-10/4") == Rational(-5, 2));
  CHECK(Rational::parse("7").str() == "7");
  CHECK(Rational::parse("+3/9").str() == "1/3");
  CHECK_THROWS(Rational::parse("1/0"));
  CHECK_THROWS(Rational::parse("1.5"));
  CHECK_THROWS(Rational::parse("/3"));
  CHECK_THROWS(Rational(1) / Rational(0));
  CHECK(Rational(2, 3).pow(-2) == Rational(9, 4));
  CHECK(Rational(1, 3) < Rational(1, 2));
}

TEST_CASE("gaussian rationals form a field") {
  const GaussianRational z{Rational(1, 2), Rational(-3)};
  const GaussianRational w{Rational(2), Rational(5, 7)};
  CHECK(z * z.inverse() == GaussianRational(1));
  CHECK(GaussianRational::i() * GaussianRational::i() == GaussianRational(-1));
  CHECK((z + w) * w == z * w + w * w);
  CHECK((z * w) / w == z);
}

TEST_CASE("exact determinant and inverse") {
  RationalMatrix m(3, 3);
  m << 0, 2, 1, 1, 1, 1, 3, 0, Rational(1, 2);
  // Cofactor expansion along the first row: -2(1/2 - 3) + 1(0 - 3) = 2.
  CHECK(determinant(m) == Rational(2));
  const RationalMatrix inv = inverse(m);
  CHECK(m * inv == RationalMatrix::Identity(3, 3));
  RationalMatrix s = RationalMatrix::Zero(2, 2);
  CHECK_THROWS(inverse(s));
}

TEST_CASE("jet of a coordinate") {
  const auto x = coordinate_jets(testing::rationals({3, 5}), 2);
  CHECK(x[0].value() == Rational(3));
  CHECK(x[0].coefficient(mi({1, 0})) == Rational(1));
  CHECK(x[0].coefficient(mi({0, 1})) == Rational(0));
  CHECK(x[0].coefficient(mi({2, 0})) == Rational(0));
  CHECK(x[0].coefficient(mi({1, 1})) == Rational(0));
}

TEST_CASE("reciprocal jet follows the geometric series") {
  const auto f = jet_lift([](std::span<const RJet> x) { return x[0].reciprocal(); },
                          testing::rationals({2}), 4);
  CHECK(f.coefficient(mi({0})) == Rational(1, 2));
  CHECK(f.coefficient(mi({1})) == Rational(-1, 4));
  CHECK(f.coefficient(mi({2})) == Rational(1, 8));
  CHECK(f.partial(mi({2})) == Rational(1, 4));
  CHECK(f.coefficient(mi({4})) == Rational(1, 32));
  CHECK_THROWS_AS(jet_lift([](std::span<const RJet> x) { return RJet(x[0]) / (x[0] - Rational(2)); },
                           testing::rationals({2}), 2),
                  PoleError);
}

TEST_CASE("jet of sigma_2 matches its finite expansion") {
  // sigma_2(b + h) = sigma_2(b) + sum_i (sum_{j != i} b_j) h_i + sum_{i<j} h_i h_j.
  Rng rng(11);
  std::vector<Rational> b;
  for (int i = 0; i < 4; ++i) b.push_back(rng.small_rational(9, 4));
  const auto s2 = jet_lift(
      [](std::span<const RJet> x) {
        RJet s = RJet::constant(4, x[0].order(), Rational(0), x[0].base());
        for (int i = 0; i < 4; ++i)
          for (int j = i + 1; j < 4; ++j) s += x[i] * x[j];
        return s;
      },
      b, 4);
  Rational value(0);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) value += b[i] * b[j];
  CHECK(s2.value() == value);
  const JetLayout& L = s2.layout();
  for (std::size_t k = 1; k < s2.size(); ++k) {
    const MultiIndex& m = L.index(k);
    Rational expected(0);
    if (L.degree(k) == 1) {
      for (int i = 0; i < 4; ++i)
        if (m[i] == 1)
          for (int j = 0; j < 4; ++j)
            if (j != i) expected += b[j];
    } else if (L.degree(k) == 2) {
      bool square_free = true;
      for (int i = 0; i < 4; ++i) square_free = square_free && m[i] <= 1;
      expected = square_free ? Rational(1) : Rational(0);
    }
    CHECK(s2[k] == expected);
  }
}

TEST_CASE("jet arithmetic commutes with truncation") {
  Rng rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const int dim = 1 + trial % 3;
    const RJet f = random_jet(rng, dim, 4), g = random_jet(rng, dim, 4), h = random_jet(rng, dim, 4);
    for (int K = 0; K <= 4; ++K) {
      CHECK((f * g + h).truncated(K) == f.truncated(K) * g.truncated(K) + h.truncated(K));
    }
    CHECK(f * g == g * f);
    CHECK((f * g) * h == f * (g * h));
    CHECK(f * (g + h) == f * g + f * h);
    if (!f.value().is_zero()) {
      CHECK(f * f.reciprocal() == RJet::constant(dim, 4, Rational(1)));
    }
    for (int v = 0; v < dim; ++v) {
      CHECK((f * g).derivative(v) == f.derivative(v) * g.truncated(3) + f.truncated(3) * g.derivative(v));
      for (int w = 0; w < dim; ++w) CHECK(f.derivative(v).derivative(w) == f.derivative(w).derivative(v));
    }
    CHECK(RJet::constant(dim, 3, Rational(7)).derivative(0).is_zero());
  }
}

TEST_CASE("composite jets equal jets of composites") {
  const auto base = testing::rationals({2, -1, 3});
  auto fn = [](std::span<const RJet> x) { return x[0] * x[1] + (x[2] * x[2]).reciprocal(); };
  const RJet whole = jet_lift(fn, base, 4);
  const RJet f = jet_lift([](std::span<const RJet> x) { return x[0]; }, base, 4);
  const RJet g = jet_lift([](std::span<const RJet> x) { return x[1]; }, base, 4);
  const RJet h = jet_lift([](std::span<const RJet> x) { return (x[2] * x[2]).reciprocal(); }, base, 4);
  CHECK(whole == f * g + h);
  CHECK_THROWS_AS(RJet::constant(2, 5, Rational(1)), OrderOverflowError);
}

TEST_CASE("canonical bracket basics") {
  CHECK(poisson_bracket(PhasePoly::q(3, 0), PhasePoly::p(3, 0)) == PhasePoly::constant(3, 1));
  CHECK(poisson_bracket(PhasePoly::q(3, 0), PhasePoly::p(3, 1)).is_zero());
  Rng rng(3);
  const PhasePoly P = random_poly(rng, 3, 3, 8);
  CHECK(poisson_bracket(P, P).is_zero());
}

TEST_CASE("constraint bracket under the library convention") {
  const int d = 3;
  PhasePoly z1 = PhasePoly::constant(d, -1), z2(d), q2(d);
  for (int a = 0; a < d; ++a) {
    z1 += PhasePoly::q(d, a) * PhasePoly::q(d, a);
    q2 += PhasePoly::q(d, a) * PhasePoly::q(d, a);
    z2 += PhasePoly::q(d, a) * PhasePoly::p(d, a);
  }
  // Opposite sign to the reference -2 sum q^2: the reference bracket is the negative of ours.
  CHECK(poisson_bracket(z1, z2) == Rational(2) * q2);
}

TEST_CASE("bracket is a Lie bracket and a derivation") {
  for (int dof : {3, 4}) {
    Rng rng(100 + dof);
    for (int trial = 0; trial < 4; ++trial) {
      const PhasePoly P = random_poly(rng, dof, 3, 6);
      const PhasePoly Q = random_poly(rng, dof, 3, 6);
      const PhasePoly S = random_poly(rng, dof, 3, 6);
      const PhasePoly jacobi = poisson_bracket(poisson_bracket(P, Q), S) +
                               poisson_bracket(poisson_bracket(Q, S), P) +
                               poisson_bracket(poisson_bracket(S, P), Q);
      CHECK(jacobi.is_zero());
      CHECK(poisson_bracket(P, Q * S) == poisson_bracket(P, Q) * S + Q * poisson_bracket(P, S));
      CHECK(poisson_bracket(P, Q) == -poisson_bracket(Q, P));
      CHECK(poisson_bracket(P, Rational(3) * Q + S) ==
            Rational(3) * poisson_bracket(P, Q) + poisson_bracket(P, S));
    }
  }
}

TEST_CASE("polynomial ring laws and degree") {
  Rng rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    const PhasePoly A = random_poly(rng, 3, 3, 5), B = random_poly(rng, 3, 3, 5), C = random_poly(rng, 3, 3, 5);
    CHECK(A + B == B + A);
    CHECK(A * B == B * A);
    CHECK((A * B) * C == A * (B * C));
    CHECK(A * (B + C) == A * B + A * C);
    if (!A.is_zero() && !B.is_zero()) CHECK((A * B).degree() == A.degree() + B.degree());
    for (const auto& [e, c] : (A - A).terms()) CHECK(!c.is_zero());
    CHECK((A - A).is_zero());
  }
}

TEST_CASE("constrained points lie on the cotangent bundle of the sphere") {
  const auto pole = stereographic_point(std::vector<Rational>{0, 0}, std::vector<Rational>{1, 2, 3});
  CHECK(pole.q == std::vector<Rational>{0, 0, -1});
  CHECK(pole.p == std::vector<Rational>{1, 2, 0});
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const int n = 2 + static_cast<int>(seed % 3);
    const ConstrainedPoint pt = sample_constrained_point(seed, n, seed % 2 == 0);
    Rational qq(0), pq(0);
    for (int a = 0; a <= n; ++a) {
      qq += pt.q[a] * pt.q[a];
      pq += pt.p[a] * pt.q[a];
    }
    CHECK(qq == Rational(1));
    CHECK(pq.is_zero());
    if (seed % 2 == 0)
      for (const auto& qa : pt.q) CHECK(!qa.is_zero());
  }
  const ConstrainedPoint a = sample_constrained_point(1, 2), b = sample_constrained_point(1, 2);
  CHECK(a.q == b.q);
  CHECK(a.p == b.p);
  CHECK_THROWS(sample_constrained_point(1, 1));
}

TEST_CASE("chart samples interlace with the semi-axes") {
  Rng rng(2);
  const auto a = testing::rationals({1, 2, 4, 7});
  for (int t = 0; t < 50; ++t) {
    const auto x = sample_chart_point(rng, a);
    REQUIRE(x.size() == 3);
    for (int i = 0; i < 3; ++i) {
      CHECK(a[i] < x[i]);
      CHECK(x[i] < a[i + 1]);
    }
  }
}

TEST_CASE("root-branch evaluation detects sign dependence") {
  const int d = 2;
  const PhasePoly even = PhasePoly::q(d, 0) * PhasePoly::p(d, 0) + PhasePoly::q(d, 1) * PhasePoly::q(d, 1);
  const auto qs = testing::rationals({4, 9});
  const auto r = testing::rationals({3, 5});
  // q0 p0 = q0^2 r0 = 12, q1^2 = 9.
  CHECK(even.evaluate_on_root_branch(qs, r) == Rational(21));
  CHECK_FALSE(PhasePoly::q(d, 0).evaluate_on_root_branch(qs, r).has_value());
}
