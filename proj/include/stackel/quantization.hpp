#pragma once

// Carter and conformally equivariant quantization of quadratic symbols
// P = P^{ij}(x) xi_i xi_j + P_0(x), realized as second-order differential
// operators on scalar components (half-density trivialization) and applied
// to exact test jets at one base point.

#include <cstdint>
#include <span>
#include <vector>

#include "stackel/ambient.hpp"
#include "stackel/curvature.hpp"
#include "stackel/jet.hpp"
#include "stackel/rational.hpp"
#include "stackel/report.hpp"
#include "stackel/sampling.hpp"

namespace stackel {

struct QuantCoefficients {
  int n = 0;
  Rational c1, c2, c3;
  Rational c4, c5, c6;  // combinations that vanish identically
};
/// Throws NotApplicableError for n < 3.
QuantCoefficients coefficients(int n);

/// L f = a2^{ij} d_i d_j f + a1^i d_i f + a0 f.
class DiffOp {
 public:
  /// Zero operator whose coefficients are shaped like `proto`.
  DiffOp(int n, const GJet& proto);

  int dim() const { return n_; }
  /// Highest order with a nonzero coefficient; -1 for the zero operator.
  int order() const;

  GJet& a2(int i, int j) { return a2_[i * n_ + j]; }
  const GJet& a2(int i, int j) const { return a2_[i * n_ + j]; }
  GJet& a1(int i) { return a1_[i]; }
  const GJet& a1(int i) const { return a1_[i]; }
  GJet& a0() { return a0_; }
  const GJet& a0() const { return a0_; }

  /// The result has order min(order(f) - 2, coefficient orders).
  GJet apply(const GJet& f) const;

  DiffOp& operator+=(const DiffOp& o);
  DiffOp& operator-=(const DiffOp& o);
  friend DiffOp operator+(DiffOp a, const DiffOp& b) { return a += b; }
  friend DiffOp operator-(DiffOp a, const DiffOp& b) { return a -= b; }

 private:
  int n_;
  std::vector<GJet> a2_, a1_;
  GJet a0_;
};

/// ([A, B] f)(x) = A(B f) - B(A f) at the base point.
GaussianRational commutator_apply(const DiffOp& A, const DiffOp& B, const GJet& f);

/// phi o L o phi^{-1} for a function phi nonzero at the base point.
DiffOp conjugate(const DiffOp& op, const RJet& phi);

struct QuadraticSymbol {
  int n = 0;
  std::vector<RJet> P;  // P^{ij}, row-major
  RJet potential;       // degree-zero part
};
/// I_k of a system: P^{ii} = g^i sigma^i_{k-1}, plus the Neumann potential.
QuadraticSymbol stackel_symbol(SystemKind s, const SemiAxes& a, std::span<const RJet> x, int k);
/// P^{ij} = g^{ij}.
QuadraticSymbol metric_symbol(const CurvatureJets& c);

/// -nabla_i o P^{ij} o nabla_j + P_0.
DiffOp carter_op(const CurvatureJets& c, const QuadraticSymbol& P);
/// f(P) = c1 Lap Tr P + c2 R_ij P^ij + c3 R Tr P.
RJet scalar_term(const CurvatureJets& c, const QuadraticSymbol& P, const QuantCoefficients& q);
/// Carter operator plus multiplication by f(P).
DiffOp conformal_op(const CurvatureJets& c, const QuadraticSymbol& P, const QuantCoefficients& q);
/// V^j = 2 (P^{jk} d_k f(Q) - Q^{jk} d_k f(P)).
std::vector<RJet> v_term(const CurvatureJets& c, const QuadraticSymbol& P, const QuadraticSymbol& Q,
                         const QuantCoefficients& q);
/// i Q(V) = -1/2 (V^j nabla_j + nabla_j o V^j).
DiffOp first_order_op(const CurvatureJets& c, std::span<const RJet> V);

/// B^{jk}_{P,Q} from covariant derivatives and curvature.
RationalMatrix b_tensor(const CurvatureJets& c, const QuadraticSymbol& P, const QuadraticSymbol& Q);
/// -2 P^{s[k} R_{st} Q^{l]t} from values (row-major n*n inputs).
RationalMatrix b_tensor_staeckel(std::span<const Rational> P, std::span<const Rational> Q,
                                 std::span<const Rational> ricci, int n);

/// Random polynomial of degree <= `degree` in x - base with small rational coefficients.
GJet random_test_jet(Rng& rng, int n, int degree, const BasePoint& base);

/// Everything needed at one chart point: curvature jets of order 4 and the symbols I_1..I_n.
struct QuantumSetup {
  SystemKind system;
  std::vector<Rational> x;
  CurvatureJets curvature;
  QuantCoefficients q;
  std::vector<QuadraticSymbol> I;
};
QuantumSetup quantum_setup(SystemKind s, const SemiAxes& a, std::span<const Rational> x);

/// Closed forms of f(I_k).
Rational neumann_scalar_closed(const SemiAxes& a, std::span<const Rational> x, int k, const QuantCoefficients& q);
Rational dual_moser_scalar_quoted(const SemiAxes& a, std::span<const Rational> x, int k, const QuantCoefficients& q);
/// 2 c1 [(n+1)(n+2) sigma_k(x) - (n-k+1)(n-k+2) sigma_k(a)].
Rational dual_moser_scalar_direct(const SemiAxes& a, std::span<const Rational> x, int k, const QuantCoefficients& q);
/// f(I_1), f(I_2) of Jacobi-Moser.
Rational jacobi_moser_scalar_closed(const SemiAxes& a, std::span<const Rational> x, int k, const QuantCoefficients& q);
/// The displayed bracket d_i f(I_2) - (sigma_1 - x^i) d_i f(I_1); V^i is 2 g^i times it.
Rational jacobi_moser_v_closed(const SemiAxes& a, std::span<const Rational> x, int i, const QuantCoefficients& q);

/// Closed forms of f(I_k) and of V_{I_k, I_l} at chart points.
VerificationReport scalar_term_check(SystemKind s, const SemiAxes& a, int samples, std::uint64_t seed);
/// Both forms of the B tensor for every pair, with an injected off-diagonal Ricci control.
VerificationReport b_tensor_check(SystemKind s, const SemiAxes& a, int samples, std::uint64_t seed);
/// Carter and conformal commutators of all pairs on random test jets.
VerificationReport quantum_verdict(SystemKind s, const SemiAxes& a, int points, int test_functions,
                                   std::uint64_t seed);

}  // namespace stackel
