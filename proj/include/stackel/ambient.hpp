#pragma once

// The three integrable systems as polynomial observables on T*R^{n+1}.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stackel/phase_poly.hpp"
#include "stackel/rational.hpp"
#include "stackel/report.hpp"

namespace stackel {

enum class SystemKind { JacobiMoser, Neumann, DualMoser };

inline constexpr SystemKind kAllSystems[] = {SystemKind::DualMoser, SystemKind::Neumann,
                                             SystemKind::JacobiMoser};

std::string_view system_tag(SystemKind s);
/// Accepts "jacobi-moser", "neumann" and "dual-moser"; throws std::invalid_argument.
SystemKind parse_system(std::string_view tag);

/// Strictly increasing positive semi-axes a_0 < ... < a_n.
class SemiAxes {
 public:
  /// Throws CoincidentAxesError for repeated values, std::invalid_argument
  /// for non-positive or unordered input.
  explicit SemiAxes(std::vector<Rational> a);

  int n() const { return static_cast<int>(a_.size()) - 1; }
  int dof() const { return static_cast<int>(a_.size()); }
  const Rational& operator[](int alpha) const { return a_[alpha]; }
  std::span<const Rational> values() const { return a_; }

  /// (1, 2, 4, 7, 11, 16, 22, 29) truncated to n+1 entries.
  static SemiAxes standard(int n);

 private:
  std::vector<Rational> a_;
};

struct IntegralFamily {
  SystemKind system;
  SemiAxes a;
  std::vector<PhasePoly> F;
  PhasePoly H;
};

IntegralFamily build_dual_moser(const SemiAxes& a);
IntegralFamily build_jacobi_moser(const SemiAxes& a);
IntegralFamily build_neumann(const SemiAxes& a);
IntegralFamily build_family(SystemKind s, const SemiAxes& a);

/// Common ambient observables.
struct AmbientBasics {
  PhasePoly q_norm2;  // sum q^2
  PhasePoly p_norm2;  // sum p^2
  PhasePoly pq;       // sum p q  (second constraint)
  PhasePoly B;        // sum q^2 / a
  PhasePoly J;        // sum a p^2
  PhasePoly z1;       // sum q^2 - 1
};
AmbientBasics ambient_basics(const SemiAxes& a);

/// Pieces of the dual Moser integrals: F_a = A_a + B_a with A_a = q_a^2 J and
/// B_a = sum_{b != a} M_ab^2 / (a_a - a_b), M_ab = a_a p_a q_b - a_b p_b q_a.
struct DualMoserParts {
  std::vector<PhasePoly> A;
  std::vector<PhasePoly> B;
  std::vector<std::vector<PhasePoly>> M;
};
DualMoserParts dual_moser_parts(const SemiAxes& a);

/// The Moser form P_a^2 + sum_{b != a} (P_a Q_b - P_b Q_a)^2/(a_a - a_b).
std::vector<PhasePoly> moser_canonical_integrals(const SemiAxes& a);
/// Jacobi-Moser integrals in velocities:
/// a_a v_a^2 + sum_{b != a} a_a a_b (v_a q_b - v_b q_a)^2/(a_a - a_b), with v in the p slots.
std::vector<PhasePoly> jacobi_moser_velocity_integrals(const SemiAxes& a);

/// Pairwise {F_a, F_b} plus, for dual Moser, the three structural bracket identities.
VerificationReport verify_involution(const IntegralFamily& fam, bool with_structure = true);

/// {H, F_a} for the dual Moser family against the closed form, the third sum
/// relation and the constrained-point vanishing.  NotApplicableError otherwise.
VerificationReport verify_h_bracket(const IntegralFamily& fam, int constrained_samples = 20,
                                    std::uint64_t seed = 1);

/// Sum relations of the dual Moser integrals (first two) and the Joachimsthal
/// invariant on constrained points.  NotApplicableError for other systems.
VerificationReport verify_sum_relations(const IntegralFamily& fam, int constrained_samples = 20,
                                        std::uint64_t seed = 1);

/// {H, F_a} = 0 for every family: exact where it holds off the constraint
/// surface, else at sampled constrained points.
VerificationReport verify_conservation(const IntegralFamily& fam, int constrained_samples = 20,
                                       std::uint64_t seed = 1);

/// Constraint brackets {Z1, F_a}, {Z2, F_a} and the Dirac correction numerator.
VerificationReport dirac_verify(const IntegralFamily& fam, int constrained_samples = 20,
                                std::uint64_t seed = 1);

/// Adds `delta` to the coefficient of the `term`-th monomial (in map order) of F[alpha].
IntegralFamily mutate_family(const IntegralFamily& fam, int alpha, std::size_t term,
                             const Rational& delta);

/// True when every pairwise bracket {F_a, F_b} is the zero polynomial.
bool family_in_involution(const IntegralFamily& fam);

}  // namespace stackel
