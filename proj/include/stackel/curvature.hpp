#pragma once

// Exact curvature of a metric given as rational functions of the chart
// coordinates.  Everything is evaluated at one rational base point through
// jets: an order-K metric jet gives Christoffel symbols to order K-1 and
// Riemann/Ricci to order K-2.
//
// Conventions: R^l_{i,jk} = d_j G^l_{ik} - d_k G^l_{ij} + G^l_{sj} G^s_{ik} - G^l_{sk} G^s_{ij},
// R_{ij} = R^s_{i,sj}, R_{lijk} = g_{lm} R^m_{i,jk}.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "stackel/ambient.hpp"
#include "stackel/jet.hpp"
#include "stackel/report.hpp"

namespace stackel {

/// g_{ij}(x) as an n*n row-major list of jets.
using MetricFunction = std::function<std::vector<RJet>(std::span<const RJet> x)>;

struct Metric {
  std::string tag;
  int n = 0;
  bool diagonal = true;
  MetricFunction g;
};

/// Diagonal metric from its coefficient functions g_i(x).
Metric diagonal_metric(std::string tag, int n, std::function<RJet(std::span<const RJet>, int)> coeff);
/// The metric carried by I_1 of a system.
Metric system_metric(SystemKind s, const SemiAxes& a);
/// g~_i / B: the conformally rescaled round metric.
Metric conformal_metric(const SemiAxes& a);
/// Euclidean metric on R^n.
Metric flat_metric(int n);
/// g_1 <- g_1 + eps x^2 (second coordinate): breaks the separable form.
Metric perturb_first_coefficient(const Metric& m, const Rational& eps);
/// Adds eps x^i x^j to g_{ij} and g_{ji}.
Metric inject_coupling(const Metric& m, int i, int j, const Rational& eps);

enum class ChristoffelRoute {
  General,   // G^l_{ij} = 1/2 g^{lm}(d_i g_{mj} + d_j g_{mi} - d_m g_{ij}), g^{-1} by Gauss-Jordan
  Diagonal,  // closed diagonal forms from the logarithmic derivatives of g_i
};

/// Tensor fields as jets at a base point; flat storage, first index slowest.
struct CurvatureJets {
  int n = 0;
  int order = 0;  // order of the metric jets
  std::vector<RJet> g, ginv;    // [i][j]
  std::vector<RJet> christoffel;  // [l][i][j] = G^l_{ij}
  std::vector<RJet> riemann;      // [l][i][j][k] = R^l_{i,jk}
  std::vector<RJet> ricci;        // [i][j]
  RJet scalar;

  std::size_t at(int i, int j) const { return static_cast<std::size_t>(i * n + j); }
  std::size_t at(int l, int i, int j) const { return static_cast<std::size_t>((l * n + i) * n + j); }
  std::size_t at(int l, int i, int j, int k) const {
    return static_cast<std::size_t>(((l * n + i) * n + j) * n + k);
  }
};

/// Metric jets need order >= 2; throws PoleError when the metric or its
/// inverse is singular at x.
CurvatureJets curvature_jets(const Metric& m, std::span<const Rational> x, int order,
                             ChristoffelRoute route = ChristoffelRoute::General);

/// Exact values at the base point.
struct CurvatureBundle {
  int n = 0;
  std::vector<Rational> g, ginv, christoffel, riemann, ricci;
  std::vector<Rational> riemann_lowered;  // R_{lijk}
  Rational scalar;
};
CurvatureBundle values_of(const CurvatureJets& c);
CurvatureBundle curvature_at(const Metric& m, std::span<const Rational> x);

/// C_{lijk} at the base point (n >= 3).
std::vector<Rational> weyl_tensor(const CurvatureBundle& c);
/// C_{ijk} = nabla_k P_{ij} - nabla_j P_{ik}, P the Schouten tensor; jets of order >= 3.
std::vector<Rational> cotton_tensor(const CurvatureJets& c);

/// Index symmetries, first Bianchi, metric compatibility, trace and agreement
/// of the two Christoffel routes (diagonal metrics) at x.
VerificationReport curvature_structure_check(const Metric& m, std::span<const Rational> x);

/// Closed-form Ricci tensor and scalar curvature at `samples` chart points.
VerificationReport verify_ricci_closed_forms(SystemKind s, const SemiAxes& a, int samples,
                                             std::uint64_t seed);

/// R_{ij} = 0 for i != j at chart points.
VerificationReport robertson_check(const Metric& m, const SemiAxes& a, int samples, std::uint64_t seed,
                                   Expect expected = Expect::Pass);

/// Cotton tensor (n = 3) or Weyl tensor (n >= 4) at chart points; NotApplicableError for n < 3.
VerificationReport conformal_flatness_check(const Metric& m, const SemiAxes& a, int samples,
                                            std::uint64_t seed, Expect expected = Expect::Pass);

/// Logarithmic-derivative identities of the dual Moser metric and its
/// two-index curvature components R_{ikik}, R_{ikkj}.
VerificationReport dual_moser_shortcut_check(const SemiAxes& a, std::span<const Rational> x);

}  // namespace stackel
