#pragma once

// Double-precision geodesic flows on S^n in ambient coordinates (q, v):
//   g1 = sum a dq^2 restricted to the sphere (ellipsoid geodesics, Jacobi-Moser),
//   g2 = sum dq^2 / B restricted to the sphere (dual Moser),  B = sum q^2 / a.
// Integration is an adaptive Dormand-Prince 5(4) scheme with projection back
// onto {|q| = 1, q.v = 0} after every accepted step.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "stackel/ambient.hpp"
#include "stackel/errors.hpp"
#include "stackel/report.hpp"

namespace stackel {

enum class FlowMetric { G1, G2 };

std::string_view flow_tag(FlowMetric m);
/// jacobi-moser -> g1, dual-moser -> g2; NotApplicableError for neumann.
FlowMetric flow_metric_for(SystemKind s);

/// Sign of the first v-term in the g2 spray: `Geodesic` is the geodesic
/// equation of the conformal metric, `Quoted` flips it.
enum class SpraySign { Geodesic, Quoted };

struct FlowState {
  double t = 0;
  Eigen::VectorXd q, v;
  double arc = 0;  // Euclidean arc length travelled since t = 0
};

/// dv/dt; throws std::domain_error on non-finite input.
Eigen::VectorXd spray(FlowMetric m, std::span<const double> a, const Eigen::VectorXd& q, const Eigen::VectorXd& v,
                      SpraySign sign = SpraySign::Geodesic);

struct FlowIntegrals {
  double H = 0;
  std::vector<double> F;
  double J = 0;  // C^2 = 1/(B v^2) on g1, A/B^2 on g2
};
FlowIntegrals flow_integrals(FlowMetric m, const SemiAxes& a, const Eigen::VectorXd& q, const Eigen::VectorXd& v);

struct Trajectory {
  FlowMetric metric = FlowMetric::G2;
  std::vector<FlowState> states;
  std::vector<FlowIntegrals> integrals;
  std::size_t accepted_steps = 0, rejected_steps = 0;
};

class StiffSegmentError : public Error {
 public:
  StiffSegmentError(const std::string& what, Trajectory partial)
      : Error("stiff segment: " + what), partial_(std::move(partial)) {}
  const Trajectory& partial() const { return partial_; }

 private:
  Trajectory partial_;
};

struct FlowOptions {
  double T = 10;
  double tol = 1e-10;
  int samples = 1000;
};

/// Initial data must satisfy the constraints to 1e-12.
Trajectory integrate(FlowMetric m, const SemiAxes& a, const FlowState& initial, const FlowOptions& opt = {});

/// Point on the sphere with a unit tangent direction, scaled so H = 1/2 for `m`.
FlowState initial_state(FlowMetric m, const SemiAxes& a, Eigen::VectorXd q, Eigen::VectorXd direction);
/// Deterministic generic initial data from a seed.
FlowState random_initial_state(FlowMetric m, const SemiAxes& a, std::uint64_t seed);

struct Drift {
  double H = 0;
  std::vector<double> F;
  double J = 0;
  double max_F() const;
  double constraint = 0;  // max over samples of | |q|^2 - 1 | and |q.v|
};
/// max_t |X(t) - X(0)| / max(1, |X(0)|) for every logged integral.
Drift drift(const Trajectory& tr);

/// Position at Euclidean arc length s (cubic Hermite in t, inverse of s(t)).
Eigen::VectorXd position_at_arc(const Trajectory& tr, double s);

struct ProjectiveComparison {
  double max_deviation = 0;
  double common_length = 0;
};
/// Arc-length resampled distance between the g1 and g2 geodesics through
/// `q0`; the g2 direction is rotated by `mismatch` radians towards a second
/// tangent vector when nonzero.
ProjectiveComparison compare_projective(const SemiAxes& a, const Eigen::VectorXd& q0, const Eigen::VectorXd& dir,
                                        const FlowOptions& opt, double mismatch = 0, int resample = 2000);

/// Conservation on both flows, constraint residuals and tolerance sweep.
VerificationReport flow_conservation_check(const SemiAxes& a, std::uint64_t seed, const FlowOptions& opt = {});
/// Matched and mismatched projective-equivalence runs.
VerificationReport projective_equivalence_check(const SemiAxes& a, std::uint64_t seed, const FlowOptions& opt = {});

/// `t,q0..qn,v0..vn,H,F0..Fn,J` at 17 significant digits.
std::string trajectory_csv(const Trajectory& tr);

}  // namespace stackel
