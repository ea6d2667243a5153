#include "doctest.h"
#include "support.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "stackel/geodesic_flow.hpp"

using namespace stackel;

namespace {

void require_all(const VerificationReport& rep) {
  for (const auto& c : rep.checks) {
    INFO(c.name << " " << c.detail);
    CHECK(c.as_expected());
  }
}

const SemiAxes kA2(testing::rationals({1, 2, 4}));

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double x : v) out[k++] = x;
  return out;
}

}  // namespace

TEST_CASE("sprays") {
  const std::vector<double> a{1, 2, 4};
  const Eigen::VectorXd q = vec({0.6, 0.0, 0.8});
  for (FlowMetric m : {FlowMetric::G1, FlowMetric::G2}) CHECK(spray(m, a, q, Eigen::VectorXd::Zero(3)).norm() == 0);

  // Round sphere: great-circle equation vdot = -v^2 q.
  const std::vector<double> ones{1, 1, 1};
  const Eigen::VectorXd v = vec({-0.8, 0.5, 0.6});
  const Eigen::VectorXd expect = -v.squaredNorm() * q;
  CHECK((spray(FlowMetric::G1, ones, q, v) - expect).norm() < 1e-15);

  // q.vdot + v^2 = 0 for both sprays; the flipped g2 sign breaks it.
  for (FlowMetric m : {FlowMetric::G1, FlowMetric::G2})
    CHECK(std::abs(q.dot(spray(m, a, q, v)) + v.squaredNorm()) < 1e-12);
  CHECK(std::abs(q.dot(spray(FlowMetric::G2, a, q, v, SpraySign::Quoted)) + v.squaredNorm()) > 1e-3);

  Eigen::VectorXd bad = q;
  bad[0] = std::nan("");
  CHECK_THROWS_AS(spray(FlowMetric::G1, a, bad, v), std::domain_error);
}

TEST_CASE("principal circle closes after one turn") {
  // The plane q1 = 0 is fixed by a reflection isometry, so its circle is a g1 geodesic.
  const FlowState s0 = initial_state(FlowMetric::G1, kA2, vec({1, 0, 0}), vec({0, 0, 1}));
  FlowOptions opt;
  opt.T = 20;
  opt.samples = 200;
  const Trajectory tr = integrate(FlowMetric::G1, kA2, s0, opt);
  for (const auto& st : tr.states) CHECK(std::abs(st.q[1]) < 1e-12);
  CHECK(tr.states.back().arc > 2 * std::numbers::pi);
  CHECK((position_at_arc(tr, 2 * std::numbers::pi) - s0.q).norm() < 1e-8);
}

TEST_CASE("conservation along both flows") {
  const VerificationReport rep = flow_conservation_check(kA2, 3);
  require_all(rep);
}

TEST_CASE("oracle rerun at tol / 100") {
  FlowOptions opt;
  opt.T = 5;
  const FlowState s0 = random_initial_state(FlowMetric::G2, kA2, 8);
  const Trajectory coarse = integrate(FlowMetric::G2, kA2, s0, opt);
  opt.tol /= 100;
  const Trajectory fine = integrate(FlowMetric::G2, kA2, s0, opt);
  CHECK((coarse.states.back().q - fine.states.back().q).norm() < 1e-7);
  CHECK(fine.accepted_steps > coarse.accepted_steps);
}

TEST_CASE("projective equivalence of g1 and g2") {
  const VerificationReport rep = projective_equivalence_check(kA2, 5);
  require_all(rep);
}

TEST_CASE("trajectory export and errors") {
  FlowOptions opt;
  opt.T = 0.5;
  opt.samples = 5;
  const Trajectory tr = integrate(FlowMetric::G2, kA2, random_initial_state(FlowMetric::G2, kA2, 1), opt);
  CHECK(tr.states.size() == 6);
  for (std::size_t k = 1; k < tr.states.size(); ++k) CHECK(tr.states[k].t > tr.states[k - 1].t);
  const std::string csv = trajectory_csv(tr);
  std::istringstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,q0,q1,q2,v0,v1,v2,H,F0,F1,F2,J");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 6);

  FlowState bad = random_initial_state(FlowMetric::G2, kA2, 1);
  bad.q *= 1.01;
  CHECK_THROWS_AS(integrate(FlowMetric::G2, kA2, bad, opt), std::invalid_argument);
  CHECK_THROWS_AS(flow_metric_for(SystemKind::Neumann), NotApplicableError);
  CHECK(flow_metric_for(SystemKind::DualMoser) == FlowMetric::G2);
}
