#include "stackel/geodesic_flow.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "stackel/parallel.hpp"
#include "stackel/sampling.hpp"

namespace stackel {

namespace {

// Pinned thresholds of the flow checks.
constexpr double kDriftBound = 1e-8;
constexpr double kConstraintBound = 1e-10;
constexpr double kProjectiveBound = 1e-6;
constexpr double kMismatchFloor = 1e-2;
constexpr double kMismatchAngle = 0.05;

using Vec = Eigen::VectorXd;

std::vector<double> axes_double(const SemiAxes& a) {
  std::vector<double> out;
  for (const auto& v : a.values()) out.push_back(v.to_double());
  return out;
}

double B_of(std::span<const double> a, const Vec& q) {
  double B = 0;
  for (Eigen::Index k = 0; k < q.size(); ++k) B += q[k] * q[k] / a[k];
  return B;
}

// y = (q, v, arc)
Vec rhs(FlowMetric m, std::span<const double> a, const Vec& y, Eigen::Index d) {
  Vec out(y.size());
  const Vec q = y.head(d), v = y.segment(d, d);
  out.head(d) = v;
  out.segment(d, d) = spray(m, a, q, v);
  out[2 * d] = v.norm();
  return out;
}

void project(Vec& y, Eigen::Index d) {
  Vec q = y.head(d);
  q /= q.norm();
  Vec v = y.segment(d, d);
  v -= q.dot(v) * q;
  y.head(d) = q;
  y.segment(d, d) = v;
}

FlowState state_of(double t, const Vec& y, Eigen::Index d) {
  return FlowState{t, y.head(d), y.segment(d, d), y[2 * d]};
}

double relative(double x, double x0) { return std::abs(x - x0) / std::max(1.0, std::abs(x0)); }

// Logged first integrals; g2 momenta are p = v / B.
class IntegralEvaluator {
 public:
  IntegralEvaluator(FlowMetric m, const SemiAxes& a)
      : m_(m),
        a_(axes_double(a)),
        F_(m == FlowMetric::G1 ? jacobi_moser_velocity_integrals(a) : build_dual_moser(a).F) {}

  FlowIntegrals operator()(const Vec& q, const Vec& v) const {
    const Eigen::Index d = q.size();
    const std::vector<double> qs(q.data(), q.data() + d);
    const double B = B_of(a_, q);
    double A = 0;
    for (Eigen::Index k = 0; k < d; ++k) A += a_[k] * v[k] * v[k];
    const Vec p = m_ == FlowMetric::G1 ? v : Vec(v / B);
    const std::vector<double> ps(p.data(), p.data() + d);
    FlowIntegrals out;
    for (const auto& f : F_) out.F.push_back(f.evaluate(std::span<const double>(qs), std::span<const double>(ps)));
    if (m_ == FlowMetric::G1) {
      out.H = A / 2;
      out.J = 1 / (B * v.squaredNorm());
    } else {
      out.H = v.squaredNorm() / (2 * B);
      out.J = A / (B * B);
    }
    return out;
  }

 private:
  FlowMetric m_;
  std::vector<double> a_;
  std::vector<PhasePoly> F_;
};

// Dormand-Prince 5(4) tableau (autonomous system, nodes not needed).
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

// Cubic Hermite on [0, 1] with end values and scaled end slopes.
template <class T>
T hermite(const T& y0, const T& y1, const T& d0, const T& d1, double u) {
  const double u2 = u * u, u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * y0 + (u3 - 2 * u2 + u) * d0 + (-2 * u3 + 3 * u2) * y1 + (u3 - u2) * d1;
}

Vec orthonormal_tangent(const Vec& q, const Vec& dir) {
  // first coordinate axis not in span(q, dir), Gram-Schmidt
  for (Eigen::Index k = 0; k < q.size(); ++k) {
    Vec w = Vec::Unit(q.size(), k);
    w -= q.dot(w) * q;
    w -= dir.dot(w) * dir;
    if (w.norm() > 1e-3) return w / w.norm();
  }
  throw std::domain_error("no second tangent direction");
}

CheckResult bounded(std::string name, std::string anchor, double value, double bound, Expect expected = Expect::Pass) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.3e (bound %.0e)", value, bound);
  CheckResult c = point_check(std::move(name), std::move(anchor), std::isfinite(value) && value <= bound, buf);
  c.expected = expected;
  return c;
}

}  // namespace

std::string_view flow_tag(FlowMetric m) { return m == FlowMetric::G1 ? "g1" : "g2"; }

FlowMetric flow_metric_for(SystemKind s) {
  switch (s) {
    case SystemKind::JacobiMoser: return FlowMetric::G1;
    case SystemKind::DualMoser: return FlowMetric::G2;
    case SystemKind::Neumann: break;
  }
  throw NotApplicableError("the Neumann system is not a geodesic flow");
}

Vec spray(FlowMetric m, std::span<const double> a, const Vec& q, const Vec& v, SpraySign sign) {
  if (!q.allFinite() || !v.allFinite()) throw std::domain_error("non-finite flow state");
  const double B = B_of(a, q);
  const double v2 = v.squaredNorm();
  Vec qa(q.size());
  for (Eigen::Index k = 0; k < q.size(); ++k) qa[k] = q[k] / a[k];
  if (m == FlowMetric::G1) return -(v2 / B) * qa;
  const double vqa = v.dot(qa);
  const double s = sign == SpraySign::Geodesic ? 1.0 : -1.0;
  return (s * 2 * vqa * v - s * v2 * qa) / B;
}

FlowIntegrals flow_integrals(FlowMetric m, const SemiAxes& a, const Vec& q, const Vec& v) {
  return IntegralEvaluator(m, a)(q, v);
}

Trajectory integrate(FlowMetric m, const SemiAxes& a, const FlowState& initial, const FlowOptions& opt) {
  const Eigen::Index d = initial.q.size();
  if (d != a.dof()) throw std::invalid_argument("state dimension does not match the semi-axes");
  if (std::abs(initial.q.squaredNorm() - 1) > 1e-12 || std::abs(initial.q.dot(initial.v)) > 1e-12)
    throw std::invalid_argument("initial state violates the sphere constraints");
  if (!(opt.T > 0) || !(opt.tol > 0) || opt.samples < 1) throw std::invalid_argument("invalid flow options");

  const std::vector<double> ad = axes_double(a);
  const IntegralEvaluator integrals(m, a);

  Trajectory tr;
  tr.metric = m;
  Vec y(2 * d + 1);
  y << initial.q, initial.v, initial.arc;
  double t = initial.t;
  tr.states.push_back(state_of(t, y, d));
  tr.integrals.push_back(integrals(initial.q, initial.v));

  const double t_end = initial.t + opt.T;
  const double dt_out = opt.T / opt.samples;
  int next_sample = 1;
  auto emit = [&](const Vec& ys, double ts) {
    Vec yp = ys;
    project(yp, d);
    tr.states.push_back(state_of(ts, yp, d));
    tr.integrals.push_back(integrals(tr.states.back().q, tr.states.back().v));
  };

  double h = std::min(opt.T, 1e-2);
  Vec k1 = rhs(m, ad, y, d);
  while (next_sample <= opt.samples) {
    if (h < 1e-14 * std::max(1.0, std::abs(t)))
      throw StiffSegmentError("step size underflow at t = " + std::to_string(t), tr);
    const double step = std::min(h, t_end - t);
    const Vec k2 = rhs(m, ad, y + step * (a21 * k1), d);
    const Vec k3 = rhs(m, ad, y + step * (a31 * k1 + a32 * k2), d);
    const Vec k4 = rhs(m, ad, y + step * (a41 * k1 + a42 * k2 + a43 * k3), d);
    const Vec k5 = rhs(m, ad, y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), d);
    const Vec k6 = rhs(m, ad, y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5), d);
    const Vec y5 = y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Vec k7 = rhs(m, ad, y5, d);
    const Vec err = step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double norm = 0;
    for (Eigen::Index i = 0; i < y.size(); ++i)
      norm = std::max(norm, std::abs(err[i]) / (opt.tol + opt.tol * std::max(std::abs(y[i]), std::abs(y5[i]))));
    if (!std::isfinite(norm)) throw StiffSegmentError("non-finite error estimate at t = " + std::to_string(t), tr);
    const double factor = norm == 0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
    if (norm > 1) {
      ++tr.rejected_steps;
      h = step * factor;
      continue;
    }
    ++tr.accepted_steps;
    const double t_new = step == t_end - t ? t_end : t + step;
    // Continuous extension of order 4 for the samples inside this step.
    const Vec diff = y5 - y;
    const Vec r3 = step * k1 - diff;
    const Vec r4 = diff - step * k7 - r3;
    const Vec r5 = step * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
    while (next_sample <= opt.samples) {
      const double ts = next_sample == opt.samples ? t_end : initial.t + next_sample * dt_out;
      if (ts > t_new) break;
      const double th = (ts - t) / step, th1 = 1 - th;
      emit(y + th * (diff + th1 * (r3 + th * (r4 + th1 * r5))), ts);
      ++next_sample;
    }
    t = t_new;
    y = y5;
    project(y, d);
    k1 = rhs(m, ad, y, d);
    h = step * factor;
  }
  return tr;
}

FlowState initial_state(FlowMetric m, const SemiAxes& a, Vec q, Vec direction) {
  if (q.size() != a.dof() || direction.size() != a.dof()) throw std::invalid_argument("dimension mismatch");
  q /= q.norm();
  direction -= q.dot(direction) * q;
  if (direction.norm() == 0) throw std::invalid_argument("direction is normal to the sphere");
  direction /= direction.norm();
  const std::vector<double> ad = axes_double(a);
  double scale;
  if (m == FlowMetric::G1) {
    double A = 0;
    for (Eigen::Index k = 0; k < q.size(); ++k) A += ad[k] * direction[k] * direction[k];
    scale = 1 / std::sqrt(A);
  } else {
    scale = std::sqrt(B_of(ad, q));
  }
  return FlowState{0, q, direction * scale, 0};
}

FlowState random_initial_state(FlowMetric m, const SemiAxes& a, std::uint64_t seed) {
  Rng rng(seed);
  const int d = a.dof();
  Vec q(d), dir(d);
  do {
    for (int k = 0; k < d; ++k) q[k] = 2 * rng.uniform01() - 1;
    q /= q.norm();
  } while (q.cwiseAbs().minCoeff() < 0.15);
  for (int k = 0; k < d; ++k) dir[k] = 2 * rng.uniform01() - 1;
  return initial_state(m, a, q, dir);
}

double Drift::max_F() const { return F.empty() ? 0.0 : *std::max_element(F.begin(), F.end()); }

Drift drift(const Trajectory& tr) {
  Drift out;
  const FlowIntegrals& first = tr.integrals.front();
  out.F.assign(first.F.size(), 0);
  for (std::size_t s = 0; s < tr.integrals.size(); ++s) {
    const FlowIntegrals& x = tr.integrals[s];
    out.H = std::max(out.H, relative(x.H, first.H));
    out.J = std::max(out.J, relative(x.J, first.J));
    for (std::size_t k = 0; k < x.F.size(); ++k) out.F[k] = std::max(out.F[k], relative(x.F[k], first.F[k]));
    const FlowState& st = tr.states[s];
    out.constraint = std::max({out.constraint, std::abs(st.q.squaredNorm() - 1), std::abs(st.q.dot(st.v))});
  }
  return out;
}

Vec position_at_arc(const Trajectory& tr, double s) {
  const auto& S = tr.states;
  if (s <= S.front().arc) return S.front().q;
  if (s >= S.back().arc) return S.back().q;
  const auto it = std::upper_bound(S.begin(), S.end(), s, [](double v, const FlowState& st) { return v < st.arc; });
  const FlowState& A = *(it - 1);
  const FlowState& Bst = *it;
  const double h = Bst.t - A.t;
  const double d0 = A.v.norm() * h, d1 = Bst.v.norm() * h;
  double lo = 0, hi = 1;
  for (int iter = 0; iter < 60; ++iter) {
    const double mid = (lo + hi) / 2;
    (hermite(A.arc, Bst.arc, d0, d1, mid) < s ? lo : hi) = mid;
  }
  const double u = (lo + hi) / 2;
  const Vec dq0 = A.v * h, dq1 = Bst.v * h;
  return hermite<Vec>(A.q, Bst.q, dq0, dq1, u);
}

ProjectiveComparison compare_projective(const SemiAxes& a, const Vec& q0, const Vec& dir, const FlowOptions& opt,
                                        double mismatch, int resample) {
  const FlowState s1 = initial_state(FlowMetric::G1, a, q0, dir);
  Vec dir2 = s1.v / s1.v.norm();
  if (mismatch != 0) dir2 = std::cos(mismatch) * dir2 + std::sin(mismatch) * orthonormal_tangent(s1.q, dir2);
  const FlowState s2 = initial_state(FlowMetric::G2, a, s1.q, dir2);
  Trajectory t1, t2;
  std::array<std::pair<const FlowState*, Trajectory*>, 2> jobs{{{&s1, &t1}, {&s2, &t2}}};
  parallel_for(2, [&](std::size_t k) {
    *jobs[k].second = integrate(k == 0 ? FlowMetric::G1 : FlowMetric::G2, a, *jobs[k].first, opt);
  });
  ProjectiveComparison out;
  out.common_length = std::min(t1.states.back().arc, t2.states.back().arc);
  for (int k = 0; k <= resample; ++k) {
    const double s = out.common_length * k / resample;
    out.max_deviation = std::max(out.max_deviation, (position_at_arc(t1, s) - position_at_arc(t2, s)).norm());
  }
  return out;
}

VerificationReport flow_conservation_check(const SemiAxes& a, std::uint64_t seed, const FlowOptions& opt) {
  VerificationReport rep;
  rep.title = "flow";
  for (FlowMetric m : {FlowMetric::G2, FlowMetric::G1}) {
    const std::string tag(flow_tag(m));
    const Trajectory tr = integrate(m, a, random_initial_state(m, a, seed), opt);
    const Drift dr = drift(tr);
    rep.add(bounded(tag + ".drift.H", "geodesic-flow-conservation", dr.H, kDriftBound));
    rep.add(bounded(tag + ".drift.F", "geodesic-flow-conservation", dr.max_F(), kDriftBound));
    rep.add(bounded(tag + (m == FlowMetric::G1 ? ".drift.joachimsthal-C2" : ".drift.joachimsthal-J"),
                    "joachimsthal", dr.J, kDriftBound));
    rep.add(bounded(tag + ".constraint", "sphere-constraint", dr.constraint, kConstraintBound));
    rep.add(bounded(tag + ".drift.H-within-10x-F", "geodesic-flow-conservation", dr.H,
                    10 * std::max(dr.max_F(), 1e-15)));
  }

  // Constraint derivative q.vdot + v^2 of both sprays at a random state.
  const FlowState st = random_initial_state(FlowMetric::G2, a, seed + 1);
  const std::vector<double> ad = axes_double(a);
  for (FlowMetric m : {FlowMetric::G1, FlowMetric::G2}) {
    const double r = std::abs(st.q.dot(spray(m, ad, st.q, st.v)) + st.v.squaredNorm());
    rep.add(bounded(std::string(flow_tag(m)) + ".spray.constraint-derivative", "sphere-constraint", r, 1e-12));
  }
  const double quoted = std::abs(st.q.dot(spray(FlowMetric::G2, ad, st.q, st.v, SpraySign::Quoted)) +
                                 st.v.squaredNorm());
  rep.add(bounded("g2.spray.quoted-sign.constraint-derivative", "sphere-constraint", quoted, 1e-12, Expect::Fail));

  // Looser tolerances drift more.
  std::array<double, 3> tols{1e-6, 1e-7, 1e-8}, drifts{};
  FlowOptions sweep = opt;
  for (std::size_t k = 0; k < tols.size(); ++k) {
    sweep.tol = tols[k];
    drifts[k] = drift(integrate(FlowMetric::G2, a, random_initial_state(FlowMetric::G2, a, seed), sweep)).max_F();
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "max F drift %.2e, %.2e, %.2e at tol 1e-6, 1e-7, 1e-8", drifts[0], drifts[1],
                drifts[2]);
  rep.add(point_check("g2.tolerance-sweep.monotone", "geodesic-flow-conservation",
                      drifts[0] >= drifts[1] && drifts[1] >= drifts[2], buf));
  return rep;
}

VerificationReport projective_equivalence_check(const SemiAxes& a, std::uint64_t seed, const FlowOptions& opt) {
  VerificationReport rep;
  rep.title = "projective";
  const FlowState st = random_initial_state(FlowMetric::G1, a, seed);
  const ProjectiveComparison matched = compare_projective(a, st.q, st.v, opt);
  const ProjectiveComparison off = compare_projective(a, st.q, st.v, opt, kMismatchAngle);
  CheckResult m = bounded("projective.matched", "projective-equivalence", matched.max_deviation, kProjectiveBound);
  m.detail += ", common arc length " + std::to_string(matched.common_length);
  rep.add(std::move(m));
  CheckResult c = point_check("projective.mismatched-direction", "projective-equivalence-control",
                              off.max_deviation > kMismatchFloor, "");
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.3e (floor %.0e)", off.max_deviation, kMismatchFloor);
  c.detail = buf;
  rep.add(std::move(c));
  return rep;
}

std::string trajectory_csv(const Trajectory& tr) {
  std::ostringstream os;
  const int d = tr.states.empty() ? 0 : static_cast<int>(tr.states.front().q.size());
  os << "t";
  for (int k = 0; k < d; ++k) os << ",q" << k;
  for (int k = 0; k < d; ++k) os << ",v" << k;
  os << ",H";
  for (int k = 0; k < d; ++k) os << ",F" << k;
  os << ",J\n";
  char buf[32];
  auto put = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    os << buf;
  };
  for (std::size_t s = 0; s < tr.states.size(); ++s) {
    const FlowState& st = tr.states[s];
    const FlowIntegrals& in = tr.integrals[s];
    put(st.t);
    for (int k = 0; k < d; ++k) os << ',', put(st.q[k]);
    for (int k = 0; k < d; ++k) os << ',', put(st.v[k]);
    os << ',', put(in.H);
    for (double f : in.F) os << ',', put(f);
    os << ',', put(in.J);
    os << '\n';
  }
  return os.str();
}

}  // namespace stackel
