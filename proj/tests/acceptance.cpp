// Acceptance run: one line per criterion, verdict against a pinned expectation.
// Exit status is 0 iff every criterion lands on its pinned verdict.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "stackel/ambient.hpp"
#include "stackel/curvature.hpp"
#include "stackel/ellipsoidal.hpp"
#include "stackel/geodesic_flow.hpp"
#include "stackel/quantization.hpp"

namespace {

using namespace stackel;

constexpr std::uint64_t kSeed = 42;
constexpr int kPointSamples = 20;      // chart / cotangent points per exact check
constexpr int kQuantumPoints = 10;
constexpr int kTestFunctions = 5;
constexpr double kInvolutionSeconds = 30;
constexpr double kFlowTol = 1e-10;
constexpr double kFlowT = 10;
constexpr double kDriftBound = 1e-8;
constexpr double kFlowSeconds = 10;
constexpr double kProjectiveBound = 1e-6;
constexpr double kMismatchFloor = 1e-2;
constexpr double kMismatchAngle = 0.05;  // radians

struct Verdict {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  bool expect_pass;
  std::function<Verdict()> run;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Every check whose name contains `key` passed, and at least one exists.
bool all_pass(const VerificationReport& r, const std::string& key, std::string& detail) {
  int seen = 0;
  for (const auto& c : r.checks) {
    if (c.name.find(key) == std::string::npos) continue;
    ++seen;
    if (!c.passed) {
      detail += " [" + c.name + " FAIL]";
      return false;
    }
  }
  if (seen == 0) detail += " [no check matches " + key + "]";
  return seen > 0;
}

bool all_fail(const VerificationReport& r, const std::string& key, std::string& detail) {
  int seen = 0;
  for (const auto& c : r.checks) {
    if (c.name.find(key) == std::string::npos) continue;
    ++seen;
    if (c.passed) {
      detail += " [" + c.name + " unexpectedly PASS]";
      return false;
    }
  }
  if (seen == 0) detail += " [no check matches " + key + "]";
  return seen > 0;
}

bool as_expected(const VerificationReport& r, std::string& detail) {
  for (const auto& c : r.checks)
    if (!c.as_expected()) {
      detail += " [" + c.name + " not as expected]";
      return false;
    }
  return true;
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Verdict involution() {
  Verdict v{true, ""};
  for (int n : {2, 3}) {
    const auto t0 = std::chrono::steady_clock::now();
    const VerificationReport r = verify_involution(build_family(SystemKind::DualMoser, SemiAxes::standard(n)), false);
    const double secs = seconds_since(t0);
    v.passed &= all_pass(r, "involution[", v.detail) && secs < kInvolutionSeconds;
    v.detail += " n=" + std::to_string(n) + ": " + std::to_string(r.checks.size()) + " brackets exact zero in " +
                fmt("%.2fs", secs) + ";";
  }
  return v;
}

Verdict identities() {
  Verdict v{true, ""};
  for (int n : {2, 3}) {
    const IntegralFamily fam = build_family(SystemKind::DualMoser, SemiAxes::standard(n));
    VerificationReport r = verify_involution(fam);
    r.merge(verify_h_bracket(fam, kPointSamples, kSeed));
    r.merge(verify_sum_relations(fam, kPointSamples, kSeed));
    r.merge(dirac_verify(fam, kPointSamples, kSeed));
    for (const char* key : {"relation1", "relation2", "relation3", "h-bracket", "structure.", "dirac."})
      v.passed &= all_pass(r, key, v.detail);
    v.detail += " n=" + std::to_string(n) + ": " + std::to_string(r.checks.size()) + " identities;";
  }
  return v;
}

Verdict stackel_certificate() {
  Verdict v{true, ""};
  for (int n : {2, 3}) {
    const SemiAxes a = SemiAxes::standard(n);
    int checks = 0;
    for (SystemKind s : kAllSystems) {
      VerificationReport r = verify_stackel(s, a, kPointSamples, kSeed);
      v.passed &= as_expected(r, v.detail);
      for (const char* key : {"staeckel.inverse.table", "residue-identity", "pullback.constraint"})
        v.passed &= all_pass(r, key, v.detail);
      const CheckResult* inv = r.find(std::string(system_tag(s)) + ".staeckel.inverse.table");
      v.passed &= inv && inv->samples >= static_cast<std::size_t>(kPointSamples);
      if (s == SystemKind::DualMoser) {
        // Ambient integrals pulled back to the sphere, dual Moser only.
        v.passed &= all_pass(r, "pullback.separated-form", v.detail);
        Rng rng(kSeed);
        const VerificationReport p = potentials_check(a, sample_cotangent_point(rng, a), Rational(2), Rational(3));
        for (const char* key : {"potentials.separated-form", "potentials.staeckel-property", "potentials.involution"})
          v.passed &= all_pass(p, key, v.detail);
        checks += static_cast<int>(p.checks.size());
      }
      checks += static_cast<int>(r.checks.size());
    }
    v.detail += " n=" + std::to_string(n) + ": " + std::to_string(checks) + " checks;";
  }
  v.detail += " potential identity scored on the separated form (quoted closed form carries a sign slip, INFO)";
  return v;
}

Verdict curvature_forms() {
  Verdict v{true, ""};
  for (int n : {3, 4}) {
    const SemiAxes a = SemiAxes::standard(n);
    for (SystemKind s : kAllSystems) {
      const VerificationReport r = verify_ricci_closed_forms(s, a, kPointSamples, kSeed);
      v.passed &= all_pass(r, "closed-form", v.detail);
      v.passed &= all_pass(robertson_check(system_metric(s, a), a, kPointSamples, kSeed), "robertson", v.detail);
    }
    const VerificationReport flat =
        conformal_flatness_check(system_metric(SystemKind::DualMoser, a), a, kPointSamples, kSeed);
    v.passed &= all_pass(flat, n == 3 ? "cotton" : "weyl", v.detail);
    v.detail += std::string(" n=") + std::to_string(n) + ": ricci, R, robertson x3, " +
                (n == 3 ? "cotton" : "weyl") + ";";
  }
  return v;
}

Verdict quantization_coefficients() {
  Verdict v{true, ""};
  for (int n = 3; n <= 8; ++n) {
    const QuantCoefficients q = coefficients(n);
    const long n2 = static_cast<long>(n) * n;
    const bool ok = q.c1 == Rational(n2, 8L * (n + 1) * (n + 2)) && q.c2 == Rational(n2, 4L * (n + 1) * (n - 2)) &&
                    q.c3 == Rational(-n2, 2L * (n2 - 1) * (n2 - 4)) && q.c4.is_zero() && q.c5.is_zero() &&
                    q.c6.is_zero();
    if (!ok) v.detail += " [coefficients n=" + std::to_string(n) + "]";
    v.passed &= ok;
  }
  v.detail += " c1..c6 n=3..8 ok=" + std::string(v.passed ? "yes" : "no") + ";";
  const SemiAxes a = SemiAxes::standard(3);
  const VerificationReport neu = scalar_term_check(SystemKind::Neumann, a, kPointSamples, kSeed);
  const bool neu_ok = all_pass(neu, "scalar-term.constant", v.detail) && all_pass(neu, "surviving-term", v.detail) &&
                      all_pass(neu, "scalar-term.closed-form", v.detail);
  v.detail += std::string(" neumann constant/surviving term ") + (neu_ok ? "PASS" : "FAIL") + ";";
  const VerificationReport dm = scalar_term_check(SystemKind::DualMoser, a, kPointSamples, kSeed);
  std::string ignore;
  const bool dm_quoted = all_pass(dm, "scalar-term.quoted-form", ignore);
  const bool dm_direct = all_pass(dm, "scalar-term.direct-form", v.detail);
  v.detail += std::string(" dual-moser displayed closed form ") + (dm_quoted ? "PASS" : "FAIL") +
              ", direct evaluation 2c1[(n+1)(n+2)s_k(x) - (n-k+1)(n-k+2)s_k(a)] " + (dm_direct ? "PASS" : "FAIL");
  v.passed = v.passed && neu_ok && dm_quoted;
  return v;
}

Verdict quantum_table() {
  Verdict v{true, ""};
  const SemiAxes a = SemiAxes::standard(3);
  for (SystemKind s : kAllSystems) {
    const std::string tag(system_tag(s));
    const VerificationReport r = quantum_verdict(s, a, kQuantumPoints, kTestFunctions, kSeed);
    v.passed &= all_pass(r, tag + ".quantum.carter", v.detail);
    const CheckResult* conf = r.find(tag + ".quantum.conformal");
    if (s == SystemKind::JacobiMoser) {
      v.passed &= conf && !conf->passed;
      v.passed &= all_pass(r, "commutator-equals-iQ(V)", v.detail);
      v.passed &= all_pass(r, "quantum.conformal.nonzero", v.detail);
      const VerificationReport vt = scalar_term_check(s, a, kQuantumPoints, kSeed);
      v.passed &= all_pass(vt, "v-term.closed-form", v.detail);
      v.detail += " " + tag + ": carter 0, conformal = iQ(V) != 0, V = 2g^i x displayed form;";
    } else {
      v.passed &= conf && conf->passed;
      v.detail += " " + tag + ": carter 0, conformal 0;";
    }
  }
  v.detail += " " + std::to_string(kQuantumPoints) + " points x " + std::to_string(kTestFunctions) + " jets";
  return v;
}

Verdict flow_conservation() {
  const SemiAxes a(std::vector<Rational>{1, 2, 4});
  const FlowOptions opt{kFlowT, kFlowTol, 1000};
  const auto t0 = std::chrono::steady_clock::now();
  const Trajectory g2 = integrate(FlowMetric::G2, a, random_initial_state(FlowMetric::G2, a, kSeed), opt);
  const Trajectory g1 = integrate(FlowMetric::G1, a, random_initial_state(FlowMetric::G1, a, kSeed), opt);
  const double secs = seconds_since(t0);
  const Drift d2 = drift(g2), d1 = drift(g1);
  Verdict v;
  v.passed = d2.H <= kDriftBound && d2.max_F() <= kDriftBound && d1.J <= kDriftBound && secs < kFlowSeconds;
  v.detail = " dual-moser H " + fmt("%.2e", d2.H) + ", max F " + fmt("%.2e", d2.max_F()) + "; g1 C^2 " +
             fmt("%.2e", d1.J) + " (bound " + fmt("%.0e", kDriftBound) + ", " + fmt("%.2fs", secs) + ")";
  return v;
}

Verdict projective() {
  const SemiAxes a(std::vector<Rational>{1, 2, 4});
  const FlowOptions opt{kFlowT, kFlowTol, 1000};
  const FlowState st = random_initial_state(FlowMetric::G1, a, kSeed);
  const double matched = compare_projective(a, st.q, st.v, opt).max_deviation;
  const double off = compare_projective(a, st.q, st.v, opt, kMismatchAngle).max_deviation;
  return {matched <= kProjectiveBound && off > kMismatchFloor,
          " matched " + fmt("%.2e", matched) + " (bound " + fmt("%.0e", kProjectiveBound) + "), mismatched " +
              fmt("%.2e", off) + " (floor " + fmt("%.0e", kMismatchFloor) + ")"};
}

Verdict controls() {
  Verdict v{true, ""};
  const SemiAxes a = SemiAxes::standard(3);
  const bool mutated = !family_in_involution(
      mutate_family(build_family(SystemKind::DualMoser, a), 0, 0, Rational(1, 3)));
  v.detail += std::string(" perturbed integral coefficient ") + (mutated ? "FAIL" : "PASS") + ";";
  const VerificationReport b = b_tensor_check(SystemKind::DualMoser, a, 2, kSeed);
  const bool ricci = all_fail(b, "injected-ricci.vanishes", v.detail);
  const VerificationReport rob = robertson_check(
      inject_coupling(system_metric(SystemKind::DualMoser, a), 0, 1, Rational(1, 10)), a, 1, kSeed, Expect::Fail);
  const bool coupled = all_fail(rob, "robertson", v.detail);
  v.detail += std::string(" injected off-diagonal Ricci ") + (ricci && coupled ? "FAIL" : "PASS") + ";";
  const SemiAxes a2(std::vector<Rational>{1, 2, 4});
  const FlowState st = random_initial_state(FlowMetric::G1, a2, kSeed);
  const double off =
      compare_projective(a2, st.q, st.v, FlowOptions{kFlowT, kFlowTol, 1000}, kMismatchAngle).max_deviation;
  const bool mismatched = off > kMismatchFloor;
  v.detail += std::string(" mismatched initial direction ") + (mismatched ? "FAIL" : "PASS");
  v.passed = mutated && ricci && coupled && mismatched;
  return v;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "classical involution of the dual Moser integrals, n = 2, 3", true, involution},
      {2, "ambient identity suite, n = 2, 3", true, identities},
      {3, "Staeckel certificate, all systems, n = 2, 3", true, stackel_certificate},
      {4, "curvature closed forms, n = 3, 4", true, curvature_forms},
      // The displayed dual Moser scalar term disagrees with direct evaluation.
      {5, "quantization coefficients and scalar terms", false, quantization_coefficients},
      {6, "quantum verdict table, n = 3", true, quantum_table},
      {7, "flow conservation, n = 2", true, flow_conservation},
      {8, "projective equivalence of g1 and g2 geodesics", true, projective},
      {9, "negative controls flip to FAIL", true, controls},
  };
  int mismatches = 0;
  for (const auto& c : criteria) {
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string(" exception: ") + e.what()};
    }
    const bool ok = v.passed == c.expect_pass;
    if (!ok) ++mismatches;
    std::printf("criterion %d: %s (expected %s%s) %s:%s\n", c.id, v.passed ? "PASS" : "FAIL",
                c.expect_pass ? "PASS" : "FAIL", ok ? "" : ", MISMATCH", c.title, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria on their pinned verdict\n", static_cast<int>(criteria.size()) - mismatches,
              criteria.size());
  return mismatches == 0 ? 0 : 1;
}
