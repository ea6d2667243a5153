#include "runs.hpp"

#include <algorithm>
#include <chrono>

#include "stackel/curvature.hpp"
#include "stackel/ellipsoidal.hpp"
#include "stackel/geodesic_flow.hpp"
#include "stackel/quantization.hpp"

namespace stackel::cli {

namespace {

VerificationReport classical(SystemKind s, const SemiAxes& a, const RunConfig& c) {
  const IntegralFamily fam = build_family(s, a);
  VerificationReport rep = verify_involution(fam);
  rep.merge(verify_conservation(fam, c.samples, c.seed));
  rep.merge(dirac_verify(fam, c.samples, c.seed));
  if (s == SystemKind::DualMoser) {
    rep.merge(verify_h_bracket(fam, c.samples, c.seed));
    rep.merge(verify_sum_relations(fam, c.samples, c.seed));
  }
  CheckResult mutated = point_check(std::string(system_tag(s)) + ".control.mutated-integral.involution",
                                    "involution-control",
                                    family_in_involution(mutate_family(fam, 0, 0, Rational(1, 3))),
                                    "F_0 leading coefficient + 1/3");
  mutated.expected = Expect::Fail;
  rep.add(std::move(mutated));
  rep.title = "classical/" + std::string(system_tag(s));
  return rep;
}

VerificationReport stackel_area(SystemKind s, const SemiAxes& a, const RunConfig& c) {
  VerificationReport rep = verify_stackel(s, a, c.samples, c.seed);
  if (s == SystemKind::DualMoser) {
    Rng rng(c.seed);
    rep.merge(potentials_check(a, sample_cotangent_point(rng, a), Rational(2), Rational(3)));
  }
  return rep;
}

VerificationReport curvature_area(SystemKind s, const SemiAxes& a, const RunConfig& c) {
  const Metric m = system_metric(s, a);
  VerificationReport rep = verify_ricci_closed_forms(s, a, c.samples, c.seed);
  rep.merge(robertson_check(m, a, c.samples, c.seed));
  rep.merge(robertson_check(inject_coupling(m, 0, 1, Rational(1, 10)), a, 1, c.seed, Expect::Fail));
  if (a.n() >= 3) {
    rep.merge(conformal_flatness_check(m, a, c.samples, c.seed,
                                       s == SystemKind::JacobiMoser ? Expect::Info : Expect::Pass));
    rep.merge(conformal_flatness_check(perturb_first_coefficient(m, Rational(1, 10)), a, 1, c.seed, Expect::Fail));
  }
  Rng rng(c.seed);
  const std::vector<Rational> x0 = sample_chart_point(rng, a.values());
  if (s == SystemKind::DualMoser) rep.merge(dual_moser_shortcut_check(a, x0));
  rep.merge(curvature_structure_check(m, x0));
  rep.title = "curvature/" + std::string(system_tag(s));
  return rep;
}

VerificationReport quantum_area(SystemKind s, const SemiAxes& a, const RunConfig& c) {
  VerificationReport rep = quantum_verdict(s, a, c.quantum_points, c.test_functions, c.seed);
  rep.merge(scalar_term_check(s, a, std::min(c.samples, 5), c.seed));
  rep.merge(b_tensor_check(s, a, std::min(c.samples, 5), c.seed));
  return rep;
}

}  // namespace

const char* area_name(Area a) {
  switch (a) {
    case Area::Classical: return "classical";
    case Area::Stackel: return "stackel";
    case Area::Curvature: return "curvature";
    case Area::Quantum: return "quantum";
    case Area::Flow: return "flow";
    case Area::Projective: return "projective";
  }
  return "?";
}

std::optional<Area> parse_area(const std::string& s) {
  for (Area a : kAllAreas)
    if (s == area_name(a)) return a;
  return std::nullopt;
}

std::vector<std::string> validate(const RunConfig& c) {
  std::vector<std::string> errs;
  if (c.a.size() < 2) errs.push_back("a: at least two semi-axes are required");
  for (std::size_t k = 0; k < c.a.size(); ++k) {
    if (c.a[k].sign() <= 0) errs.push_back("a[" + std::to_string(k) + "]: must be positive");
    if (k > 0 && !(c.a[k - 1] < c.a[k])) errs.push_back("a: must be strictly increasing");
  }
  if (c.n != static_cast<int>(c.a.size()) - 1)
    errs.push_back("n: must equal len(a) - 1 = " + std::to_string(static_cast<int>(c.a.size()) - 1));
  if (c.n > 7) errs.push_back("n: at most 7 is supported");
  if (c.systems.empty()) errs.push_back("systems: at least one system is required");
  if (c.checks.empty()) errs.push_back("checks: at least one check area is required");
  for (Area a : c.checks)
    if (a == Area::Quantum && c.n < 3) errs.push_back("checks: quantum requires n >= 3");
  if (!(c.tol > 0 && c.tol < 1)) errs.push_back("tol: must lie in (0, 1)");
  if (c.samples < 1) errs.push_back("samples: must be positive");
  if (!(c.T > 0)) errs.push_back("T: must be positive");
  if (c.flow_samples < 1) errs.push_back("flow-samples: must be positive");
  if (c.quantum_points < 1 || c.test_functions < 1) errs.push_back("quantum points and test functions must be positive");
  std::sort(errs.begin(), errs.end());
  errs.erase(std::unique(errs.begin(), errs.end()), errs.end());
  return errs;
}

std::vector<Section> run_checks(const RunConfig& c) {
  const SemiAxes a(c.a);
  FlowOptions flow;
  flow.T = c.T;
  flow.tol = c.tol;
  flow.samples = c.flow_samples;
  std::vector<Section> out;
  auto timed = [&](Area area, auto&& body) {
    const auto t0 = std::chrono::steady_clock::now();
    VerificationReport rep = body();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(Section{area, std::move(rep), secs});
  };
  for (Area area : c.checks) {
    switch (area) {
      case Area::Flow: timed(area, [&] { return flow_conservation_check(a, c.seed, flow); }); continue;
      case Area::Projective: timed(area, [&] { return projective_equivalence_check(a, c.seed, flow); }); continue;
      default: break;
    }
    for (SystemKind s : c.systems) {
      switch (area) {
        case Area::Classical: timed(area, [&] { return classical(s, a, c); }); break;
        case Area::Stackel: timed(area, [&] { return stackel_area(s, a, c); }); break;
        case Area::Curvature: timed(area, [&] { return curvature_area(s, a, c); }); break;
        case Area::Quantum: timed(area, [&] { return quantum_area(s, a, c); }); break;
        default: break;
      }
    }
  }
  return out;
}

}  // namespace stackel::cli
