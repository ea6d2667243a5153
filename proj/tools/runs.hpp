#pragma once

// Check orchestration behind the CLI subcommands.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stackel/ambient.hpp"
#include "stackel/report.hpp"

namespace stackel::cli {

enum class Area { Classical, Stackel, Curvature, Quantum, Flow, Projective };

inline constexpr Area kAllAreas[] = {Area::Classical, Area::Stackel, Area::Curvature,
                                     Area::Quantum,   Area::Flow,    Area::Projective};

const char* area_name(Area a);
std::optional<Area> parse_area(const std::string& s);

struct RunConfig {
  int n = 0;
  std::vector<Rational> a;
  std::uint64_t seed = 42;
  std::vector<SystemKind> systems;
  std::vector<Area> checks;
  double tol = 1e-10;
  int samples = 20;
  double T = 10;
  int flow_samples = 1000;
  int quantum_points = 10;
  int test_functions = 5;
};

/// Human-readable problems with the configuration; empty when valid.
std::vector<std::string> validate(const RunConfig& c);

struct Section {
  Area area;
  VerificationReport report;
  double seconds = 0;
};

/// Runs every selected area for every selected system, in a fixed order.
std::vector<Section> run_checks(const RunConfig& c);

}  // namespace stackel::cli
