#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "stackel/rational.hpp"

namespace stackel {

enum class Expect { Pass, Fail, Info };

const char* to_string(Expect e);

/// One exact check.  `witness_size` is the term count of a nonzero residual
/// polynomial (or the number of failing samples); zero when the identity holds.
struct CheckResult {
  std::string name;
  std::string anchor;
  Expect expected = Expect::Pass;
  bool passed = false;
  std::size_t witness_size = 0;
  std::size_t samples = 0;
  std::string detail;

  bool as_expected() const {
    return expected == Expect::Info || (expected == Expect::Pass) == passed;
  }
};

struct VerificationReport {
  std::string title;
  std::vector<CheckResult> checks;

  CheckResult& add(CheckResult c) { return checks.emplace_back(std::move(c)); }
  void merge(const VerificationReport& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
  }
  bool ok() const {
    for (const auto& c : checks)
      if (!c.as_expected()) return false;
    return true;
  }
  const CheckResult* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

/// A single-sample check; witness_size is 1 on failure.
CheckResult point_check(std::string name, std::string anchor, bool ok, std::string detail = {});

/// Merges per-sample reports by check name: a check passes when it passed at
/// every sample; witness_size counts failing samples, detail keeps the first.
VerificationReport fold_samples(std::string title, const std::vector<VerificationReport>& parts);

/// "(v0, v1, ...)"
std::string format_values(std::span<const Rational> v);

}  // namespace stackel
