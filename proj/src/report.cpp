#include "stackel/report.hpp"

#include <map>

namespace stackel {

const char* to_string(Expect e) {
  switch (e) {
    case Expect::Pass: return "PASS";
    case Expect::Fail: return "FAIL";
    case Expect::Info: return "INFO";
  }
  return "?";
}

CheckResult point_check(std::string name, std::string anchor, bool ok, std::string detail) {
  CheckResult c;
  c.name = std::move(name);
  c.anchor = std::move(anchor);
  c.passed = ok;
  c.witness_size = ok ? 0 : 1;
  c.samples = 1;
  c.detail = std::move(detail);
  return c;
}

VerificationReport fold_samples(std::string title, const std::vector<VerificationReport>& parts) {
  VerificationReport out;
  out.title = std::move(title);
  std::map<std::string, std::size_t> slot;
  for (const auto& part : parts) {
    for (const auto& c : part.checks) {
      auto [it, fresh] = slot.emplace(c.name, out.checks.size());
      if (fresh) {
        CheckResult first = c;
        first.samples = 0;
        first.witness_size = 0;
        first.passed = true;
        out.checks.push_back(std::move(first));
      }
      CheckResult& acc = out.checks[it->second];
      acc.samples += c.samples;
      if (!c.passed) {
        if (acc.passed) acc.detail = "first failure: " + c.detail;
        acc.passed = false;
        ++acc.witness_size;
      }
    }
  }
  return out;
}

std::string format_values(std::span<const Rational> v) {
  std::string s = "(";
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + v[k].str();
  return s + ")";
}

}  // namespace stackel
